"""Error types shared across the workbench."""


class InputError(ValueError):
    """Malformed input: bad vertex ids, duplicate edges, unparsable pattern."""


class PreconditionError(ValueError):
    """A stated degree/size precondition does not hold for the given instance."""


class CapabilityError(ValueError):
    """Requested exact mode beyond the supported instance size."""


class ResourceError(RuntimeError):
    """A bounded resource (connector pool, retry budget) ran out mid-operation."""


class HypothesisError(ValueError):
    """Cleanup hypotheses failed; carries per-clause diagnostics."""

    def __init__(self, message: str, failures: list[str]):
        super().__init__(message)
        self.failures = failures
