"""Robust out-expansion certification and sparse-cut search.

The two sides of the structural dichotomy for dense digraphs: either a
digraph has an alpha-sparse cut (few edges forward across an ordered
bipartition) or every moderately sized vertex set S has a large robust
out-neighborhood (vertices receiving at least ceil(nu*n) edges from S).

Exact certification enumerates all 2^n subsets, which stays affordable up
to n = 24 by splitting each subset into two halves and batch-evaluating
one half against precomputed popcount tables (numpy). Above the cap both
directions degrade honestly: sampled certification can only return a
violator or "inconclusive", and cut search becomes seeded local search
whose empty result is flagged non-exhaustive.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .bitset import bit_list, bits_of, full_mask, int_ceil, int_floor, mask_of
from .digraph import Digraph, degree_profile, strongly_connected_components
from .errors import CapabilityError, InputError, PreconditionError

EXACT_SWEEP_CAP = 24

_POP16 = None


def _pop16():
    global _POP16
    if _POP16 is None:
        t = np.arange(1 << 16, dtype=np.uint32)
        t = (t & 0x5555) + ((t >> 1) & 0x5555)
        t = (t & 0x3333) + ((t >> 2) & 0x3333)
        t = (t & 0x0F0F) + ((t >> 4) & 0x0F0F)
        t = (t & 0x00FF) + ((t >> 8) & 0x00FF)
        _POP16 = t.astype(np.uint8)
    return _POP16


def _popcount_u32(a: np.ndarray) -> np.ndarray:
    p = _pop16()
    return p[a & 0xFFFF] + p[a >> 16]


def robust_out_neighborhood(g: Digraph, s: int, nu: float) -> int:
    """Vertices receiving at least ceil(nu*n) edges from the set s.

    The threshold is integral and at least 1 for any positive nu, so the
    test is monotone in s.
    """
    if nu <= 0 or nu >= 1:
        raise InputError(f"nu must be in (0,1), got {nu}")
    thr = max(1, int_ceil(nu * g.n))
    out = 0
    for v in range(g.n):
        if (g.in_adj[v] & s).bit_count() >= thr:
            out |= 1 << v
    return out


@dataclass(frozen=True)
class ExpansionParams:
    nu: float
    tau: float
    mode: str = "auto"            # exact | sampled | auto
    seed: int = 0
    samples_per_decile: int = 64
    hints: tuple[int, ...] = ()   # extra vertex masks to probe in sampled mode

    def __post_init__(self):
        if not 0 < self.nu < 1:
            raise InputError(f"nu must be in (0,1), got {self.nu}")
        if not 0 < self.tau < 0.5:
            raise InputError(f"tau must be in (0,1/2), got {self.tau}")
        if self.mode not in ("exact", "sampled", "auto"):
            raise InputError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class ExpansionVerdict:
    outcome: str                  # expander | violator | inconclusive
    mode: str                     # exact | sampled
    nu: float
    tau: float
    checked_sets: int
    violator: int | None = None   # vertex mask of the violating S
    rn_size: int | None = None
    set_size: int | None = None

    def to_json_dict(self) -> dict:
        d = {
            "outcome": self.outcome,
            "params": {"nu": self.nu, "tau": self.tau},
            "counts": {"checked_sets": self.checked_sets},
            "mode": self.mode,
        }
        if self.violator is not None:
            d["set"] = bit_list(self.violator)
            d["counts"]["set_size"] = self.set_size
            d["counts"]["rn_size"] = self.rn_size
        return d


def _size_bounds(n: int, tau: float) -> tuple[int, int]:
    return max(1, int_ceil(tau * n)), int_floor((1 - tau) * n)


def _exact_expander_sweep(g: Digraph, nu: float, tau: float) -> ExpansionVerdict:
    n = g.n
    thr = max(1, int_ceil(nu * n))
    lo, hi = _size_bounds(n, tau)
    if lo > hi or n == 0:
        return ExpansionVerdict("expander", "exact", nu, tau, 0)
    n1 = (n + 1) // 2
    n2 = n - n1
    lo_mask = (1 << n1) - 1
    subs_lo = np.arange(1 << n1, dtype=np.uint32)
    pc_lo_size = _popcount_u32(subs_lo).astype(np.int16)
    # per-vertex popcount tables against each half of the candidate set
    in_lo = np.array([a & lo_mask for a in g.in_adj], dtype=np.uint32)
    in_hi = np.array([a >> n1 for a in g.in_adj], dtype=np.uint32)
    tab_lo = np.empty((n, 1 << n1), dtype=np.uint8)
    for v in range(n):
        tab_lo[v] = _popcount_u32(subs_lo & in_lo[v])
    subs_hi = np.arange(1 << n2, dtype=np.uint32)
    tab_hi = np.empty((n, 1 << n2), dtype=np.uint8)
    for v in range(n):
        tab_hi[v] = _popcount_u32(subs_hi & in_hi[v])
    pc_hi_size = _popcount_u32(subs_hi).astype(np.int16)

    checked = 0
    for s_hi in range(1 << n2):
        sizes = pc_lo_size + pc_hi_size[s_hi]
        elig = (sizes >= lo) & (sizes <= hi)
        if not elig.any():
            continue
        cnt = tab_lo + tab_hi[:, s_hi][:, None]
        rn = (cnt >= thr).sum(axis=0, dtype=np.int16)
        bad = elig & (rn < sizes + thr)
        checked += int(elig.sum())
        if bad.any():
            s_lo = int(np.flatnonzero(bad)[0])
            s = (s_hi << n1) | s_lo
            return ExpansionVerdict(
                "violator", "exact", nu, tau, checked,
                violator=s, rn_size=int(rn[s_lo]), set_size=int(sizes[s_lo]))
    return ExpansionVerdict("expander", "exact", nu, tau, checked)


def _sampled_candidates(g: Digraph, lo: int, hi: int, p: ExpansionParams) -> list[int]:
    n = g.n
    rng = random.Random(p.seed)
    cands: list[int] = []
    # random sets at a spread of sizes
    for dec in range(10):
        size = lo + (hi - lo) * dec // 9 if hi > lo else lo
        for _ in range(p.samples_per_decile):
            cands.append(mask_of(rng.sample(range(n), size)))
    # structured prefixes: condensation order and degree orders
    sccs = strongly_connected_components(g)
    acc = 0
    for comp in sccs[:-1]:
        acc |= comp
        if lo <= acc.bit_count() <= hi:
            cands.append(acc)
    prof = degree_profile(g)
    for keyed in (
        sorted(range(n), key=lambda v: (-prof.out_degrees[v], v)),
        sorted(range(n), key=lambda v: (-prof.in_degrees[v], v)),
        sorted(range(n), key=lambda v: (prof.out_degrees[v], v)),
    ):
        acc = 0
        for v in keyed[:-1]:
            acc |= 1 << v
            if lo <= acc.bit_count() <= hi:
                cands.append(acc)
    for h in p.hints:
        h &= full_mask(n)
        if lo <= h.bit_count() <= hi:
            cands.append(h)
    return cands


def certify_expander(g: Digraph, p: ExpansionParams) -> ExpansionVerdict:
    """Certify g as a robust (nu,tau)-outexpander or exhibit a violator.

    Exact mode sweeps every subset with tau*n <= |S| <= (1-tau)*n and is
    capped at n = 24. Sampled mode probes random sets per size decile plus
    condensation and degree-order prefixes plus caller hints; finding no
    violator is reported as inconclusive, never as a certificate.
    """
    mode = p.mode
    if mode == "auto":
        mode = "exact" if g.n <= EXACT_SWEEP_CAP else "sampled"
    if mode == "exact":
        if g.n > EXACT_SWEEP_CAP:
            raise CapabilityError(
                f"exact certification capped at n={EXACT_SWEEP_CAP}, got {g.n}")
        return _exact_expander_sweep(g, p.nu, p.tau)
    lo, hi = _size_bounds(g.n, p.tau)
    if lo > hi:
        return ExpansionVerdict("expander", "sampled", p.nu, p.tau, 0)
    thr = max(1, int_ceil(p.nu * g.n))
    checked = 0
    for s in _sampled_candidates(g, lo, hi, p):
        checked += 1
        rn = robust_out_neighborhood(g, s, p.nu)
        if rn.bit_count() < s.bit_count() + thr:
            return ExpansionVerdict(
                "violator", "sampled", p.nu, p.tau, checked,
                violator=s, rn_size=rn.bit_count(), set_size=s.bit_count())
    return ExpansionVerdict("inconclusive", "sampled", p.nu, p.tau, checked)


@dataclass(frozen=True)
class CutCertificate:
    side1: int            # vertex mask X1; forward direction is X1 -> X2
    side2: int
    e_forward: int
    alpha_achieved: float
    exact: bool

    def to_json_dict(self) -> dict:
        return {
            "cut": bit_list(self.side1),
            "e_forward": self.e_forward,
            "alpha_achieved": self.alpha_achieved,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class CutSearchBudget:
    restarts: int = 32
    seed: int = 0
    near_miss_cap: int = 8


@dataclass(frozen=True)
class CutSearchResult:
    found: bool
    certificate: CutCertificate | None
    best: CutCertificate | None       # best-ratio cut seen regardless of alpha
    near_misses: tuple[CutCertificate, ...]
    mode: str                         # exact | heuristic


def _cut_ratio(e_fwd: int, s1: int, s2: int) -> float:
    return e_fwd / (s1 * s2)


def _exact_cut_sweep(g: Digraph) -> tuple[int, int, float]:
    """Minimum-ratio cut over all 2^n - 2 ordered bipartitions.

    Returns (mask of X1, e_forward, ratio), smallest mask on ties. Uses
    e+(X, V\\X) = sum of out-degrees over X minus internal edges of X; the
    internal count splits into four half-vs-half popcount terms that batch
    over the low half.
    """
    n = g.n
    n1 = (n + 1) // 2
    n2 = n - n1
    lo_mask = (1 << n1) - 1
    subs_lo = np.arange(1 << n1, dtype=np.uint32)
    pc_lo_size = _popcount_u32(subs_lo).astype(np.int32)
    bit_lo = ((subs_lo[:, None] >> np.arange(n1)[None, :]) & 1).astype(np.uint8)

    out_lo = np.array([a & lo_mask for a in g.out_adj], dtype=np.uint32)
    out_hi = np.array([a >> n1 for a in g.out_adj], dtype=np.uint32)
    outdeg = np.array([a.bit_count() for a in g.out_adj], dtype=np.int32)

    # A[s_lo] = sum over u in s_lo of |out(u) & s_lo| for u in the low half
    tab_ll = np.empty((n1, 1 << n1), dtype=np.uint8)
    for u in range(n1):
        tab_ll[u] = _popcount_u32(subs_lo & out_lo[u])
    a_term = (bit_lo.astype(np.int32) * tab_ll.T.astype(np.int32)).sum(axis=1)
    od_lo = bit_lo.astype(np.int32) @ outdeg[:n1]

    subs_hi = np.arange(1 << n2, dtype=np.uint32)
    pc_hi_size = _popcount_u32(subs_hi).astype(np.int32)
    # cross table: low-half u against high-half subset
    tab_lh = np.empty((n1, 1 << n2), dtype=np.uint8)
    for u in range(n1):
        tab_lh[u] = _popcount_u32(subs_hi & out_hi[u])
    # high-half u against low-half subset
    tab_hl = np.empty((n2, 1 << n1), dtype=np.int32)
    for i in range(n2):
        tab_hl[i] = _popcount_u32(subs_lo & out_lo[n1 + i])

    best_ratio = np.inf
    best_mask = 0
    best_e = 0
    bit_lo_i32 = bit_lo.astype(np.int32)
    for s_hi in range(1 << n2):
        sizes = pc_lo_size + pc_hi_size[s_hi]
        denom = sizes * (n - sizes)
        valid = denom > 0
        if not valid.any():
            continue
        hi_bits = [i for i in range(n2) if s_hi >> i & 1]
        b_term = sum(int((out_hi[n1 + i] & s_hi).bit_count()) for i in hi_bits)
        e_in = a_term + b_term + bit_lo_i32 @ tab_lh[:, s_hi].astype(np.int32)
        if hi_bits:
            e_in = e_in + tab_hl[hi_bits].sum(axis=0)
        od = od_lo + int(outdeg[n1:][np.array(hi_bits, dtype=np.intp)].sum()) if hi_bits else od_lo
        e_fwd = od - e_in
        ratio = np.where(valid, e_fwd / np.maximum(denom, 1), np.inf)
        i = int(np.argmin(ratio))
        if ratio[i] < best_ratio - 1e-15:
            best_ratio = float(ratio[i])
            best_mask = (s_hi << n1) | int(subs_lo[i])
            best_e = int(e_fwd[i])
    return best_mask, best_e, best_ratio


def _eval_cut(g: Digraph, x1: int) -> tuple[int, float]:
    x2 = g.vertex_mask & ~x1
    e = sum((g.out_adj[u] & x2).bit_count() for u in bits_of(x1))
    return e, _cut_ratio(e, x1.bit_count(), x2.bit_count())


def _hill_climb(g: Digraph, x1: int, max_steps: int = 10_000) -> tuple[int, int, float]:
    """Steepest-descent single-vertex moves on the forward-density ratio."""
    n = g.n
    all_mask = g.vertex_mask
    x2 = all_mask & ~x1
    e = sum((g.out_adj[u] & x2).bit_count() for u in bits_of(x1))
    s1 = x1.bit_count()
    ratio = _cut_ratio(e, s1, n - s1)
    for _ in range(max_steps):
        best = None
        for v in range(n):
            b = 1 << v
            if x1 & b:
                if s1 == 1:
                    continue
                ne = e - (g.out_adj[v] & x2).bit_count() + (g.in_adj[v] & x1 & ~b).bit_count()
                ns1 = s1 - 1
            else:
                if s1 == n - 1:
                    continue
                ne = e + (g.out_adj[v] & x2 & ~b).bit_count() - (g.in_adj[v] & x1).bit_count()
                ns1 = s1 + 1
            nr = _cut_ratio(ne, ns1, n - ns1)
            if nr < ratio - 1e-15 and (best is None or nr < best[0]):
                best = (nr, v, ne, ns1)
        if best is None:
            break
        ratio, v, e, s1 = best
        x1 ^= 1 << v
        x2 = all_mask & ~x1
    return x1, e, ratio


def _structured_starts(g: Digraph) -> list[int]:
    n = g.n
    starts: list[int] = []
    sccs = strongly_connected_components(g)
    acc = 0
    for comp in sccs[:-1]:
        acc |= comp
        starts.append(acc)
    prof = degree_profile(g)
    for keyed in (
        sorted(range(n), key=lambda v: (-prof.out_degrees[v], v)),
        sorted(range(n), key=lambda v: (-prof.in_degrees[v], v)),
        sorted(range(n), key=lambda v: (prof.out_degrees[v], v)),
        sorted(range(n), key=lambda v: (prof.in_degrees[v], v)),
    ):
        acc = 0
        for v in keyed[:-1]:
            acc |= 1 << v
            starts.append(acc)
    return starts


def find_sparse_cut(g: Digraph, alpha: float, budget: CutSearchBudget | None = None,
                    hints: tuple[int, ...] = ()) -> CutSearchResult:
    """Hunt a cut (X1, X2) with e+(X1,X2) <= alpha*|X1|*|X2|.

    Exact sweep up to n = 24 (so an empty result is a proof of absence);
    beyond that, seeded local search from condensation prefixes, degree
    prefixes, hint masks, and random balanced cuts. Near misses within a
    factor 2 of alpha are reported for diagnostics.
    """
    if g.n < 2:
        raise PreconditionError("cuts need at least 2 vertices")
    budget = budget or CutSearchBudget()
    if g.n <= EXACT_SWEEP_CAP:
        mask, e, ratio = _exact_cut_sweep(g)
        cert = CutCertificate(mask, g.vertex_mask & ~mask, e, ratio, True)
        found = ratio <= alpha + 1e-12
        near = () if found or ratio > 2 * alpha else (cert,)
        return CutSearchResult(found, cert if found else None, cert, near, "exact")

    rng = random.Random(budget.seed)
    n = g.n
    best: tuple[float, int, int] | None = None   # ratio, mask, e
    near: list[CutCertificate] = []

    def consider(x1: int, climb: bool):
        nonlocal best
        if x1 == 0 or x1 == g.vertex_mask:
            return
        if climb:
            x1, e, ratio = _hill_climb(g, x1)
        else:
            e, ratio = _eval_cut(g, x1)
        if best is None or ratio < best[0] - 1e-15 or (abs(ratio - best[0]) <= 1e-15 and x1 < best[1]):
            best = (ratio, x1, e)
        if alpha < ratio <= 2 * alpha and len(near) < budget.near_miss_cap:
            near.append(CutCertificate(x1, g.vertex_mask & ~x1, e, ratio, False))

    for s in _structured_starts(g):
        consider(s, False)
    for h in hints:
        consider(h & g.vertex_mask, True)
    seeds = _structured_starts(g)
    # climb from the most promising structured starts, then random restarts
    seeds.sort(key=lambda m: _eval_cut(g, m)[1])
    for s in seeds[:8]:
        consider(s, True)
    for _ in range(budget.restarts):
        size = rng.randint(max(1, n // 4), max(1, 3 * n // 4))
        consider(mask_of(rng.sample(range(n), size)), True)

    assert best is not None
    ratio, mask, e = best
    cert = CutCertificate(mask, g.vertex_mask & ~mask, e, ratio, False)
    found = ratio <= alpha + 1e-12
    return CutSearchResult(found, cert if found else None, cert, tuple(near), "heuristic")


@dataclass(frozen=True)
class DichotomyResult:
    kind: str                       # "cut" | "expander" | "unresolved" (sampled only)
    nu: float
    tau: float
    alpha: float
    cut: CutCertificate | None
    verdict: ExpansionVerdict | None
    exact: bool


def sparse_or_expander(g: Digraph, eta: float, alpha: float, tau: float,
                       budget: CutSearchBudget | None = None,
                       seed: int = 0) -> DichotomyResult:
    """Either an alpha-sparse cut or a robust (nu,tau)-outexpander verdict,
    with nu := alpha*tau*eta/4.

    Requires min total degree at least (1+eta)n. Below the exact cap both
    branches are exhaustive, so exactly one of the two outcomes is always
    produced; a simultaneous exact no-cut and exact violator would
    contradict the dichotomy theorem and raises.
    """
    n = g.n
    if not 0 < tau < 0.5:
        raise InputError(f"tau must be in (0,1/2), got {tau}")
    prof = degree_profile(g)
    need = (1 + eta) * n
    if prof.min_total < need - 1e-9:
        raise PreconditionError(
            f"min degree {prof.min_total} below (1+eta)n = {need:.2f}")
    nu = alpha * tau * eta / 4
    exact = n <= EXACT_SWEEP_CAP
    cut_res = find_sparse_cut(g, alpha, budget)
    if cut_res.found:
        return DichotomyResult("cut", nu, tau, alpha, cut_res.certificate, None, cut_res.mode == "exact")
    mode = "exact" if exact else "sampled"
    verdict = certify_expander(g, ExpansionParams(nu=nu, tau=tau, mode=mode, seed=seed))
    if verdict.outcome == "violator" and exact:
        raise RuntimeError(
            "dichotomy violated: exact sweep found neither an alpha-sparse cut "
            "nor a robust outexpander; this indicates an implementation bug")
    if verdict.outcome == "violator":
        # heuristic cut search missed; retry seeded from the violator before
        # conceding an unresolved answer
        s = verdict.violator
        rn = robust_out_neighborhood(g, s, nu)
        retry = find_sparse_cut(g, alpha, budget, hints=(s, s | rn, g.vertex_mask & ~rn))
        if retry.found:
            return DichotomyResult("cut", nu, tau, alpha, retry.certificate, verdict, False)
        return DichotomyResult("unresolved", nu, tau, alpha, None, verdict, False)
    return DichotomyResult("expander", nu, tau, alpha, None, verdict, exact)
