"""Search for new parameter sets: recurrence constants first, tempering second.

Stage one samples (m, sigma1, sigma2, a) for a fixed state shape and keeps
candidates whose characteristic polynomial has full degree p and is
irreducible; with 2**p - 1 prime that certifies the maximal period.  Stage
two fixes a surviving recurrence and tunes the tempering (l, sigma3, b) to
minimize the equidistribution defect delta, finishing with a greedy bit-flip
refinement of the mask b.

Both stages are deterministic in (trials, rng_seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from . import equidist, f2poly
from .params import GeneratorParams


@dataclass
class CandidateVerdict:
    """Outcome of the maximal-period check for one candidate."""

    params: GeneratorParams
    maximal: bool
    stage: str | None = None   # failed stage when not maximal
    n1: int | None = None      # charpoly weight when maximal


@dataclass
class TemperingResult:
    """Best tempering found for a fixed recurrence."""

    l: int
    sigma3: int
    b: int
    delta: int
    params: GeneratorParams
    history: list[int]         # accepted delta values, strictly decreasing


def verify_candidate(params: GeneratorParams, quick: bool = False) -> CandidateVerdict:
    """Check the maximal-period property of one parameter set.

    quick=True settles the degree stage with a single output-bit probe.
    That is exact, not heuristic: if the characteristic polynomial were
    irreducible, every output bit would be a nonzero linear form (the first
    tempering stage is invertible, so no output bit is identically zero on a
    nonzero state) and its stream's minimal polynomial would be the full
    characteristic polynomial.  A probe of degree below p therefore already
    disproves maximality; no retry can rescue the candidate.
    """
    if quick:
        cp = f2poly.min_poly_probe(params)
        if f2poly.deg(cp) != params.p:
            return CandidateVerdict(params, False, stage="degree")
    else:
        try:
            cp = f2poly.char_poly(params)
        except f2poly.CharPolyError:
            return CandidateVerdict(params, False, stage="degree")
    if not f2poly.is_irreducible_prime_degree(cp):
        return CandidateVerdict(params, False, stage="irreducibility")
    return CandidateVerdict(params, True, n1=f2poly.weight(cp))


def _state_shape(p: int) -> tuple[int, int]:
    if p not in f2poly.MERSENNE_EXPONENTS:
        raise ValueError(f"2**{p} - 1 is not a known prime; "
                         "no maximal-period target for this size")
    n = p // 64 + 1
    r = 64 * n - p
    if n < 4:
        raise ValueError(f"p={p} leaves no room for the middle offset")
    return n, r


def search_recursion(p: int, trials: int, rng_seed: int,
                     inject_first: tuple[int, int, int, int] | None = None,
                     ) -> list[CandidateVerdict]:
    """Sample recurrence constants for a p-bit state; return the survivors.

    Candidates carry placeholder tempering (l=1, sigma3=1, b=0); the verdict
    does not depend on that choice, since degree and irreducibility of the
    recovered polynomial are properties of the recurrence alone.  An empty
    result just means no luck within the trial budget.
    """
    n, r = _state_shape(p)
    rng = random.Random(rng_seed)
    out = []
    for trial in range(trials):
        if trial == 0 and inject_first is not None:
            m, s1, s2, a = inject_first
        else:
            m = rng.randrange(1, n - 1)
            s1 = rng.randrange(1, 64)
            s2 = rng.randrange(1, 64)
            a = rng.getrandbits(64)
        cand = GeneratorParams(name=f"search-p{p}-t{trial}", p=p, w=64, r=r,
                               n=n, m=m, l=1, sigma1=s1, sigma2=s2, sigma3=1,
                               a=a, b=0)
        verdict = verify_candidate(cand, quick=True)
        if verdict.maximal:
            out.append(verdict)
    return out


def _default_delta(params: GeneratorParams, cap: int | None) -> int | None:
    return equidist.total_defect(params, cap=cap)


def search_tempering(core: GeneratorParams, trials: int, rng_seed: int,
                     inject_first: tuple[int, int, int] | None = None,
                     delta_fn=None) -> TemperingResult:
    """Tune (l, sigma3, b) on a fixed recurrence to minimize delta.

    delta_fn(params, cap) may replace the full defect computation; it must
    return the exact delta, or None as soon as it provably exceeds cap.
    Ties prefer the lexicographically smallest (l, sigma3, b).  After the
    trials, single bits of b are flipped greedily (most significant first,
    repeated passes) and a flip is kept only when delta strictly drops.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if delta_fn is None:
        delta_fn = _default_delta
    rng = random.Random(rng_seed)
    best = None          # (delta, l, s3, b)
    history = []
    for trial in range(trials):
        if trial == 0 and inject_first is not None:
            l, s3, b = inject_first
        else:
            l = rng.randrange(1, core.n - 1)
            s3 = rng.randrange(1, 64)
            b = rng.getrandbits(64)
        cap = None if best is None else best[0]
        d = delta_fn(replace(core, l=l, sigma3=s3, b=b), cap)
        if d is None:
            continue
        key = (d, l, s3, b)
        if best is None or key < best:
            if best is None or d < best[0]:
                history.append(d)
            best = key
    if best is None:
        raise RuntimeError("delta_fn returned None on an uncapped evaluation")
    delta, l, s3, b = best[0], best[1], best[2], best[3]
    improved = delta > 0
    while improved:
        improved = False
        for bit in range(63, -1, -1):
            flipped = b ^ (1 << bit)
            d = delta_fn(replace(core, l=l, sigma3=s3, b=flipped), delta - 1)
            if d is not None and d < delta:
                b, delta = flipped, d
                history.append(d)
                improved = True
                if delta == 0:
                    improved = False
                    break
    final = replace(core, l=l, sigma3=s3, b=b)
    return TemperingResult(l=l, sigma3=s3, b=b, delta=delta, params=final,
                           history=history)
