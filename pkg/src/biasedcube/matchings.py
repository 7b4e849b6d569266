"""Matching distributions and cross-containment probabilities.

Three samplers: the uniform ordered disjoint tuple (sequential choice),
the 1/h-biased matching (bucket each element by which of h intervals its
uniform variable falls into), and the conditioned variant that rejects
until every bucket holds at least k elements.  Cross probabilities
Pr[A_i in F_i for all i] come exactly by nested enumeration or by MC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cube import mask_of, coords_of
from .families import SetFamily, family_slice, _compact
from .hypergraphs import Hypergraph


@dataclass(frozen=True)
class MatchingSpec:
    n: int
    mode: str  # "uniform" | "biased" | "conditioned"
    sizes: tuple | None = None
    h: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.mode == "uniform":
            if not self.sizes or sum(self.sizes) > self.n:
                raise ValueError("uniform mode needs sizes with sum <= n")
        elif self.mode == "biased":
            if not self.h or self.h < 1:
                raise ValueError("biased mode needs h >= 1")
        elif self.mode == "conditioned":
            if not self.h or self.k is None:
                raise ValueError("conditioned mode needs h and k")
            if self.h * self.k > self.n:
                raise ValueError("infeasible: h*k > n")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")


def sample(spec: MatchingSpec, seed, max_tries: int = 10_000) -> tuple:
    """One draw from the spec's distribution, as a tuple of disjoint masks."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if spec.mode == "uniform":
        return _sample_uniform(spec.n, spec.sizes, rng)
    if spec.mode == "biased":
        return _sample_biased(spec.n, spec.h, rng)
    # conditioned: reject until every bucket has >= k elements
    for t in range(1, max_tries + 1):
        parts = _sample_biased(spec.n, spec.h, rng)
        if all(bin(b).count("1") >= spec.k for b in parts):
            return parts
    raise RuntimeError(
        f"rejection budget exhausted after {max_tries} tries "
        f"(acceptance rate below {1.0 / max_tries:.2e})")


def _sample_uniform(n: int, sizes, rng) -> tuple:
    avail = list(range(1, n + 1))
    parts = []
    for k in sizes:
        pick = rng.choice(len(avail), size=k, replace=False)
        chosen = [avail[i] for i in pick]
        parts.append(mask_of(chosen))
        avail = [v for v in avail if v not in set(chosen)]
    return tuple(parts)


def _sample_biased(n: int, h: int, rng) -> tuple:
    u = rng.random(n)
    idx = np.minimum((u * h).astype(int), h - 1)
    parts = []
    for i in range(h):
        parts.append(mask_of(j + 1 for j in np.flatnonzero(idx == i)))
    return tuple(parts)


def acceptance_rate(spec: MatchingSpec, trials: int, seed: int) -> float:
    """Empirical acceptance probability of the conditioned sampler."""
    if spec.mode != "conditioned":
        raise ValueError("acceptance rate applies to conditioned mode")
    rng = np.random.default_rng(seed)
    ok = 0
    for _ in range(trials):
        parts = _sample_biased(spec.n, spec.h, rng)
        if all(bin(b).count("1") >= spec.k for b in parts):
            ok += 1
    return ok / trials


def cross_probability_exact(n: int, sizes, families,
                            work_bound: int = 10 ** 8) -> Fraction:
    """Exact Pr[A_i in F_i for all i] over uniform ordered disjoint tuples."""
    h = len(sizes)
    if len(families) != h:
        raise ValueError("one family per part required")
    work = 1
    for F in families:
        work *= max(len(F.members), 1)
    if work > work_bound:
        raise ValueError("work bound exceeded; use cross_probability_mc")
    for F, k in zip(families, sizes):
        if F.n != n or F.k != k:
            raise ValueError("family shape mismatch")

    member_lists = [sorted(F.members) for F in families]

    def rec(i, used):
        if i == h:
            return 1
        return sum(rec(i + 1, used | m) for m in member_lists[i] if not (m & used))

    num = rec(0, 0)
    den = 1
    left = n
    for k in sizes:
        den *= math.comb(left, k)
        left -= k
    return Fraction(num, den)


def cross_probability_mc(n: int, sizes, families, samples: int,
                         seed: int) -> tuple[float, float]:
    """MC estimate with binomial standard error."""
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        parts = _sample_uniform(n, sizes, rng)
        if all(m in F.members for m, F in zip(parts, families)):
            hits += 1
    est = hits / samples
    stderr = math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
    return est, stderr


def conditioned_subsample_distribution(n: int, h: int, sizes) -> dict:
    """Exact law of (M_1..M_h) where M_i is a uniform size_i-subset of the
    i-th bucket of a conditioned biased matching (all |B_i| >= size_i).

    Used to confirm this equals the uniform ordered-disjoint-tuple law.
    Cost h^n, so n must stay small.
    """
    out: dict = {}
    total = 0.0
    for assignment in range(h ** n):
        buckets = [0] * h
        a = assignment
        for j in range(n):
            buckets[a % h] |= 1 << j
            a //= h
        if any(bin(buckets[i]).count("1") < sizes[i] for i in range(h)):
            continue
        w = (1.0 / h) ** n
        total += w
        # spread over uniform subset choices inside each bucket
        choice_lists = []
        for i in range(h):
            elems = coords_of(buckets[i])
            subs = [mask_of(c) for c in combinations(elems, sizes[i])]
            choice_lists.append(subs)
        weight_each = w
        for subs in choice_lists:
            weight_each /= len(subs)
        stack = [()]
        for subs in choice_lists:
            stack = [t + (m,) for t in stack for m in subs]
        for t in stack:
            out[t] = out.get(t, 0.0) + weight_each
    # condition on acceptance
    return {t: v / total for t, v in out.items()}


def uniform_matching_distribution(n: int, sizes) -> dict:
    """Exact uniform law over ordered disjoint tuples."""
    den = 1
    left = n
    for k in sizes:
        den *= math.comb(left, k)
        left -= k
    out = {}

    def rec(i, used, t):
        if i == len(sizes):
            out[t] = 1.0 / den
            return
        elems = [c for c in range(1, n + 1) if not (used >> (c - 1)) & 1]
        for c in combinations(elems, sizes[i]):
            m = mask_of(c)
            rec(i + 1, used | m, t + (m,))

    rec(0, 0, ())
    return out


def cross_probability_floor_battery(n: int, sizes, eps: float, trials: int,
                                    seed: int, floor: float = 1e-4,
                                    samples: int = 4000, regularity_r: int = 1,
                                    max_retries: int = 50) -> dict:
    """Random regular families of measure >= eps, with their MC cross
    probabilities checked against a configurable positive floor."""
    from .families import family_regular
    rng = np.random.default_rng(seed)
    probs = []
    for t in range(trials):
        fams = []
        for k in sizes:
            for _ in range(max_retries):
                F = SetFamily.random(n, k, max(2 * eps, 0.3),
                                     int(rng.integers(0, 2 ** 63)))
                if F.measure >= eps and family_regular(F, regularity_r, 0.35):
                    fams.append(F)
                    break
            else:
                raise RuntimeError("family generator failed regularity repeatedly")
        est, _ = cross_probability_mc(n, sizes, fams, samples,
                                      int(rng.integers(0, 2 ** 63)))
        probs.append(est)
    probs.sort()
    return {
        "n": n, "sizes": list(sizes), "eps": eps, "trials": trials,
        "floor": floor,
        "min_probability": probs[0],
        "median_probability": probs[len(probs) // 2],
        "all_above_floor": bool(probs[0] > floor),
    }


def expanded_event_equivalence(H: Hypergraph, families, samples: int,
                               seed: int) -> dict:
    """Per-sample check of the two descriptions of 'the copy lands in
    prod F_i' for an expanded hypergraph with center C: directly, and via
    the slices F_i at the image of C cross-containing the petal matching.
    """
    C = H.center()
    n = families[0].n
    for e, F in zip(H.edges, families):
        if bin(e).count("1") != F.k or F.n != n:
            raise ValueError("family shape mismatch")
    rng = np.random.default_rng(seed)
    verts = coords_of(H.support())
    mismatches = 0
    for _ in range(samples):
        image = rng.choice(n, size=len(verts), replace=False) + 1
        vmap = {v: int(image[i]) for i, v in enumerate(verts)}
        copy = tuple(mask_of(vmap[v] for v in coords_of(e)) for e in H.edges)
        Jmask = mask_of(vmap[v] for v in coords_of(C))
        J = coords_of(Jmask)
        rest = [c for c in range(1, n + 1) if c not in set(J)]
        ev1 = all(m in F.members for m, F in zip(copy, families))
        ev2 = True
        for m, F, e in zip(copy, families, H.edges):
            B = coords_of(m & Jmask)
            sl = family_slice(F, J, B)
            if _compact(m & ~Jmask, rest) not in sl.members:
                ev2 = False
                break
        if ev1 != ev2:
            mismatches += 1
    return {"samples": samples, "mismatches": mismatches}
