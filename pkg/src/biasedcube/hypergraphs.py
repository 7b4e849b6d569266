"""Hypergraph structure operations: center, k-expansion, resolution,
traces, freeness of junta families, and almost-freeness counting.

A hypergraph is an ordered list of edge bitmasks over an explicit vertex
universe.  A resolution at a vertex set S replaces each occurrence of a
vertex of S by a fresh per-edge vertex; a trace is the tuple of edge
intersections with a fixed set.  A family is (H, s)-free when it
contains no copy of a resolution of H whose center has size at most s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from .cube import coords_of, mask_of
from .families import JuntaFamily, SetFamily, family_slice, _compact


class FreenessInconclusive(Exception):
    """Raised when the side conditions do not support a trusted verdict."""


@dataclass(frozen=True)
class Hypergraph:
    universe_size: int
    edges: tuple
    allow_repeats: bool = False

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(int(e) for e in self.edges))
        full = (1 << self.universe_size) - 1
        for e in self.edges:
            if e & ~full:
                raise ValueError("edge leaves the universe")
        if not self.allow_repeats and len(set(self.edges)) != len(self.edges):
            raise ValueError("repeated edges only allowed in trace outputs")

    @property
    def h(self) -> int:
        return len(self.edges)

    def support(self) -> int:
        m = 0
        for e in self.edges:
            m |= e
        return m

    def center(self) -> int:
        """Mask of vertices lying in at least two edges (list positions count)."""
        c = 0
        for i, a in enumerate(self.edges):
            for b in self.edges[i + 1:]:
                c |= a & b
        return c

    def max_edge_size(self) -> int:
        return max((bin(e).count("1") for e in self.edges), default=0)

    # -- file format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.universe_size} {self.h}"]
        for e in self.edges:
            lines.append(" ".join(str(c) for c in coords_of(e)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Hypergraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        universe, h = (int(t) for t in lines[0].split())
        if len(lines) - 1 != h:
            raise ValueError(f"expected {h} edge lines, found {len(lines) - 1}")
        edges = tuple(mask_of(int(t) for t in ln.split()) for ln in lines[1:])
        return Hypergraph(universe, edges)


def matching_hypergraph(h: int, k: int) -> Hypergraph:
    """M_h: h pairwise disjoint k-edges."""
    edges = []
    v = 1
    for _ in range(h):
        edges.append(mask_of(range(v, v + k)))
        v += k
    return Hypergraph(v - 1, tuple(edges))


def sunflower_hypergraph(h: int, k: int) -> Hypergraph:
    """I_{h,1} style: h k-edges sharing exactly one common vertex."""
    edges = []
    v = 2
    for _ in range(h):
        edges.append(1 | mask_of(range(v, v + k - 1)))
        v += k - 1
    return Hypergraph(v - 1, tuple(edges))


def is_expanded(H: Hypergraph, h: int, d: int) -> bool:
    """At most h edges and all pairwise intersections of size at most d."""
    if H.h > h:
        return False
    for i, a in enumerate(H.edges):
        for b in H.edges[i + 1:]:
            if bin(a & b).count("1") > d:
                return False
    return True


def k_expand(H: Hypergraph, k: int) -> Hypergraph:
    """Pad every edge to size k with globally fresh vertices, in edge order."""
    if H.max_edge_size() > k:
        raise ValueError("k smaller than an existing edge")
    fresh = H.universe_size + 1
    edges = []
    for e in H.edges:
        need = k - bin(e).count("1")
        e |= mask_of(range(fresh, fresh + need))
        fresh += need
        edges.append(e)
    return Hypergraph(fresh - 1, tuple(edges))


def resolve(H: Hypergraph, S) -> Hypergraph:
    """Resolution at S: each vertex of S is replaced, in every containing
    edge, by a distinct fresh vertex (ascending allocation)."""
    Sset = sorted(set(S))
    edges = list(H.edges)
    fresh = H.universe_size + 1
    for v in Sset:
        bit = 1 << (v - 1)
        for i, e in enumerate(edges):
            if e & bit:
                edges[i] = (e & ~bit) | (1 << (fresh - 1))
                fresh += 1
    return Hypergraph(fresh - 1, tuple(edges), allow_repeats=True)


def traces(H: Hypergraph, support_bound: int | None = None,
           center_bound: int | None = None) -> list:
    """All distinct ordered tuples (A_1 cap S, ..., A_h cap S).

    S ranges over subsets of the edge support (vertices outside every
    edge cannot change a trace).  support_bound caps |S|; center_bound
    filters by the trace's center size.
    """
    sup = coords_of(H.support())
    cap = len(sup) if support_bound is None else min(support_bound, len(sup))
    seen = set()
    out = []
    for size in range(cap + 1):
        for S in combinations(sup, size):
            smask = mask_of(S)
            t = tuple(e & smask for e in H.edges)
            if t in seen:
                continue
            seen.add(t)
            if center_bound is not None:
                tc = Hypergraph(H.universe_size, t, allow_repeats=True).center()
                if bin(tc).count("1") > center_bound:
                    continue
            out.append(t)
    return out


def _venn_signature(edges) -> tuple:
    """Cell sizes of the Venn diagram of an ordered edge tuple.

    Entry T (1-based bitmask over edge indices) is the number of vertices
    lying in exactly the edges of T.  Two ordered tuples with equal
    signatures are copies of each other.
    """
    h = len(edges)
    sig = []
    for T in range(1, 1 << h):
        inter = ~0
        union_rest = 0
        for i in range(h):
            if (T >> i) & 1:
                inter &= edges[i]
            else:
                union_rest |= edges[i]
        sig.append(bin(inter & ~union_rest).count("1"))
    return tuple(sig)


def _trace_embeds(trace, jf: JuntaFamily) -> bool:
    """Is there an injection of the trace's vertices into J whose image
    tuple lies inside the generator G?"""
    used = 0
    for t in trace:
        used |= t
    verts = coords_of(used)
    if len(verts) > len(jf.J):
        return False
    for image in permutations(jf.J, len(verts)):
        vmap = {v: image[i] for i, v in enumerate(verts)}
        ok = True
        for t in trace:
            g = mask_of(vmap[v] for v in coords_of(t))
            if g not in jf.G:
                ok = False
                break
        if ok:
            return True
    return False


def junta_is_Hs_free(jf: JuntaFamily, H: Hypergraph, s: int,
                     strict: bool = True) -> bool:
    """(H, s)-freeness of the generated family, decided through traces.

    The family is free of resolutions-with-small-center exactly when no
    trace of the k-expanded H with center at most s embeds into the
    generator.  Two arithmetic side conditions back the two directions:
    h*k <= n - |J| guarantees disjoint completions outside J (so a found
    trace really yields a copy), and k >= max_i |A_i cap center(H)| + |J|
    guarantees every copy leaves a visible trace (each edge keeps enough
    private vertices).  With strict=True a verdict whose supporting
    condition fails raises FreenessInconclusive.
    """
    Hk = k_expand(H, jf.k)
    n, k, h = jf.n, jf.k, Hk.h
    center = Hk.center()
    c_max = max((bin(e & center).count("1") for e in Hk.edges), default=0)
    completion_ok = h * k <= n - len(jf.J)
    visibility_ok = k >= c_max + len(jf.J)

    found = False
    for trace in traces(Hk, support_bound=len(jf.J), center_bound=s):
        if _trace_embeds(trace, jf):
            found = True
            break

    if found:
        if strict and not completion_ok:
            raise FreenessInconclusive(
                f"trace found but h*k={h*k} > n-|J|={n - len(jf.J)}")
        return False
    if strict and not visibility_ok:
        raise FreenessInconclusive(
            f"no trace found but k={k} < c_max+|J|={c_max + len(jf.J)}")
    return True


def junta_is_Hs_free_exhaustive(jf: JuntaFamily, H: Hypergraph, s: int,
                                work_bound: int = 10 ** 8) -> bool:
    """Oracle: search the generated family directly for a copy of any
    resolution of H (k-expanded) with center of size at most s.

    Copies are recognized by Venn signatures: an ordered tuple of k-sets
    is a copy of a resolution iff its signature matches the signature of
    that resolution under some edge reordering.  Resolving a private
    vertex leaves the signature unchanged, so S ranges over the center.
    """
    Hk = k_expand(H, jf.k)
    h = Hk.h
    admissible = set()
    cverts = coords_of(Hk.center())
    for size in range(len(cverts) + 1):
        for S in combinations(cverts, size):
            R = resolve(Hk, S)
            if bin(R.center()).count("1") > s:
                continue
            for perm in permutations(range(h)):
                admissible.add(_venn_signature([R.edges[i] for i in perm]))
    members = sorted(jf.generated().members)
    if len(members) ** h > work_bound:
        raise ValueError("work bound exceeded; shrink the instance")

    def rec(chosen):
        if len(chosen) == h:
            return _venn_signature(chosen) in admissible
        return any(rec(chosen + [m]) for m in members)

    return not rec([])


def random_copy(H: Hypergraph, n: int, seed) -> tuple:
    """Image of a uniform injection of the edge support into [n]."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    verts = coords_of(H.support())
    if len(verts) > n:
        raise ValueError("not enough vertices to host a copy")
    image = rng.choice(n, size=len(verts), replace=False) + 1
    vmap = {v: int(image[i]) for i, v in enumerate(verts)}
    return tuple(mask_of(vmap[v] for v in coords_of(e)) for e in H.edges)


def almost_free_estimate(F: SetFamily, H: Hypergraph, samples: int,
                         seed: int) -> tuple[float, float]:
    """Fraction of uniform random copies of H lying entirely inside F."""
    for e in H.edges:
        if bin(e).count("1") != F.k:
            raise ValueError("edge sizes must match the family uniformity")
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        copy = random_copy(H, F.n, rng)
        if all(e in F.members for e in copy):
            hits += 1
    est = hits / samples
    stderr = math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
    return est, stderr


def almost_free_exact(F: SetFamily, H: Hypergraph,
                      work_bound: int = 10 ** 8) -> Fraction:
    """Exact probability that a uniform random copy of H lies inside F.

    A uniform injection of the support induces the uniform distribution
    over ordered edge tuples sharing H's Venn signature, and each tuple
    is hit by exactly prod |cell|! injections.  So the probability is
    (#signature-matching tuples inside F) * prod |cell|! / (n)_v.
    """
    for e in H.edges:
        if bin(e).count("1") != F.k:
            raise ValueError("edge sizes must match the family uniformity")
    v = bin(H.support()).count("1")
    total_inj = math.perm(F.n, v)
    if total_inj > work_bound:
        raise ValueError("work bound exceeded; use almost_free_estimate")
    h = H.h
    target = _venn_signature(H.edges)
    members = sorted(F.members)
    if len(members) ** h > work_bound:
        raise ValueError("work bound exceeded; use almost_free_estimate")

    count = 0

    def rec(chosen):
        nonlocal count
        if len(chosen) == h:
            if _venn_signature(chosen) == target:
                count += 1
            return
        for m in members:
            rec(chosen + [m])

    rec([])
    cell_perms = 1
    for c in target:
        cell_perms *= math.factorial(c)
    return Fraction(count * cell_perms, total_inj)


def trace_probability_order(H: Hypergraph, J, trace, n: int, samples: int,
                            seed: int) -> tuple[float, float]:
    """MC estimate of Pr[A_i cap J = B_i for all i] for a uniform copy.

    J is a set of 1-based coordinates of [n]; trace gives the target
    masks B_i over those coordinates.
    """
    jmask = mask_of(J)
    for B in trace:
        if B & ~jmask:
            return 0.0, 0.0
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(samples):
        copy = random_copy(H, n, rng)
        if all((e & jmask) == B for e, B in zip(copy, trace)):
            hits += 1
    est = hits / samples
    stderr = math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
    return est, stderr


def slice_of_copy(F: SetFamily, J, B, D) -> bool:
    """Membership of a compacted copy part in a slice (helper for the
    expanded-hypergraph event split)."""
    sl = family_slice(F, J, B)
    rest = [c for c in range(1, F.n + 1) if c not in set(J)]
    return _compact(mask_of(D) if not isinstance(D, int) else D, rest) in sl.members
