"""Desk-scale pipelines: greedy regularity decompositions, monotone
junta approximation, threshold curves, and the removal-lemma experiments.

The decomposition heuristic grows a coordinate set J greedily by largest
noisy influence; part statuses (quasirandom / negligible / bad) are then
computed exactly, so downstream conclusions never rest on the heuristic.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from .cube import DenseFunction, expectation, mask_of, noisy_influence, restrict
from .noise import CouplingParams, cross_term, is_regular, monotonicity_defect
from .families import JuntaFamily, SetFamily, family_slice
from .hypergraphs import (
    FreenessInconclusive,
    Hypergraph,
    almost_free_estimate,
    almost_free_exact,
    junta_is_Hs_free,
)


@dataclass
class Decomposition:
    J: tuple
    parts: dict          # assignment mask over J -> "quasirandom" | "negligible" | "bad"
    diagnostics: dict    # assignment mask -> {"mass", "mean", "max_noisy_influence"}
    failed: bool
    bad_mass: float


def _part_restriction(f: DenseFunction, J, a_mask: int):
    if not J:
        return f
    a = {c: 1 if a_mask & (1 << (c - 1)) else 0 for c in J}
    return restrict(f, J, a)


def _assignment_mass(J, a_mask: int, q: float) -> float:
    m = 1.0
    for c in J:
        m *= q if a_mask & (1 << (c - 1)) else (1.0 - q)
    return m


def _assignment_masks(J):
    bits = [1 << (c - 1) for c in J]
    out = [0]
    for b in bits:
        out = [m for m in out] + [m | b for m in out]
    return sorted(out)


def decompose(f: DenseFunction, q: float, rho: float, delta: float,
              j_max: int, neg_threshold: float = 0.05) -> Decomposition:
    """Greedy junta decomposition by maximal noisy influence.

    Grows J until every part of mu_q-mass >= delta is quasirandom (all
    noisy influences < delta) or negligible (mean < neg_threshold,
    strictly), or j_max is hit; final statuses are exact.
    """
    if j_max > 12:
        raise ValueError("j_max capped at 12")
    J: list = []
    while True:
        statuses, diags, worst = {}, {}, None
        for a_mask in _assignment_masks(J):
            mass = _assignment_mass(J, a_mask, q)
            if len(J) == f.n:
                mean = float(f.values[a_mask])
                infs = []
            else:
                part = _part_restriction(f, J, a_mask)
                mean = expectation(part, q)
                infs = [noisy_influence(part, i, rho, q) for i in range(1, part.n + 1)]
            maxinf = max(infs, default=0.0)
            if mean < neg_threshold:
                status = "negligible"
            elif maxinf < delta:
                status = "quasirandom"
            else:
                status = "bad"
            statuses[a_mask] = status
            diags[a_mask] = {"mass": mass, "mean": mean,
                             "max_noisy_influence": maxinf}
            if status == "bad" and mass >= delta:
                rest = [c for c in range(1, f.n + 1) if c not in J]
                best_local = int(np.argmax(infs))
                cand = (maxinf * mass, rest[best_local])
                if worst is None or cand > worst:
                    worst = cand
        bad_mass = sum(d["mass"] for a, d in diags.items() if statuses[a] == "bad")
        if worst is None:
            return Decomposition(tuple(J), statuses, diags, False, bad_mass)
        if len(J) >= j_max:
            return Decomposition(tuple(J), statuses, diags, True, bad_mass)
        J.append(worst[1])
        J.sort()


def _up_closure(masks, J) -> set:
    bits = [1 << (c - 1) for c in J]
    closed = set(masks)
    frontier = list(masks)
    while frontier:
        m = frontier.pop()
        for b in bits:
            up = m | b
            if up not in closed:
                closed.add(up)
                frontier.append(up)
    return closed


def monotone_junta_approx(f: DenseFunction, cp: CouplingParams,
                          delta: float = 0.1, eps: float = 0.2,
                          j_max: int = 6) -> tuple:
    """Monotone junta approximation built from a decomposition at bias q.

    Takes the up-closure of the dense quasirandom parts on {0,1}^J and
    lifts its indicator to all n coordinates.  Returns (g, err_q, err_p,
    report) with exact one-sided errors Pr_q[f > g] and Pr_p[f < g].
    """
    if not f.boolean:
        raise ValueError("input must be Boolean")
    defect = monotonicity_defect(f, cp)
    dec = decompose(f, cp.q, cp.rho, delta, j_max, neg_threshold=eps / 2.0)
    J = dec.J
    good = {a for a, st in dec.parts.items()
            if dec.diagnostics[a]["max_noisy_influence"] < delta
            and dec.diagnostics[a]["mean"] >= eps / 2.0}
    A = _up_closure(good, J)
    jmask = mask_of(J)
    x = np.arange(1 << f.n)
    member = np.isin(x & jmask, sorted(A)) if A else np.zeros(1 << f.n, dtype=bool)
    g = DenseFunction(f.n, member.astype(np.float64), boolean=True)

    # exhaustive monotonicity check of the junta on {0,1}^J
    for a in _assignment_masks(J):
        for c in J:
            b = 1 << (c - 1)
            if not a & b and (a in A) and (a | b) not in A:
                raise AssertionError("up-closure failed to be monotone")

    err_q = expectation(DenseFunction(f.n, f.values * (1.0 - g.values)), cp.q)
    err_p = expectation(DenseFunction(f.n, (1.0 - f.values) * g.values), cp.p)
    report = {"J": list(J), "defect": defect, "decomposition_failed": dec.failed,
              "bad_mass": dec.bad_mass, "err_q": err_q, "err_p": err_p}
    return g, err_q, err_p, report


def is_monotone(f: DenseFunction) -> bool:
    for i in range(f.n):
        v = f.values.reshape(-1, 2, 1 << i)
        if np.any(v[:, 0, :] > v[:, 1, :]):
            return False
    return True


@dataclass
class ThresholdCurve:
    ps: list
    mus: list
    p_c: float | None
    bracket: tuple
    monotone: bool


def _mu_from_layers(layer_sums: np.ndarray, n: int, p: float) -> float:
    j = np.arange(n + 1)
    return float(np.dot(layer_sums, p ** j * (1.0 - p) ** (n - j)))


def threshold_curve(f: DenseFunction, grid) -> ThresholdCurve:
    """Exact mu_p(f) on a grid plus the critical probability by bisection."""
    from .cube import popcounts
    n = f.n
    pc = popcounts(n)
    layer_sums = np.zeros(n + 1)
    np.add.at(layer_sums, pc, f.values)
    monotone = is_monotone(f) if n <= 16 else False
    mus = [_mu_from_layers(layer_sums, n, p) for p in grid]
    lo, hi = 1e-6, 1.0 - 1e-6
    p_c = None
    mlo = _mu_from_layers(layer_sums, n, lo) - 0.5
    mhi = _mu_from_layers(layer_sums, n, hi) - 0.5
    if mlo * mhi <= 0.0:
        while hi - lo > 1e-8:
            mid = 0.5 * (lo + hi)
            if (_mu_from_layers(layer_sums, n, mid) - 0.5) * mlo > 0.0:
                lo = mid
            else:
                hi = mid
        p_c = 0.5 * (lo + hi)
    return ThresholdCurve(list(grid), mus, p_c, (lo, hi), monotone)


def robust_fk_instance(f: DenseFunction, g: DenseFunction, cp: CouplingParams,
                       delta: float, eps: float) -> dict:
    """One instance of the regular cross-term dichotomy.

    Hypotheses: f is (ceil(1/delta), delta)-regular at mu_q and the
    coupling cross term is below delta.  Conclusion checked: mu_q(f) < eps
    or mu_p(g) > 1 - eps.  Failing hypotheses yield 'not_applicable'.
    """
    r = math.ceil(1.0 / delta)
    regular = is_regular(f, min(r, f.n), delta, cp.q)
    ct = cross_term(f, g, cp)
    mu_q_f = expectation(f, cp.q)
    mu_p_g = expectation(g, cp.p)
    out = {"regular": regular, "cross_term": ct, "delta": delta, "eps": eps,
           "mu_q_f": mu_q_f, "mu_p_g": mu_p_g}
    if not regular or ct >= delta:
        out["verdict"] = "not_applicable"
        return out
    out["verdict"] = "pass" if (mu_q_f < eps or mu_p_g > 1.0 - eps) else "fail"
    return out


def greedy_family_junta(F: SetFamily, j_max: int = 4, reg_delta: float = 0.25,
                        g_threshold: float | None = None) -> JuntaFamily:
    """Greedy junta for a family: repeatedly add the coordinate to which
    some current slice is most sensitive, until every slice is nearly
    indifferent to every remaining coordinate; the generator keeps the
    slices of significant measure."""
    base = F.measure
    J: list = []
    while len(J) < min(j_max, F.n - F.k):
        best = None
        for i in range(1, F.n + 1):
            if i in J:
                continue
            cand = sorted(J + [i])
            dev = 0.0
            for bbits in range(1 << len(J)):
                B = [c for idx, c in enumerate(J) if bbits >> idx & 1]
                if len(B) + 1 > F.k:
                    continue
                with_i = family_slice(F, cand, B + [i]).measure
                without_i = family_slice(F, cand, B).measure
                dev = max(dev, abs(with_i - without_i))
            if best is None or dev > best[0]:
                best = (dev, i)
        if best is None or best[0] < reg_delta:
            break
        J = sorted(J + [best[1]])
    thr = 0.5 * base if g_threshold is None else g_threshold
    G = []
    for bbits in range(1 << len(J)):
        B = [c for idx, c in enumerate(J) if bbits >> idx & 1]
        if len(B) > F.k:
            continue
        if family_slice(F, J, B).measure >= thr:
            G.append(mask_of(B))
    return JuntaFamily(F.n, F.k, tuple(J), frozenset(G))


def removal_pipeline(F: SetFamily, H: Hypergraph, s: int, seed: int = 0,
                     samples: int = 20_000, ladder=None) -> dict:
    """Four-stage removal experiment, returning a stage-keyed report.

    (a) almost-H-freeness of F (exact when affordable, else MC);
    (b) greedy junta approximation with the escaping mass mu(F minus <G>);
    (c) (H, s)-freeness of the junta via the trace predicate;
    (d) converse decay: almost-freeness of the junta along an n-ladder,
        checked against the n^-(s+1) rate with a factor-3 ratio band.
    """
    if F.n > 14 or bin(H.support()).count("1") > 8:
        raise ValueError("pipeline is desk-scale: n <= 14, |V(H)| <= 8")
    report: dict = {"inputs_hash": _inputs_hash(F, H, s), "seed": seed}

    # (a)
    try:
        exact = almost_free_exact(F, H)
        report["almost_free"] = {"exact": f"{exact.numerator}/{exact.denominator}",
                                 "value": float(exact)}
    except ValueError:
        est, se = almost_free_estimate(F, H, samples, seed)
        report["almost_free"] = {"value": est, "stderr": se}

    # (b)
    jf = greedy_family_junta(F)
    gen = jf.generated()
    escape = len(F.members - gen.members) / math.comb(F.n, F.k)
    report["junta"] = {"J": list(jf.J), "G": sorted(jf.G),
                       "escaping_mass": escape}

    # (c)
    try:
        free = junta_is_Hs_free(jf, H, s)
        report["freeness"] = {"free": free}
    except FreenessInconclusive as exc:
        report["freeness"] = {"free": None, "inconclusive": str(exc)}

    # (d)
    if ladder is None:
        ladder = [F.n, F.n + 2, F.n + 4]
    decay = []
    for n2 in ladder:
        jf2 = JuntaFamily(n2, F.k, jf.J, jf.G)
        gen2 = jf2.generated()
        try:
            val = float(almost_free_exact(gen2, H))
            decay.append({"n": n2, "value": val, "exact": True})
        except ValueError:
            est, se = almost_free_estimate(gen2, H, samples, seed + n2)
            decay.append({"n": n2, "value": est, "exact": False, "stderr": se})
    ok = True
    for a, b in zip(decay, decay[1:]):
        if a["value"] <= 0.0:
            continue
        ratio = b["value"] / a["value"]
        bound = 3.0 * (a["n"] / b["n"]) ** (s + 1)
        if ratio > bound:
            ok = False
    report["converse_decay"] = {"ladder": decay, "within_band": ok}
    return report


def _inputs_hash(F: SetFamily, H: Hypergraph, s: int) -> str:
    blob = json.dumps({"F": sorted(F.members), "n": F.n, "k": F.k,
                       "H": list(H.edges), "u": H.universe_size, "s": s},
                      sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
