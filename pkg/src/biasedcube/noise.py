"""Noise operators on the biased cube and the monotone coupling D(q,p).

The coupling draws each coordinate pair independently with
Pr[x_i=1, y_i=1] = q, Pr[x_i=0, y_i=1] = p - q, Pr[x_i=0, y_i=0] = 1 - p,
so x <= y always, x ~ mu_q and y ~ mu_p.  Conditioning one side on the
other gives the two directed operators; both contract the level-|S|
Fourier weight by rho^|S| with rho = sqrt(q(1-p)/(p(1-q))).

The conditional kernels used below follow from the table above:
given y_i = 1, x_i = 1 with probability q/p; given x_i = 0, y_i = 1 with
probability (p-q)/(1-q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cube import (
    DenseFunction,
    Spectrum,
    expectation,
    inner_product,
    inverse_transform,
    popcounts,
    transform,
)


@dataclass(frozen=True)
class CouplingParams:
    """A bias pair q < p with its derived correlation."""

    q: float
    p: float

    def __post_init__(self):
        if not (0.0 < self.q < self.p < 1.0):
            raise ValueError(f"need 0 < q < p < 1, got q={self.q}, p={self.p}")

    @property
    def rho(self) -> float:
        return math.sqrt(self.q * (1.0 - self.p) / (self.p * (1.0 - self.q)))


class CoupledSampler:
    """Seeded sampler of coordinatewise-monotone pairs (x, y) from D(q, p)."""

    def __init__(self, params: CouplingParams, n: int, seed: int):
        self.params = params
        self.n = n
        self.rng = np.random.default_rng(seed)

    def sample(self) -> tuple[int, int]:
        x, y = self.sample_many(1)
        return int(x[0]), int(y[0])

    def sample_many(self, count: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized draws; returns arrays of point bitmasks."""
        q, p = self.params.q, self.params.p
        x = np.zeros(count, dtype=np.int64)
        y = np.zeros(count, dtype=np.int64)
        for i in range(self.n):
            u = self.rng.random(count)
            xi = u < q
            yi = u < p
            x |= xi.astype(np.int64) << i
            y |= yi.astype(np.int64) << i
        return x, y


def _coordinate_mix(values: np.ndarray, n: int, one_probs) -> np.ndarray:
    """Apply independent per-coordinate Markov kernels to a dense table.

    one_probs[i] = (a0, a1) gives Pr[output bit i = 1] when the input bit
    is 0 resp. 1.  Cost O(n 2^n).
    """
    c = values.copy()
    for i in range(n):
        a0, a1 = one_probs[i]
        v = c.reshape(-1, 2, 1 << i)
        f0 = v[:, 0, :].copy()
        f1 = v[:, 1, :]
        v[:, 0, :] = (1.0 - a0) * f0 + a0 * f1
        v[:, 1, :] = (1.0 - a1) * f0 + a1 * f1
    return c


def noise_operator(f: DenseFunction, rho: float, p: float,
                   method: str = "spectral") -> DenseFunction:
    """T_{rho,p}: rerandomize each coordinate with probability 1 - rho.

    "spectral" scales fhat(S) by rho^|S|; "definitional" computes the
    exact expectation over the resampling kernel by per-coordinate DP.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho outside [0,1]")
    if method == "spectral":
        s = transform(f, p)
        s.coeffs *= rho ** popcounts(f.n)
        return inverse_transform(s)
    if method == "definitional":
        a0 = (1.0 - rho) * p
        a1 = rho + (1.0 - rho) * p
        return DenseFunction(f.n, _coordinate_mix(f.values, f.n, [(a0, a1)] * f.n))
    raise ValueError(f"unknown method {method!r}")


def directed_up(f: DenseFunction, cp: CouplingParams,
                method: str = "spectral") -> DenseFunction:
    """T^{q->p} f: the conditional expectation E[f(x) | y] along D(q,p).

    Input is read at bias q, output lives at bias p.  Spectrally the
    coefficients are scaled by rho^|S| and re-tagged to the p basis.
    """
    if method == "spectral":
        s = transform(f, cp.q)
        s.coeffs *= cp.rho ** popcounts(f.n)
        return inverse_transform(Spectrum(f.n, cp.p, s.coeffs))
    if method == "definitional":
        r = cp.q / cp.p
        # y_i = 0 forces x_i = 0; y_i = 1 keeps x_i = 1 w.p. q/p
        return DenseFunction(f.n, _coordinate_mix(f.values, f.n, [(0.0, r)] * f.n))
    raise ValueError(f"unknown method {method!r}")


def directed_down(g: DenseFunction, cp: CouplingParams,
                  method: str = "spectral") -> DenseFunction:
    """T_{p->q} g: the conditional expectation E[g(y) | x] along D(q,p)."""
    if method == "spectral":
        s = transform(g, cp.p)
        s.coeffs *= cp.rho ** popcounts(g.n)
        return inverse_transform(Spectrum(g.n, cp.q, s.coeffs))
    if method == "definitional":
        r = (cp.p - cp.q) / (1.0 - cp.q)
        # x_i = 1 forces y_i = 1; x_i = 0 raises y_i to 1 w.p. (p-q)/(1-q)
        return DenseFunction(g.n, _coordinate_mix(g.values, g.n, [(r, 1.0)] * g.n))
    raise ValueError(f"unknown method {method!r}")


def cross_term(f: DenseFunction, g: DenseFunction, cp: CouplingParams) -> float:
    """E over D(q,p) of f(x) (1 - g(y)), with f read at q and g at p."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    if f.bounded and (np.any(f.values < 0) or np.any(f.values > 1)):
        raise ValueError("f flagged bounded but leaves [0,1]")
    one_minus_g = DenseFunction(g.n, 1.0 - g.values)
    return inner_product(directed_up(f, cp, method="definitional"), one_minus_g, cp.p)


def cross_term_via_down(f: DenseFunction, g: DenseFunction, cp: CouplingParams) -> float:
    """Same quantity through the adjoint route; agrees with cross_term."""
    one_minus_g = DenseFunction(g.n, 1.0 - g.values)
    return inner_product(f, directed_down(one_minus_g, cp, method="definitional"), cp.q)


def monotonicity_defect(f: DenseFunction, cp: CouplingParams) -> float:
    """Pr over D(q,p) that f(x) > f(y); zero exactly for monotone f."""
    if not f.boolean:
        raise ValueError("monotonicity defect is defined for Boolean functions")
    return cross_term(f, f, cp)


def monotonicity_defect_exhaustive(f: DenseFunction, cp: CouplingParams) -> float:
    """Oracle: sum the coupling mass of violating pairs over all x <= y."""
    q, p = cp.q, cp.p
    n = f.n
    total = 0.0
    for y in range(1 << n):
        for x_sub in _submasks(y):
            # coordinates: x=y=1 on x_sub, x=0<y=1 on y^x_sub, both 0 elsewhere
            k11 = bin(x_sub).count("1")
            k01 = bin(y ^ x_sub).count("1")
            k00 = n - k11 - k01
            w = q ** k11 * (p - q) ** k01 * (1.0 - p) ** k00
            if f.values[x_sub] > f.values[y]:
                total += w
    return total


def _submasks(m: int):
    sub = m
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & m


def is_regular(f: DenseFunction, r: int, eps: float, p: float) -> bool:
    """All restrictions on at most r coordinates shift the mean by < eps."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    base = expectation(f, p)
    from .cube import restrict  # local import keeps module load order simple
    for size in range(1, min(r, f.n) + 1):
        for J in combinations(range(1, f.n + 1), size):
            for bits in range(1 << size):
                a = {c: (bits >> idx) & 1 for idx, c in enumerate(J)}
                if size == f.n:
                    mask = sum((1 << (c - 1)) for c in J if a[c])
                    mean = float(f.values[mask])
                else:
                    mean = expectation(restrict(f, J, a), p)
                if abs(mean - base) >= eps:
                    return False
    return True


def is_fourier_regular(f: DenseFunction, r: int, delta: float, p: float) -> bool:
    """All coefficients at levels 1..r are < delta in absolute value."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    s = transform(f, p)
    pc = popcounts(f.n)
    sel = (pc >= 1) & (pc <= r)
    if not np.any(sel):
        return True
    return bool(np.max(np.abs(s.coeffs[sel])) < delta)
