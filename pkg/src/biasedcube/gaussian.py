"""Gaussian-space quantities: Phi inverse, the correlated orthant
probability Lambda_rho(mu, nu), its gap and Lipschitz diagnostics, and
Gaussian analogues of biased spectra with the Chop clamp.

Lambda_rho(mu, nu) is the probability that two rho-correlated standard
normals land below their respective thresholds Phi^{-1}(mu), Phi^{-1}(nu).
It is computed by adaptive Gauss-Legendre quadrature of the 1-D integral
int phi(x) Phi((t_nu - rho x)/sqrt(1-rho^2)) dx over x < t_mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cube import Spectrum, popcounts

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def phi(t: float) -> float:
    """Standard normal density."""
    return _INV_SQRT_2PI * math.exp(-0.5 * t * t)


def Phi(t: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-t / _SQRT2)


def phi_inv(mu: float) -> float:
    """The threshold t with Phi(t) = mu, to about 1e-12 absolute."""
    if not 0.0 < mu < 1.0:
        raise ValueError("threshold is unbounded for mu in {0,1}")
    lo, hi = -10.0, 10.0
    t = 0.0
    for _ in range(80):
        t = 0.5 * (lo + hi)
        if Phi(t) < mu:
            lo = t
        else:
            hi = t
    # Newton polish
    for _ in range(4):
        d = phi(t)
        if d <= 0.0:
            break
        t -= (Phi(t) - mu) / d
    return t


@dataclass(frozen=True)
class LambdaQuery:
    rho: float
    mu: float
    nu: float
    tolerance: float = 1e-10

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must lie in [0,1)")
        if not (0.0 <= self.mu <= 1.0 and 0.0 <= self.nu <= 1.0):
            raise ValueError("mu, nu must lie in [0,1]")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gl_panel(fn, a: float, b: float) -> float:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * sum(w * fn(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS))


def _adaptive(fn, a: float, b: float, tol: float, depth: int = 0) -> float:
    whole = _gl_panel(fn, a, b)
    mid = 0.5 * (a + b)
    split = _gl_panel(fn, a, mid) + _gl_panel(fn, mid, b)
    if abs(whole - split) < tol or depth >= 30:
        return split
    return (_adaptive(fn, a, mid, 0.5 * tol, depth + 1)
            + _adaptive(fn, mid, b, 0.5 * tol, depth + 1))


def lambda_rho(rho: float, mu: float, nu: float, tol: float = 1e-10) -> float:
    """Lambda_rho(mu, nu), the rho-correlated orthant probability."""
    q = LambdaQuery(rho, mu, nu, tol)
    if mu == 0.0 or nu == 0.0:
        return 0.0
    if mu == 1.0:
        return nu
    if nu == 1.0:
        return mu
    if rho == 0.0:
        return mu * nu
    t_mu = phi_inv(mu)
    t_nu = phi_inv(nu)
    s = math.sqrt(1.0 - rho * rho)

    def integrand(x: float) -> float:
        return phi(x) * Phi((t_nu - rho * x) / s)

    lo = max(-39.0, t_mu - 45.0)
    hi = min(t_mu, 39.0)
    if hi <= lo:
        return 0.0
    return _adaptive(integrand, lo, hi, q.tolerance)


def lambda_query(q: LambdaQuery) -> float:
    return lambda_rho(q.rho, q.mu, q.nu, q.tolerance)


def lambda_mc(rho: float, mu: float, nu: float, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo Lambda with its standard error, chunked for memory."""
    t_mu = phi_inv(mu) if 0.0 < mu < 1.0 else (math.inf if mu >= 1.0 else -math.inf)
    t_nu = phi_inv(nu) if 0.0 < nu < 1.0 else (math.inf if nu >= 1.0 else -math.inf)
    rng = np.random.default_rng(seed)
    s = math.sqrt(1.0 - rho * rho)
    hits = 0
    done = 0
    chunk = 1_000_000
    while done < samples:
        m = min(chunk, samples - done)
        x = rng.standard_normal(m)
        y = rho * x + s * rng.standard_normal(m)
        hits += int(np.count_nonzero((x < t_mu) & (y < t_nu)))
        done += m
    est = hits / samples
    stderr = math.sqrt(max(est * (1.0 - est), 1e-300) / samples)
    return est, stderr


def lambda_gap(eps: float) -> float:
    """delta(eps) = eps - Lambda_{1-eps}(eps, 1-eps), strictly positive.

    For every mu in (eps, 1) and rho, nu in (0, 1-eps) the bound
    Lambda_rho(mu, nu) <= mu - delta(eps) holds.
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    return eps - lambda_rho(1.0 - eps, eps, 1.0 - eps)


def lambda_lipschitz_check(rho1: float, rho2: float, mu: float, nu: float) -> tuple[float, float]:
    """|Lambda_{rho1} - Lambda_{rho2}| against the 10 (rho2-rho1)/(1-rho2) bound."""
    if not 0.0 <= rho1 < rho2 < 1.0:
        raise ValueError("need 0 <= rho1 < rho2 < 1")
    lhs = abs(lambda_rho(rho1, mu, nu) - lambda_rho(rho2, mu, nu))
    bound = 10.0 * (rho2 - rho1) / (1.0 - rho2)
    if lhs > bound:
        raise ArithmeticError(f"Lipschitz bound violated: {lhs} > {bound}")
    return lhs, bound


@dataclass
class GaussianPoly:
    """Multilinear polynomial sum_S a_S prod_{i in S} z_i over subset masks."""

    n: int
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if self.coeffs.shape != (1 << self.n,):
            raise ValueError("coefficient table length mismatch")

    def evaluate(self, z) -> float:
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.n,):
            raise ValueError("point dimension mismatch")
        # fold out one variable per pass; after folding bit i the array is
        # indexed by the remaining higher bits, so the pair stride stays 2
        c = self.coeffs.copy()
        for i in range(self.n):
            v = c.reshape(-1, 2)
            c = v[:, 0] + z[i] * v[:, 1]
        return float(c[0])

    def evaluate_many(self, Z: np.ndarray) -> np.ndarray:
        """Evaluate at each row of an (m, n) sample matrix."""
        m = Z.shape[0]
        c = np.broadcast_to(self.coeffs, (m, 1 << self.n)).copy()
        for i in range(self.n):
            v = c.reshape(m, -1, 2)
            c = v[:, :, 0] + Z[:, i, None] * v[:, :, 1]
        return c[:, 0]

    def noise_scaled(self, rho: float) -> "GaussianPoly":
        """Ornstein-Uhlenbeck smoothing: scale a_S by rho^|S|."""
        return GaussianPoly(self.n, self.coeffs * rho ** popcounts(self.n))


def gaussian_analogue(s: Spectrum) -> GaussianPoly:
    """Replace chi_S^p by products of independent standard normals."""
    return GaussianPoly(s.n, s.coeffs.copy())


def chop(value):
    """Clamp to [0,1]; accepts scalars or arrays."""
    return np.clip(value, 0.0, 1.0)


def chop_distance(poly: GaussianPoly, samples: int, seed: int) -> tuple[float, float]:
    """MC estimate of || poly - Chop(poly) ||_2 under the Gaussian measure.

    Returns (rms, stderr) where stderr is the standard error of the mean
    of the squared deviation.
    """
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk = 2_000
    while done < samples:
        m = min(chunk, samples - done)
        Z = rng.standard_normal((m, poly.n))
        vals = poly.evaluate_many(Z)
        d2 = (vals - np.clip(vals, 0.0, 1.0)) ** 2
        total += float(np.sum(d2))
        total_sq += float(np.sum(d2 ** 2))
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return math.sqrt(mean), math.sqrt(var / samples)
