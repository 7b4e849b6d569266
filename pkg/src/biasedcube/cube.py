"""Dense functions on {0,1}^n and the p-biased Fourier toolkit.

A point x in {0,1}^n is stored as a bitmask: bit i of the mask holds
coordinate i+1.  Subset masks (for Fourier coefficients, restrictions,
influences) use the same convention.  Everything here works with dense
tables of length 2^n, which caps n at MAX_N.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass

import numpy as np

MAX_N = 24

FLAG_BOOLEAN = 1
FLAG_BOUNDED = 2

_MAGIC = b"BQF1"


def _check_n(n: int, max_n: int = MAX_N) -> None:
    if not 1 <= n <= max_n:
        raise ValueError(f"dimension n={n} outside [1, {max_n}]")


def _check_bias(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"bias must lie in (0,1), got {p}")


def mask_of(coords) -> int:
    """Bitmask for a collection of 1-based coordinates."""
    m = 0
    for c in coords:
        if c < 1:
            raise ValueError(f"coordinates are 1-based, got {c}")
        m |= 1 << (c - 1)
    return m


def coords_of(mask: int):
    """Sorted 1-based coordinates of a bitmask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcounts(n: int) -> np.ndarray:
    """Array of popcount(x) for x in [0, 2^n)."""
    x = np.arange(1 << n, dtype=np.uint32)
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pc += (x >> i) & 1
    return pc


@dataclass(frozen=True)
class BiasWeights:
    """The p-biased product measure as a dense weight table."""

    n: int
    p: float

    def table(self) -> np.ndarray:
        pc = popcounts(self.n)
        return self.p ** pc * (1.0 - self.p) ** (self.n - pc)


class DenseFunction:
    """Real-valued function on {0,1}^n as a length-2^n table."""

    __slots__ = ("n", "values", "boolean", "bounded")

    def __init__(self, n: int, values, boolean: bool = False, bounded: bool = False):
        _check_n(n)
        v = np.asarray(values, dtype=np.float64)
        if v.shape != (1 << n,):
            raise ValueError(f"table length {v.shape} does not match 2^{n}")
        if boolean and not np.all((v == 0.0) | (v == 1.0)):
            raise ValueError("Boolean flag set but values are not all 0/1")
        if bounded and not np.all((v >= 0.0) & (v <= 1.0)):
            raise ValueError("bounded flag set but values leave [0,1]")
        self.n = n
        self.values = v
        self.boolean = bool(boolean)
        self.bounded = bool(bounded or boolean)

    def __call__(self, x: int) -> float:
        return float(self.values[x])

    def __eq__(self, other):
        return (
            isinstance(other, DenseFunction)
            and self.n == other.n
            and np.array_equal(self.values, other.values)
        )

    def copy(self) -> "DenseFunction":
        return DenseFunction(self.n, self.values.copy(), self.boolean, self.bounded)

    @staticmethod
    def constant(n: int, c: float) -> "DenseFunction":
        return DenseFunction(n, np.full(1 << n, float(c)))

    @staticmethod
    def dictator(n: int, i: int) -> "DenseFunction":
        x = np.arange(1 << n)
        return DenseFunction(n, ((x >> (i - 1)) & 1).astype(np.float64), boolean=True)

    @staticmethod
    def from_predicate(n: int, pred) -> "DenseFunction":
        vals = np.fromiter((1.0 if pred(x) else 0.0 for x in range(1 << n)),
                           dtype=np.float64, count=1 << n)
        return DenseFunction(n, vals, boolean=True)

    # -- serialization ----------------------------------------------------

    def to_bytes(self) -> bytes:
        flags = (FLAG_BOOLEAN if self.boolean else 0) | (FLAG_BOUNDED if self.bounded else 0)
        header = _MAGIC + struct.pack("<II", self.n, flags) + b"\x00" * 4
        return header + self.values.astype("<f8").tobytes()

    @staticmethod
    def from_bytes(data: bytes) -> "DenseFunction":
        if data[:4] != _MAGIC:
            raise ValueError("bad magic, not a dense-function blob")
        n, flags = struct.unpack("<II", data[4:12])
        _check_n(n)
        body = np.frombuffer(data[16:], dtype="<f8")
        return DenseFunction(n, body, boolean=bool(flags & FLAG_BOOLEAN),
                             bounded=bool(flags & FLAG_BOUNDED))

    def to_json(self) -> str:
        flags = (FLAG_BOOLEAN if self.boolean else 0) | (FLAG_BOUNDED if self.bounded else 0)
        return json.dumps({"n": self.n, "flags": flags, "values": self.values.tolist()})

    @staticmethod
    def from_json(text: str) -> "DenseFunction":
        obj = json.loads(text)
        return DenseFunction(obj["n"], obj["values"],
                             boolean=bool(obj.get("flags", 0) & FLAG_BOOLEAN),
                             bounded=bool(obj.get("flags", 0) & FLAG_BOUNDED))


class Spectrum:
    """Biased Fourier coefficients indexed by subset bitmask, tagged with p."""

    __slots__ = ("n", "p", "coeffs")

    def __init__(self, n: int, p: float, coeffs):
        _check_n(n)
        _check_bias(p)
        c = np.asarray(coeffs, dtype=np.float64)
        if c.shape != (1 << n,):
            raise ValueError("coefficient table length mismatch")
        self.n = n
        self.p = p
        self.coeffs = c

    def copy(self) -> "Spectrum":
        return Spectrum(self.n, self.p, self.coeffs.copy())


def character_table(n: int, S: int, p: float) -> np.ndarray:
    """chi_S^p as a dense table over point masks.

    The singleton character takes value sqrt(p/(1-p)) at 0 and
    -sqrt((1-p)/p) at 1; chi_S is the product over i in S.
    """
    _check_bias(p)
    hi = -math.sqrt((1.0 - p) / p)
    lo = math.sqrt(p / (1.0 - p))
    out = np.ones(1 << n)
    x = np.arange(1 << n)
    for i in range(n):
        if (S >> i) & 1:
            out *= np.where((x >> i) & 1, hi, lo)
    return out


def transform(f: DenseFunction, p: float) -> Spectrum:
    """p-biased Fourier transform via an n-pass in-place butterfly.

    Each pass changes basis in one coordinate: a = (1-p) f0 + p f1 is the
    mean part, b = sqrt(p(1-p)) (f0 - f1) the character part.
    """
    _check_bias(p)
    c = f.values.copy()
    r = math.sqrt(p * (1.0 - p))
    for i in range(f.n):
        v = c.reshape(-1, 2, 1 << i)
        f0 = v[:, 0, :].copy()
        f1 = v[:, 1, :]
        v[:, 0, :] = (1.0 - p) * f0 + p * f1
        v[:, 1, :] = r * (f0 - f1)
    return Spectrum(f.n, p, c)


def inverse_transform(s: Spectrum) -> DenseFunction:
    """Rebuild the point table from coefficients: f = sum_S fhat(S) chi_S^p."""
    p = s.p
    c = s.coeffs.copy()
    lo = math.sqrt(p / (1.0 - p))
    hi = math.sqrt((1.0 - p) / p)
    for i in range(s.n):
        v = c.reshape(-1, 2, 1 << i)
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v[:, 0, :] = a + lo * b
        v[:, 1, :] = a - hi * b
    return DenseFunction(s.n, c)


def transform_direct(f: DenseFunction, p: float) -> Spectrum:
    """O(4^n) inner-product transform, kept as an oracle for the butterfly."""
    w = BiasWeights(f.n, p).table()
    coeffs = np.empty(1 << f.n)
    for S in range(1 << f.n):
        coeffs[S] = float(np.dot(w, f.values * character_table(f.n, S, p)))
    return Spectrum(f.n, p, coeffs)


def expectation(f: DenseFunction, p: float) -> float:
    w = BiasWeights(f.n, p).table()
    return float(np.dot(w, f.values))


def inner_product(f: DenseFunction, g: DenseFunction, p: float) -> float:
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    w = BiasWeights(f.n, p).table()
    return float(np.dot(w, f.values * g.values))


def restrict(f: DenseFunction, J, a) -> DenseFunction:
    """Restriction f_{J -> a}.

    J is a collection of 1-based coordinates; a maps each of them to 0/1
    (a dict, or a bitmask interpreted through the global convention).
    The result lives on the remaining n - |J| coordinates, compacted in
    ascending order.
    """
    Jset = sorted(set(J))
    if any(c < 1 or c > f.n for c in Jset):
        raise ValueError("restriction coordinates outside [n]")
    if isinstance(a, dict):
        a_mask = 0
        for c in Jset:
            if a[c]:
                a_mask |= 1 << (c - 1)
    else:
        a_mask = int(a)
        if a_mask & ~mask_of(Jset):
            raise ValueError("assignment mask leaves J")
    m = f.n - len(Jset)
    if m == 0:
        # fully restricted: return a 1-point "function" is not representable,
        # so callers use restrict_value instead
        raise ValueError("restriction fixes every coordinate; use restrict_value")
    rest = [c for c in range(1, f.n + 1) if c not in Jset]
    y = np.arange(1 << m)
    idx = np.full(1 << m, a_mask, dtype=np.int64)
    for j, c in enumerate(rest):
        idx |= ((y >> j) & 1) << (c - 1)
    return DenseFunction(m, f.values[idx], boolean=f.boolean, bounded=f.bounded)


def restrict_value(f: DenseFunction, a_mask: int) -> float:
    """f at a single fully specified point mask."""
    return float(f.values[a_mask])


def average_over(f: DenseFunction, T, p: float) -> DenseFunction:
    """A_T f: expectation over a mu_p-random completion on T.

    The result is still a function of all n coordinates (constant in T);
    its spectrum is f's with every coefficient meeting T zeroed.
    """
    _check_bias(p)
    c = f.values.copy()
    for coord in set(T):
        if coord < 1 or coord > f.n:
            raise ValueError("averaging coordinate outside [n]")
        i = coord - 1
        v = c.reshape(-1, 2, 1 << i)
        avg = (1.0 - p) * v[:, 0, :] + p * v[:, 1, :]
        v[:, 0, :] = avg
        v[:, 1, :] = avg
    return DenseFunction(f.n, c)


def influence(f: DenseFunction, i: int, p: float) -> float:
    """Inf_i = sum over S containing i of fhat(S)^2."""
    if not 1 <= i <= f.n:
        raise ValueError("coordinate out of range")
    s = transform(f, p)
    sel = (np.arange(1 << f.n) >> (i - 1)) & 1
    return float(np.sum(s.coeffs[sel == 1] ** 2))


def influence_definitional(f: DenseFunction, i: int, p: float) -> float:
    """E[(f - A_{i} f)^2], the variance taken out by averaging coordinate i."""
    g = average_over(f, [i], p)
    d = DenseFunction(f.n, f.values - g.values)
    return inner_product(d, d, p)


def noisy_influence(f: DenseFunction, i: int, rho: float, p: float) -> float:
    """Influence with each level-|S| term damped by rho^|S|."""
    if not 1 <= i <= f.n:
        raise ValueError("coordinate out of range")
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho outside [0,1]")
    s = transform(f, p)
    pc = popcounts(f.n)
    sel = (np.arange(1 << f.n) >> (i - 1)) & 1
    terms = rho ** pc * s.coeffs ** 2
    return float(np.sum(terms[sel == 1]))


def stability(f: DenseFunction, rho: float, p: float) -> float:
    """Stab_rho = sum_S rho^|S| fhat(S)^2."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho outside [0,1]")
    s = transform(f, p)
    pc = popcounts(f.n)
    return float(np.sum(rho ** pc * s.coeffs ** 2))
