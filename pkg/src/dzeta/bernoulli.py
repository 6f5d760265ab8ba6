"""Bernoulli numbers, Pochhammer symbols, and the periodic Bernoulli kernel.

Everything here is exact-then-float: the number table is built once from the
defining recurrence in rational arithmetic (up to index 30) and rounded a
single time, so the float values inherit the recurrence identities to working
precision.  These are the coefficients of every Euler-Maclaurin expansion in
the package.

Convention: B1 = -1/2, so B2 = 1/6, B3 = 0, B4 = -1/30.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .core import PreconditionError

K_MAX = 64          # hard cap on every index/order in this module
_K_RATIONAL = 30    # exact rational recurrence up to here, zeta relation beyond
_M_MAX_POLY = 15    # periodic Bernoulli polynomial order cap


def _zeta_real(k: int) -> float:
    """zeta(k) for integer k >= 2: direct sum plus integral tail bound."""
    s = math.fsum(n ** -float(k) for n in range(1, 257))
    return s + 256.0 ** (1 - k) / (k - 1)


class BernoulliTable:
    """Bernoulli numbers B_0..B_{K_MAX} in the B1 = -1/2 convention.

    Indices up to 30 come from the exact recurrence
    ``sum_{j=0}^{k} C(k+1, j) B_j = 0`` (k >= 1) over Fractions; larger even
    indices use ``B_{2k} = (-1)^{k+1} 2 (2k)! zeta(2k) / (2 pi)^{2k}`` in
    float, which is stable where the rationals grow unwieldy.
    """

    def __init__(self, k_max: int = K_MAX):
        self.k_max = k_max
        rationals = [Fraction(1)]
        for k in range(1, min(k_max, _K_RATIONAL) + 1):
            acc = Fraction(0)
            for j in range(k):
                acc += math.comb(k + 1, j) * rationals[j]
            rationals.append(-acc / (k + 1))
        self.rationals = rationals
        values = [float(b) for b in rationals]
        for k in range(_K_RATIONAL + 1, k_max + 1):
            if k % 2 == 1:
                values.append(0.0)
            else:
                half = k // 2
                sign = 1.0 if half % 2 == 1 else -1.0
                values.append(sign * 2.0 * math.factorial(k) * _zeta_real(k)
                              / (2.0 * math.pi) ** k)
        self.values = values

    def __getitem__(self, k: int) -> float:
        if not 0 <= k <= self.k_max:
            raise PreconditionError(f"Bernoulli index {k} exceeds cap {self.k_max}")
        return self.values[k]


TABLE = BernoulliTable()


def bernoulli(k: int) -> float:
    """B_k in the B1 = -1/2 convention."""
    return TABLE[k]


def pochhammer(s: complex, k: int) -> complex:
    """Rising factorial (s)_k = s (s+1) ... (s+k-1); (s)_0 = 1."""
    if not 0 <= k <= K_MAX:
        raise PreconditionError(f"Pochhammer index {k} exceeds cap {K_MAX}")
    out = 1 + 0j
    s = complex(s)
    for j in range(k):
        out *= s + j
    return out


@lru_cache(maxsize=None)
def bernoulli_poly_coeffs(m: int) -> tuple[float, ...]:
    """Coefficients of B_m(y) = sum_j C(m, j) B_j y^{m-j}, highest power first."""
    return tuple(math.comb(m, j) * TABLE[j] for j in range(m + 1))


def periodic_bernoulli(m: int, x: float) -> float:
    """B_m({x}): the Bernoulli polynomial of the fractional part of x."""
    if not 1 <= m <= _M_MAX_POLY:
        raise PreconditionError(f"periodic Bernoulli order {m} outside 1..{_M_MAX_POLY}")
    if x < 0:
        raise PreconditionError("periodic_bernoulli requires x >= 0")
    frac = x - math.floor(x)
    acc = 0.0
    for c in bernoulli_poly_coeffs(m):
        acc = acc * frac + c
    return acc


@lru_cache(maxsize=None)
def periodic_bernoulli_bound(m: int) -> float:
    """Upper bound for max_x |B_m({x})|.

    For even m the Fourier bound 2 m! zeta(m) / (2 pi)^m is attained at x = 0;
    for odd m it overestimates slightly, which is fine for remainder bounds.
    """
    if m == 1:
        return 0.5
    return 2.0 * math.factorial(m) * _zeta_real(m) / (2.0 * math.pi) ** m
