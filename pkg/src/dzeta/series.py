"""Tail-bounded evaluation of the three mean-value constants.

The three series are the T-coefficients of the mean-square asymptotics:

* ``series_z21``  - sum_m m^{-2 sigma1} |zeta(s2) - sum_{n<=m} n^{-s2}|^2,
  convergent for sigma1 + sigma2 > 3/2;
* ``series_z22``  - sum_{n>=2} |sum_{m<n} m^{-s1}|^2 n^{-2 sigma2},
  convergent for sigma2 > 1/2 and sigma1 + sigma2 > 3/2;
* ``series_z2box`` - sum_{k>=2} (sum_{m|k, m<sqrt k} m^{sigma2-sigma1}
  k^{-sigma2})^2, convergent iff sigma2 > 1/2 and sigma1 + sigma2 > 1.

All values are partial sums of nonnegative terms; ``tail_bound`` is an
analytic bound on the omitted remainder (plus the tiny per-term evaluation
allowance), derived from explicit truncation constants rather than
asymptotic ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bernoulli import TABLE, periodic_bernoulli_bound, pochhammer
from .core import (
    DomainError,
    NeumaierSum,
    SINGULARITY_EPS,
    SingularityError,
    TAYLOR_EPS,
    roundoff_allowance,
)
from .zeta import zeta

_BLOCK = 8192
_EPS_BOX = 0.05  # divisor-count exponent (shrunk automatically near region edges)


@dataclass(frozen=True)
class SeriesResult:
    """Partial sum of a nonnegative series with a rigorous tail bound."""

    value: float
    tail_bound: float
    terms_used: int

    def __post_init__(self):
        if self.value < 0 or self.tail_bound < 0 or self.terms_used < 1:
            raise ValueError("SeriesResult fields out of range")


class DivisorTable:
    """For each k in 2..k_max, the divisors m of k with m < sqrt(k).

    Built by a sieve over m: every multiple k = m*q with q > m receives m.
    The pair (m, k/m) then enumerates exactly the factorizations k = m*n
    with m < n.
    """

    def __init__(self, k_max: int):
        if k_max < 2:
            raise DomainError("divisor table needs k_max >= 2")
        self.k_max = k_max
        rows: list[list[int]] = [[] for _ in range(k_max + 1)]
        for m in range(1, math.isqrt(k_max) + 1):
            for k in range(m * (m + 1), k_max + 1, m):
                rows[k].append(m)
        self._rows = rows

    def divisors_below_sqrt(self, k: int) -> list[int]:
        if not 2 <= k <= self.k_max:
            raise DomainError(f"k = {k} outside table range 2..{self.k_max}")
        return list(self._rows[k])

    def power_sums(self, exponent: float) -> np.ndarray:
        """w[k] = sum over the row of m^exponent (w[0] = w[1] = 0)."""
        w = np.zeros(self.k_max + 1)
        for k in range(2, self.k_max + 1):
            for m in self._rows[k]:
                w[k] += float(m) ** exponent
        return w


def half_divisor_power_sums(k_max: int, exponent: float) -> np.ndarray:
    """Sieved w[k] = sum_{m|k, m<sqrt k} m^exponent, vectorized over multiples."""
    w = np.zeros(k_max + 1)
    for m in range(1, math.isqrt(k_max) + 1):
        start = m * (m + 1)
        if start > k_max:
            break
        w[start::m] += float(m) ** exponent
    return w


@lru_cache(maxsize=8)
def _half_divisor_counts(k_max: int) -> np.ndarray:
    return half_divisor_power_sums(k_max, 0.0)


def region_check(which: str, sigma1: float, sigma2: float) -> bool:
    """Strict-inequality convergence regions of the three series.

    sigma1 and sigma2 are the underlying line parameters (for z21 pass half
    of the first series argument, for z22 half of the second).
    """
    if which == "z21":
        return sigma1 + sigma2 > 1.5
    if which == "z22":
        return sigma2 > 0.5 and sigma1 + sigma2 > 1.5
    if which == "z2box":
        return sigma2 > 0.5 and sigma1 + sigma2 > 1.0
    raise DomainError(f"unknown series {which!r}; choose z21, z22 or z2box")


def _tail_power(a: float, K: int) -> float:
    """sum_{m>K} m^-a <= K^{1-a}/(a-1), valid for a > 1."""
    return K ** (1.0 - a) / (a - 1.0)


def _tail_power_log(a: float, K: int, j: int) -> float:
    """sum_{m>K} m^-a (log m)^j bounded by the integral, for a > 1, j <= 2."""
    L = math.log(K)
    b = a - 1.0
    if j == 0:
        return K ** -b / b
    if j == 1:
        return K ** -b * (L / b + 1.0 / b ** 2)
    return K ** -b * (L * L / b + 2.0 * L / b ** 2 + 2.0 / b ** 3)


def _zeta_tail_constant(s: complex) -> float:
    """Explicit c with |zeta(s) - sum_{n<=m} n^-s| <= m^{1-sigma}/|s-1| + c m^-sigma
    for all m >= 1, from the low-order expansion of the tail."""
    sigma = s.real
    mt = 1
    while sigma + mt - 1.0 <= 0.0:
        mt += 2
        if mt > 9:
            raise DomainError(f"tail constants need sigma > -8, got {sigma}")
    c = 0.5
    for k in range(1, mt):
        b = TABLE[k + 1]
        if b:
            c += abs(b / math.factorial(k + 1) * pochhammer(s, k))
    c += (abs(pochhammer(s, mt)) * periodic_bernoulli_bound(mt)
          / math.factorial(mt) / (sigma + mt - 1.0))
    return c


def series_z21(two_sigma1: float, s2: complex, tol: float = 1e-10,
               max_terms: int = 10 ** 5) -> SeriesResult:
    """First mean-value constant: weights m^{-two_sigma1} against the squared
    inner zeta tail at s2."""
    s2 = complex(s2)
    sigma1 = two_sigma1 / 2.0
    sigma2 = s2.real
    if not region_check("z21", sigma1, sigma2):
        raise DomainError(
            f"series diverges: need sigma1 + sigma2 > 3/2, got {sigma1 + sigma2}")
    if abs(s2 - 1.0) < SINGULARITY_EPS:
        raise SingularityError(f"s2 = {s2} too close to 1")

    z2 = zeta(s2, min(1e-13, tol / 10.0), strict=False)
    A = 1.0 / abs(s2 - 1.0)
    c2 = _zeta_tail_constant(s2)

    a_hi = 2.0 * sigma1 + 2.0 * sigma2 - 2.0
    total = NeumaierSum()
    eval_allow = 0.0
    h_running = 0j
    terms = 0
    mag_pw = 0.0
    while terms < max_terms:
        lo = terms + 1
        hi = min(terms + _BLOCK, max_terms)
        m = np.arange(lo, hi + 1, dtype=float)
        pw2 = m ** (-s2)
        h = h_running + np.cumsum(pw2)
        h_running = complex(h[-1])
        mag_pw += float(np.abs(pw2).sum())
        d = z2.value - h
        block = (m ** (-two_sigma1)) * np.abs(d) ** 2
        total.add(float(block.sum()))
        # evaluation allowance: cumsum roundoff + zeta bound, linearized
        delta = z2.err + roundoff_allowance(mag_pw + abs(z2.value), hi)
        eval_allow += float((m ** (-two_sigma1) * (2.0 * np.abs(d) + delta)).sum()) * delta
        terms = hi
        tail = (A * A * _tail_power(a_hi, terms)
                + 2.0 * A * c2 * _tail_power(a_hi + 1.0, terms)
                + c2 * c2 * _tail_power(a_hi + 2.0, terms))
        if tail + eval_allow <= tol:
            return SeriesResult(total.value, tail + eval_allow, terms)
    tail = (A * A * _tail_power(a_hi, terms)
            + 2.0 * A * c2 * _tail_power(a_hi + 1.0, terms)
            + c2 * c2 * _tail_power(a_hi + 2.0, terms))
    return SeriesResult(total.value, tail + eval_allow, terms)


def series_z22(s1: complex, two_sigma2: float, tol: float = 1e-10,
               max_terms: int = 10 ** 5) -> SeriesResult:
    """Second mean-value constant: squared prefix sums of m^{-s1} against
    n^{-two_sigma2}."""
    s1 = complex(s1)
    sigma1 = s1.real
    sigma2 = two_sigma2 / 2.0
    if not region_check("z22", sigma1, sigma2):
        raise DomainError(
            "series diverges: need sigma2 > 1/2 and sigma1 + sigma2 > 3/2, got "
            f"sigma2 = {sigma2}, sigma1 + sigma2 = {sigma1 + sigma2}")

    at_one = abs(s1 - 1.0) < TAYLOR_EPS
    if at_one:
        tail_fn = _z22_tail_log(two_sigma2)
    else:
        tail_fn = _z22_tail_general(s1, two_sigma2)

    total = NeumaierSum()
    prefix = 0j
    mag_prefix = 0.0
    eval_allow = 0.0
    terms = 1  # series starts at n = 2; count n-indices consumed
    n_last = 1
    while n_last < max_terms:
        lo = n_last + 1
        hi = min(n_last + _BLOCK, max_terms)
        n = np.arange(lo, hi + 1, dtype=float)
        pp = (n - 1.0) ** (-s1)
        pref = prefix + np.cumsum(pp)
        prefix = complex(pref[-1])
        mag_prefix += float(np.abs(pp).sum())
        wts = n ** (-two_sigma2)
        block = np.abs(pref) ** 2 * wts
        total.add(float(block.sum()))
        delta = roundoff_allowance(mag_prefix, hi)
        eval_allow += float(((2.0 * np.abs(pref) + delta) * wts).sum()) * delta
        n_last = hi
        terms = hi - 1
        tail = tail_fn(n_last) + eval_allow
        if tail <= tol:
            return SeriesResult(total.value, tail, terms)
    tail = tail_fn(n_last) + eval_allow
    return SeriesResult(total.value, tail, terms)


def _z22_tail_log(two_sigma2: float):
    a = two_sigma2

    def tail(K: int) -> float:
        # |prefix| <= log n + 1 at s1 = 1
        return (_tail_power_log(a, K, 2) + 2.0 * _tail_power_log(a, K, 1)
                + _tail_power_log(a, K, 0))

    return tail


def _z22_tail_general(s1: complex, two_sigma2: float):
    sigma1 = s1.real
    a = two_sigma2
    if sigma1 < 1.0:
        B = 1.0 / (1.0 - sigma1)

        def tail(K: int) -> float:
            # |prefix at n| <= B n^{1-sigma1} by increasing-integrand comparison
            return B * B * _tail_power(a + 2.0 * sigma1 - 2.0, K)

        return tail

    z1 = zeta(s1, 1e-12, strict=False)
    Z = abs(z1.value) + z1.err
    A1 = 2.0 ** (sigma1 - 1.0) / abs(s1 - 1.0)
    c1 = 2.0 ** sigma1 * _zeta_tail_constant(s1)

    def tail(K: int) -> float:
        return (Z * Z * _tail_power(a, K)
                + 2.0 * Z * A1 * _tail_power(a + sigma1 - 1.0, K)
                + 2.0 * Z * c1 * _tail_power(a + sigma1, K)
                + A1 * A1 * _tail_power(a + 2.0 * sigma1 - 2.0, K)
                + 2.0 * A1 * c1 * _tail_power(a + 2.0 * sigma1 - 1.0, K)
                + c1 * c1 * _tail_power(a + 2.0 * sigma1, K))

    return tail


def series_z2box(sigma1: float, sigma2: float, k_max: int = 10 ** 6) -> SeriesResult:
    """Diagonal mean-value constant via the half-divisor sieve.

    The tail exponent concession epsilon shrinks automatically near the
    region boundary so the integral comparison stays convergent; the
    divisor-count constant is measured over k <= max(k_max, 10^5).
    """
    if not region_check("z2box", sigma1, sigma2):
        raise DomainError(
            "series diverges: need sigma2 > 1/2 and sigma1 + sigma2 > 1, got "
            f"sigma2 = {sigma2}, sigma1 + sigma2 = {sigma1 + sigma2}")
    if k_max < 2:
        raise DomainError("k_max >= 2 required")

    w = half_divisor_power_sums(k_max, sigma2 - sigma1)
    k = np.arange(2, k_max + 1, dtype=float)
    terms = (k ** (-sigma2) * w[2:]) ** 2
    value = float(terms.sum())

    if sigma1 >= sigma2:
        eps = min(_EPS_BOX, (2.0 * sigma2 - 1.0) / 2.0)
        a = 2.0 * sigma2 - eps
    else:
        eps = min(_EPS_BOX, (sigma1 + sigma2 - 1.0) / 2.0)
        a = sigma1 + sigma2 - eps
    kc = max(k_max, 10 ** 5)
    counts = _half_divisor_counts(kc)
    kk = np.arange(2, kc + 1, dtype=float)
    c = float(np.max(counts[2:] / kk ** (eps / 2.0)))
    tail = c * c * _tail_power(a, k_max)
    tail += roundoff_allowance(value, k_max)
    return SeriesResult(value, tail, k_max - 1)
