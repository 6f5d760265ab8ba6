"""Riemann zeta evaluators with explicit remainder control.

Three expansions are implemented:

* ``zeta_em``  - Euler-Maclaurin: direct sum to N, boundary terms, Bernoulli
  corrections up to order M (odd), and the remainder either bounded
  analytically or integrated numerically against the periodic Bernoulli
  kernel.  Valid for sigma > -(M-1), away from s = 1.
* ``zeta_kt``  - the same main terms with N tied to |t|/4, whose remainder
  admits a t-uniform bound O(|t|^{2m+1} N^{-sigma-2m-1}).  Used on diagonal
  lines where |t| grows.
* ``zeta_hl``  - the plain truncated Dirichlet polynomial plus x^{1-s}/(s-1),
  valid in the window |t| <= 2 pi x / C, with error O(x^{-sigma}).

``zeta_prime_hl`` is the analogous truncation for zeta', and ``zeta_prime_em``
differentiates the Euler-Maclaurin expansion analytically (used where the
Hardy-Littlewood form cannot reach tight tolerances).  ``zeta`` / ``zeta_prime``
are adaptive front ends that double N until the requested bound is met.
"""

from __future__ import annotations

import math

import numpy as np

from .bernoulli import (
    TABLE,
    periodic_bernoulli_bound,
    pochhammer,
)
from .core import (
    AccuracyError,
    ApproxValue,
    DEFAULT_POLICY,
    DomainError,
    EMParams,
    PreconditionError,
    SingularityError,
    SINGULARITY_EPS,
    K_HL,
    TruncationPolicy,
    roundoff_allowance,
)

# 8-point Gauss-Legendre nodes/weights on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
_GL_X = (_GL_X + 1.0) / 2.0
_GL_W = _GL_W / 2.0

# Safety factor on the t-uniform remainder constant; the Euler-Maclaurin
# bound constant alone is exceeded by up to ~2.4x at the N = |t|/4 edge.
_KT_SAFETY = 8.0


def _check_regular_point(s: complex) -> complex:
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("s must be finite")
    if abs(s - 1.0) < SINGULARITY_EPS:
        raise SingularityError(
            f"s = {s} within {SINGULARITY_EPS} of the pole at 1")
    return s


def _power_sum(s: complex, n_max: int) -> tuple[complex, float]:
    """(sum_{n<=n_max} n^-s, sum of term magnitudes)."""
    if n_max <= 0:
        return 0j, 0.0
    n = np.arange(1, n_max + 1, dtype=float)
    terms = n ** (-s)
    return complex(terms.sum()), float(np.abs(terms).sum())


def _em_boundary_terms(s: complex, N: int, M: int) -> tuple[complex, float]:
    """Boundary + Bernoulli correction terms of the expansion at cutoff N."""
    val = N ** (1.0 - s) / (s - 1.0) - N ** (-s) / 2.0
    mag = abs(N ** (1.0 - s) / (s - 1.0)) + abs(N ** (-s)) / 2.0
    for k in range(1, M):
        b = TABLE[k + 1]
        if b == 0.0:
            continue
        term = b / math.factorial(k + 1) * pochhammer(s, k) * N ** (-(s + k))
        val += term
        mag += abs(term)
    return val, mag


def _em_remainder_bound(s: complex, N: int, M: int) -> float:
    """|R_{M,N}(s)| <= |(s)_M| B-bar_M / M! * N^{1-sigma-M} / (sigma+M-1)."""
    sigma = s.real
    return (abs(pochhammer(s, M)) * periodic_bernoulli_bound(M)
            / math.factorial(M) * N ** (1.0 - sigma - M) / (sigma + M - 1.0))


def _em_remainder_integral(s: complex, N: int, M: int) -> tuple[complex, float]:
    """Numerically integrate R_{M,N}(s) = -[(s)_M/M!] I, with
    I = int_N^inf B_M({x}) x^{-s-M} dx, by per-unit Gauss-Legendre.

    Halved panels provide the quadrature error estimate; the truncated tail
    is bounded analytically and added to err.
    """
    from .bernoulli import bernoulli_poly_coeffs

    sigma = s.real
    coeffs = bernoulli_poly_coeffs(M)
    pb = np.polynomial.polynomial.polyval(_GL_X, coeffs[::-1])
    xh = np.concatenate([_GL_X / 2.0, 0.5 + _GL_X / 2.0])
    pb_h = np.polynomial.polynomial.polyval(xh, coeffs[::-1])
    wh = np.concatenate([_GL_W / 2.0, _GL_W / 2.0])

    factor = pochhammer(s, M) / math.factorial(M)
    bbar = periodic_bernoulli_bound(M)
    tail_const = abs(factor) * bbar / (sigma + M - 1.0)

    total = 0j
    gl_err = 0.0
    start = N
    chunk = 256
    floor = 1e-18
    while True:
        j = np.arange(start, start + chunk, dtype=float)
        xs = j[:, None] + _GL_X[None, :]
        coarse = ((xs ** (-s - M)) * (pb * _GL_W)[None, :]).sum(axis=1)
        xs_h = j[:, None] + xh[None, :]
        fine = ((xs_h ** (-s - M)) * (pb_h * wh)[None, :]).sum(axis=1)
        total += complex(fine.sum())
        gl_err += float(np.abs(fine - coarse).sum())
        start += chunk
        tail = tail_const * start ** (1.0 - sigma - M)
        if tail < max(floor, 1e-16 * abs(total) * abs(factor)):
            break
        if start - N > 1 << 20:
            break
    value = -factor * total
    err = abs(factor) * gl_err + tail_const * start ** (1.0 - sigma - M)
    return value, err


def zeta_em(s: complex, params: EMParams) -> ApproxValue:
    """zeta(s) by the Euler-Maclaurin expansion at cutoff params.N."""
    s = _check_regular_point(s)
    N, M = params.N, params.M
    sigma = s.real
    if sigma <= -(M - 1):
        raise DomainError(
            f"Euler-Maclaurin order M={M} requires sigma > {-(M - 1)}, got {sigma}")
    direct, mag1 = _power_sum(s, N)
    boundary, mag2 = _em_boundary_terms(s, N, M)
    value = direct + boundary
    bound = _em_remainder_bound(s, N, M)
    mode = params.remainder_mode
    if mode == "auto":
        mode = "integrate" if bound > params.target else "bound_only"
    if mode == "integrate":
        rem, err = _em_remainder_integral(s, N, M)
        value += rem
    else:
        err = bound
    err += roundoff_allowance(mag1 + mag2, N + M)
    return ApproxValue(value, err)


def zeta_kt(s: complex, m: int = 2, policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """zeta(s) via the t-uniform expansion: N tied to |t|/4, remainder
    O(|t|^{2m+1} N^{-sigma-2m-1}) with an explicit constant."""
    s = _check_regular_point(s)
    t = s.imag
    sigma = s.real
    if abs(t) <= 1.0:
        raise PreconditionError(
            f"t-uniform expansion requires |t| > 1 (got t = {t}); use zeta_em")
    M = 2 * m + 1
    if sigma <= -2 * m - 1:
        raise DomainError(f"m={m} requires sigma > {-2 * m - 1}, got {sigma}")
    N = max(int(abs(t) / 4.0) + 1, policy.N_min)
    direct, mag1 = _power_sum(s, N)
    boundary, mag2 = _em_boundary_terms(s, N, M)
    value = direct + boundary
    const = periodic_bernoulli_bound(M) / math.factorial(M) / (sigma + M - 1.0)
    err = _KT_SAFETY * const * abs(pochhammer(s, M)) * N ** (-sigma - M)
    err += roundoff_allowance(mag1 + mag2, N + M)
    return ApproxValue(value, err)


def zeta_hl(s: complex, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Hardy-Littlewood truncation: sum_{n<=x} n^-s - x^{1-s}/(1-s)."""
    s = _check_regular_point(s)
    sigma, t = s.real, s.imag
    if sigma <= 0.0:
        raise PreconditionError(f"truncated polynomial requires sigma > 0, got {sigma}")
    if x < 1.0:
        raise PreconditionError(f"x >= 1 required, got {x}")
    if abs(t) > 2.0 * math.pi * x / policy.C:
        raise PreconditionError(
            f"|t| = {abs(t):.6g} outside the window |t| <= 2 pi x / C = "
            f"{2.0 * math.pi * x / policy.C:.6g}")
    direct, mag = _power_sum(s, int(x))
    value = direct - x ** (1.0 - s) / (1.0 - s)
    err = K_HL * x ** (-sigma) + roundoff_allowance(mag, int(x) + 1)
    return ApproxValue(value, err)


def zeta_prime_hl(s: complex, x: float, policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Truncated-polynomial approximation of zeta'(s), same window as zeta_hl
    but requiring x >= exp(1/sigma)."""
    s = _check_regular_point(s)
    sigma, t = s.real, s.imag
    if sigma <= 0.0:
        raise PreconditionError(f"requires sigma > 0, got {sigma}")
    if x < math.exp(1.0 / sigma):
        raise PreconditionError(
            f"x >= exp(1/sigma) = {math.exp(1.0 / sigma):.6g} required, got {x}")
    if abs(t) >= 2.0 * math.pi * x / policy.C:
        raise PreconditionError(
            f"|t| = {abs(t):.6g} outside the window |t| < 2 pi x / C = "
            f"{2.0 * math.pi * x / policy.C:.6g}")
    n = np.arange(1, int(x) + 1, dtype=float)
    terms = np.log(n) * n ** (-s)
    value = -complex(terms.sum())
    mag = float(np.abs(terms).sum())
    value -= x ** (1.0 - s) * math.log(x) / (s - 1.0)
    value -= x ** (1.0 - s) / (s - 1.0) ** 2
    err = K_HL * x ** (-sigma) * math.log(x) + roundoff_allowance(mag, int(x) + 1)
    return ApproxValue(value, err)


def _pochhammer_derivative(s: complex, M: int) -> complex:
    """d/ds (s)_M = sum_j prod_{i != j} (s+i); no divisions, pole-safe."""
    out = 0j
    for j in range(M):
        prod = 1 + 0j
        for i in range(M):
            if i != j:
                prod *= s + i
        out += prod
    return out


def _tail_log_integral(a: float, N: float) -> float:
    """int_N^inf x^-a log x dx for a > 1."""
    return N ** (1.0 - a) * (math.log(N) / (a - 1.0) + 1.0 / (a - 1.0) ** 2)


def zeta_prime_em(s: complex, params: EMParams) -> ApproxValue:
    """zeta'(s) by term-by-term differentiation of the Euler-Maclaurin
    expansion, with the differentiated remainder bounded analytically."""
    s = _check_regular_point(s)
    N, M = params.N, params.M
    sigma = s.real
    if sigma <= -(M - 1):
        raise DomainError(
            f"Euler-Maclaurin order M={M} requires sigma > {-(M - 1)}, got {sigma}")
    n = np.arange(1, N + 1, dtype=float)
    terms = np.log(n) * n ** (-s)
    value = -complex(terms.sum())
    mag = float(np.abs(terms).sum())
    lnN = math.log(N)
    p1 = N ** (1.0 - s) / (s - 1.0)
    value += -p1 * lnN - N ** (1.0 - s) / (s - 1.0) ** 2 + N ** (-s) * lnN / 2.0
    mag += abs(p1) * lnN + abs(N ** (1.0 - s) / (s - 1.0) ** 2) + abs(N ** (-s)) * lnN / 2.0
    for k in range(1, M):
        b = TABLE[k + 1]
        if b == 0.0:
            continue
        c = b / math.factorial(k + 1)
        term = c * N ** (-(s + k)) * (_pochhammer_derivative(s, k)
                                      - pochhammer(s, k) * lnN)
        value += term
        mag += abs(term)
    bbar = periodic_bernoulli_bound(M)
    fM = math.factorial(M)
    a = sigma + M
    err = bbar / fM * (abs(_pochhammer_derivative(s, M))
                       * N ** (1.0 - a) / (a - 1.0)
                       + abs(pochhammer(s, M)) * _tail_log_integral(a, N))
    err += roundoff_allowance(mag, N + M)
    return ApproxValue(value, err)


def _adaptive(kernel, s: complex, tol: float, policy: TruncationPolicy,
              strict: bool, what: str) -> ApproxValue:
    M = policy.M
    if s.real <= -(M - 1):
        raise DomainError(
            f"sigma = {s.real} outside sigma > {-(M - 1)} for policy order M={M}")
    N = max(policy.N_min, int(2.0 * (abs(s.imag) + 1.0)))
    best: ApproxValue | None = None
    prev = math.inf
    while True:
        av = kernel(s, N, M, tol)
        if best is None or av.err < best.err:
            best = av
        if av.err <= tol:
            return av
        # stop once roundoff dominates (the bound no longer improves) or at cap
        if N >= policy.N_max or av.err >= 0.9 * prev:
            if strict:
                raise AccuracyError(
                    f"{what} tolerance unreachable under policy caps", best.err)
            return best
        prev = av.err
        N *= 2


def zeta(s: complex, tol: float = 1e-12,
         policy: TruncationPolicy = DEFAULT_POLICY,
         strict: bool = True) -> ApproxValue:
    """Adaptive zeta: double N until the reported bound is <= tol.

    strict=False returns the best achieved ApproxValue instead of raising
    when the tolerance is out of reach (callers fold err into their own
    bounds)."""
    s = _check_regular_point(s)
    return _adaptive(
        lambda z, N, M, t: zeta_em(z, EMParams(N, M, "auto", target=t / 2.0)),
        s, tol, policy, strict, "zeta")


def zeta_prime(s: complex, tol: float = 1e-12,
               policy: TruncationPolicy = DEFAULT_POLICY,
               strict: bool = True) -> ApproxValue:
    """Adaptive zeta': double N until the reported bound is <= tol."""
    s = _check_regular_point(s)
    return _adaptive(
        lambda z, N, M, t: zeta_prime_em(z, EMParams(N, M)),
        s, tol, policy, strict, "zeta derivative")
