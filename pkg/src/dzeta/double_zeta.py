"""Evaluation of the Euler double zeta function
zeta2(s1, s2) = sum_{1 <= m < n} m^{-s1} n^{-s2}.

Routes:

* ``dzeta_brute``      - triangular summation in the absolutely convergent
  region (sigma2 > 1, sigma1 + sigma2 > 2), with self-contained analytic
  tail handling on both indices; this is the oracle the continuation
  routes are tested against.
* ``dzeta_v_split``    - continuation splitting over the first index: the
  head sum of inner zeta tails plus the four-term tail assembly pulled
  through the Euler-Maclaurin expansion of the inner variable.  Valid for
  sigma1 + sigma2 > 1, sigma2 > -(2l).
* ``dzeta_u_split``    - continuation splitting over the second index, valid
  for sigma2 > 0, sigma1 > -(2l), sigma1 + sigma2 > 1, with a Taylor branch
  (Euler's constant) replacing the zeta(s1)-dependent terms near s1 = 1.
* ``dzeta_approx_t1`` / ``dzeta_approx_t2`` / ``dzeta_approx_diag`` - the
  three truncated-Dirichlet-polynomial approximations with their window
  preconditions and explicit error-bound shapes.

``evaluate`` picks a route automatically by region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bernoulli import TABLE, periodic_bernoulli_bound, pochhammer
from .core import (
    AccuracyError,
    ApproxValue,
    ComplexSum,
    DEFAULT_POLICY,
    DomainError,
    EULER_GAMMA,
    K_AP,
    PreconditionError,
    SingularityError,
    SINGULARITY_EPS,
    TAYLOR_EPS,
    TruncationPolicy,
    roundoff_allowance,
)
from .zeta import zeta, zeta_prime

SPLITS = ("auto", "brute", "v_split", "u_split", "approx_t1", "approx_t2",
          "approx_diag")

# Continuation depth l: the splittings use expansion order M = 2l + 1,
# giving sigma2 > -2l (v) and sigma1 > -2l (u).
CONTINUATION_DEPTH = 2

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EvalResult:
    """A double-zeta evaluation with provenance for reporting."""

    value: complex
    err: float
    split: str
    terms: int

    def approx(self) -> ApproxValue:
        return ApproxValue(self.value, self.err)


def singular_distance(s1: complex, s2: complex) -> float:
    """Distance to the singular set {s2 = 1} u {s1+s2 in {2, 1, 0, -2, -4, ...}}."""
    w = complex(s1) + complex(s2)
    d = min(abs(complex(s2) - 1.0), abs(w - 2.0), abs(w - 1.0), abs(w))
    if w.real < -1.0:
        base = 2.0 * round(w.real / 2.0)
        for r in (base - 2.0, base, base + 2.0):
            if r <= -2.0:
                d = min(d, abs(w - r))
    return d


def is_regular(s1: complex, s2: complex, eps: float = SINGULARITY_EPS) -> bool:
    """True when (s1, s2) is at least eps away from the singular set."""
    return singular_distance(s1, s2) >= eps


def _ensure_regular(s1: complex, s2: complex) -> None:
    d = singular_distance(s1, s2)
    if d < SINGULARITY_EPS:
        raise SingularityError(
            f"(s1, s2) = ({s1}, {s2}) within {d:.2e} of the singular set "
            f"{{s2 = 1}} u {{s1+s2 in {{2, 1, 0, -2, -4, ...}}}}")


# ----------------------------------------------------------------------
# brute oracle
# ----------------------------------------------------------------------

_BRUTE_K = 11  # expansion order of the self-contained tail helper


def _conv_tail(w: complex, P: int, K: int = _BRUTE_K) -> tuple[complex, float]:
    """sum_{n > P} n^-w for Re w > 1: direct segment up to an oscillation-safe
    anchor, then boundary + Bernoulli terms with a rigorous remainder bound.

    Self-contained on purpose: the brute oracle shares no code path with the
    adaptive zeta engine it is used to check.
    """
    rw = w.real
    if rw <= 1.0:
        raise DomainError(f"convergent tail requires Re w > 1, got {rw}")
    anchor = max(P, int(2.0 * (abs(w.imag) + 1.0)) + 1, 64)
    val = 0j
    mag = 0.0
    if anchor > P:
        n = np.arange(P + 1, anchor + 1, dtype=float)
        seg = n ** (-w)
        val += complex(seg.sum())
        mag += float(np.abs(seg).sum())
    val += anchor ** (1.0 - w) / (w - 1.0) - anchor ** (-w) / 2.0
    mag += abs(anchor ** (1.0 - w) / (w - 1.0)) + abs(anchor ** (-w)) / 2.0
    for k in range(1, K):
        b = TABLE[k + 1]
        if b == 0.0:
            continue
        term = b / math.factorial(k + 1) * pochhammer(w, k) * anchor ** (-(w + k))
        val += term
        mag += abs(term)
    err = (abs(pochhammer(w, K)) * periodic_bernoulli_bound(K) / math.factorial(K)
           * anchor ** (1.0 - rw - K) / (rw + K - 1.0))
    err += roundoff_allowance(mag, anchor - P + K)
    return val, err


def _brute_full(s1: complex, s2: complex, tol: float) -> tuple[complex, float, int]:
    sig1, sig2 = s1.real, s2.real
    if not (sig2 > 1.0 and sig1 + sig2 > 2.0):
        raise DomainError(
            "triangular summation requires sigma2 > 1 and sigma1 + sigma2 > 2 "
            f"(got sigma2 = {sig2}, sigma1 + sigma2 = {sig1 + sig2})")
    _ensure_regular(s1, s2)
    K = _BRUTE_K
    bbar = periodic_bernoulli_bound(K)
    head_n = 64
    while True:
        P = max(head_n, int(2.0 * (abs(s2.imag) + 1.0)) + 1, 64)
        n = np.arange(1, P + 1, dtype=float)
        pw2 = n ** (-s2)
        csum2 = np.cumsum(pw2)
        tail_star, err_star = _conv_tail(s2, P, K)
        m = np.arange(1, head_n + 1, dtype=float)
        pw1 = m ** (-s1)
        inner = (csum2[P - 1] - csum2[:head_n]) + tail_star
        head = complex(np.sum(pw1 * inner))
        mag = float(np.sum(np.abs(pw1) * np.abs(inner))) + float(np.abs(pw2).sum())

        w0 = s1 + s2
        z1_val, z1_err = _conv_tail(w0 - 1.0, head_n, K)
        z0_val, z0_err = _conv_tail(w0, head_n, K)
        value = head + z1_val / (s2 - 1.0) - z0_val / 2.0
        err = (float(np.abs(pw1).sum()) * err_star
               + z1_err / abs(s2 - 1.0) + z0_err / 2.0)
        mag += abs(z1_val / (s2 - 1.0)) + abs(z0_val) / 2.0
        for k in range(1, K):
            b = TABLE[k + 1]
            if b == 0.0:
                continue
            coef = b / math.factorial(k + 1) * pochhammer(s2, k)
            zk_val, zk_err = _conv_tail(w0 + k, head_n, K)
            value += coef * zk_val
            err += abs(coef) * zk_err
            mag += abs(coef * zk_val)
        # remainder of the inner expansion summed over m > head_n
        rem = (abs(pochhammer(s2, K)) * bbar / math.factorial(K) / (sig2 + K - 1.0)
               * head_n ** (2.0 - sig1 - sig2 - K) / (sig1 + sig2 + K - 2.0))
        err += rem + roundoff_allowance(mag, P + head_n)
        if err <= tol:
            return value, err, head_n
        if head_n >= (1 << 18):
            raise AccuracyError("triangular-sum tolerance unreachable", err)
        head_n *= 2


def dzeta_brute(s1: complex, s2: complex, tol: float = 1e-10) -> ApproxValue:
    """zeta2 by triangular summation; absolutely convergent region only."""
    value, err, _ = _brute_full(complex(s1), complex(s2), tol)
    return ApproxValue(value, err)


# ----------------------------------------------------------------------
# continuation splittings
# ----------------------------------------------------------------------

def _split_order(l: int) -> int:
    if l < 1:
        raise PreconditionError("continuation depth l must be >= 1")
    return 2 * l + 1


def _abs_power_sum_bound(sigma: float, N: int) -> float:
    """Upper bound for sum_{n<=N} n^-sigma."""
    if sigma > 1.0:
        return 1.0 + 1.0 / (sigma - 1.0)
    if sigma == 1.0:
        return math.log(N) + 1.0
    return 1.0 + (N ** (1.0 - sigma) - 1.0) / (1.0 - sigma) + N ** (-sigma)


def _choose_split_n(policy: TruncationPolicy, bound_const: float,
                    exponent: float) -> tuple[int, float]:
    """Smallest power-of-two N with bound_const * N^exponent <= tol/4."""
    N = policy.N_min
    while bound_const * N ** exponent > policy.tol / 4.0 and N < policy.N_max:
        N *= 2
    return N, bound_const * N ** exponent


def _v_split_full(s1: complex, s2: complex, policy: TruncationPolicy,
                  l: int = CONTINUATION_DEPTH) -> tuple[complex, float, int]:
    M = _split_order(l)
    sig1, sig2 = s1.real, s2.real
    if sig1 + sig2 <= 1.0:
        raise DomainError(
            f"first-index splitting requires sigma1 + sigma2 > 1, got {sig1 + sig2}")
    if sig2 <= -(M - 1):
        raise DomainError(
            f"continuation depth l = {l} requires sigma2 > {-(M - 1)}, got {sig2}")
    _ensure_regular(s1, s2)

    bconst = (abs(pochhammer(s2, M)) * periodic_bernoulli_bound(M)
              / math.factorial(M) / (sig2 + M - 1.0)
              / (sig1 + sig2 + M - 2.0))
    N, rem_bound = _choose_split_n(policy, bconst, 2.0 - sig1 - sig2 - M)

    amp1 = _abs_power_sum_bound(sig1, N)
    inv_s2 = 1.0 / abs(s2 - 1.0)
    ztol = policy.tol / (8.0 * max(amp1, inv_s2, 1.0))

    z2 = zeta(s2, ztol, policy, strict=False)
    w0 = s1 + s2
    zc1 = zeta(w0 - 1.0, ztol, policy, strict=False)
    zc0 = zeta(w0, ztol, policy, strict=False)

    n = np.arange(1, N + 1, dtype=float)
    pw1 = n ** (-s1)
    pw2 = n ** (-s2)
    h2 = np.cumsum(pw2)
    v1_terms = pw1 * (z2.value - h2)
    value = complex(v1_terms.sum())
    mag = float(np.abs(v1_terms).sum())
    err = amp1 * z2.err

    pw_sum0 = n ** (-w0)
    i1 = (zc1.value - complex((pw_sum0 * n).sum())) / (s2 - 1.0)
    i2 = -0.5 * (zc0.value - complex(pw_sum0.sum()))
    value += i1 + i2
    mag += abs(i1) + abs(i2)
    err += inv_s2 * zc1.err + 0.5 * zc0.err

    for k in range(1, M):
        b = TABLE[k + 1]
        if b == 0.0:
            continue
        coef = b / math.factorial(k + 1) * pochhammer(s2, k)
        zck = zeta(w0 + k, ztol, policy, strict=False)
        term = coef * (zck.value - complex((pw_sum0 * n ** float(-k)).sum()))
        value += term
        mag += abs(term)
        err += abs(coef) * zck.err

    err += rem_bound + roundoff_allowance(mag, 4 * N)
    if err > policy.tol:
        raise AccuracyError(
            f"first-index splitting cannot reach tol = {policy.tol:.1e} "
            f"at N = {N}", err)
    return value, err, N


def dzeta_v_split(s1: complex, s2: complex,
                  policy: TruncationPolicy = DEFAULT_POLICY,
                  l: int = CONTINUATION_DEPTH) -> ApproxValue:
    """zeta2 by the first-index continuation splitting."""
    value, err, _ = _v_split_full(complex(s1), complex(s2), policy, l)
    return ApproxValue(value, err)


def _u_split_full(s1: complex, s2: complex, policy: TruncationPolicy,
                  l: int = CONTINUATION_DEPTH) -> tuple[complex, float, int]:
    M = _split_order(l)
    sig1, sig2 = s1.real, s2.real
    if sig2 <= 0.0:
        raise DomainError(
            f"second-index splitting requires sigma2 > 0, got {sig2}")
    if sig1 + sig2 <= 1.0:
        raise DomainError(
            f"second-index splitting requires sigma1 + sigma2 > 1, got {sig1 + sig2}")
    if sig1 <= -(M - 1):
        raise DomainError(
            f"continuation depth l = {l} requires sigma1 > {-(M - 1)}, got {sig1}")
    _ensure_regular(s1, s2)

    bconst = (abs(pochhammer(s1, M)) * periodic_bernoulli_bound(M)
              / math.factorial(M) / (sig1 + M - 1.0)
              / (sig1 + sig2 + M - 2.0))
    N, rem_bound = _choose_split_n(policy, bconst, 2.0 - sig1 - sig2 - M)

    taylor_branch = abs(s1 - 1.0) < TAYLOR_EPS
    amp2 = _abs_power_sum_bound(sig2, N)
    inv_s1 = 0.0 if taylor_branch else 1.0 / abs(s1 - 1.0)
    ztol = policy.tol / (8.0 * max(amp2, inv_s1, 1.0))

    n = np.arange(1, N + 1, dtype=float)
    pw1 = n ** (-s1)
    pw2 = n ** (-s2)
    prefix = np.concatenate([[0.0 + 0j], np.cumsum(pw1)])[:-1]
    u1_terms = prefix * pw2
    value = complex(u1_terms.sum())
    mag = float(np.abs(u1_terms).sum())
    err = 0.0

    z2 = zeta(s2, ztol, policy, strict=False)
    w0 = s1 + s2
    zc0 = zeta(w0, ztol, policy, strict=False)
    g0 = z2.value - complex(pw2.sum())

    if taylor_branch:
        zp2 = zeta_prime(s2, ztol, policy, strict=False)
        log_sum = complex((np.log(n) * pw2).sum())
        i12 = EULER_GAMMA * g0 - (zp2.value + log_sum)
        err += abs(EULER_GAMMA) * z2.err + zp2.err + 10.0 * abs(s1 - 1.0)
    else:
        z1 = zeta(s1, ztol, policy, strict=False)
        zc1 = zeta(w0 - 1.0, ztol, policy, strict=False)
        pw_w1 = n ** (-(w0 - 1.0))
        i12 = (z1.value * g0
               + (zc1.value - complex(pw_w1.sum())) / (1.0 - s1))
        err += (abs(z1.value) + 1.0) * z2.err + abs(g0) * z1.err + inv_s1 * zc1.err
    value += i12
    mag += abs(i12)

    pw_sum0 = n ** (-w0)
    i3 = -0.5 * (zc0.value - complex(pw_sum0.sum()))
    value += i3
    mag += abs(i3)
    err += 0.5 * zc0.err

    for k in range(1, M):
        b = TABLE[k + 1]
        if b == 0.0:
            continue
        coef = b / math.factorial(k + 1) * pochhammer(s1, k)
        zck = zeta(w0 + k, ztol, policy, strict=False)
        term = -coef * (zck.value - complex((pw_sum0 * n ** float(-k)).sum()))
        value += term
        mag += abs(term)
        err += abs(coef) * zck.err

    err += rem_bound + roundoff_allowance(mag, 4 * N)
    if err > policy.tol:
        raise AccuracyError(
            f"second-index splitting cannot reach tol = {policy.tol:.1e} "
            f"at N = {N}", err)
    return value, err, N


def dzeta_u_split(s1: complex, s2: complex,
                  policy: TruncationPolicy = DEFAULT_POLICY,
                  l: int = CONTINUATION_DEPTH) -> ApproxValue:
    """zeta2 by the second-index continuation splitting (Taylor branch at s1=1)."""
    value, err, _ = _u_split_full(complex(s1), complex(s2), policy, l)
    return ApproxValue(value, err)


# ----------------------------------------------------------------------
# truncated-polynomial approximations
# ----------------------------------------------------------------------

def _window(value: float, N: int, policy: TruncationPolicy, name: str) -> None:
    hi = _TWO_PI * N / policy.C
    if not 1.0 < value < hi:
        raise PreconditionError(
            f"{name} = {value:.6g} outside the window (1, 2 pi N / C) = (1, {hi:.6g})")


def _approx_t1_full(s1: complex, s2: complex, N: int,
                    policy: TruncationPolicy) -> tuple[complex, float, int]:
    sig1, sig2 = s1.real, s2.real
    t1, t2 = s1.imag, s2.imag
    if sig1 + sig2 <= 1.0:
        raise DomainError(f"requires sigma1 + sigma2 > 1, got {sig1 + sig2}")
    if t1 < 1.0:
        raise PreconditionError(f"requires t1 >= 1, got {t1}")
    _window(abs(t1 + t2), N, policy, "|t1 + t2|")
    _ensure_regular(s1, s2)
    z2 = zeta(s2, min(policy.tol, 1e-12), policy, strict=False)
    n = np.arange(1, N + 1, dtype=float)
    pw1 = n ** (-s1)
    h2 = np.cumsum(n ** (-s2))
    terms = pw1 * (z2.value - h2)
    value = complex(terms.sum())
    err = (K_AP / t1 * N ** (2.0 - sig1 - sig2)
           + _abs_power_sum_bound(sig1, N) * z2.err
           + roundoff_allowance(float(np.abs(terms).sum()), 2 * N))
    return value, err, N


def dzeta_approx_t1(s1: complex, s2: complex, N: int,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Truncated first-index polynomial, error ~ t1^-1 N^{2-sigma1-sigma2}."""
    value, err, _ = _approx_t1_full(complex(s1), complex(s2), N, policy)
    return ApproxValue(value, err)


def _prefix_polynomial(s1: complex, s2: complex, N: int) -> tuple[complex, float]:
    """sum_{2<=n<=N} (sum_{m<n} m^-s1) n^-s2 by a compensated single pass."""
    prefix = ComplexSum()
    total = ComplexSum()
    mag = 0.0
    for n in range(2, N + 1):
        prefix.add((n - 1) ** (-s1))
        p = prefix.value
        term = p * n ** (-s2)
        total.add(term)
        mag += abs(term)
    return total.value, mag


def _approx_t2_full(s1: complex, s2: complex, N: int,
                    policy: TruncationPolicy) -> tuple[complex, float, int]:
    sig1, sig2 = s1.real, s2.real
    t1, t2 = s1.imag, s2.imag
    if sig2 < 0.5:
        raise DomainError(f"requires sigma2 >= 1/2, got {sig2}")
    if sig1 + sig2 <= 1.0:
        raise DomainError(f"requires sigma1 + sigma2 > 1, got {sig1 + sig2}")
    if N <= math.e ** 2:
        raise PreconditionError(f"requires N > e^2, got N = {N}")
    if t2 < 1.0:
        raise PreconditionError(f"requires t2 >= 1, got {t2}")
    _window(t2, N, policy, "t2")
    _window(abs(t1 + t2), N, policy, "|t1 + t2|")
    _ensure_regular(s1, s2)
    value, mag = _prefix_polynomial(s1, s2, N)
    if abs(s1 - 1.0) < TAYLOR_EPS:
        formula_err = K_AP / t2 * N ** (1.0 - sig2) * math.log(N)
    else:
        formula_err = K_AP / t2 * (N ** (1.0 - sig2) + N ** (2.0 - sig1 - sig2))
    err = formula_err + roundoff_allowance(mag, 2 * N)
    return value, err, N


def dzeta_approx_t2(s1: complex, s2: complex, N: int,
                    policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Truncated second-index polynomial, error ~ t2^-1 (N^{1-sigma2} +
    N^{2-sigma1-sigma2}); log-weighted branch at s1 = 1."""
    value, err, _ = _approx_t2_full(complex(s1), complex(s2), N, policy)
    return ApproxValue(value, err)


def _approx_diag_full(sigma1: float, sigma2: float, t: float,
                      policy: TruncationPolicy) -> tuple[complex, float, int]:
    if t < 2.0:
        raise PreconditionError(f"diagonal approximation requires t >= 2, got {t}")
    if sigma2 <= 0.0:
        raise DomainError(f"requires sigma2 > 0, got {sigma2}")
    if sigma1 + sigma2 <= 1.0:
        raise DomainError(f"requires sigma1 + sigma2 > 1, got {sigma1 + sigma2}")
    s1 = complex(sigma1, t)
    s2 = complex(sigma2, t)
    _ensure_regular(s1, s2)
    N = int(t)
    value, mag = _prefix_polynomial(s1, s2, N)
    eps = 0.05
    if abs(sigma1 - 1.0) < 1e-12:
        formula_err = K_AP * t ** (-sigma2 + eps)
    elif sigma1 > 1.0:
        formula_err = K_AP * t ** (-sigma2)
    else:
        formula_err = K_AP * t ** (1.0 - sigma1 - sigma2)
    err = formula_err + roundoff_allowance(mag, 2 * N)
    return value, err, N


def dzeta_approx_diag(sigma1: float, sigma2: float, t: float,
                      policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxValue:
    """Diagonal truncation at N = [t] for s1 = sigma1 + it, s2 = sigma2 + it."""
    value, err, _ = _approx_diag_full(sigma1, sigma2, t, policy)
    return ApproxValue(value, err)


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------

def resolve_split(s1: complex, s2: complex) -> str:
    """Region-based route choice: brute in the absolutely convergent region,
    else the second-index splitting when sigma2 > 0, else the first-index
    splitting when sigma1 + sigma2 > 1."""
    sig1, sig2 = s1.real, s2.real
    if sig2 > 1.0 and sig1 + sig2 > 2.0:
        return "brute"
    if sig2 > 0.0 and sig1 + sig2 > 1.0:
        return "u_split"
    if sig1 + sig2 > 1.0:
        return "v_split"
    raise DomainError(
        f"({s1}, {s2}) outside every continuation region: need "
        "sigma1 + sigma2 > 1")


def evaluate(s1: complex, s2: complex, split: str = "auto",
             policy: TruncationPolicy = DEFAULT_POLICY,
             N: int | None = None) -> EvalResult:
    """Evaluate zeta2(s1, s2) by the requested (or auto-selected) route."""
    s1, s2 = complex(s1), complex(s2)
    if split not in SPLITS:
        raise PreconditionError(f"unknown split {split!r}; choose from {SPLITS}")
    if split == "auto":
        split = resolve_split(s1, s2)
    if split == "brute":
        value, err, terms = _brute_full(s1, s2, policy.tol)
    elif split == "v_split":
        value, err, terms = _v_split_full(s1, s2, policy)
    elif split == "u_split":
        value, err, terms = _u_split_full(s1, s2, policy)
    elif split == "approx_t1":
        value, err, terms = _approx_t1_full(s1, s2, _default_window_n(s1, s2, N, policy), policy)
    elif split == "approx_t2":
        value, err, terms = _approx_t2_full(s1, s2, _default_window_n(s1, s2, N, policy), policy)
    else:
        if abs(s1.imag - s2.imag) > 0:
            raise PreconditionError(
                "diagonal approximation requires t1 = t2 "
                f"(got t1 = {s1.imag}, t2 = {s2.imag})")
        value, err, terms = _approx_diag_full(s1.real, s2.real, s1.imag, policy)
    return EvalResult(value, err, split, terms)


def _default_window_n(s1: complex, s2: complex, N: int | None,
                      policy: TruncationPolicy) -> int:
    """Window-satisfying default truncation length for the approximations."""
    if N is not None:
        return N
    t = max(abs(s1.imag + s2.imag), abs(s2.imag), 1.0)
    return 2 * math.ceil(policy.C * (t + 1.0) / _TWO_PI) + 8
