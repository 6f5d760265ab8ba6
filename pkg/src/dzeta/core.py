"""Shared numeric plumbing: result types, policies, errors, compensated sums.

Every evaluator in this package returns an :class:`ApproxValue`, a complex
value paired with an absolute error bound.  The bound is a *claim*: under the
operation's stated preconditions, ``|value - truth| <= err``.  Bounds combine
additively through the assembly formulas, and every formula adds a small
floating-point allowance proportional to the magnitudes it actually summed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

# Euler-Mascheroni constant, full binary64 precision.
EULER_GAMMA = 0.5772156649015328606

# Points closer than this to s = 1 (or to the double-zeta singular set)
# are refused rather than extrapolated.
SINGULARITY_EPS = 1e-6

# Below this distance from s1 = 1 the Taylor (Euler-constant) branch of the
# second-variable continuation is used.
TAYLOR_EPS = 1e-9

# Stand-in constant for the unnamed constants of the truncated-approximation
# error terms.  Feeds err fields only; no test asserts its exact value.
K_AP = 10.0

# Hardy-Littlewood truncation error constant (measured max is ~0.72 at C=2).
K_HL = 10.0

_EPS = 2.0 ** -52


class DomainError(ValueError):
    """Parameters outside the operation's convergence/continuation region."""


class PreconditionError(ValueError):
    """A quantitative hypothesis (truncation window, range cap) fails."""


class SingularityError(ValueError):
    """Evaluation point too close to the singular set."""


class AccuracyError(RuntimeError):
    """Requested tolerance unreachable under the active policy caps."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved bound {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class ApproxValue:
    """A complex value with a nonnegative absolute error bound."""

    value: complex
    err: float

    def __post_init__(self):
        if not (math.isfinite(self.err) and self.err >= 0.0):
            raise ValueError(f"error bound must be finite and >= 0, got {self.err}")

    def __abs__(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class TruncationPolicy:
    """Series-cutoff and expansion-order parameters.

    C > 1 enters the truncation windows |t| < 2*pi*N/C of the approximate
    formulas; N_min floors every adaptive cutoff; M (odd) is the
    Euler-Maclaurin expansion order; tol is the error-bound target the
    adaptive cutoffs aim for; N_max caps them.
    """

    C: float = 2.0
    N_min: int = 32
    M: int = 9
    tol: float = 1e-10
    N_max: int = 1 << 21

    def __post_init__(self):
        if self.C <= 1.0:
            raise ValueError("C must exceed 1")
        if self.M < 3 or self.M % 2 == 0:
            raise ValueError("M must be odd and >= 3")
        if self.N_min < 1 or self.N_max < self.N_min:
            raise ValueError("need 1 <= N_min <= N_max")

    def with_tol(self, tol: float) -> "TruncationPolicy":
        return replace(self, tol=tol)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class EMParams:
    """Euler-Maclaurin evaluation parameters for a single zeta call.

    remainder_mode:
      * ``bound_only``  - the remainder magnitude bound goes into err;
      * ``integrate``   - the remainder integral is evaluated numerically
        (per-unit Gauss-Legendre) and only its small residue goes into err;
      * ``auto``        - integrate exactly when the bound misses ``target``.
    """

    N: int
    M: int = 9
    remainder_mode: str = "auto"
    target: float = 1e-12

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.M < 3 or self.M % 2 == 0:
            raise ValueError("M must be odd and >= 3 (M = 2m+1)")
        if self.remainder_mode not in ("bound_only", "integrate", "auto"):
            raise ValueError(f"unknown remainder mode {self.remainder_mode!r}")


@dataclass(frozen=True)
class QuadPolicy:
    """Adaptive composite-Simpson parameters for the mean-square integrals."""

    h0: float = 0.05
    tol: float = 1e-5
    max_depth: int = 10

    def __post_init__(self):
        if self.h0 <= 0 or self.tol <= 0 or self.max_depth < 0:
            raise ValueError("h0 > 0, tol > 0, max_depth >= 0 required")


class NeumaierSum:
    """Compensated accumulator (Kahan-Babuska variant) for long real sums."""

    __slots__ = ("total", "carry")

    def __init__(self):
        self.total = 0.0
        self.carry = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.carry += (self.total - t) + x
        else:
            self.carry += (x - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.carry


class ComplexSum:
    """Compensated accumulator for complex series (real/imag parts separately)."""

    __slots__ = ("_re", "_im")

    def __init__(self):
        self._re = NeumaierSum()
        self._im = NeumaierSum()

    def add(self, z: complex) -> None:
        self._re.add(z.real)
        self._im.add(z.imag)

    @property
    def value(self) -> complex:
        return complex(self._re.value, self._im.value)


def roundoff_allowance(magnitude: float, terms: int) -> float:
    """Floating-point allowance for a sum of ``terms`` values of total
    absolute magnitude ``magnitude``."""
    return 4.0 * _EPS * magnitude * max(1.0, math.log2(max(terms, 2)))
