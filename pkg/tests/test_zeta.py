import math

import numpy as np
import pytest

from dzeta.core import (
    DomainError,
    EMParams,
    PreconditionError,
    SingularityError,
    TruncationPolicy,
)
from dzeta.zeta import (
    zeta,
    zeta_em,
    zeta_hl,
    zeta_kt,
    zeta_prime,
    zeta_prime_em,
    zeta_prime_hl,
)


def zeta_real_oracle(sigma: float, n_terms: int = 200000) -> tuple[float, float]:
    """Independent oracle for real sigma > 1: partial sum + integral tail bracket."""
    n = np.arange(1, n_terms + 1, dtype=float)
    partial = float(np.sum(n ** -sigma))
    lo = n_terms ** (1.0 - sigma) / (sigma - 1.0)  # int_{N+?}: bracket below/above
    hi = (n_terms + 1.0) ** (1.0 - sigma) / (sigma - 1.0)
    return partial + (lo + hi) / 2.0, (lo - hi) / 2.0 + 1e-12


class TestZetaEM:
    def test_zeta2(self):
        av = zeta_em(2.0 + 0j, EMParams(50, 9))
        assert abs(av.value - math.pi ** 2 / 6.0) <= av.err
        assert av.err < 1e-12

    def test_zeta0_continuation(self):
        av = zeta_em(0.0 + 0j, EMParams(10, 5))
        assert abs(av.value - (-0.5)) <= av.err

    def test_zeta3_vs_oracle(self):
        oracle, obound = zeta_real_oracle(3.0)
        av = zeta_em(3.0 + 0j, EMParams(50, 9))
        assert abs(av.value - oracle) <= av.err + obound
        assert av.value.real == pytest.approx(1.2020569031595943, abs=1e-12)

    def test_pole_guard(self):
        with pytest.raises(SingularityError):
            zeta_em(1.0 + 0j, EMParams(50, 9))
        with pytest.raises(SingularityError):
            zeta_em(1.0 + 1e-9j, EMParams(50, 9))

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            zeta_em(-9.0 + 0j, EMParams(50, 9))  # sigma <= -(M-1)

    def test_integrate_mode_consistent(self):
        s = 0.5 + 12j
        loose = zeta_em(s, EMParams(16, 5, "bound_only"))
        tight = zeta_em(s, EMParams(16, 5, "integrate"))
        ref = zeta_em(s, EMParams(4096, 9, "bound_only"))
        assert abs(loose.value - ref.value) <= loose.err + ref.err
        assert abs(tight.value - ref.value) <= tight.err + ref.err
        assert tight.err < loose.err

    def test_order_monotonicity(self):
        # bound_only err does not increase when M rises 3 -> 9, for N >= 4|s|
        for s in (2.0 + 0j, 0.5 + 4j, -1.0 + 3j, 3.0 - 10j):
            n = max(64, int(4 * abs(s)) + 1)
            errs = [zeta_em(s, EMParams(n, M, "bound_only")).err
                    for M in (3, 5, 7, 9)]
            assert all(a >= b for a, b in zip(errs, errs[1:]))


class TestZetaKT:
    def test_first_zero_ordinate(self):
        s = 0.5 + 14.134725j
        av = zeta_kt(s, m=2)
        ref = zeta_em(s, EMParams(2000, 9))
        assert abs(av.value - ref.value) <= av.err + ref.err
        assert abs(av.value) < 5e-5

    def test_agrees_with_em(self):
        s = 2.0 + 10j
        a = zeta_kt(s, m=1)
        b = zeta_em(s, EMParams(200, 9))
        assert abs(a.value - b.value) <= a.err + b.err

    def test_negative_sigma(self):
        s = -1.0 + 5j
        a = zeta_kt(s, m=2)  # valid since sigma > -2m-1 = -5
        b = zeta_em(s, EMParams(2000, 9))
        assert abs(a.value - b.value) <= a.err + b.err

    def test_small_t_refused(self):
        with pytest.raises(PreconditionError, match="zeta_em"):
            zeta_kt(2.0 + 0.5j, m=2)

    def test_expansion_agreement_random(self, rng):
        for _ in range(200):
            sigma = rng.uniform(0.4, 3.0)
            t = rng.uniform(2.0, 50.0) * rng.choice([-1.0, 1.0])
            s = complex(sigma, t)
            a = zeta(s, 1e-12)
            b = zeta_kt(s, m=2)
            assert abs(a.value - b.value) <= a.err + b.err, s


class TestZetaHL:
    def test_zeta2_region(self):
        av = zeta_hl(2.0 + 0j, 1000.0)
        assert abs(av.value - math.pi ** 2 / 6.0) <= av.err

    def test_vs_em_critical_strip(self):
        s = 0.5 + 20j
        a = zeta_hl(s, 100.0)
        b = zeta_em(s, EMParams(500, 9))
        assert abs(a.value - b.value) <= a.err + b.err

    def test_vs_em_deeper(self):
        s = 0.75 + 50j
        a = zeta_hl(s, 200.0)
        b = zeta_em(s, EMParams(2000, 9))
        assert abs(a.value - b.value) <= a.err + b.err

    def test_window_violation(self):
        with pytest.raises(PreconditionError, match="window"):
            zeta_hl(0.5 + 1000j, 10.0)

    def test_sigma_guard(self):
        with pytest.raises(PreconditionError):
            zeta_hl(-0.5 + 5j, 100.0)


class TestZetaPrime:
    def test_at_two_vs_series_oracle(self):
        # independent oracle: direct sum of log n / n^2 with integral tail
        n = np.arange(2, 10 ** 6, dtype=float)
        partial = -float(np.sum(np.log(n) * n ** -2.0))
        tail = (math.log(1e6) + 1.0) / 1e6
        av = zeta_prime_hl(2.0 + 0j, 1000.0)
        assert abs(av.value - partial) <= av.err + tail
        assert abs(av.value - (-0.9375482543158438)) <= av.err

    def test_finite_difference_consistency(self):
        h = 1e-5
        a = zeta_prime_hl(2.0 + 0j, 1000.0)
        f1 = zeta_em(2.0 + h + 0j, EMParams(2000, 9))
        f0 = zeta_em(2.0 - h + 0j, EMParams(2000, 9))
        fd = (f1.value - f0.value) / (2.0 * h)
        assert abs(a.value - fd) <= max(1e-6, a.err + (f1.err + f0.err) / h)

    def test_fd_grid(self):
        h = 1e-5
        for k in range(20):
            s = complex(1.0 + 0.1 * k, 3.0 + 2.0 * k)
            x = 600.0
            a = zeta_prime_hl(s, x)
            f1 = zeta_em(s + h, EMParams(2048, 9))
            f0 = zeta_em(s - h, EMParams(2048, 9))
            fd = (f1.value - f0.value) / (2.0 * h)
            assert abs(a.value - fd) <= max(1e-6, a.err + 1e-4), s

    def test_em_derivative_matches_hl(self):
        s = 1.0 + 30j
        a = zeta_prime_hl(s, 300.0)
        b = zeta_prime_em(s, EMParams(2048, 9))
        assert abs(a.value - b.value) <= a.err + b.err
        assert b.err < 1e-10

    def test_window_requires_large_x(self):
        with pytest.raises(PreconditionError, match="exp"):
            zeta_prime_hl(0.1 + 2j, 100.0)  # needs x >= e^10


class TestReflection:
    @pytest.mark.parametrize("s", [2.5 + 7j, 0.3 + 21j, -0.5 + 4j, 1.5 + 40j])
    def test_schwarz_reflection(self, s):
        a = zeta_em(s, EMParams(256, 9))
        b = zeta_em(s.conjugate(), EMParams(256, 9))
        assert abs(a.value.conjugate() - b.value) <= 1e-12
        if abs(s.imag) > 1:
            c = zeta_kt(s, m=2)
            d = zeta_kt(s.conjugate(), m=2)
            assert abs(c.value.conjugate() - d.value) <= 1e-12
        e = zeta_hl(s, 200.0) if s.real > 0 else None
        if e is not None:
            f = zeta_hl(s.conjugate(), 200.0)
            assert abs(e.value.conjugate() - f.value) <= 1e-12


class TestAdaptive:
    def test_meets_tolerance(self):
        for s in (3.0 + 0j, 0.5 + 100j, 1.2 - 35j):
            av = zeta(s, 1e-12)
            assert av.err <= 1e-12

    def test_strict_raises(self):
        from dzeta.core import AccuracyError
        with pytest.raises(AccuracyError):
            zeta(-0.5 + 3j, 1e-16, TruncationPolicy(N_max=4096))

    def test_nonstrict_best_effort(self):
        av = zeta(-0.5 + 3j, 1e-16, TruncationPolicy(N_max=4096), strict=False)
        ref = zeta_em(-0.5 + 3j, EMParams(3000, 9))
        assert abs(av.value - ref.value) <= av.err + ref.err
