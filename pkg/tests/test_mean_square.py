import math

import numpy as np
import pytest

from dzeta.core import DomainError, QuadPolicy
from dzeta.mean_square import (
    DirichletPolynomial,
    LineEvaluator,
    TheoremCase,
    UnsupportedCaseError,
    classify_case,
    dirichlet_mean_bound_check,
    dirichlet_mean_exact,
    fit_and_verify,
    integrate_mean_square,
    integrate_mean_square_with_error,
    predicted_main,
    resolve_case,
)
from dzeta.series import series_z22
from dzeta.zeta import zeta


def simpson_fixed(f, a, b, h):
    n = max(2, int(math.ceil((b - a) / h / 2)) * 2)
    xs = np.linspace(a, b, n + 1)
    ys = f(xs)
    return (b - a) / n / 3.0 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum()
                                + 2 * ys[2:-2:2].sum())


class TestDirichletMeanExact:
    def test_single_coefficient(self):
        p = DirichletPolynomial(np.array([1.0 + 0j]))
        assert dirichlet_mean_exact(p, 10.0) == pytest.approx(10.0, abs=1e-12)

    def test_two_coefficients_closed_form(self):
        p = DirichletPolynomial(np.array([1.0 + 0j, 1.0 + 0j]))
        l2 = math.log(2.0)
        cross = 2.0 * ((np.exp(10j * l2) - 1.0) / (1j * l2)).real
        assert dirichlet_mean_exact(p, 10.0) == pytest.approx(20.0 + cross,
                                                              rel=1e-13)

    def test_vs_quadrature_random(self, rng):
        for _ in range(5):
            n = rng.integers(5, 21)
            coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
            p = DirichletPolynomial(coeffs)
            T = float(rng.uniform(20.0, 50.0))
            logn = np.log(np.arange(1, n + 1, dtype=float))

            def f(ts):
                ph = np.exp(1j * np.outer(ts, logn))
                return np.abs(ph @ coeffs) ** 2

            quad = simpson_fixed(f, 0.0, T, 1e-3)
            exact = dirichlet_mean_exact(p, T)
            assert exact == pytest.approx(quad, rel=1e-8)

    def test_positive(self, rng):
        coeffs = rng.normal(size=30) + 1j * rng.normal(size=30)
        p = DirichletPolynomial(coeffs)
        for T in (1.0, 7.3, 80.0):
            assert dirichlet_mean_exact(p, T) >= 0.0

    def test_t_guard(self):
        with pytest.raises(DomainError):
            dirichlet_mean_exact(DirichletPolynomial(np.array([1.0 + 0j])), 0.0)


class TestMeanBoundCheck:
    def test_reciprocal_coefficients(self):
        n = np.arange(1, 101, dtype=float)
        p = DirichletPolynomial((1.0 / n).astype(complex))
        grid = np.geomspace(10.0, 1e4, 12)
        rep = dirichlet_mean_bound_check(p, grid)
        assert rep.max_ratio < 10.0
        # bounded: the running max stops growing beyond small T
        top = rep.running_max[len(grid) // 2:]
        assert top[-1] <= 2.0 * top[0]

    def test_single_term_no_cross(self):
        p = DirichletPolynomial(np.array([1.0 + 0j]))
        rep = dirichlet_mean_bound_check(p, [10.0, 100.0])
        assert all(r == 0.0 for r in rep.ratios)

    def test_power_coefficients(self):
        n = np.arange(1, 201, dtype=float)
        p = DirichletPolynomial((n ** -0.75).astype(complex))
        rep = dirichlet_mean_bound_check(p, np.geomspace(10, 1e4, 10))
        assert rep.max_ratio < 10.0


class TestCaseResolution:
    def test_spec_examples(self):
        main, expo, logp = predicted_main(TheoremCase("I2", 1.0, 0.5), 100.0)
        assert main == pytest.approx(100.0 * math.log(100.0) ** 3 / 3.0)
        assert (expo, logp) == (1.0, 2)

        shape = classify_case(TheoremCase("I1", 1.2, 0.8))  # sum = 2
        assert (shape.error_exponent, shape.error_log_power) == (0.0, 2)

        case = TheoremCase("I2", 1.0, 0.5, fixed_imag=5.0)  # s1 = 1+5i
        rc = resolve_case(case)
        z1 = zeta(complex(1.0, 5.0), 1e-12)
        expected = abs(complex(1.0, 5.0) - 1.0) ** -2 + abs(z1.value) ** 2
        assert rc.constant == pytest.approx(expected, rel=1e-9)
        assert rc.kind == "tlogt"

    def test_critical_line_I1(self):
        rc = resolve_case(TheoremCase("I1", 1.0, 0.5, fixed_imag=3.0))
        assert rc.kind == "tlogt"
        assert rc.constant == pytest.approx(1.0 / abs(complex(0.5, 3.0) - 1.0) ** 2)

    def test_two_sided_flag(self):
        rc = resolve_case(TheoremCase("Ibox", 2.0, 0.5))
        assert rc.two_sided

    def test_unsupported(self):
        with pytest.raises(UnsupportedCaseError):
            classify_case(TheoremCase("I1", 0.3, 0.3))
        with pytest.raises(UnsupportedCaseError):
            classify_case(TheoremCase("I2", 0.5, 0.5))
        with pytest.raises(UnsupportedCaseError):
            classify_case(TheoremCase("Ibox", 0.5, 0.5))

    def test_totality_lattice(self):
        # 10^4-point lattice per mean square, including exact boundaries
        base = np.linspace(-0.45, 2.55, 101)
        grid = sorted(set(base) | {0.5, 1.0, 1.5, 2.0})
        labels = {}
        count = 0
        for which in ("I1", "I2", "Ibox"):
            for s1 in grid:
                for s2 in grid:
                    case = TheoremCase(which, float(s1), float(s2),
                                       fixed_imag=2.0 if which == "I1" else 0.0)
                    try:
                        shape = classify_case(case)
                        labels[(which, s1, s2)] = shape.label
                        # repeated resolution is deterministic
                        assert classify_case(case).label == shape.label
                    except UnsupportedCaseError:
                        labels[(which, s1, s2)] = None
                    count += 1
        assert count >= 3 * 10 ** 4
        # boundary rows resolve to boundary labels
        assert labels[("I2", 1.0, 0.5)] is not None
        assert labels[("Ibox", 2.0, 0.5)] == "Ibox: sigma1>1, sigma2=1/2"


class TestIntegration:
    def test_ibox_convergent_vs_fixed_step(self):
        case = TheoremCase("Ibox", 2.0, 2.0)
        ev = LineEvaluator(case, 50.0)

        def f(ts):
            return np.abs(ev.values(np.asarray(ts))) ** 2

        fixed = simpson_fixed(f, 2.0, 50.0, 1e-3)
        adaptive, est = integrate_mean_square_with_error(case, 50.0)
        assert adaptive == pytest.approx(fixed, rel=1e-6)
        assert adaptive >= 0.0

    def test_quadrature_convergence(self):
        case = TheoremCase("I2", 2.0, 2.0)
        coarse, est = integrate_mean_square_with_error(
            case, 50.0, QuadPolicy(h0=0.05, tol=1e-5))
        fine, _ = integrate_mean_square_with_error(
            case, 50.0, QuadPolicy(h0=0.025, tol=1e-5))
        assert abs(fine - coarse) <= 10.0 * max(est, 1e-9 * coarse)

    def test_i2_convergent_residual_band(self):
        case = TheoremCase("I2", 2.0, 2.0)
        c = series_z22(2.0 + 0j, 4.0, tol=1e-9).value
        i_100 = integrate_mean_square(case, 100.0)
        i_200 = integrate_mean_square(case, 200.0)
        # difference form cancels the integration-origin offset
        assert (i_200 - i_100) - c * 100.0 == pytest.approx(0.0, abs=2.0)

    def test_t_guard(self):
        with pytest.raises(DomainError):
            integrate_mean_square(TheoremCase("I2", 2.0, 2.0), 3.0)

    def test_window_fallback_path(self):
        # negative fixed imaginary part forces |t1+t2| <= 1 inside the range
        case = TheoremCase("I1", 1.5, 2.0, fixed_imag=-5.0)
        ev = LineEvaluator(case, 10.0)
        ts = np.array([2.0, 4.0, 4.5, 5.5, 6.0, 9.0])
        vals = ev.values(ts)
        assert np.all(np.isfinite(vals))
        # the fallback point agrees with neighbours in magnitude scale
        assert abs(vals[2]) < 10.0 * (abs(vals[0]) + abs(vals[-1]) + 1.0)


class TestFitAndVerify:
    def test_i2_convergent_report(self, tmp_path):
        case = TheoremCase("I2", 2.0, 2.0)
        rep = fit_and_verify(case, [25.0, 50.0, 100.0, 200.0])
        assert rep.proxy["kind"] == "bounded"
        assert rep.passed
        rows = rep.rows
        assert [r.T for r in rows] == sorted(r.T for r in rows)
        assert all(r.integral >= 0 for r in rows)
        csv_path = tmp_path / "report.csv"
        rep.to_csv(csv_path)
        header = csv_path.read_text().splitlines()[0]
        assert header == "T,integral,main,residual,scaled_residual,quad_err"
        doc = rep.to_json(tmp_path / "report.json")
        assert doc["rows"][0]["T"] == 25.0
        assert len(doc["difference_rows"]) == len(rows) - 1

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            fit_and_verify(TheoremCase("I2", 2.0, 2.0), [50.0, 100.0])
        with pytest.raises(DomainError):
            fit_and_verify(TheoremCase("I2", 2.0, 2.0), [2.0, 50.0, 100.0])

    def test_ibox_two_sided_calibration(self):
        case = TheoremCase("Ibox", 2.0, 0.5)
        rep = fit_and_verify(case, [50.0, 100.0, 200.0])
        assert rep.proxy["kind"] == "two_sided"
        assert "calibrated_c" in rep.proxy
        assert rep.passed
