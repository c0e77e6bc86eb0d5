"""Tests for the geometric checks, the closed-form oracles and the verification suite."""

from fractions import Fraction

import numpy as np
import pytest

from polarint.algebra import PolyVectorField, ScalarPoly, parse_field
from polarint.analysis import (
    ExplicitQuarticMap,
    ScalarOracleState,
    Status,
    check_measure_jacobian,
    check_scaling,
    check_self_adjoint,
    drift_series,
    explicit_quartic_step,
    run_checks,
    scalar_oracle_step,
    scalar_oracle_trajectory,
)
from polarint.analysis.checks import merge
from polarint.analysis.suite import check_leapfrog_control, random_unit_scaling
from polarint.errors import ArityError, SingularStepError
from polarint.hamiltonian import HamiltonianSpec, measure_density, symplectic_structure
from polarint.integrators import BootstrapConfig, PolarWindow, bootstrap, integrate, polar_step

from conftest import CONFIGS, D, R, small_rational


def _cube(mode=R):
    return parse_field({"dimension": 1, "components": [[{"coeff": 1, "exponents": [3]}]]}, mode)


def _quartic_power():
    return HamiltonianSpec.build(ScalarPoly.from_terms(2, [(Fraction(1), (4, 0))], R), symplectic_structure(2, R))


def _quartic_double():
    terms = [(1.0, (4, 0)), (0.5, (3, 1)), (1.0, (2, 2)), (1.0, (0, 4))]
    return HamiltonianSpec.build(ScalarPoly.from_terms(2, terms, D), symplectic_structure(2, D))


def _regular_windows(spec, random_window, n, k, h, count=5):
    """Random windows where the step and the measure density are both defined."""
    found = []
    F = spec.form(k)
    for _ in range(50):
        window = random_window(n, k, h)
        forward = polar_step(F, window)
        if forward.singular or measure_density(spec, window).singular:
            continue
        reverse = PolarWindow((forward.new_point,) + window.points[:0:-1], -window.h, window.mode, window.step_index)
        if polar_step(F, reverse).singular:
            continue
        found.append(window)
        if len(found) == count:
            break
    assert found
    return found


class TestSelfAdjoint:
    @pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (4, 2), (2, 3)])
    def test_exact(self, random_hamiltonian, random_window, n, k):
        spec = random_hamiltonian(n, k + 2)
        for window in _regular_windows(spec, random_window, n, k, Fraction(1, 9)):
            result = check_self_adjoint(spec, window)
            assert result.status == Status.PASS
            assert result.max_residual == 0

    def test_field_target(self, random_field, random_window):
        f = random_field(3, 3)
        window = random_window(3, 2, Fraction(1, 50))
        try:
            result = check_self_adjoint(f, window)
        except SingularStepError:
            pytest.skip("random window landed on the indeterminacy locus")
        assert result.status == Status.PASS

    def test_double(self):
        window = PolarWindow.build([[0.3, -0.2], [0.31, -0.19]], 0.01, D)
        result = check_self_adjoint(_quartic_double(), window)
        assert result.status == Status.PASS
        assert result.max_residual < 1e-13

    def test_singular_step_raises(self):
        with pytest.raises(SingularStepError):
            check_self_adjoint(_cube(), PolarWindow.build([[1], [2]], Fraction(1, 4), R))


class TestMeasureJacobian:
    @pytest.mark.parametrize("n, k", [(2, 1), (2, 2), (4, 1), (2, 3)])
    def test_exact(self, random_hamiltonian, random_window, n, k):
        spec = random_hamiltonian(n, k + 2)
        for window in _regular_windows(spec, random_window, n, k, Fraction(1, 7), count=3):
            result = check_measure_jacobian(spec, window)
            assert result.status == Status.PASS
            assert result.max_residual == 0
            assert result.details["closed_form"] == result.details["density_ratio"]

    def test_double_with_finite_differences(self):
        window = PolarWindow.build([[0.3, -0.2], [0.31, -0.19]], 0.01, D)
        result = check_measure_jacobian(_quartic_double(), window)
        assert result.status == Status.PASS
        assert result.details["finite_difference_gap"] < 1e-5


class TestScaling:
    def test_quartic_power(self):
        window = PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R)
        result = check_scaling(_quartic_power(), window, [2, Fraction(1, 2)])
        assert result.status == Status.PASS
        assert result.details["factors"] == ["2", "1/2"]
        assert result.details["product_integral_residual"] == "0"

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_random_factors(self, random_hamiltonian, random_window, rng, k):
        spec = random_hamiltonian(2, k + 2)
        lam = random_unit_scaling(k, R, rng)
        assert np.prod(np.array(lam, dtype=object)) == 1
        for window in _regular_windows(spec, random_window, 2, k, Fraction(1, 9), count=2):
            if polar_step(spec.form(k), window.scaled(lam)).singular:
                continue
            assert check_scaling(spec, window, lam).status == Status.PASS

    def test_product_must_be_one(self):
        window = PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R)
        with pytest.raises(ValueError, match="multiply to 1"):
            check_scaling(_quartic_power(), window, [2, 2])

    def test_factor_count(self):
        window = PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R)
        with pytest.raises(ArityError):
            check_scaling(_quartic_power(), window, [1])


class TestScalarOracle:
    def test_cube(self):
        state = ScalarOracleState.start([1, 1], Fraction(1, 8))
        points, invariants = scalar_oracle_trajectory(state, 3)
        assert points == [1, 1, Fraction(4, 3), Fraction(3, 2), Fraction(8, 3)]
        assert invariants == [1, Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)]

    def test_k_one_square(self):
        assert scalar_oracle_step(ScalarOracleState.start([1], Fraction(1, 2))) == 2

    def test_blow_up(self):
        state = ScalarOracleState.start([1, 1], Fraction(1, 4))
        assert scalar_oracle_step(state) == 2
        with pytest.raises(SingularStepError, match="blows up"):
            scalar_oracle_trajectory(state, 2)

    def test_zero_point(self):
        with pytest.raises(SingularStepError):
            ScalarOracleState.start([1, 0], Fraction(1, 4))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_agrees_with_the_polar_map(self, rng, k):
        f = parse_field({"dimension": 1, "components": [[{"coeff": 1, "exponents": [k + 1]}]]}, R)
        start = [Fraction(1, int(rng.integers(1, 6))) for _ in range(k)]
        h = Fraction(1, 40)
        traj = integrate(f, PolarWindow.build([[x] for x in start], h, R), 4)
        points, _ = scalar_oracle_trajectory(ScalarOracleState.start(start, h), len(traj) - k)
        assert [p[0] for p in traj.points] == points


class TestExplicitQuartic:
    def test_quartic_power(self):
        qmap = ExplicitQuarticMap.build([1, 0, 0, 0, 0], Fraction(1, 2))
        assert list(explicit_quartic_step(qmap, [[1, 0], [1, 1]])) == [1, -1]
        assert qmap.denominator([[1, 0], [1, 1]]) == 1

    def test_hamiltonian_coefficients(self):
        H = ExplicitQuarticMap.build([1, 2, 3, 4, 5], Fraction(1, 2)).hamiltonian().H
        assert {m.exponents: m.coeff for m in H.monomials} == {
            (4, 0): 1,
            (3, 1): 8,
            (2, 2): 18,
            (1, 3): 16,
            (0, 4): 5,
        }

    def test_matches_the_general_map_at_a_quarter_step(self, rng, random_window):
        checked = 0
        for _ in range(12):
            qmap = ExplicitQuarticMap.build([small_rational(rng) for _ in range(5)], Fraction(1, 2))
            spec = qmap.hamiltonian()
            window = random_window(2, 2, qmap.general_step)
            general = polar_step(spec.form(2), window)
            if general.singular:
                assert qmap.denominator(window) == 0
                continue
            assert list(explicit_quartic_step(qmap, window)) == list(general.new_point)
            assert qmap.density(window) == measure_density(spec, window).density
            checked += 1
        assert checked

    def test_vanishing_denominator(self):
        # delta = a e q0 q1 p0 p1 = -1 and h = 1/2
        qmap = ExplicitQuarticMap.build([1, 0, 0, 0, -1], Fraction(1, 2))
        window = [[1, 1], [1, 1]]
        assert qmap.denominator(window) == 0
        with pytest.raises(SingularStepError):
            explicit_quartic_step(qmap, window)
        with pytest.raises(SingularStepError):
            qmap.density(window)

    def test_arity(self):
        qmap = ExplicitQuarticMap.build([1, 0, 0, 0, 0], Fraction(1, 2))
        with pytest.raises(ArityError):
            explicit_quartic_step(qmap, [[1, 0]])
        with pytest.raises(ArityError):
            ExplicitQuarticMap.build([1, 0, 0], Fraction(1, 2))


class TestDriftSeries:
    def test_too_few_samples(self):
        traj = integrate(_cube(), PolarWindow.build([[1], [1]], Fraction(1, 8), R), 1)
        with pytest.raises(ArityError, match="need at least 2"):
            drift_series(traj, lambda t, j: t.points[j][0] * t.points[j + 1][0], 2, span=2)

    def test_scalar_invariant(self):
        traj = integrate(_cube(), PolarWindow.build([[1], [1]], Fraction(1, 8), R), 3)
        # 1/(x_j x_{j+1}) + 2 h j is constant along x' = x^3
        report = drift_series(
            traj,
            lambda t, j: 1 / (t.points[j][0] * t.points[j + 1][0]) + Fraction(1, 4) * j,
            1,
            span=2,
            name="scalar",
        )
        assert report.series == (1, 1, 1, 1)
        assert report.passed

    def test_stride(self):
        traj = integrate(_cube(), PolarWindow.build([[1], [1]], Fraction(1, 8), R), 3)
        with pytest.raises(ValueError):
            drift_series(traj, lambda t, j: 0, 0)


class TestRunChecks:
    def test_quartic_power_trajectory(self):
        spec = _quartic_power()
        traj = integrate(spec.field, PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R), 3)
        results = run_checks(spec, traj, 2, scaling=[2, Fraction(1, 2)])
        assert [r.name for r in results] == [
            "step-residual",
            "k-integrals",
            "measure-jacobian",
            "self-adjoint",
            "scaling",
            "oracle-equivalence",
        ]
        assert all(r.status == Status.PASS for r in results)
        assert results[-1].details["oracle"] == "explicit-quartic"

    def test_cube_uses_the_scalar_oracle(self):
        traj = integrate(_cube(), PolarWindow.build([[1], [1]], Fraction(1, 8), R), 3)
        results = {r.name: r for r in run_checks(_cube(), traj, 2, seed=7)}
        assert results["k-integrals"].status == Status.SKIPPED
        assert results["measure-jacobian"].status == Status.SKIPPED
        assert results["self-adjoint"].status == Status.PASS
        assert results["scaling"].status == Status.PASS
        assert results["oracle-equivalence"].details["oracle"] == "scalar-power"
        assert results["oracle-equivalence"].max_residual == 0

    def test_riccati_uses_kahan(self):
        f = parse_field(CONFIGS / "fields" / "riccati.json", R)
        traj = integrate(f, PolarWindow.build([[1]], Fraction(1, 2), R), 1)
        results = {r.name: r for r in run_checks(f, traj, 1)}
        assert results["step-residual"].status == Status.SKIPPED
        assert results["self-adjoint"].status == Status.SKIPPED
        assert results["oracle-equivalence"].status == Status.PASS
        assert results["oracle-equivalence"].details["oracle"] == "kahan"

    def test_exact_conservation_over_a_longer_run(self, random_hamiltonian, random_window):
        spec = random_hamiltonian(2, 4)
        traj = integrate(spec.field, random_window(2, 2, Fraction(1, 10)), 6)
        if traj.singular:
            pytest.skip("random window reached the indeterminacy locus")
        results = {r.name: r for r in run_checks(spec, traj, 2, max_windows=2)}
        assert results["k-integrals"].status == Status.PASS
        assert results["k-integrals"].max_residual == 0

    def test_trajectory_too_short(self):
        spec = _quartic_power()
        traj = integrate(spec.field, PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R), 0)
        with pytest.raises(ArityError):
            run_checks(spec, traj, 2)

    def test_double_trajectory(self):
        spec = _quartic_double()
        window = bootstrap(spec.field, [0.3, -0.2], BootstrapConfig(), h=0.01, k=2)
        traj = integrate(spec.field, window, 50)
        results = {r.name: r for r in run_checks(spec, traj, 2, tolerances={"scaling": 1e-10})}
        assert results["k-integrals"].status == Status.PASS
        assert results["k-integrals"].tolerance == 1e-11
        assert results["measure-jacobian"].status == Status.PASS
        assert results["scaling"].tolerance == 1e-10
        assert results["oracle-equivalence"].details["oracle"] == "explicit-quartic"


class TestLeapfrogControl:
    def test_benchmark_drifts(self):
        spec = HamiltonianSpec.build(
            ScalarPoly.from_terms(2, [(1.0, (4, 0)), (1.0, (0, 4))], D), symplectic_structure(2, D)
        )
        window = bootstrap(spec.field, [1.0, 0.0], BootstrapConfig(substeps=100), h=0.1, k=2)
        result = check_leapfrog_control(spec, window, 200)
        assert result.status == Status.EXPECTED_FAIL
        assert result.passed
        assert result.max_residual >= 1e-3

    def test_needs_k_two(self):
        result = check_leapfrog_control(_quartic_power(), PolarWindow.build([[1, 0]], Fraction(1, 8), R), 10)
        assert result.status == Status.SKIPPED


class TestMerge:
    def test_empty(self):
        assert merge("self-adjoint", []).status == Status.SKIPPED

    def test_worst_case_wins(self):
        window = PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R)
        ok = check_self_adjoint(_quartic_power(), window)
        merged = merge("self-adjoint", [ok, ok])
        assert merged.status == Status.PASS
        assert merged.details["cases"] == 2


def test_zero_field_has_no_oracle():
    f = PolyVectorField.zero(2, R)
    traj = integrate(f, PolarWindow.build([[1, 2], [1, 2]], Fraction(1, 2), R), 2)
    results = {r.name: r for r in run_checks(f, traj, 2)}
    assert results["oracle-equivalence"].status == Status.SKIPPED
