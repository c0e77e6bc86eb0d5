"""Tests for height growth along exact iterates."""

import math
from fractions import Fraction

import numpy as np
import pytest

from polarint.algebra import ScalarPoly, parse_field
from polarint.analysis import Growth, height, height_growth
from polarint.analysis.entropy import classify
from polarint.cli.config import load_config
from polarint.errors import ScalarModeError
from polarint.hamiltonian import HamiltonianSpec, symplectic_structure
from polarint.integrators import PolarWindow

from conftest import CONFIGS, D, R, exponent_vectors, small_rational

ROTATION = {
    "dimension": 2,
    "components": [[{"coeff": -1, "exponents": [0, 1]}], [{"coeff": 1, "exponents": [1, 0]}]],
}


def _rotation_window():
    return PolarWindow.build([[1, 0]], Fraction(1, 2), R)


class TestHeight:
    def test_lowest_terms(self):
        assert height([Fraction(-7, 3), Fraction(1, 2)]) == pytest.approx(math.log(7))
        assert height([Fraction(6, 4)]) == pytest.approx(math.log(3))

    def test_integers_and_zero(self):
        assert height([Fraction(0), Fraction(1)]) == 0.0

    def test_needs_rationals(self):
        with pytest.raises(ScalarModeError):
            height([0.5])


class TestClassify:
    def test_quadratic_growth_is_subexponential(self):
        fit = classify([float(n * n) for n in range(1, 15)], 14)
        assert fit.growth == Growth.SUBEXPONENTIAL
        assert 1.05 < fit.mean_ratio < 1.2
        assert fit.degree == pytest.approx(2.088, abs=1e-3)
        assert fit.degree_trend == pytest.approx(0.977, abs=1e-3)
        assert len(fit.ratios) == 13

    def test_cubic_growth_above_the_ratio_threshold_is_subexponential(self):
        fit = classify([float(n**3) for n in range(1, 15)], 14)
        assert fit.mean_ratio > 1.2
        assert fit.degree == pytest.approx(3.271, abs=1e-3)
        assert fit.degree_trend == pytest.approx(0.954, abs=1e-3)
        assert fit.growth == Growth.SUBEXPONENTIAL

    def test_doubling_is_exponential(self):
        fit = classify([2.0**n for n in range(1, 15)], 14)
        assert fit.growth == Growth.EXPONENTIAL
        assert fit.mean_ratio == pytest.approx(2.0)
        assert fit.degree == pytest.approx(11.5)
        assert fit.degree_trend == pytest.approx(11.5 / 7.5)

    def test_slow_exponential_with_small_degree_is_exponential(self):
        fit = classify([1.3**n for n in range(1, 15)], 14)
        assert fit.degree == pytest.approx(0.3 * 11.5)
        assert fit.degree_trend == pytest.approx(11.5 / 7.5)
        assert fit.growth == Growth.EXPONENTIAL

    def test_flat_heights(self):
        fit = classify([3.0] * 14, 14)
        assert fit.growth == Growth.SUBEXPONENTIAL
        assert fit.mean_ratio == pytest.approx(1.0)
        assert fit.degree == pytest.approx(0.0)

    def test_slow_geometric_growth_is_inconclusive(self):
        fit = classify([1.15**n for n in range(1, 31)], 30)
        assert fit.growth == Growth.INCONCLUSIVE
        assert fit.mean_ratio == pytest.approx(1.15)
        assert fit.degree == pytest.approx(0.15 * 24.5)
        assert fit.degree_trend == pytest.approx(24.5 / 14.5)

    def test_short_run_falls_back_to_ratio_band(self):
        fit = classify([float(n) for n in range(1, 9)], 8)
        assert fit.degree_trend is None
        assert fit.degree == pytest.approx(1.0)
        assert fit.growth == Growth.SUBEXPONENTIAL

    def test_too_few_iterates(self):
        fit = classify([1.0, 2.0, 4.0, 8.0, 16.0], 5)
        assert fit.growth == Growth.INCONCLUSIVE
        assert fit.mean_ratio is None and fit.degree is None

    def test_zero_heights_give_no_ratio(self):
        assert classify([0.0, 0.0, 1.0, 2.0], 4).ratios == (2.0,)


class TestHeightGrowth:
    def test_cayley_rotation_grows_linearly(self):
        estimate = height_growth(parse_field(ROTATION, R), _rotation_window())
        assert estimate.heights == pytest.approx([n * math.log(17) for n in range(1, 15)])
        assert estimate.classification == Growth.SUBEXPONENTIAL
        assert estimate.growth_degree == pytest.approx(1.0)
        assert estimate.degree_trend == pytest.approx(1.0)
        assert not estimate.insufficient
        assert estimate.singular_at is None

    def test_quartic_power(self):
        spec = HamiltonianSpec.build(ScalarPoly.from_terms(2, [(Fraction(1), (4, 0))], R), symplectic_structure(2, R))
        estimate = height_growth(spec, PolarWindow.build([[1, 0], [1, 1]], Fraction(1, 8), R))
        # p runs through -1, 0, -2, -1, -3, ... while q stays 1
        logs = [0.0, 0.0, 2, 0.0, 3, 2, 4, 3, 5, 4, 6, 5, 7, 6]
        assert estimate.heights == pytest.approx([math.log(v) if v else 0.0 for v in logs])
        assert estimate.classification == Growth.SUBEXPONENTIAL
        assert estimate.mean_ratio == pytest.approx(1.0801, abs=1e-3)
        assert estimate.growth_degree == pytest.approx(0.821, abs=1e-2)
        assert estimate.degree_trend < 1.3

    def test_height_cap(self):
        estimate = height_growth(parse_field(ROTATION, R), _rotation_window(), max_height=5.0)
        assert estimate.stopped_at_height
        assert len(estimate.heights) == 2

    def test_singular_step_stops_the_run(self):
        cube = parse_field({"dimension": 1, "components": [[{"coeff": 1, "exponents": [3]}]]}, R)
        estimate = height_growth(cube, PolarWindow.build([[1], [1]], Fraction(1, 4), R))
        assert estimate.singular_at == 3
        assert estimate.heights == pytest.approx([math.log(2)])
        assert estimate.classification == Growth.INCONCLUSIVE
        assert estimate.insufficient

    def test_few_iterates_are_insufficient(self):
        estimate = height_growth(parse_field(ROTATION, R), _rotation_window(), iters=4)
        assert estimate.insufficient
        assert estimate.classification == Growth.INCONCLUSIVE
        assert estimate.thresholds["subexponential_ratio"] == 1.05

    def test_double_mode_is_refused(self):
        window = PolarWindow.build([[1.0, 0.0]], 0.5, D)
        with pytest.raises(ScalarModeError):
            height_growth(parse_field(ROTATION, D), window)


def _seeded_run(seed: int, degree: int):
    """Full random H of the given degree on R^2, k = degree - 2, h = 1/10."""
    rng = np.random.default_rng(seed)
    terms = [(small_rational(rng), e) for e in exponent_vectors(2, degree)]
    spec = HamiltonianSpec.build(ScalarPoly.from_terms(2, terms, R), symplectic_structure(2, R), degree=degree)
    points = [[small_rational(rng), small_rational(rng)] for _ in range(degree - 2)]
    return height_growth(spec, PolarWindow.build(points, Fraction(1, 10), R))


class TestIntegrabilitySignature:
    def test_random_quartics_are_subexponential(self):
        estimates = [_seeded_run(seed, 4) for seed in range(1, 6)]
        growths = [e.classification for e in estimates]
        assert growths.count(Growth.SUBEXPONENTIAL) >= 4, [(e.mean_ratio, e.degree_trend) for e in estimates]

    def test_quartic_configuration_is_subexponential(self):
        config = load_config(CONFIGS / "quartic_entropy.json")
        estimate = height_growth(config.system, config.initial_window())
        assert estimate.classification == Growth.SUBEXPONENTIAL
        assert estimate.growth_degree <= 6.0
        assert estimate.degree_trend < 1.3

    def test_quartic_heights_fit_a_quadratic(self):
        config = load_config(CONFIGS / "quartic_entropy.json")
        estimate = height_growth(config.system, config.initial_window(), iters=12)
        assert len(estimate.heights) == 12
        assert estimate.quadratic_fit_r2 >= 0.95

    @pytest.mark.slow
    def test_random_quintics_are_exponential(self):
        estimates = [_seeded_run(seed, 5) for seed in range(1, 6)]
        exponential = [e for e in estimates if e.classification == Growth.EXPONENTIAL]
        assert len(exponential) >= 4, [(e.mean_ratio, e.degree_trend) for e in estimates]
        for e in exponential:
            assert min(e.growth_ratios[-4:]) > 1.2

    @pytest.mark.slow
    def test_quintic_configuration_is_exponential(self):
        config = load_config(CONFIGS / "quintic_entropy.json")
        estimate = height_growth(config.system, config.initial_window(), iters=10)
        assert config.k == 3
        assert estimate.classification == Growth.EXPONENTIAL
        assert min(estimate.growth_ratios[-4:]) > 1.2
