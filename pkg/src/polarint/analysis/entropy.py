"""Arithmetic height growth along exact iterates, a proxy for algebraic entropy.

Integrable birational maps have polynomially growing heights; generic ones
grow exponentially. The thresholds below are this package's own choice and
are reported with every estimate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from polarint.algebra.scalar import ScalarMode
from polarint.analysis.stepping import Target, stepper
from polarint.errors import ScalarModeError
from polarint.integrators.window import PolarWindow

logger = logging.getLogger(__name__)

DEFAULT_ITERS = 14
MIN_ITERS = 6
SUBEXPONENTIAL_RATIO = 1.05
EXPONENTIAL_RATIO = 1.2
MAX_POLYNOMIAL_DEGREE = 6.0
# Exponential growth makes n (r_n - 1) grow like n; polynomial growth keeps it flat.
MAX_DEGREE_TREND = 1.3
# Stop once a height passes this many nats (~87k decimal digits).
MAX_HEIGHT = 2e5


class Growth(str, Enum):
    SUBEXPONENTIAL = "subexponential"
    EXPONENTIAL = "exponential"
    INCONCLUSIVE = "inconclusive"


class GrowthFit(NamedTuple):
    growth: Growth
    mean_ratio: float | None
    degree: float | None
    degree_trend: float | None
    ratios: tuple[float, ...]


@dataclass(frozen=True)
class EntropyEstimate:
    heights: tuple[float, ...]
    growth_ratios: tuple[float, ...]
    classification: Growth
    mean_ratio: float | None = None
    growth_degree: float | None = None
    degree_trend: float | None = None
    quadratic_fit_r2: float | None = None
    insufficient: bool = False
    singular_at: int | None = None
    stopped_at_height: bool = False
    thresholds: dict = field(
        default_factory=lambda: {
            "subexponential_ratio": SUBEXPONENTIAL_RATIO,
            "exponential_ratio": EXPONENTIAL_RATIO,
            "max_polynomial_degree": MAX_POLYNOMIAL_DEGREE,
            "max_degree_trend": MAX_DEGREE_TREND,
        }
    )


def height(x) -> float:
    """max over coordinates of log(max(|numerator|, denominator)) in lowest terms."""
    out = 0.0
    for v in x:
        if not isinstance(v, Fraction):
            raise ScalarModeError(f"Heights are defined for rationals, got {type(v).__name__}.")
        out = max(out, math.log(max(abs(v.numerator), v.denominator)))
    return out


def _quadratic_r2(heights: Sequence[float]) -> float | None:
    if len(heights) < 4:
        return None
    n = np.arange(1, len(heights) + 1, dtype=float)
    y = np.asarray(heights, dtype=float)
    fit = np.polyval(np.polyfit(n, y, 2), n)
    total = float(np.sum((y - y.mean()) ** 2))
    if total == 0.0:
        return 1.0
    return 1.0 - float(np.sum((y - fit) ** 2)) / total


def _degree(block: Sequence[tuple[int, float]]) -> float:
    return float(np.mean([n * (r - 1.0) for n, r in block]))


def classify(heights: Sequence[float], iters: int) -> GrowthFit:
    """Classify height growth from the ratios r_n = h_{n+1}/h_n (n counted from 1).

    Ratios are taken where h_n > 0. Let the tail be the last max(4, iters/3)
    of them. A mean tail ratio <= 1.05 is subexponential. Otherwise
    p = mean(n (r_n - 1)) estimates the degree of polynomial growth on the
    tail and on the block just before it. Growth is subexponential when p
    stays bounded (<= 6) and does not rise (tail over previous block < 1.3).
    Failing that, a mean tail ratio >= 1.2 is exponential and anything else
    inconclusive. Without a previous block only the ratio thresholds apply,
    with a bounded p deciding the band between them.
    """
    indexed = [(n, heights[n] / heights[n - 1]) for n in range(1, len(heights)) if heights[n - 1] > 0]
    ratios = tuple(r for _, r in indexed)
    if iters < MIN_ITERS or len(indexed) < 2:
        return GrowthFit(Growth.INCONCLUSIVE, None, None, None, ratios)
    size = max(4, iters // 3)
    tail = indexed[-size:]
    mean = float(np.mean([r for _, r in tail]))
    degree = _degree(tail)
    if mean <= SUBEXPONENTIAL_RATIO:
        return GrowthFit(Growth.SUBEXPONENTIAL, mean, degree, None, ratios)

    trend = None
    previous = indexed[-2 * size : -size]
    if len(previous) == size:
        earlier = _degree(previous)
        if earlier > 0:
            trend = degree / earlier
    bounded = degree <= MAX_POLYNOMIAL_DEGREE
    if trend is not None:
        if bounded and trend < MAX_DEGREE_TREND:
            return GrowthFit(Growth.SUBEXPONENTIAL, mean, degree, trend, ratios)
    elif bounded and mean < EXPONENTIAL_RATIO:
        return GrowthFit(Growth.SUBEXPONENTIAL, mean, degree, None, ratios)
    growth = Growth.EXPONENTIAL if mean >= EXPONENTIAL_RATIO else Growth.INCONCLUSIVE
    return GrowthFit(growth, mean, degree, trend, ratios)


def height_growth(
    target: Target,
    window: PolarWindow,
    iters: int = DEFAULT_ITERS,
    max_height: float = MAX_HEIGHT,
) -> EntropyEstimate:
    """Iterate exactly ``iters`` times and classify the growth of the new points' heights."""
    if window.mode is not ScalarMode.RATIONAL:
        raise ScalarModeError("Height growth needs exact rational iterates; run in rational mode.")
    step = stepper(target, window.k)
    heights: list[float] = []
    singular_at = None
    capped = False
    for _ in range(iters):
        res = step(window)
        if res.singular:
            singular_at = window.step_index + 1
            logger.warning("height growth stopped by a singular step at index %d", singular_at)
            break
        window = window.shifted(res.new_point)
        heights.append(height(res.new_point))
        logger.debug("iterate %d: height %.3f", len(heights), heights[-1])
        if heights[-1] > max_height:
            capped = True
            logger.info("height cap %.0f reached after %d iterates", max_height, len(heights))
            break
    fit = classify(heights, iters)
    logger.info(
        "height growth: %s (mean ratio %s, degree %s, trend %s)",
        fit.growth.value,
        fit.mean_ratio,
        fit.degree,
        fit.degree_trend,
    )
    return EntropyEstimate(
        heights=tuple(heights),
        growth_ratios=fit.ratios,
        classification=fit.growth,
        mean_ratio=fit.mean_ratio,
        growth_degree=fit.degree,
        degree_trend=fit.degree_trend,
        quadratic_fit_r2=_quadratic_r2(heights),
        insufficient=iters < MIN_ITERS or len(fit.ratios) < 2,
        singular_at=singular_at,
        stopped_at_height=capped,
    )
