"""The verification suite run by ``polarint verify``.

Every check reads the trajectory it is given, so re-verifying a trajectory
file reproduces the values of the run that wrote it.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from polarint.algebra.polarize import eval_form
from polarint.algebra.polyfield import PolyVectorField, ScalarPoly
from polarint.algebra.scalar import Scalar, ScalarMode
from polarint.analysis.checks import (
    CheckResult,
    Status,
    check_measure_jacobian,
    check_scaling,
    check_self_adjoint,
    default_tolerance,
    merge,
    relative_gap,
)
from polarint.analysis.drift import k_integral_drift
from polarint.analysis.oracles import ExplicitQuarticMap, ScalarOracleState, explicit_quartic_step, scalar_oracle_trajectory
from polarint.analysis.stepping import form_of, window_at
from polarint.errors import ArityError
from polarint.hamiltonian.measure import measure_density
from polarint.hamiltonian.spec import HamiltonianSpec, symplectic_structure
from polarint.integrators.control import integrate_leapfrog
from polarint.integrators.polarmap import kahan_step
from polarint.integrators.window import PolarWindow, Trajectory

logger = logging.getLogger(__name__)

System = Union[PolyVectorField, HamiltonianSpec]

# Relative k-integral drift the leapfrog control must exceed to count as the expected failure.
LEAPFROG_WITNESS = 1e-3
MAX_WINDOWS = 5


def random_unit_scaling(k: int, mode: ScalarMode, rng: np.random.Generator) -> list[Scalar]:
    """k factors with product one, small rationals (numerators and denominators in 1..5, random sign)."""
    factors = []
    for _ in range(k - 1):
        num, den = rng.integers(1, 6, size=2)
        sign = -1 if rng.integers(0, 2) else 1
        factors.append(Fraction(sign * int(num), int(den)))
    prod = Fraction(1)
    for v in factors:
        prod *= v
    factors.append(1 / prod)
    return [v if mode.exact else float(v) for v in factors]


def _homogeneous_target(system: System, k: int) -> bool:
    if isinstance(system, HamiltonianSpec):
        return True
    return system.is_homogeneous and (system.degree is None or system.degree == k + 1)


def _tolerance(name: str, mode: ScalarMode, overrides: Mapping[str, Scalar], double: float) -> Scalar:
    if name in overrides:
        return overrides[name]
    return default_tolerance(mode, double)


def _skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name, Status.SKIPPED, None, None, {"reason": reason})


def check_step_residual(system: System, trajectory: Trajectory, k: int, tolerance: Scalar) -> CheckResult:
    """(x_k - x_0) - k h F(x_0, ..., x_k) over every window of the trajectory."""
    F = form_of(system, k)
    mode = trajectory.mode
    worst = mode.zero()
    kh = k * trajectory.h
    for j in range(len(trajectory) - k):
        pts = trajectory.points[j : j + k + 1]
        lhs = pts[-1] - pts[0]
        worst = max(worst, relative_gap(lhs, kh * eval_form(F, pts), mode))
    status = Status.PASS if worst <= tolerance else Status.FAIL
    return CheckResult("step-residual", status, worst, tolerance, {"windows": len(trajectory) - k})


def check_k_integrals(spec: HamiltonianSpec, trajectory: Trajectory, k: int, tolerance: Scalar) -> CheckResult:
    if spec.Omega is None:
        return _skipped("k-integrals", "structure matrix K is singular")
    if len(trajectory) < 2 * k + 1:
        return _skipped("k-integrals", f"trajectory too short for stride {k}")
    reports = k_integral_drift(spec, trajectory, k, tolerance)
    worst = max(r.max_rel_drift for r in reports)
    status = Status.PASS if all(r.passed for r in reports) else Status.FAIL
    details = {
        "samples": len(reports[0].series),
        "max_abs_drift": [trajectory.mode.format(r.max_abs_drift) for r in reports],
    }
    return CheckResult("k-integrals", status, worst, tolerance, details)


def check_leapfrog_control(spec: HamiltonianSpec, window: PolarWindow, steps: int) -> CheckResult:
    """k-integral drift of the two-step leapfrog, which must not conserve them.

    The control always runs in double arithmetic.
    """
    name = "k-integrals-leapfrog-control"
    if window.k != 2 or spec.Omega is None:
        return _skipped(name, "leapfrog control needs k = 2 and an invertible K")
    double = ScalarMode.DOUBLE
    spec_d = HamiltonianSpec.build(
        ScalarPoly.from_terms(spec.dimension, [(float(m.coeff), m.exponents) for m in spec.H.monomials], double),
        [[float(v) for v in row] for row in spec.K],
        spec.degree,
    )
    start = PolarWindow.build([[float(v) for v in p] for p in window.points], float(window.h), double, window.step_index)
    traj = integrate_leapfrog(spec_d.field, start, steps)
    reports = k_integral_drift(spec_d, traj, 2, LEAPFROG_WITNESS)
    worst = max(r.max_rel_drift for r in reports)
    status = Status.EXPECTED_FAIL if worst >= LEAPFROG_WITNESS else Status.FAIL
    if status is Status.FAIL:
        logger.warning("leapfrog control conserved the k-integrals (drift %.3e)", worst)
    return CheckResult(name, status, worst, LEAPFROG_WITNESS, {"steps": steps})


def _quartic_coefficients(spec: HamiltonianSpec) -> list[Scalar] | None:
    if spec.dimension != 2 or spec.degree != 4:
        return None
    if np.any(spec.K != symplectic_structure(2, spec.mode)):
        return None
    coeff = {m.exponents: m.coeff for m in spec.H.monomials}
    zero = spec.mode.zero()
    scale = {(4, 0): 1, (3, 1): 4, (2, 2): 6, (1, 3): 4, (0, 4): 1}
    return [coeff.get(e, zero) / s for e, s in scale.items()]


def _scalar_power(field: PolyVectorField, k: int) -> bool:
    if field.dimension != 1 or len(field.monomials) != 1:
        return False
    (m,) = field.monomials
    return m.exponents == (k + 1,) and m.coeff == 1


def check_oracles(system: System, trajectory: Trajectory, k: int, tolerance: Scalar) -> CheckResult:
    """Compare the trajectory with a closed-form map when one exists for this system."""
    mode = trajectory.mode
    name = "oracle-equivalence"
    gaps: list[Scalar] = []
    if isinstance(system, HamiltonianSpec):
        coefficients = _quartic_coefficients(system)
        if coefficients is None:
            return _skipped(name, "no closed-form map for this Hamiltonian")
        qmap = ExplicitQuarticMap.build(coefficients, 4 * trajectory.h, mode)
        for j in range(len(trajectory) - 2):
            window = window_at(trajectory, j, 2)
            gaps.append(relative_gap(explicit_quartic_step(qmap, window), trajectory.points[j + 2], mode))
            density = measure_density(system, window).density
            if density is not None:
                gaps.append(relative_gap([qmap.density(window)], [density], mode))
        oracle = "explicit-quartic"
    elif _scalar_power(system, k):
        state = ScalarOracleState.start([p[0] for p in trajectory.points[:k]], trajectory.h, mode)
        points, _ = scalar_oracle_trajectory(state, len(trajectory) - k)
        gaps = [relative_gap(p, [x], mode) for p, x in zip(trajectory.points, points)]
        oracle = "scalar-power"
    elif k == 1 and (system.degree or 0) <= 2:
        for a, b in zip(trajectory.points, trajectory.points[1:]):
            gaps.append(relative_gap(b, kahan_step(system, a, trajectory.h), mode))
        oracle = "kahan"
    else:
        return _skipped(name, "no closed-form map for this field")
    worst = max(gaps, default=mode.zero())
    status = Status.PASS if worst <= tolerance else Status.FAIL
    return CheckResult(name, status, worst, tolerance, {"oracle": oracle, "comparisons": len(gaps)})


def run_checks(
    system: System,
    trajectory: Trajectory,
    k: int,
    *,
    scaling: Sequence[Scalar] | None = None,
    seed: int = 1,
    tolerances: Mapping[str, Scalar] | None = None,
    leapfrog_control: bool = False,
    max_windows: int = MAX_WINDOWS,
) -> list[CheckResult]:
    mode = trajectory.mode
    overrides = dict(tolerances or {})
    if len(trajectory) < k + 1:
        raise ArityError(f"Need at least {k + 1} trajectory points to verify a {k}-step map.")
    windows = [window_at(trajectory, j, k) for j in range(min(max_windows, len(trajectory) - k + 1))]
    results: list[CheckResult] = []
    homogeneous = _homogeneous_target(system, k)
    hamiltonian = isinstance(system, HamiltonianSpec)

    if homogeneous:
        results.append(check_step_residual(system, trajectory, k, _tolerance("step-residual", mode, overrides, 1e-12)))
    else:
        results.append(_skipped("step-residual", "field is integrated through its suspension"))

    if hamiltonian:
        tol = _tolerance("k-integrals", mode, overrides, 1e-11)
        results.append(check_k_integrals(system, trajectory, k, tol))
        if leapfrog_control:
            results.append(check_leapfrog_control(system, windows[0], len(trajectory) - k))
        tol = _tolerance("measure-jacobian", mode, overrides, 1e-10)
        results.append(merge("measure-jacobian", [check_measure_jacobian(system, w, tolerance=tol) for w in windows]))
    else:
        results.append(_skipped("k-integrals", "not a Hamiltonian system"))
        results.append(_skipped("measure-jacobian", "not a Hamiltonian system"))

    if homogeneous:
        tol = _tolerance("self-adjoint", mode, overrides, 1e-12)
        results.append(merge("self-adjoint", [check_self_adjoint(system, w, tol) for w in windows]))
        lam = list(scaling) if scaling is not None else random_unit_scaling(k, mode, np.random.default_rng(seed))
        tol = _tolerance("scaling", mode, overrides, 1e-12)
        results.append(check_scaling(system, windows[0], lam, tol))
    else:
        results.append(_skipped("self-adjoint", "field is not homogeneous"))
        results.append(_skipped("scaling", "field is not homogeneous"))

    results.append(check_oracles(system, trajectory, k, _tolerance("oracle-equivalence", mode, overrides, 1e-12)))
    for r in results:
        logger.info("check %s: %s (residual %s)", r.name, r.status.value, r.max_residual)
    return results
