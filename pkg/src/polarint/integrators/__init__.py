from polarint.integrators.bootstrap import bootstrap, reference_flow
from polarint.integrators.polarmap import (
    inverse_polar_step,
    integrate,
    kahan_step,
    polar_form,
    polar_step,
    suspended_step,
)
from polarint.integrators.window import (
    BootstrapConfig,
    BootstrapMethod,
    PolarWindow,
    StepResult,
    Trajectory,
)

__all__ = [
    "BootstrapConfig",
    "BootstrapMethod",
    "PolarWindow",
    "StepResult",
    "Trajectory",
    "bootstrap",
    "integrate",
    "inverse_polar_step",
    "kahan_step",
    "polar_form",
    "polar_step",
    "reference_flow",
    "suspended_step",
]
