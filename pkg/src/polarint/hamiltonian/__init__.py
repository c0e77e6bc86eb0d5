from polarint.hamiltonian.integrals import (
    KIntegralSet,
    even_k_two_integrals,
    k_integrals,
    omega,
    product_integral,
)
from polarint.hamiltonian.measure import (
    MeasureDensity,
    closed_form_jacobian,
    density_ratio,
    measure_density,
)
from polarint.hamiltonian.spec import (
    HamiltonianSpec,
    dump_hamiltonian,
    hamiltonian_field,
    modified_energy,
    parse_hamiltonian,
    polar_hamiltonian_step,
    symplectic_structure,
)

__all__ = [
    "HamiltonianSpec",
    "KIntegralSet",
    "MeasureDensity",
    "closed_form_jacobian",
    "density_ratio",
    "dump_hamiltonian",
    "even_k_two_integrals",
    "hamiltonian_field",
    "k_integrals",
    "measure_density",
    "modified_energy",
    "omega",
    "parse_hamiltonian",
    "polar_hamiltonian_step",
    "product_integral",
    "symplectic_structure",
]
