from polarint.algebra.polarize import (
    SymMultilinearForm,
    contract_to_bilinear,
    contract_to_matrix,
    eval_form,
    eval_form_subsets,
    polarize,
)
from polarint.algebra.polyfield import (
    Monomial,
    PolyVectorField,
    ScalarPoly,
    degree_split,
    dump_field,
    evaluate_field,
    evaluate_poly,
    gradient,
    homogenize,
    parse_field,
    parse_scalar_poly,
)
from polarint.algebra.scalar import Scalar, ScalarMode

__all__ = [
    "Monomial",
    "PolyVectorField",
    "Scalar",
    "ScalarMode",
    "ScalarPoly",
    "SymMultilinearForm",
    "contract_to_bilinear",
    "contract_to_matrix",
    "degree_split",
    "dump_field",
    "eval_form",
    "eval_form_subsets",
    "evaluate_field",
    "evaluate_poly",
    "gradient",
    "homogenize",
    "parse_field",
    "parse_scalar_poly",
    "polarize",
]
