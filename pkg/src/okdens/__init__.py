"""Exact unimodularity testing and density prediction over rings of integers
of monogenic number fields, with seeded Monte-Carlo experiment drivers."""

from .errors import (BadBound, BadExponent, BadShape, BudgetExceeded,
                     DegreeMismatch, FactorizationTooHard, HasRationalRoot,
                     IndexOutOfRange, IrreducibilityUnverified, NotMaximal,
                     NotMonic, NotPrime, NotSquarefree, OkdensError,
                     UnverifiedAtP, ZeroPolynomial)
from .fieldcore import (Maximality, NumberField, dedekind_check, discriminant,
                        elem_add, elem_mul, elem_neg, elem_sub, norm,
                        parse_field)
from .splitting import PrimeSplit, reduce_elem, split_prime
from .linalg import IntMatrix, bareiss_det, hnf, hnf_pivots
from .unimodular import (INFINITE, MatrixOK, UnimodReport, is_unimodular,
                         is_unimodular_modp, matrix_from_json, matrix_to_json,
                         minors)
from .zeta import EulerProductResult, euler_factor, predicted_density
from .montecarlo import (ExperimentReport, brute_force_density,
                         run_experiment, sample_matrix, sweep_bounds,
                         write_sweep_csv)

__version__ = "0.1.0"

__all__ = [
    "OkdensError", "NotMonic", "NotSquarefree", "HasRationalRoot",
    "IrreducibilityUnverified", "NotMaximal", "DegreeMismatch", "NotPrime",
    "ZeroPolynomial", "BadShape", "BadBound", "BadExponent",
    "IndexOutOfRange", "UnverifiedAtP", "FactorizationTooHard",
    "BudgetExceeded",
    "Maximality", "NumberField", "parse_field", "discriminant",
    "dedekind_check", "elem_add", "elem_sub", "elem_neg", "elem_mul", "norm",
    "PrimeSplit", "split_prime", "reduce_elem",
    "IntMatrix", "bareiss_det", "hnf", "hnf_pivots",
    "MatrixOK", "UnimodReport", "INFINITE", "is_unimodular",
    "is_unimodular_modp", "minors", "matrix_from_json", "matrix_to_json",
    "EulerProductResult", "euler_factor", "predicted_density",
    "ExperimentReport", "run_experiment", "sweep_bounds", "sample_matrix",
    "brute_force_density", "write_sweep_csv",
    "__version__",
]
