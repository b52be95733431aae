"""Exact block-symmetric Laurent polynomial toolkit and verification harness.

The library models a convolution algebra of classes supported on diagonal
and single-step margin matrices, with elements in block-symmetric Laurent
polynomial rings over the rationals.  All arithmetic is exact; every
printed identity the package implements is re-checked by the CLI harness
(`qsteinberg suite small`).
"""

from .exactpoly import (
    LaurentPoly,
    RationalExpr,
    ExactPolyError,
    MismatchedVariablesError,
    NotDivisibleError,
    ResidualDenominatorError,
    exact_divide,
    permute_variables,
    q_factorial,
    q_int,
    parse,
    render,
)
from .blocksym import (
    BlockStructure,
    Composition,
    NotSymmetricError,
    OverlappingBlocksError,
    monomial_decompose,
    shuffle_symmetrize,
    symmetrize_full,
)
from .matcomb import CompMatrix, diag_matrix, double_coset_count, e_matrix, enumerate_matrices
from .zseries import Direction, IndexVariant, NormVariant, TruncatedSeries, cartan_series, h_closed, h_image
from .kconv import KClass, KernelConvention, convolve, convolve_diag, convolve_estep
from .drinfeld import GeneratorLabel, phi_divided_power, phi_generator, verify_e05
from .surject import Witness, alpha_norm, evaluate_witness, express, express_power, verify_e6
from .cyclo import CyclotomicNumber, divided_power_nonvanishing, specialize_at_root

__all__ = [
    "LaurentPoly", "RationalExpr", "ExactPolyError", "MismatchedVariablesError",
    "NotDivisibleError", "ResidualDenominatorError", "exact_divide",
    "permute_variables", "q_factorial", "q_int", "parse", "render",
    "BlockStructure", "Composition", "NotSymmetricError", "OverlappingBlocksError",
    "monomial_decompose", "shuffle_symmetrize", "symmetrize_full",
    "CompMatrix", "diag_matrix", "double_coset_count", "e_matrix", "enumerate_matrices",
    "Direction", "IndexVariant", "NormVariant", "TruncatedSeries",
    "cartan_series", "h_closed", "h_image",
    "KClass", "KernelConvention", "convolve", "convolve_diag", "convolve_estep",
    "GeneratorLabel", "phi_divided_power", "phi_generator", "verify_e05",
    "Witness", "alpha_norm", "evaluate_witness", "express", "express_power", "verify_e6",
    "CyclotomicNumber", "divided_power_nonvanishing", "specialize_at_root",
]
