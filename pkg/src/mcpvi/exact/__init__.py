"""Exact cyclotomic arithmetic and linear algebra."""

from .cyclo import (
    CycloNum,
    CycloParseError,
    FieldOrderError,
    as_cyclo,
    common_order,
    cyclotomic_polynomial,
    field_order_cap,
    get_field_order_cap,
    parse,
    render,
    set_field_order_cap,
    totient,
    zeta,
)
from .matrix import Matrix, kernel_from_rows, poly_eval, rank_and_kernel, row_space, rref, span_dim
from .spectral import (
    EigenReport,
    Eigenvalue,
    JordanData,
    generalized_multiplicity,
    jordan_data,
    jordan_matrix,
    rational_eigenvalues,
    rank_sequence,
    root_of_unity_log,
    roots_of_unity_eigenvalues,
    sqrt_cyclo,
)

__all__ = [
    "CycloNum", "CycloParseError", "EigenReport", "Eigenvalue", "FieldOrderError", "JordanData",
    "Matrix", "as_cyclo", "common_order", "cyclotomic_polynomial", "field_order_cap",
    "generalized_multiplicity", "get_field_order_cap", "jordan_data", "jordan_matrix", "kernel_from_rows", "parse",
    "poly_eval", "rank_and_kernel", "rational_eigenvalues", "rank_sequence", "render", "root_of_unity_log",
    "roots_of_unity_eigenvalues", "row_space", "rref", "set_field_order_cap", "span_dim",
    "sqrt_cyclo", "totient", "zeta",
]
