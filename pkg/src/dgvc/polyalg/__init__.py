"""Exact commutative algebra kernel."""

from .poly import MultiPoly, PolyRing, fmt_q, parse_q
from .modules import (
    INFINITE,
    FiniteModule,
    FpGradedModule,
    HilbertSeries,
    PolyIdeal,
    Submodule,
    apply_matrix,
    buchberger,
    column_to_vec,
    module_kernel,
    normal_form,
    poly_to_vec,
    quotient_dimension,
    vec_to_column,
)
from .ratfunc import RationalFunction, poly_gcd

__all__ = [
    "MultiPoly", "PolyRing", "fmt_q", "parse_q", "INFINITE", "FiniteModule", "FpGradedModule",
    "HilbertSeries", "PolyIdeal", "Submodule", "apply_matrix", "buchberger", "column_to_vec",
    "module_kernel", "normal_form", "poly_to_vec", "quotient_dimension", "vec_to_column",
    "RationalFunction", "poly_gcd",
]
