"""Finite fields, matrices and laws for GL_n(q) / PGL_n(q)."""

from .field import Fq, find_irreducible, get_field
from .laws import (
    ExponentSet,
    exponent_set,
    gl_law,
    lie_rank_bound_report,
    order_invariant,
    pgl_bound,
    pgl_exponents,
    pgl_law,
    verify_matrix_law,
)
from .matrix import charpoly, enumerate_gl, gl_order, irreducible_factor_degrees, matrix_group

__all__ = [
    "ExponentSet", "Fq", "charpoly", "enumerate_gl", "exponent_set", "find_irreducible", "get_field",
    "gl_law", "gl_order", "irreducible_factor_degrees", "lie_rank_bound_report", "matrix_group",
    "order_invariant", "pgl_bound", "pgl_exponents", "pgl_law", "verify_matrix_law",
]
