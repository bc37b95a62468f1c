"""Short laws for finite groups: free-group words, permutation and matrix
groups, nested-commutator combination, and exhaustive verification."""

from .certificate import GroupSpec, LawCertificate, Outcome, VerifyMode
from .combine import CombineTrace, combine, power_closure
from .perm import Perm
from .symlaw import RandomSearchConfig, landau_g, landau_law, order_law, random_law, recursive_law, verify_law, verify_sym
from .word import Word, WordExpr, flatten, nominal_length, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "CombineTrace", "GroupSpec", "LawCertificate", "Outcome", "Perm", "RandomSearchConfig", "VerifyMode", "Word",
    "WordExpr", "combine", "flatten", "landau_g", "landau_law", "nominal_length", "order_law", "parse",
    "power_closure", "random_law", "recursive_law", "serialize", "verify_law", "verify_sym",
]
