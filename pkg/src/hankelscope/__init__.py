"""Toeplitz operators, Hankel products and Berezin transforms on product domains."""

from .domains import FactorDomain, ProductDomain, basis_norm, kernel_eval, moment
from .symbols import (LaurentSymbol, radialize, restrict_slice, symbol_conjugate,
                      symbol_derivative, symbol_multiply)
from .operators import (OperatorMatrix, Window, hankel_product_matrix, singular_values,
                        toeplitz_matrix)
from .berezin import (BerezinProfile, PathSpec, berezin_function, berezin_operator,
                      boundary_profile, kernel_vector)

__version__ = "0.1.0"
