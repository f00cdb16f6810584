"""Cross product *-algebras of quantized gl2/su2 with quantum coordinate
algebras: symbolic normal forms, truncated matrix models of the standard
representation series, and several routes to the invariant (Haar) state.
"""

from .exact import Exact
from .qscalars import (
    QContext,
    alpha_jl,
    alpha_jl_sq,
    casimir_eigenvalue,
    lambda_n,
    lambda_n_sq,
    q_number,
    zeta,
)

__all__ = [
    "Exact",
    "QContext",
    "alpha_jl",
    "alpha_jl_sq",
    "casimir_eigenvalue",
    "lambda_n",
    "lambda_n_sq",
    "q_number",
    "zeta",
]
