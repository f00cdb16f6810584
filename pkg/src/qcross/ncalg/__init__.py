"""Symbolic layer: presentations, rewriting, Hopf operations, morphisms."""

from .hopf import (antipode_inv_U, antipode_U, coord_coproduct, coord_counit,
                   coproduct_U, counit_U, pairing, right_action,
                   right_action_by_pairing)
from .morphisms import psi_embed, rho_embed, theta
from .parser import parse, ParseError
from .poly import MASTER_ORDER, NCPoly, TensorPoly
from .presentations import (Presentation, get_presentation,
                            global_star_table, presentation_names)
from .rewrite import (check_local_confluence, ConfluenceReport, involution,
                      multiply, normal_form, star)

__all__ = [
    "antipode_U", "antipode_inv_U", "check_local_confluence",
    "ConfluenceReport", "coord_coproduct", "coord_counit", "coproduct_U",
    "counit_U", "get_presentation", "global_star_table", "involution",
    "MASTER_ORDER", "multiply", "NCPoly", "normal_form", "pairing", "parse",
    "ParseError", "Presentation", "presentation_names", "psi_embed",
    "right_action", "right_action_by_pairing", "rho_embed", "star",
    "TensorPoly", "theta",
]
