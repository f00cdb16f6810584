from .lattice import LatticeBox, Term, assemble, export_matrix
from .series import (SERIES_IDS, SeriesParams, TruncatedRep, box_for_series,
                     build_rep, series_algebra)
from .checks import (SU2SU2_CHARGES, SU2SU2_CHARGE_SHIFTS,
                     all_relation_residuals, casimir_matrix, charge_residual,
                     exact_apply_gen, exact_relation_residual,
                     exact_vector_norm, max_column_norm, poly_margins,
                     poly_matrix, relation_residual, spin_casimir_exact,
                     spin_casimir_residual, star_residuals)
from .models import build_model_operator, model_box
from .vectors import exact_special_vector, lowest_weight_probe, special_vector

__all__ = [
    "LatticeBox", "SERIES_IDS", "SU2SU2_CHARGES", "SU2SU2_CHARGE_SHIFTS",
    "SeriesParams", "Term", "TruncatedRep", "all_relation_residuals",
    "assemble", "box_for_series", "build_model_operator", "build_rep",
    "casimir_matrix", "charge_residual", "exact_apply_gen",
    "exact_relation_residual", "exact_special_vector", "exact_vector_norm",
    "export_matrix", "lowest_weight_probe", "max_column_norm", "model_box",
    "poly_margins", "poly_matrix", "relation_residual", "series_algebra",
    "spin_casimir_exact", "spin_casimir_residual", "special_vector",
    "star_residuals",
]
