"""Effective t-motifs and abelian t-modules over F_q(theta)."""

from .anderson import (
    TModule,
    carlitz,
    carlitz_power,
    direct_sum_tmodule,
    drinfeld,
    lie_check,
    motif_of_tmodule,
    point_act,
    validate_abelian,
)
from .errors import TMotifError
from .ext1 import (
    ExtClass,
    dual_motif,
    dual_sequence_check,
    extension_to_point,
    point_to_extension,
    reduce_extension,
)
from .motif import SigmaModule, carlitz_motif, unit_motif, validate_effective
from .parse import parse_definitions
from .ratfunc import function_field

__all__ = [
    "ExtClass",
    "SigmaModule",
    "TMotifError",
    "TModule",
    "carlitz",
    "carlitz_motif",
    "carlitz_power",
    "direct_sum_tmodule",
    "drinfeld",
    "dual_motif",
    "dual_sequence_check",
    "extension_to_point",
    "function_field",
    "lie_check",
    "motif_of_tmodule",
    "parse_definitions",
    "point_act",
    "point_to_extension",
    "reduce_extension",
    "unit_motif",
    "validate_abelian",
    "validate_effective",
]
