"""Punctured CSS codes for teleportation over purified, imperfect EPR pairs."""

from .css import CodeRegistry, CssCode, builtin_registry, distances, make_css
from .gf2 import BinaryMatrix, BinaryVector
from .puncturing import PunctureKind, PunctureLineage, puncture_x_type, puncture_z_type, replay
from .purification import BellDiagonalState, PauliChannel, dejmps_round, purify, to_channel, werner
from .reliability import branch_success, find_crossing, logical_error, select_code, sweep

__all__ = [
    "BellDiagonalState",
    "BinaryMatrix",
    "BinaryVector",
    "CodeRegistry",
    "CssCode",
    "PauliChannel",
    "PunctureKind",
    "PunctureLineage",
    "branch_success",
    "builtin_registry",
    "dejmps_round",
    "distances",
    "find_crossing",
    "logical_error",
    "make_css",
    "puncture_x_type",
    "puncture_z_type",
    "purify",
    "replay",
    "select_code",
    "sweep",
    "to_channel",
    "werner",
]
