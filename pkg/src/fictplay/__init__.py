"""Exact fictitious-play laboratory for bimatrix games and the K^n(z) hard instance."""

__version__ = "0.1.0"

from .construction import build_k, build_k_closed_form, spiral_order, validate_structure
from .engine import FPState, Stop, SwitchEvent, Trace, init_state, run, step
from .fast_forward import advance, first_hit, rounds_until_switch, run_ff
from .game import MixedProfile, PayoffMatrix, Profile
from .rules import make_rule

__all__ = [
    "FPState", "MixedProfile", "PayoffMatrix", "Profile", "Stop", "SwitchEvent", "Trace",
    "advance", "build_k", "build_k_closed_form", "first_hit", "init_state", "make_rule",
    "rounds_until_switch", "run", "run_ff", "spiral_order", "step", "validate_structure",
]
