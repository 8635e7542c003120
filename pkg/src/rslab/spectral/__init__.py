from .grid import Field, Grid, array_lp_norm, boundary_mass_fraction, lp_norm, quantize
from .cache import MultiplierCache
from .operator import apply_S, default_cache, operator_mesh, semigroup_defect, spectral_multiply
from .profiles import ProfileKind, auto_box, initial_profile
from .decay import (
	ContinuityReport,
	DecayFit,
	admissible_q,
	check_strong_continuity,
	decay_exponent,
	measure_decay_exponent,
	shared_mesh,
)

__all__ = [
	"Field",
	"Grid",
	"array_lp_norm",
	"boundary_mass_fraction",
	"lp_norm",
	"quantize",
	"MultiplierCache",
	"apply_S",
	"default_cache",
	"operator_mesh",
	"semigroup_defect",
	"spectral_multiply",
	"ProfileKind",
	"auto_box",
	"initial_profile",
	"ContinuityReport",
	"DecayFit",
	"admissible_q",
	"check_strong_continuity",
	"decay_exponent",
	"measure_decay_exponent",
	"shared_mesh",
]
