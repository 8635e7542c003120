from .nonlinearity import NonlinearitySpec
from .record import EvolutionRecord, Status
from .duhamel import (
	DEFAULT_THRESHOLD_FACTOR,
	GLOBAL_DECAY_RATIO,
	duhamel_evolve,
	duhamel_evolve_system,
	estimate_blowup_time,
	panel_weight_means,
)
from .smallness import (
	beta_one,
	contraction_radius,
	critical_r,
	local_existence_horizon,
	system_beta_constants,
	system_contraction_radius,
)

__all__ = [
	"NonlinearitySpec",
	"EvolutionRecord",
	"Status",
	"DEFAULT_THRESHOLD_FACTOR",
	"GLOBAL_DECAY_RATIO",
	"duhamel_evolve",
	"duhamel_evolve_system",
	"estimate_blowup_time",
	"panel_weight_means",
	"beta_one",
	"contraction_radius",
	"critical_r",
	"local_existence_horizon",
	"system_beta_constants",
	"system_contraction_radius",
]
