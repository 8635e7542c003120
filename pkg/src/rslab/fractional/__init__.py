from .special import gamma_fn, beta_fn
from .params import (
	FracParams,
	TimeMesh,
	ContourSpec,
	as_mesh,
	default_grading,
	relaxation_grading,
	min_truncation,
)
from .calculus import (
	kernel_h,
	angle_bracket,
	one_star_h,
	rl_integral,
	rl_integral_matrix,
	rl_right_derivative,
	RightDerivative,
)

__all__ = [
	"gamma_fn",
	"beta_fn",
	"FracParams",
	"TimeMesh",
	"ContourSpec",
	"as_mesh",
	"default_grading",
	"relaxation_grading",
	"min_truncation",
	"kernel_h",
	"angle_bracket",
	"one_star_h",
	"rl_integral",
	"rl_integral_matrix",
	"rl_right_derivative",
	"RightDerivative",
]
