from .curve import Method, RelaxationCurve, layered_oracle_curve, oracle_curve
from .volterra import convolution_matrix, relaxation_table, solve_volterra, volterra_identity_residual
from .contour import ContourValue, contour_curve, contour_integral, solve_contour
from .checks import (
	DecayBound,
	MonotonicityReport,
	OdeResidual,
	check_complete_monotonicity,
	check_decay_bound,
	check_relaxation_ode,
)

__all__ = [
	"Method",
	"RelaxationCurve",
	"oracle_curve",
	"layered_oracle_curve",
	"convolution_matrix",
	"relaxation_table",
	"solve_volterra",
	"volterra_identity_residual",
	"ContourValue",
	"contour_curve",
	"contour_integral",
	"solve_contour",
	"DecayBound",
	"MonotonicityReport",
	"OdeResidual",
	"check_complete_monotonicity",
	"check_decay_bound",
	"check_relaxation_ode",
]
