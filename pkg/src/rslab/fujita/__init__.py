from rslab.mild import critical_r
from rslab.spectral import admissible_q

from .formulas import (
	FALLBACK_R,
	SystemCritical,
	choose_indices,
	critical_curve_system,
	critical_exponent,
	default_indices,
	index_window,
	inequality_exponent,
	smallness_scale,
	system_indices,
)
from .testfns import (
	CutoffKind,
	LemmaCheck,
	TestFunctionSpec,
	default_lambda,
	theta,
	theta_frac_derivative,
	theta_frac_derivative_bound,
	theta_prime,
	verify_lemma43,
	verify_lemma44,
)
from .cutoff import cutoff_field, cutoff_laplacian, cutoff_xi, laplacian_ratio, profile_constant
from .functional import (
	InequalityReport,
	WeakFormTerms,
	blowup_functional,
	functional_series,
	verify_blowup_inequality,
	weak_form_residual,
	weak_form_terms,
)
from .sweep import SweepReport, dichotomy_sweep, initial_data, resolve_workers

__all__ = [
	"critical_r",
	"admissible_q",
	"FALLBACK_R",
	"SystemCritical",
	"choose_indices",
	"critical_curve_system",
	"critical_exponent",
	"default_indices",
	"index_window",
	"inequality_exponent",
	"smallness_scale",
	"system_indices",
	"CutoffKind",
	"LemmaCheck",
	"TestFunctionSpec",
	"default_lambda",
	"theta",
	"theta_frac_derivative",
	"theta_frac_derivative_bound",
	"theta_prime",
	"verify_lemma43",
	"verify_lemma44",
	"cutoff_field",
	"cutoff_laplacian",
	"cutoff_xi",
	"laplacian_ratio",
	"profile_constant",
	"InequalityReport",
	"WeakFormTerms",
	"blowup_functional",
	"functional_series",
	"verify_blowup_inequality",
	"weak_form_residual",
	"weak_form_terms",
	"SweepReport",
	"dichotomy_sweep",
	"initial_data",
	"resolve_workers",
]
