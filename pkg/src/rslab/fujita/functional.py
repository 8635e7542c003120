from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from rslab.errors import InputError
from rslab.fractional import FracParams
from rslab.fujita.cutoff import cutoff_field
from rslab.fujita.formulas import inequality_exponent
from rslab.fujita.testfns import CutoffKind, TestFunctionSpec, default_lambda, theta, theta_frac_derivative
from rslab.mild import EvolutionRecord, NonlinearitySpec, panel_weight_means
from rslab.spectral import Field, Grid

logger = logging.getLogger(__name__)

# slack on the fitted R-power before the bound counts as violated
SLOPE_TOLERANCE = 0.1


def _checked_history(record: EvolutionRecord, spec: TestFunctionSpec) -> np.ndarray:
	if record.history is None or record.grid is None:
		raise InputError("the functional needs a run made with keep_history=True")
	if record.mesh.tmax < spec.T * (1.0 - 1e-12):
		raise InputError(f"run reaches t={record.mesh.tmax:g}, test function needs [0, {spec.T:g}]")
	return record.history


def _time_weights(record: EvolutionRecord, gamma: float) -> np.ndarray:
	"""Trapezoid weights for int t^gamma g(t) dt over the record's nodes."""
	panel = 0.5 * panel_weight_means(record.mesh, gamma) * record.mesh.steps
	weights = np.zeros(len(record.mesh))
	weights[:-1] += panel
	weights[1:] += panel
	return weights


def _space_integral(values: np.ndarray, grid: Grid) -> np.ndarray:
	axes = tuple(range(values.ndim - grid.dim, values.ndim))
	return values.sum(axis=axes) * grid.cell_volume


def blowup_functional(record: EvolutionRecord, nl: NonlinearitySpec, spec: TestFunctionSpec, component: int = 0) -> float:
	"""int_0^T int_{B_R} w_sigma t^gamma u^rho xi_R theta dx dt for the source of `component`."""
	history = _checked_history(record, spec)
	grid = record.grid
	feeding, rho = nl.sources()[component]
	xi = cutoff_field(grid, spec).values
	with np.errstate(over="ignore"):
		density = nl.weight(grid) * np.maximum(history[:, feeding], 0.0) ** rho * xi
	inner = _space_integral(density, grid)
	return float(np.sum(_time_weights(record, nl.gamma) * theta(record.times, spec) * inner))


def functional_series(
	record: EvolutionRecord,
	nl: NonlinearitySpec,
	radii: Sequence[float],
	beta: float = 2.0,
	cutoff_kind: CutoffKind = "SmoothBump",
	component: int = 0,
) -> np.ndarray:
	"""The functional for each R with T = R^beta, all read from one run."""
	rho = nl.sources()[component][1]
	lam = default_lambda(rho / (rho - 1.0)) if rho > 1.0 else default_lambda(2.0)
	specs = [TestFunctionSpec(T=R ** beta, lam=lam, R=R, cutoff_kind=cutoff_kind) for R in radii]
	return np.array([blowup_functional(record, nl, s, component) for s in specs])


@dataclass(frozen=True)
class InequalityReport:
	"""Fitted R-power of the functional against the power a global solution must obey."""
	exponent: float
	slope: float
	intercept: float
	radii: np.ndarray
	values: np.ndarray
	prefactor: Optional[float] = None
	tolerance: float = SLOPE_TOLERANCE

	@property
	def holds(self) -> bool:
		return self.slope <= self.exponent + self.tolerance

	@property
	def contradicts_global(self) -> bool:
		"""Observed growth outruns the bound every global solution satisfies."""
		return not self.holds

	@property
	def limit_bound(self) -> Optional[float]:
		"""R -> infinity limit of the bound: 0 below the critical exponent, unknown constant at it."""
		return 0.0 if self.exponent < 0.0 else None


def verify_blowup_inequality(
	radii: Sequence[float],
	values: Sequence[float],
	nl: NonlinearitySpec,
	N: int,
	params: Optional[FracParams] = None,
	tolerance: float = SLOPE_TOLERANCE,
) -> InequalityReport:
	exponent = inequality_exponent(nl, N)
	R = np.asarray(radii, dtype=float)
	I = np.asarray(values, dtype=float)
	if R.shape != I.shape or R.size < 2:
		raise InputError("need at least two (R, I) pairs of equal length")
	if np.any(R <= 1.0) or np.any(I <= 0.0) or not np.all(np.isfinite(I)):
		raise InputError("radii must exceed 1 and functional values must be positive and finite")
	slope, intercept = np.polyfit(np.log(R), np.log(I), 1)
	prefactor = None
	if params is not None and not nl.is_system:
		rho = float(nl.rho)
		prefactor = (2.0 + params.k) ** (rho / (rho - 1.0))
	report = InequalityReport(
		exponent=exponent,
		slope=float(slope),
		intercept=float(intercept),
		radii=R,
		values=I,
		prefactor=prefactor,
		tolerance=tolerance,
	)
	logger.info("functional slope %.4f against R-power %.4f", report.slope, exponent)
	return report


@dataclass(frozen=True)
class WeakFormTerms:
	"""Terms of the weak identity tested with xi_R(x) theta(t)."""
	initial: float
	time_derivative: float
	diffusion: float
	memory: float
	source: float

	@property
	def lhs(self) -> float:
		return -self.initial - self.time_derivative - self.diffusion - self.memory

	@property
	def residual(self) -> float:
		"""|lhs - source| relative to the largest term; 0 when every term vanishes."""
		scale = max(abs(self.initial), abs(self.time_derivative), abs(self.diffusion), abs(self.memory), abs(self.source))
		if scale == 0.0:
			return 0.0
		return abs(self.lhs - self.source) / scale

	def as_dict(self) -> Dict[str, float]:
		return {
			"initial": self.initial,
			"time_derivative": self.time_derivative,
			"diffusion": self.diffusion,
			"memory": self.memory,
			"source": self.source,
			"residual": self.residual,
		}


def _laplacian(values: np.ndarray, grid: Grid) -> np.ndarray:
	axes = tuple(range(values.ndim - grid.dim, values.ndim))
	spectrum = np.fft.rfftn(values, axes=axes)
	return np.fft.irfftn(-grid.mu * spectrum, s=grid.shape, axes=axes)


def weak_form_terms(
	record: EvolutionRecord,
	u0: Field,
	params: FracParams,
	nl: NonlinearitySpec,
	spec: TestFunctionSpec,
	component: int = 0,
	source: bool = True,
) -> WeakFormTerms:
	"""Evaluate the weak identity on the nodes of a stored run.

	The Laplacian is moved back onto u (exact on the periodic grid) and the
	theta' term uses panel differences of theta, exact for the kink at T/2.
	"""
	history = _checked_history(record, spec)
	grid = record.grid
	if u0.grid != grid:
		raise InputError("initial data does not live on the run's grid")
	u = history[:, component]
	xi = cutoff_field(grid, spec).values
	t = record.times
	th = theta(t, spec)

	mass = _space_integral(u * xi, grid)
	diffused = _space_integral(_laplacian(u, grid) * xi, grid)
	trapezoid = _time_weights(record, 0.0)
	initial = float(np.sum(u0.values * xi) * grid.cell_volume) * float(theta(0.0, spec))
	time_derivative = float(np.sum(0.5 * (mass[:-1] + mass[1:]) * np.diff(th)))
	diffusion = float(np.sum(trapezoid * th * diffused))
	memory = 0.0
	if params.k > 0.0:
		memory = params.k * float(np.sum(trapezoid * theta_frac_derivative(t, spec, params.alpha) * diffused))
	forcing = blowup_functional(record, nl, spec, component) if source else 0.0
	return WeakFormTerms(
		initial=initial,
		time_derivative=time_derivative,
		diffusion=diffusion,
		memory=memory,
		source=forcing,
	)


def weak_form_residual(
	record: EvolutionRecord,
	u0: Field,
	params: FracParams,
	nl: NonlinearitySpec,
	spec: TestFunctionSpec,
	component: int = 0,
	source: bool = True,
) -> float:
	terms = weak_form_terms(record, u0, params, nl, spec, component, source)
	if not math.isfinite(terms.residual):
		raise InputError("weak-form terms are not finite")
	logger.debug("weak form terms %s", terms.as_dict())
	return terms.residual
