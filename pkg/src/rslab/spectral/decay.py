from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from rslab.errors import InputError
from rslab.fractional import FracParams, TimeMesh, angle_bracket, relaxation_grading
from rslab.spectral.cache import MultiplierCache
from rslab.spectral.grid import Field, boundary_mass_fraction, lp_norm
from rslab.spectral.operator import OPERATOR_INTERVALS, apply_S, default_cache

logger = logging.getLogger(__name__)

BOUNDARY_MASS_LIMIT = 0.01
CONTINUITY_LIMIT = 0.01


@dataclass
class DecayFit:
	slope: float
	predicted: float
	sup_ratio: float
	times: np.ndarray
	brackets: np.ndarray
	norms: np.ndarray
	warnings: List[str] = field(default_factory=list)

	def predicted_bounds(self, initial_norm: float) -> np.ndarray:
		return self.sup_ratio * initial_norm * self.brackets ** self.predicted


@dataclass
class ContinuityReport:
	times: np.ndarray
	errors: np.ndarray
	monotone: bool
	converged: bool

	@property
	def ok(self) -> bool:
		return self.monotone and self.converged


def decay_exponent(dim: int, r: float, p: float) -> float:
	"""-N/2 (1/r - 1/p), the rate of the L^r -> L^p estimate."""
	return -0.5 * dim * (1.0 / r - 1.0 / p)


def admissible_q(dim: int, r: float, p: float) -> float:
	"""q with 1/q = N/2 (1/r - 1/p); needs 1 < r < p and 1/q < 1."""
	if not (1.0 < r < p):
		raise InputError(f"indices need 1 < r < p, got r={r}, p={p}")
	inv_q = -decay_exponent(dim, r, p)
	if inv_q >= 1.0:
		raise InputError(f"N/2 (1/r - 1/p) must stay below 1 (N={dim}, r={r}, p={p})")
	return 1.0 / inv_q


def shared_mesh(times: Sequence[float], params: FracParams, intervals: int = OPERATOR_INTERVALS) -> TimeMesh:
	"""Graded mesh up to max(times) with every requested time inserted as a node."""
	tmax = float(max(times))
	base = TimeMesh.graded(tmax, intervals, relaxation_grading(params.alpha))
	nodes = np.union1d(base.nodes, np.asarray(times, dtype=float))
	return TimeMesh(nodes=nodes, grading=base.grading)


def measure_decay_exponent(
	u0: Field,
	params: FracParams,
	r: float,
	p: float,
	times: Sequence[float],
	cache: Optional[MultiplierCache] = None,
) -> DecayFit:
	"""Least-squares slope of log ||S(t) u0||_p against log <t>."""
	dim = u0.grid.dim
	admissible_q(dim, r, p)
	t = np.sort(np.asarray(times, dtype=float))
	if t.size < 2 or t[0] <= 0.0:
		raise InputError("decay fit needs at least two positive times")
	if np.log10(t[-1] / t[0]) < 1.5:
		raise InputError(f"decay times must span 1.5 decades, got {t[0]:g}..{t[-1]:g}")
	cache = cache if cache is not None else default_cache()
	mesh = shared_mesh(t, params)
	initial = lp_norm(u0, r)
	if initial == 0.0:
		raise InputError("decay fit needs nonzero data")
	norms = np.empty(t.size)
	last: Optional[Field] = None
	for i, ti in enumerate(t):
		last = apply_S(float(ti), u0, params, mesh=mesh, cache=cache)
		norms[i] = lp_norm(last, p)
	brackets = np.asarray(angle_bracket(t, params), dtype=float)
	slope = float(np.polyfit(np.log(brackets), np.log(norms), 1)[0])
	predicted = decay_exponent(dim, r, p)
	sup_ratio = float(np.max(brackets ** (-predicted) * norms / initial))
	fit = DecayFit(slope=slope, predicted=predicted, sup_ratio=sup_ratio, times=t, brackets=brackets, norms=norms)
	if last is not None:
		share = boundary_mass_fraction(last)
		if share > BOUNDARY_MASS_LIMIT:
			msg = f"boundary mass {share:.2%} at t={t[-1]:g}; box too small for whole-space decay"
			logger.warning(msg)
			fit.warnings.append(msg)
	logger.info("decay fit r=%g p=%g slope=%.4f predicted=%.4f", r, p, slope, predicted)
	return fit


def check_strong_continuity(
	u0: Field,
	params: FracParams,
	t_sequence: Sequence[float],
	operator: Optional[Callable[[float, Field], Field]] = None,
	cache: Optional[MultiplierCache] = None,
) -> ContinuityReport:
	"""Relative L^2 distance of S(t) u0 from u0 along t decreasing to 0."""
	t = np.asarray(t_sequence, dtype=float)
	if t.size == 0 or np.any(t <= 0.0) or np.any(np.diff(t) >= 0.0):
		raise InputError("t_sequence must be positive and strictly decreasing")
	if operator is None:
		def operator(s: float, f: Field) -> Field:
			return apply_S(s, f, params, cache=cache)
	scale = lp_norm(u0, 2.0)
	errors = np.empty(t.size)
	for i, ti in enumerate(t):
		out = operator(float(ti), u0)
		gap = lp_norm(u0.with_values(out.values - u0.values), 2.0)
		errors[i] = gap / scale if scale > 0.0 else gap
	tol = 1e-12 * max(1.0, float(np.max(errors)))
	monotone = bool(np.all(np.diff(errors) <= tol))
	converged = bool(errors[-1] < CONTINUITY_LIMIT)
	if not monotone:
		logger.warning("S(t) u0 does not approach u0 monotonically as t decreases")
	return ContinuityReport(times=t, errors=errors, monotone=monotone, converged=converged)
