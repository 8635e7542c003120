from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.integrate import trapezoid

from rslab.errors import InputError
from rslab.fractional import FracParams, angle_bracket, rl_integral
from rslab.relaxation.curve import RelaxationCurve

logger = logging.getLogger(__name__)

MIN_ODE_NODES = 64


@dataclass
class OdeResidual:
	max_abs: float
	l1: float


@dataclass
class MonotonicityReport:
	passed: Dict[int, bool] = field(default_factory=dict)
	first_failure: Dict[int, Optional[int]] = field(default_factory=dict)

	@property
	def ok(self) -> bool:
		return all(self.passed.values())


@dataclass
class DecayBound:
	c_obs: float
	applicable: bool


def check_relaxation_ode(curve: RelaxationCurve, params: FracParams) -> OdeResidual:
	"""Residual of s' + mu s + mu k d/dt I^(1-alpha) s at interior nodes."""
	if len(curve.mesh) < MIN_ODE_NODES:
		raise InputError(f"ODE residual needs at least {MIN_ODE_NODES} nodes, got {len(curve.mesh)}")
	t = curve.mesh.nodes
	s = curve.values
	ds = np.gradient(s, t)
	memory = np.gradient(rl_integral(s, curve.mesh, 1.0 - params.alpha), t)
	residual = ds + curve.mu * s + curve.mu * params.k * memory
	inner = np.abs(residual[1:-1])
	return OdeResidual(max_abs=float(np.max(inner)), l1=float(trapezoid(inner, t[1:-1])))


def _is_log_uniform(t: np.ndarray) -> bool:
	ratios = t[2:] / t[1:-1]
	return bool(ratios.size == 0 or np.allclose(ratios, ratios[0], rtol=1e-9, atol=0.0))


def _log_sample(t: np.ndarray, samples: int) -> np.ndarray:
	if _is_log_uniform(t) or t.size <= samples:
		return np.arange(t.size)
	targets = np.geomspace(t[1], t[-1], samples)
	picks = np.clip(np.searchsorted(t, targets), 1, t.size - 1)
	return np.unique(np.concatenate(([0], picks, [t.size - 1])))


def check_complete_monotonicity(curve: RelaxationCurve, max_order: int = 3, samples: int = 256) -> MonotonicityReport:
	"""(-1)^n [t_i..t_{i+n}] s >= 0 for n = 0..max_order on log-spaced nodes."""
	if not (0 <= max_order <= 3):
		raise InputError(f"max_order must lie in 0..3, got {max_order}")
	index = _log_sample(curve.mesh.nodes, samples)
	x = curve.mesh.nodes[index]
	diff = np.array(curve.values[index], dtype=float)
	report = MonotonicityReport()
	for order in range(max_order + 1):
		if order > 0:
			diff = (diff[1:] - diff[:-1]) / (x[order:] - x[:-order])
		signed = (-1.0) ** order * diff
		slack = 1e-9 * float(np.max(np.abs(diff))) if diff.size else 0.0
		bad = np.flatnonzero(signed < -slack)
		report.passed[order] = bad.size == 0
		report.first_failure[order] = int(index[bad[0] + order]) if bad.size else None
		if bad.size:
			logger.info("order %d sign change near node %d", order, report.first_failure[order])
	return report


def check_decay_bound(curve: RelaxationCurve, params: FracParams) -> DecayBound:
	"""Smallest C with s(t) <= C / (1 + mu <t>) on the sampled nodes."""
	if curve.mu == 0.0:
		return DecayBound(c_obs=1.0, applicable=False)
	bracket = angle_bracket(curve.mesh.nodes, params)
	c_obs = float(np.max(curve.values * (1.0 + curve.mu * bracket)))
	return DecayBound(c_obs=c_obs, applicable=True)
