from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rslab.errors import AccuracyError, DomainError, InputError
from rslab.fractional import ContourSpec, FracParams, TimeMesh, min_truncation
from rslab.relaxation.curve import RelaxationCurve

logger = logging.getLogger(__name__)

# |Im| of the inversion above this means the quadrature did not resolve the integrand
IMAG_TOLERANCE = 1e-6


@dataclass
class ContourValue:
	value: float
	imag_residue: float


def _integrand(z: np.ndarray, mu: float, t: float, params: FracParams) -> np.ndarray:
	denom = z + mu + params.k * mu * np.power(z, params.alpha)
	return np.exp(z * t) / denom


def contour_integral(mu: float, t: float, params: FracParams, contour: Optional[ContourSpec] = None) -> ContourValue:
	"""Inverse Laplace transform of 1 / (z + mu + k mu z^alpha) at time t.

	The path is a Hankel contour around the negative real axis: an arc of
	radius delta plus two rays at angle +-(pi - theta) out to the truncation
	radius. Gauss-Legendre on each segment, the rays in log-radius.
	"""
	if mu < 0.0:
		raise InputError(f"mu must be >= 0, got {mu}")
	if t <= 0.0:
		raise DomainError(f"contour inversion needs t > 0, got {t}")
	spec = contour if contour is not None else ContourSpec.for_time(t)
	if spec.truncation < min_truncation(t, spec.theta) * (1.0 - 1e-12):
		raise DomainError(
			f"contour truncation {spec.truncation:.4g} below {min_truncation(t, spec.theta):.4g} for t={t}"
		)
	psi = math.pi - spec.theta
	nodes, weights = np.polynomial.legendre.leggauss(spec.panels)

	# arc z = delta e^{i phi}, phi in [-psi, psi]
	phi = psi * nodes
	z_arc = spec.delta * np.exp(1j * phi)
	arc = np.sum(weights * psi * _integrand(z_arc, mu, t, params) * 1j * z_arc)

	# rays r = delta e^u, u in [0, log(R/delta)]
	span = math.log(spec.truncation / spec.delta)
	u = 0.5 * span * (nodes + 1.0)
	r = spec.delta * np.exp(u)
	upper_dir = np.exp(1j * psi)
	lower_dir = np.exp(-1j * psi)
	z_up = r * upper_dir
	z_low = r * lower_dir
	jac = 0.5 * span * weights * r
	# lower ray runs inward to the arc, upper ray outward from it
	upper = np.sum(jac * _integrand(z_up, mu, t, params) * upper_dir)
	lower = -np.sum(jac * _integrand(z_low, mu, t, params) * lower_dir)

	total = (arc + upper + lower) / (2j * math.pi)
	return ContourValue(value=float(total.real), imag_residue=float(abs(total.imag)))


def solve_contour(mu: float, t: float, params: FracParams, contour: Optional[ContourSpec] = None) -> float:
	"""s(t, mu) by contour inversion; t = 0 returns 1."""
	if t == 0.0:
		return 1.0
	result = contour_integral(mu, t, params, contour)
	if not math.isfinite(result.value) or result.imag_residue > IMAG_TOLERANCE:
		raise AccuracyError(
			f"contour inversion unresolved at t={t}, mu={mu}: imaginary residue {result.imag_residue:.3e}"
		)
	logger.debug("contour t=%g mu=%g value=%.12g imag=%.2e", t, mu, result.value, result.imag_residue)
	return result.value


def contour_curve(mu: float, params: FracParams, mesh: TimeMesh, panels: int = 400) -> RelaxationCurve:
	values = np.empty(len(mesh))
	values[0] = 1.0
	for i, t in enumerate(mesh.nodes[1:], start=1):
		values[i] = solve_contour(mu, float(t), params, ContourSpec.for_time(float(t), panels=panels))
	return RelaxationCurve(mesh=mesh, mu=float(mu), values=values, method="Contour")
