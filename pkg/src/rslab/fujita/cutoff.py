from __future__ import annotations

from typing import Tuple, Union

import numpy as np
from scipy.optimize import brentq

from rslab.errors import DomainError
from rslab.fujita.testfns import CutoffKind, TestFunctionSpec
from rslab.spectral import Field, Grid

ArrayLike = Union[float, np.ndarray]


def _profile(s: np.ndarray, kind: CutoffKind) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""xi, xi' and xi'' of the unit-radius profile at radial coordinates s >= 0."""
	xi = np.where(s <= 0.5, 1.0, 0.0)
	d1 = np.zeros_like(s)
	d2 = np.zeros_like(s)
	band = (s > 0.5) & (s < 1.0)
	if kind == "SmoothBump":
		# exp(1 - 1/(1 - y^2)) with y = 2s - 1
		y = 2.0 * s[band] - 1.0
		with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
			inv = 1.0 / (1.0 - y * y)
			f = np.exp(1.0 - inv)
			g1 = -2.0 * y * inv * inv
			g2 = -2.0 * inv * inv - 8.0 * y * y * inv ** 3
			xi[band] = f
			d1[band] = np.where(f > 0.0, 2.0 * f * g1, 0.0)
			d2[band] = np.where(f > 0.0, 4.0 * f * (g2 + g1 * g1), 0.0)
	elif kind == "EigenfunctionProfile":
		# principal Dirichlet eigenfunction of the half-unit interval, peak 1
		phase = np.pi * (s[band] - 0.5)
		xi[band] = np.cos(phase)
		d1[band] = -np.pi * np.sin(phase)
		d2[band] = -np.pi ** 2 * np.cos(phase)
	else:
		raise DomainError(f"unknown cutoff kind {kind!r}")
	return xi, d1, d2


def _radial(radius: ArrayLike, R: float) -> np.ndarray:
	if not R > 1.0:
		raise DomainError(f"R must exceed 1, got {R}")
	arr = np.asarray(radius, dtype=float)
	if np.any(arr < 0.0):
		raise DomainError("radius must be >= 0")
	return arr / R


def cutoff_xi(radius: ArrayLike, R: float, kind: CutoffKind = "SmoothBump") -> ArrayLike:
	"""xi_R at |x| = radius: 1 inside R/2, 0 outside R, nonincreasing between."""
	s = _radial(radius, R)
	xi, _, _ = _profile(np.atleast_1d(s), kind)
	return float(xi[0]) if s.ndim == 0 else xi.reshape(s.shape)


def cutoff_laplacian(radius: ArrayLike, R: float, dim: int, kind: CutoffKind = "SmoothBump") -> ArrayLike:
	"""Radial Laplacian (xi'' + (dim-1) xi'/s) / R^2 of xi_R."""
	s = np.atleast_1d(_radial(radius, R))
	_, d1, d2 = _profile(s, kind)
	lap = d2.copy()
	if dim > 1:
		# xi' vanishes for s <= 1/2, so the origin never divides
		moving = s > 0.5
		lap[moving] += (dim - 1) * d1[moving] / s[moving]
	lap /= R * R
	return float(lap[0]) if np.ndim(radius) == 0 else lap.reshape(np.shape(radius))


def cutoff_field(grid: Grid, spec: TestFunctionSpec) -> Field:
	if spec.R >= grid.half_length:
		raise DomainError(f"cutoff radius {spec.R:g} does not fit in the box of half length {grid.half_length:g}")
	return Field(grid=grid, values=cutoff_xi(grid.radius, spec.R, spec.cutoff_kind))


def _unit_ratio(s: np.ndarray, dim: int, kind: CutoffKind) -> np.ndarray:
	xi, d1, d2 = _profile(s, kind)
	return np.abs(d2 + (dim - 1) * d1 / s) / xi


def profile_constant(kind: CutoffKind, dim: int, floor: float = 1e-6, samples: int = 20001) -> float:
	"""Sup of R^2 |Delta xi_R| / xi_R over R/2 < |x| < R where xi_R >= floor (independent of R)."""
	# xi decreases from 1 to 0 on (1/2, 1); edge is where it meets the floor
	edge = brentq(lambda s: float(_profile(np.array([s]), kind)[0][0]) - floor, 0.5 + 1e-12, 1.0 - 1e-12)
	s = np.append(np.linspace(0.5 + 1e-9, edge, samples), edge)
	return float(np.max(_unit_ratio(s, dim, kind)))


def laplacian_ratio(grid: Grid, spec: TestFunctionSpec, floor: float = 1e-6) -> float:
	"""max of R^2 |Delta xi_R| / xi_R over the annulus points with xi_R >= floor."""
	xi = cutoff_xi(grid.radius, spec.R, spec.cutoff_kind)
	lap = cutoff_laplacian(grid.radius, spec.R, grid.dim, spec.cutoff_kind)
	annulus = (grid.radius > 0.5 * spec.R) & (xi >= floor)
	if not np.any(annulus):
		return 0.0
	return float(np.max(spec.R ** 2 * np.abs(lap[annulus]) / xi[annulus]))
