from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np
from scipy.special import hyp2f1

from rslab.errors import DomainError, InputError, InternalError
from rslab.fractional.params import FracParams, TimeMesh
from rslab.fractional.special import gamma_fn

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# |f(T)| above this (relative to max |f|) breaks the right-derivative contract
RIGHT_END_TOLERANCE = 1e-10


def kernel_h(t: ArrayLike, params: FracParams) -> ArrayLike:
	"""h(t) = 1 + k t^(-alpha) / Gamma(1 - alpha), singular at t = 0."""
	arr = np.asarray(t, dtype=float)
	if np.any(arr <= 0.0):
		raise DomainError("kernel_h is singular at t <= 0")
	value = 1.0 + params.k * arr ** (-params.alpha) / params.gamma_one_minus_alpha
	return float(value) if value.ndim == 0 else value


def angle_bracket(t: ArrayLike, params: FracParams) -> ArrayLike:
	"""Modified time scale t + k t^(1 - alpha)."""
	arr = np.asarray(t, dtype=float)
	if np.any(arr < 0.0):
		raise DomainError("angle_bracket needs t >= 0")
	value = arr + params.k * arr ** (1.0 - params.alpha)
	return float(value) if value.ndim == 0 else value


def one_star_h(t: ArrayLike, params: FracParams) -> ArrayLike:
	"""Exact primitive of the kernel: (1*h)(t) = t + k t^(1-alpha) / Gamma(2-alpha)."""
	arr = np.asarray(t, dtype=float)
	if np.any(arr < 0.0):
		raise DomainError("one_star_h needs t >= 0")
	value = arr + params.k * arr ** (1.0 - params.alpha) / params.gamma_two_minus_alpha
	return float(value) if value.ndim == 0 else value


def rl_integral_matrix(mesh: TimeMesh, order: float) -> np.ndarray:
	"""Lower-triangular matrix W with (W f)_n = I^order f(t_n).

	The piecewise-linear interpolant of f is integrated exactly against
	(t_n - s)^(order-1) / Gamma(order). With a = t_n - t_j, h the panel
	width and z = h / a, the two hat-function moments are

	    left  = h a^(order-1) 2F1(1-order, 1; 3; z) / 2
	    right = h a^(order-1) 2F1(1-order, 2; 3; z) / 2

	Both integrands are positive, so no entry loses sign to cancellation
	on panels that are short next to their distance from t_n.
	"""
	if order <= 0.0:
		raise DomainError(f"integration order must be positive, got {order}")
	t = mesh.nodes
	h = np.diff(t)
	size = t.size
	# a = t_n - t_j for panel j = 0..M-1 and row n; panel is active when t_{j+1} <= t_n
	a = t[:, None] - t[None, :-1]
	active = (t[:, None] - t[None, 1:]) >= 0.0
	rows, cols = np.nonzero(active)
	dist = a[rows, cols]
	width = h[cols]
	z = np.minimum(width / dist, 1.0)
	scale = 0.5 * width * dist ** (order - 1.0) / gamma_fn(order)
	left = np.zeros((size, size - 1))
	right = np.zeros((size, size - 1))
	left[rows, cols] = scale * hyp2f1(1.0 - order, 1.0, 3.0, z)
	right[rows, cols] = scale * hyp2f1(1.0 - order, 2.0, 3.0, z)
	weights = np.zeros((size, size))
	weights[:, :-1] += left
	weights[:, 1:] += right
	if not np.all(np.isfinite(weights)) or np.any(weights < 0.0):
		raise InternalError("product-integration weights lost positivity")
	return weights


def rl_integral(samples: np.ndarray, mesh: TimeMesh, order: float) -> np.ndarray:
	"""Left-sided Riemann-Liouville integral of nodal samples; node 0 maps to 0."""
	values = np.asarray(samples, dtype=float)
	if values.shape[0] != len(mesh):
		raise InputError(f"expected {len(mesh)} samples, got {values.shape[0]}")
	return rl_integral_matrix(mesh, order) @ values


@dataclass
class RightDerivative:
	values: np.ndarray
	warnings: List[str] = field(default_factory=list)


def rl_right_derivative(samples: np.ndarray, mesh: TimeMesh, order: float) -> RightDerivative:
	"""Right-sided derivative D^order_{T-} f = -I^(1-order)_{T-} f' on [0, T].

	f' is the panel slope of the piecewise-linear interpolant, integrated exactly
	against (s - t_n)^(-order). Strictly this computes the derivative of
	f - f(T); a nonzero f(T) is recorded as a warning.
	"""
	if not (0.0 < order < 1.0):
		raise DomainError(f"order must lie in (0,1), got {order}")
	f = np.asarray(samples, dtype=float)
	if f.shape != mesh.nodes.shape:
		raise InputError(f"expected {len(mesh)} samples, got {f.shape}")
	notes: List[str] = []
	scale = float(np.max(np.abs(f))) if f.size else 0.0
	if abs(f[-1]) > RIGHT_END_TOLERANCE * max(scale, 1.0):
		msg = f"f(T) = {f[-1]:.3e} is not zero; derivative computed for f - f(T)"
		logger.warning(msg)
		notes.append(msg)
	t = mesh.nodes
	slopes = np.diff(f) / np.diff(t)
	beta = 1.0 - order
	# c = t_{j+1} - t_n, d = t_j - t_n for panels j >= n
	c = t[None, 1:] - t[:, None]
	d = t[None, :-1] - t[:, None]
	active = d >= 0.0
	c = np.where(active, c, 0.0)
	d = np.where(active, d, 0.0)
	moments = np.where(active, c ** beta - d ** beta, 0.0)
	values = -(moments @ slopes) / gamma_fn(2.0 - order)
	return RightDerivative(values=values, warnings=notes)
