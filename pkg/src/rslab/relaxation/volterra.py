from __future__ import annotations

import logging
import threading
from typing import Dict, Sequence, Tuple

import numpy as np

from rslab.errors import InputError, InternalError
from rslab.fractional import FracParams, TimeMesh, rl_integral_matrix
from rslab.relaxation.curve import RelaxationCurve

logger = logging.getLogger(__name__)

_MATRIX_CACHE: Dict[Tuple[FracParams, Tuple[int, str]], np.ndarray] = {}
_MATRIX_CACHE_LIMIT = 8
_MATRIX_LOCK = threading.Lock()


def convolution_matrix(params: FracParams, mesh: TimeMesh) -> np.ndarray:
	"""Weights K with (h*s)(t_n) ~ (K s)_n.

	h = 1 + singular part: the constant part is the order-1 product rule
	(trapezoid), the singular part uses exact moments of t^(-alpha).
	"""
	key = (params, mesh.key)
	with _MATRIX_LOCK:
		cached = _MATRIX_CACHE.get(key)
	if cached is not None:
		return cached
	weights = rl_integral_matrix(mesh, 1.0)
	if params.k > 0.0:
		weights = weights + params.k * rl_integral_matrix(mesh, 1.0 - params.alpha)
	diag = np.diag(weights)[1:]
	if np.any(diag <= 0.0):
		raise InternalError("implicit Volterra update lost its positive diagonal weight")
	weights.setflags(write=False)
	with _MATRIX_LOCK:
		if len(_MATRIX_CACHE) >= _MATRIX_CACHE_LIMIT:
			_MATRIX_CACHE.pop(next(iter(_MATRIX_CACHE)))
		_MATRIX_CACHE[key] = weights
	return weights


def relaxation_table(mus: Sequence[float], params: FracParams, mesh: TimeMesh) -> np.ndarray:
	"""s(t_n, mu_m) for every node and every mu, shape (len(mesh), len(mus)).

	Forward substitution of s + mu (h*s) = 1, vectorised over mu.
	"""
	mu = np.asarray(mus, dtype=float).ravel()
	if np.any(mu < 0.0):
		raise InputError("relaxation needs mu >= 0")
	weights = convolution_matrix(params, mesh)
	size = len(mesh)
	table = np.empty((size, mu.size))
	table[0] = 1.0
	for n in range(1, size):
		history = weights[n, :n] @ table[:n]
		table[n] = (1.0 - mu * history) / (1.0 + mu * weights[n, n])
	return table


def solve_volterra(mu: float, params: FracParams, mesh: TimeMesh) -> RelaxationCurve:
	if mu < 0.0:
		raise InputError(f"mu must be >= 0, got {mu}")
	values = relaxation_table([mu], params, mesh)[:, 0]
	values[0] = 1.0
	return RelaxationCurve(mesh=mesh, mu=float(mu), values=values, method="Volterra")


def volterra_identity_residual(curve: RelaxationCurve, params: FracParams) -> float:
	"""max_n |s + mu (h*s) - 1| under the discrete convolution weights."""
	weights = convolution_matrix(params, curve.mesh)
	residual = curve.values + curve.mu * (weights @ curve.values) - 1.0
	return float(np.max(np.abs(residual)))
