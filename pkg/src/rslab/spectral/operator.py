from __future__ import annotations

import logging
from typing import Optional

import numpy as np

from rslab.errors import DomainError
from rslab.fractional import FracParams, TimeMesh, relaxation_grading
from rslab.spectral.cache import MultiplierCache
from rslab.spectral.grid import Field, lp_norm

logger = logging.getLogger(__name__)

# intervals of the private mesh used when t is not a node of a caller mesh
OPERATOR_INTERVALS = 400

_shared_cache = MultiplierCache()


def default_cache() -> MultiplierCache:
	return _shared_cache


def operator_mesh(t: float, params: FracParams, intervals: int = OPERATOR_INTERVALS) -> TimeMesh:
	return TimeMesh.graded(t, intervals, relaxation_grading(params.alpha))


def spectral_multiply(field: Field, multiplier: np.ndarray) -> Field:
	"""Inverse FFT of multiplier * FFT(field); multiplier lives on the rfftn layout."""
	axes = tuple(range(field.grid.dim))
	spectrum = np.fft.rfftn(field.values, axes=axes)
	values = np.fft.irfftn(spectrum * multiplier, s=field.grid.shape, axes=axes)
	return field.with_values(values)


def apply_S(
	t: float,
	field: Field,
	params: FracParams,
	mesh: Optional[TimeMesh] = None,
	cache: Optional[MultiplierCache] = None,
) -> Field:
	"""S(t) field: the Fourier multiplier s(t, |xi|^2).

	When `t` is a node of `mesh` the multiplier comes from that mesh, otherwise a
	private graded mesh ending at `t` is used.
	"""
	if not (t >= 0.0):
		raise DomainError(f"apply_S needs t >= 0, got {t}")
	if t == 0.0:
		return field.with_values(field.values)
	cache = cache if cache is not None else _shared_cache
	index = mesh.index_of(t) if mesh is not None else None
	if mesh is None or index is None:
		mesh = operator_mesh(t, params)
		index = len(mesh) - 1
	unique, inverse = field.grid.spectrum
	row = cache.table(params, mesh, unique)[index]
	return spectral_multiply(field, row[inverse])


def semigroup_defect(
	t1: float,
	t2: float,
	field: Field,
	params: FracParams,
	cache: Optional[MultiplierCache] = None,
) -> float:
	"""Relative L^2 gap between S(t1 + t2) u and S(t1) S(t2) u."""
	joint = apply_S(t1 + t2, field, params, cache=cache)
	split = apply_S(t1, apply_S(t2, field, params, cache=cache), params, cache=cache)
	scale = lp_norm(joint, 2.0)
	gap = lp_norm(joint.with_values(joint.values - split.values), 2.0)
	return gap / scale if scale > 0.0 else gap
