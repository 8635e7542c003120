from __future__ import annotations

from typing import Union

import numpy as np
from scipy import special

from rslab.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def gamma_fn(x: ArrayLike) -> ArrayLike:
	"""Gamma function restricted to positive finite arguments (scalar or array)."""
	arr = np.asarray(x, dtype=float)
	if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
		raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
	value = special.gamma(arr)
	return float(value) if np.ndim(value) == 0 else value


def beta_fn(x: ArrayLike, y: ArrayLike) -> ArrayLike:
	xa = np.asarray(x, dtype=float)
	ya = np.asarray(y, dtype=float)
	if np.any(~np.isfinite(xa)) or np.any(~np.isfinite(ya)) or np.any(xa <= 0.0) or np.any(ya <= 0.0):
		raise DomainError(f"beta_fn requires positive arguments, got ({x!r}, {y!r})")
	value = special.beta(xa, ya)
	return float(value) if np.ndim(value) == 0 else value
