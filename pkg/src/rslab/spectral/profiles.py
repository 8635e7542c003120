from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from scipy.special import gamma, hyp1f1

from rslab.errors import InputError
from rslab.fractional import FracParams, angle_bracket
from rslab.spectral.grid import Field, Grid, lp_norm

ProfileKind = Literal["gaussian", "bump", "powerlaw"]

# beyond this the asymptotic series of M(a, b, -z) is used
_KUMMER_SWITCH = 50.0

# box half length per sqrt(<t_max>) that keeps wrap-around mass below 1%
BOX_FACTOR = 8.0


def auto_box(params: FracParams, tmax: float, factor: float = BOX_FACTOR) -> float:
	return factor * float(np.sqrt(angle_bracket(tmax, params)))


def _kummer_decay(a: float, b: float, z: np.ndarray) -> np.ndarray:
	"""M(a, b, -z) for z >= 0."""
	out = np.empty_like(z)
	near = z <= _KUMMER_SWITCH
	out[near] = hyp1f1(a, b, -z[near])
	far = z[~near]
	c = a - b + 1.0
	series = 1.0 + a * c / far + a * (a + 1.0) * c * (c + 1.0) / (2.0 * far * far)
	out[~near] = gamma(b) / gamma(b - a) * far ** (-a) * series
	return out


def _shape(grid: Grid, kind: str, width: float, r: Optional[float]) -> np.ndarray:
	rr = grid.radius_squared / (width * width)
	if kind == "gaussian":
		return np.exp(-0.5 * rr)
	if kind == "bump":
		inside = rr < 1.0
		out = np.zeros(grid.shape)
		out[inside] = np.exp(1.0 - 1.0 / (1.0 - rr[inside]))
		return out
	if kind == "powerlaw":
		if r is None:
			raise InputError("powerlaw profile needs the index r")
		# heat-smoothed |x|^(-N/r): self-similar under the heat flow, cut off well inside the box
		tail = _kummer_decay(grid.dim / (2.0 * r), grid.dim / 2.0, rr / 4.0)
		envelope = np.exp(-(grid.radius / (0.5 * grid.half_length)) ** 8)
		return tail * envelope
	raise InputError(f"unknown profile kind {kind!r}")


def initial_profile(
	grid: Grid,
	kind: ProfileKind = "gaussian",
	amplitude: float = 1.0,
	width: float = 1.0,
	r: Optional[float] = None,
) -> Field:
	"""Nonnegative radial data centred at the origin.

	With `r` given the profile is scaled so that its L^r norm equals
	`amplitude`; otherwise `amplitude` is the peak value.
	"""
	if amplitude < 0.0:
		raise InputError(f"amplitude must be >= 0, got {amplitude}")
	if width <= 0.0:
		raise InputError(f"profile width must be positive, got {width}")
	base = Field(grid=grid, values=_shape(grid, kind, width, r))
	if r is None:
		peak = float(np.max(base.values))
		return base.with_values(base.values * (amplitude / peak))
	norm = lp_norm(base, r)
	if norm == 0.0:
		raise InputError("profile vanishes on this grid")
	return base.with_values(base.values * (amplitude / norm))
