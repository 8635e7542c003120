from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from rslab.errors import DomainError, InputError

# relative quantum for identifying equal |xi|^2 values
MU_DIGITS = 12


def quantize(values: np.ndarray, digits: int = MU_DIGITS) -> np.ndarray:
	"""Round nonnegative values to `digits` significant digits; zeros stay zero."""
	arr = np.asarray(values, dtype=float)
	out = np.zeros_like(arr)
	pos = arr > 0.0
	if np.any(pos):
		exponent = np.floor(np.log10(arr[pos]))
		scale = 10.0 ** (exponent - (digits - 1))
		out[pos] = np.round(arr[pos] / scale) * scale
	return out


@dataclass(frozen=True)
class Grid:
	"""Periodic box [-L, L)^dim with `points` nodes per axis."""
	dim: int
	points: int
	half_length: float

	def __post_init__(self) -> None:
		if self.dim not in (1, 2):
			raise InputError(f"grid dimension must be 1 or 2, got {self.dim}")
		if self.points < 64 or self.points & (self.points - 1):
			raise InputError(f"points per axis must be a power of two >= 64, got {self.points}")
		if not (self.half_length > 0.0 and math.isfinite(self.half_length)):
			raise InputError(f"box half length must be positive, got {self.half_length}")

	@property
	def shape(self) -> Tuple[int, ...]:
		return (self.points,) * self.dim

	@property
	def dx(self) -> float:
		return 2.0 * self.half_length / self.points

	@property
	def cell_volume(self) -> float:
		return self.dx ** self.dim

	@cached_property
	def axis(self) -> np.ndarray:
		return -self.half_length + self.dx * np.arange(self.points)

	@cached_property
	def radius_squared(self) -> np.ndarray:
		axes = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
		return sum(a * a for a in axes)

	@cached_property
	def radius(self) -> np.ndarray:
		return np.sqrt(self.radius_squared)

	@cached_property
	def mu(self) -> np.ndarray:
		"""|xi|^2 on the rfftn layout, xi = pi m / L per axis."""
		full = 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.dx)
		half = 2.0 * np.pi * np.fft.rfftfreq(self.points, d=self.dx)
		axes = [full] * (self.dim - 1) + [half]
		mesh = np.meshgrid(*axes, indexing="ij")
		return quantize(sum(k * k for k in mesh))

	@cached_property
	def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
		"""Distinct |xi|^2 values and the index map back onto `mu`."""
		unique, inverse = np.unique(self.mu, return_inverse=True)
		return unique, inverse.reshape(self.mu.shape)


@dataclass(frozen=True, eq=False)
class Field:
	grid: Grid
	values: np.ndarray

	def __post_init__(self) -> None:
		arr = np.array(self.values, dtype=float)
		if arr.shape != self.grid.shape:
			if arr.size != self.grid.points ** self.grid.dim:
				raise InputError(f"field of size {arr.size} does not fit grid {self.grid.shape}")
			arr = arr.reshape(self.grid.shape)
		if not np.all(np.isfinite(arr)):
			raise InputError("field values must be finite")
		arr.setflags(write=False)
		object.__setattr__(self, "values", arr)

	def with_values(self, values: np.ndarray) -> "Field":
		return Field(grid=self.grid, values=values)


def lp_norm(field: Field, p: float) -> float:
	"""Cell-volume weighted discrete L^p norm; p = inf gives the max norm."""
	return array_lp_norm(field.values, p, field.grid.cell_volume)


def array_lp_norm(values: np.ndarray, p: float, cell_volume: float) -> float:
	"""lp_norm on raw samples; any non-finite sample gives inf."""
	if not (p >= 1.0):
		raise DomainError(f"lp_norm needs p >= 1, got {p}")
	absval = np.abs(values)
	top = float(np.max(absval))
	if not math.isfinite(top):
		return math.inf
	if math.isinf(p) or top == 0.0:
		return top
	# scaled to avoid overflow for large p
	return top * float(np.sum((absval / top) ** p) * cell_volume) ** (1.0 / p)


def boundary_mass_fraction(field: Field, band: float = 0.1) -> float:
	"""Share of the L^1 mass within `band` * L of the box edge."""
	absval = np.abs(field.values)
	total = float(np.sum(absval))
	if total == 0.0:
		return 0.0
	limit = (1.0 - band) * field.grid.half_length
	axes = np.meshgrid(*([field.grid.axis] * field.grid.dim), indexing="ij")
	edge = np.zeros(field.grid.shape, dtype=bool)
	for a in axes:
		edge |= np.abs(a) >= limit
	return float(np.sum(absval[edge]) / total)
