from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from rslab.errors import DomainError, InputError
from rslab.fractional.special import gamma_fn


@dataclass(frozen=True)
class FracParams:
	"""Order `alpha` of the memory term and its weight `k`.

	k = 0 is accepted: it is the heat limit used as an oracle throughout.
	"""
	alpha: float
	k: float

	def __post_init__(self) -> None:
		if not (0.0 < self.alpha < 1.0):
			raise DomainError(f"alpha must lie in open (0,1), got {self.alpha}")
		if not math.isfinite(self.k) or self.k < 0.0:
			raise DomainError(f"k must be a finite value >= 0, got {self.k}")

	@cached_property
	def gamma_one_minus_alpha(self) -> float:
		return gamma_fn(1.0 - self.alpha)

	@cached_property
	def gamma_two_minus_alpha(self) -> float:
		return gamma_fn(2.0 - self.alpha)


@dataclass(frozen=True, eq=False)
class TimeMesh:
	"""Strictly increasing nodes 0 = t_0 < ... < t_M = T.

	`grading` records the exponent used by `graded`; meshes built from explicit
	nodes keep the value they were given.
	"""
	nodes: np.ndarray
	grading: float = 1.0

	def __post_init__(self) -> None:
		arr = np.array(self.nodes, dtype=float)
		if arr.ndim != 1 or arr.size < 2:
			raise InputError("a time mesh needs at least 2 nodes")
		if arr[0] != 0.0:
			raise InputError(f"mesh must start at t=0, got {arr[0]}")
		if not np.all(np.diff(arr) > 0.0):
			raise InputError("mesh nodes must be strictly increasing")
		if not np.all(np.isfinite(arr)):
			raise InputError("mesh nodes must be finite")
		if self.grading < 1.0:
			raise InputError(f"mesh grading must be >= 1, got {self.grading}")
		arr.setflags(write=False)
		object.__setattr__(self, "nodes", arr)

	@classmethod
	def graded(cls, tmax: float, intervals: int, grading: float = 1.0) -> "TimeMesh":
		if tmax <= 0.0:
			raise InputError(f"tmax must be positive, got {tmax}")
		if intervals < 1:
			raise InputError(f"need at least one interval, got {intervals}")
		if grading < 1.0:
			raise InputError(f"mesh grading must be >= 1, got {grading}")
		j = np.arange(intervals + 1, dtype=float)
		nodes = tmax * (j / intervals) ** grading
		nodes[0] = 0.0
		nodes[-1] = tmax
		return cls(nodes=nodes, grading=float(grading))

	@classmethod
	def uniform(cls, tmax: float, intervals: int) -> "TimeMesh":
		return cls.graded(tmax, intervals, 1.0)

	def __len__(self) -> int:
		return int(self.nodes.size)

	@property
	def tmax(self) -> float:
		return float(self.nodes[-1])

	@property
	def intervals(self) -> int:
		return int(self.nodes.size - 1)

	@property
	def steps(self) -> np.ndarray:
		return np.diff(self.nodes)

	@cached_property
	def is_uniform(self) -> bool:
		h = np.diff(self.nodes)
		return bool(np.allclose(h, h[0], rtol=1e-12, atol=0.0))

	@cached_property
	def key(self) -> Tuple[int, str]:
		# identifies the node set for caches
		return (int(self.nodes.size), _digest(self.nodes))

	def index_of(self, t: float, rtol: float = 1e-12) -> Optional[int]:
		"""Index of the node equal to `t` (relative tolerance), else None."""
		i = int(np.searchsorted(self.nodes, t))
		for cand in (i - 1, i):
			if 0 <= cand < self.nodes.size and abs(self.nodes[cand] - t) <= rtol * max(1.0, abs(t)):
				return cand
		return None

	def truncated(self, count: int) -> "TimeMesh":
		return TimeMesh(nodes=self.nodes[:count].copy(), grading=self.grading)


def _digest(arr: np.ndarray) -> str:
	return hashlib.sha1(np.ascontiguousarray(arr).tobytes()).hexdigest()


def default_grading(gamma: float = 0.0) -> float:
	"""Mesh exponent restoring first order near t = 0 for a t^gamma weight."""
	if gamma >= 0.0:
		return 1.0
	return max(1.0, 2.0 / (1.0 + gamma))


def relaxation_grading(alpha: float) -> float:
	# resolves the t^(1-alpha) start of s; capped to keep tail steps moderate
	return min(4.0, max(2.0, 1.5 / (1.0 - alpha)))


@dataclass(frozen=True)
class ContourSpec:
	"""Arc radius `delta`, ray angle pi - `theta`, ray cutoff and nodes per segment."""
	delta: float
	theta: float
	truncation: float
	panels: int = 400

	def __post_init__(self) -> None:
		if not (self.delta > 0.0):
			raise DomainError(f"contour arc radius must be positive, got {self.delta}")
		if not (0.0 < self.theta < math.pi / 2.0):
			raise DomainError(f"theta must lie in (0, pi/2), got {self.theta}")
		if not (self.truncation > self.delta):
			raise DomainError("contour truncation must exceed the arc radius")
		if self.panels < 1:
			raise DomainError(f"panels must be a positive integer, got {self.panels}")

	@classmethod
	def for_time(cls, t: float, theta: float = math.pi / 6.0, panels: int = 400) -> "ContourSpec":
		if t <= 0.0:
			raise DomainError(f"contour inversion needs t > 0, got {t}")
		delta = 1.0 / t
		truncation = max(min_truncation(t, theta), 2.0 * delta)
		return cls(delta=delta, theta=theta, truncation=truncation, panels=panels)


def min_truncation(t: float, theta: float) -> float:
	"""Smallest ray cutoff for which exp(Re(z) t) is below 1e-16 at the cutoff."""
	return 40.0 / (t * math.cos(theta))


def as_mesh(nodes: Sequence[float], grading: float = 1.0) -> TimeMesh:
	return TimeMesh(nodes=np.asarray(nodes, dtype=float), grading=grading)
