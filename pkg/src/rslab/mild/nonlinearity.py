from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from rslab.errors import DomainError, InputError
from rslab.spectral import Grid


@dataclass(frozen=True)
class NonlinearitySpec:
	"""Source |x|^sigma t^gamma u^rho, or the coupled pair (v^rho1, u^rho2).

	`epsilon` regularises the spatial weight as (|x|^2 + eps^2)^(sigma/2);
	None means one grid cell.
	"""
	sigma: float = 0.0
	gamma: float = 0.0
	rho: Optional[float] = None
	rho1: Optional[float] = None
	rho2: Optional[float] = None
	epsilon: Optional[float] = None

	def __post_init__(self) -> None:
		if self.sigma > 0.0 or self.gamma > 0.0:
			raise DomainError(f"sigma and gamma must be <= 0, got sigma={self.sigma}, gamma={self.gamma}")
		if not (self.sigma + 2.0 * (self.gamma + 1.0) > 0.0):
			raise DomainError("sigma+2(gamma+1)>0 violated")
		scalar = self.rho is not None
		system = self.rho1 is not None or self.rho2 is not None
		if scalar == system:
			raise InputError("give either rho (scalar) or rho1 and rho2 (system)")
		if scalar:
			if not (self.rho > 1.0 and math.isfinite(self.rho)):
				raise DomainError(f"rho must exceed 1, got {self.rho}")
		else:
			if self.rho1 is None or self.rho2 is None:
				raise InputError("system mode needs both rho1 and rho2")
			if self.rho1 < 1.0 or self.rho2 < 1.0 or self.rho1 * self.rho2 <= 1.0:
				raise DomainError(f"need rho1, rho2 >= 1 and rho1*rho2 > 1, got ({self.rho1}, {self.rho2})")
		if self.epsilon is not None and self.epsilon < 0.0:
			raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")

	@property
	def is_system(self) -> bool:
		return self.rho is None

	@property
	def components(self) -> int:
		return 2 if self.is_system else 1

	def sources(self) -> List[Tuple[int, float]]:
		"""(component feeding the source, exponent) for each equation."""
		if self.is_system:
			return [(1, float(self.rho1)), (0, float(self.rho2))]
		return [(0, float(self.rho))]

	@property
	def growth_power(self) -> float:
		"""Power a with 1/||u||^a roughly linear in the time left before blow-up."""
		if not self.is_system:
			return float(self.rho) - 1.0
		return (self.rho1 * self.rho2 - 1.0) / (max(self.rho1, self.rho2) + 1.0)

	def weight(self, grid: Grid) -> np.ndarray:
		if self.sigma == 0.0:
			return np.ones(grid.shape)
		eps = grid.dx if self.epsilon is None else self.epsilon
		rr = grid.radius_squared + eps * eps
		if np.any(rr == 0.0):
			raise DomainError("epsilon=0 with sigma<0 puts a singular weight on the origin node")
		return rr ** (0.5 * self.sigma)

	def with_exponent(self, rho: float) -> "NonlinearitySpec":
		return NonlinearitySpec(sigma=self.sigma, gamma=self.gamma, rho=rho, epsilon=self.epsilon)
