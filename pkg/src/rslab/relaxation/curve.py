from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from rslab.errors import InputError
from rslab.fractional import TimeMesh

Method = Literal["Volterra", "Contour", "ClosedFormOracle"]


@dataclass(frozen=True, eq=False)
class RelaxationCurve:
	"""Sampled s(t, mu) on a time mesh, tagged with the method that produced it."""
	mesh: TimeMesh
	mu: float
	values: np.ndarray
	method: Method

	def __post_init__(self) -> None:
		vals = np.array(self.values, dtype=float)
		if vals.shape != self.mesh.nodes.shape:
			raise InputError(f"curve has {vals.size} values for {len(self.mesh)} nodes")
		if self.mu < 0.0:
			raise InputError(f"mu must be >= 0, got {self.mu}")
		if abs(vals[0] - 1.0) > 1e-12:
			raise InputError(f"relaxation curves start at 1, got {vals[0]}")
		vals.setflags(write=False)
		object.__setattr__(self, "values", vals)

	@property
	def times(self) -> np.ndarray:
		return self.mesh.nodes

	def in_range(self, tol: float = 1e-9) -> bool:
		return bool(np.all(self.values >= -tol) and np.all(self.values <= 1.0 + tol))

	def is_nonincreasing(self, tol: float = 1e-9) -> bool:
		return bool(np.all(np.diff(self.values) <= tol))


def oracle_curve(mu: float, mesh: TimeMesh, rate: float) -> RelaxationCurve:
	"""exp(-rate t): the k = 0 curve (rate = mu) or the alpha -> 1 limit (rate = mu / (1 + mu k))."""
	return RelaxationCurve(mesh=mesh, mu=mu, values=np.exp(-rate * mesh.nodes), method="ClosedFormOracle")


def layered_oracle_curve(mu: float, k: float, mesh: TimeMesh) -> RelaxationCurve:
	"""alpha -> 1 limit of the Riemann-Liouville relaxation equation.

	I^(1-alpha) tends to the identity, so s + mu k s + mu (1*s) = 1: the curve
	drops to 1 / (1 + mu k) right after t = 0 and then decays at rate
	mu / (1 + mu k). Node 0 keeps the value 1.
	"""
	jump = 1.0 / (1.0 + mu * k)
	values = jump * np.exp(-mu * jump * mesh.nodes)
	values[0] = 1.0
	return RelaxationCurve(mesh=mesh, mu=mu, values=values, method="ClosedFormOracle")
