from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional

import numpy as np

from rslab.errors import InternalError
from rslab.fractional import TimeMesh
from rslab.spectral import Field, Grid

Status = Literal["Global", "BlewUp", "Inconclusive"]


@dataclass
class EvolutionRecord:
	"""Norm history of one Duhamel run over the nodes actually reached.

	`norms_r` / `norms_p` hold the largest component norm per node; the
	per-component values are in `component_norms_r` / `component_norms_p`.
	"""
	mesh: TimeMesh
	component_norms_r: np.ndarray
	component_norms_p: np.ndarray
	status: Status
	blow_threshold: float
	r: float
	p: float
	t_blow: Optional[float] = None
	growth_power: float = 1.0
	history: Optional[np.ndarray] = None
	snapshots: Dict[float, List[Field]] = field(default_factory=dict)
	inner_iterations: List[int] = field(default_factory=list)
	warnings: List[str] = field(default_factory=list)
	grid: Optional[Grid] = None

	def __post_init__(self) -> None:
		if np.any(self.component_norms_r < 0.0) or np.any(self.component_norms_p < 0.0):
			raise InternalError("norms must be nonnegative")
		if self.status == "BlewUp" and not self.component_norms_r[-1].max() >= self.blow_threshold:
			raise InternalError("BlewUp record must end at or above the blow-up threshold")

	@property
	def components(self) -> int:
		return int(self.component_norms_r.shape[1])

	@property
	def times(self) -> np.ndarray:
		return self.mesh.nodes

	@property
	def norms_r(self) -> np.ndarray:
		return self.component_norms_r.max(axis=1)

	@property
	def norms_p(self) -> np.ndarray:
		return self.component_norms_p.max(axis=1)

	@property
	def final_ratio(self) -> float:
		"""||u(t_end)||_r / ||u0||_r, or 0 for zero data."""
		start = float(self.norms_r[0])
		return float(self.norms_r[-1]) / start if start > 0.0 else 0.0

	def field_at(self, index: int, component: int, template: Field) -> Field:
		if self.history is None:
			raise InternalError("run was made without keep_history")
		return template.with_values(self.history[index, component])
