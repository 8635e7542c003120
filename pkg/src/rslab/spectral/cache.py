from __future__ import annotations

import logging
import threading
from typing import Dict, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from rslab.fractional import FracParams, TimeMesh
from rslab.relaxation import relaxation_table

logger = logging.getLogger(__name__)

_Key = Tuple[FracParams, Tuple[int, str]]


class MultiplierCache:
	"""s(t_n, mu) per (params, mesh), one Volterra solve per distinct mu.

	Safe for concurrent use: lookups and inserts hold the lock, solves run
	outside it (a mu solved twice by racing threads gives the same column).
	"""

	def __init__(self) -> None:
		self._curves: Dict[_Key, Dict[float, np.ndarray]] = {}
		self._lock = threading.Lock()
		self.solves = 0

	def table(self, params: FracParams, mesh: TimeMesh, mus: np.ndarray) -> np.ndarray:
		"""Columns s(., mu) for each entry of `mus`, shape (len(mesh), len(mus))."""
		mus = np.asarray(mus, dtype=float).ravel()
		key = (params, mesh.key)
		with self._lock:
			store = self._curves.setdefault(key, {})
			missing = [float(m) for m in np.unique(mus) if float(m) not in store]
		if missing:
			logger.debug("solving %d relaxation curves on %d nodes", len(missing), len(mesh))
			fresh = relaxation_table(missing, params, mesh)
			with self._lock:
				for col, mu in enumerate(missing):
					store[mu] = fresh[:, col]
				self.solves += len(missing)
		with self._lock:
			return np.stack([store[float(m)] for m in mus], axis=1)

	def integrated(self, params: FracParams, mesh: TimeMesh, mus: np.ndarray) -> np.ndarray:
		"""A(t_n, mu) = int_0^t_n s(tau, mu) dtau by the trapezoid rule."""
		return cumulative_trapezoid(self.table(params, mesh, mus), mesh.nodes, axis=0, initial=0.0)

	def __len__(self) -> int:
		with self._lock:
			return sum(len(store) for store in self._curves.values())

	def clear(self) -> None:
		with self._lock:
			self._curves.clear()
			self.solves = 0
