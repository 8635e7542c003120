from __future__ import annotations

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import root

from rslab.errors import InputError, PositivityError
from rslab.fractional import FracParams, TimeMesh, default_grading
from rslab.mild.nonlinearity import NonlinearitySpec
from rslab.mild.record import EvolutionRecord, Status
from rslab.spectral import Field, Grid, MultiplierCache, admissible_q, array_lp_norm, default_cache

logger = logging.getLogger(__name__)

PICARD_TOL = 1e-10
PICARD_MAX_ITER = 50
NEWTON_MAX_ITER = 30
# growth of the last accepted state over the data, sup or L^r, that makes a failed step blow-up evidence
STALL_GROWTH_RATIO = 2.0
POSITIVITY_SLACK = 1e-6
DEFAULT_THRESHOLD_FACTOR = 1e6
# final/initial L^r ratio below which a run that never crossed the threshold counts as global
GLOBAL_DECAY_RATIO = 0.5


def panel_weight_means(mesh: TimeMesh, gamma: float) -> np.ndarray:
	"""Mean of s^gamma over each panel, exact for gamma > -1."""
	t = mesh.nodes
	g1 = gamma + 1.0
	return (t[1:] ** g1 - t[:-1] ** g1) / (g1 * np.diff(t))


class _DuhamelMarch:
	"""Product-trapezoid Duhamel scheme for K coupled components.

	Panel j contributes c_j [A(t_n - t_j) - A(t_n - t_{j+1})] (N_j + N_{j+1}) / 2
	in Fourier space, A being the time integral of the multiplier and c_j the
	panel mean of s^gamma. The N_n term makes each step implicit.
	"""

	def __init__(
		self,
		initial: List[Field],
		params: FracParams,
		nl: NonlinearitySpec,
		mesh: TimeMesh,
		r: float,
		p: float,
		cache: MultiplierCache,
		threshold_factor: float,
		keep_history: bool,
		snapshot_times: Sequence[float],
		source: bool,
	) -> None:
		self.grid = initial[0].grid
		self.params = params
		self.nl = nl
		self.mesh = mesh
		self.r = r
		self.p = p
		self.source = source
		self.links = nl.sources()
		self.keep_history = keep_history
		self.threshold_factor = threshold_factor
		self.threshold = 0.0
		self.u0 = np.stack([f.values for f in initial])
		self.axes = tuple(range(1, self.grid.dim + 1))
		unique, self.inverse = self.grid.spectrum
		self.s_table = cache.table(params, mesh, unique)
		self.a_table = cumulative_trapezoid(self.s_table, mesh.nodes, axis=0, initial=0.0)
		self.weight = nl.weight(self.grid)
		self.means = panel_weight_means(mesh, nl.gamma)
		self.snapshot_index: Dict[int, float] = {}
		for ts in snapshot_times:
			i = int(np.argmin(np.abs(mesh.nodes - ts)))
			self.snapshot_index[i] = float(mesh.nodes[i])
		self.warnings: List[str] = []

	def _fft(self, values: np.ndarray) -> np.ndarray:
		return np.fft.rfftn(values, axes=self.axes)

	def _ifft(self, spectrum: np.ndarray) -> np.ndarray:
		return np.fft.irfftn(spectrum, s=self.grid.shape, axes=self.axes)

	def _norms(self, u: np.ndarray, p: float) -> np.ndarray:
		with np.errstate(over="ignore", invalid="ignore"):
			return np.array([array_lp_norm(c, p, self.grid.cell_volume) for c in u])

	def _source(self, u: np.ndarray) -> np.ndarray:
		with np.errstate(over="ignore", invalid="ignore"):
			return np.stack([self.weight * np.maximum(u[src], 0.0) ** rho for src, rho in self.links])

	def _integrated(self, lags: np.ndarray) -> np.ndarray:
		# A at arbitrary lags, linear between mesh nodes (exact on uniform meshes)
		nodes = self.mesh.nodes
		idx = np.clip(np.searchsorted(nodes, lags, side="right") - 1, 0, nodes.size - 2)
		frac = np.clip((lags - nodes[idx]) / (nodes[idx + 1] - nodes[idx]), 0.0, 1.0)
		return self.a_table[idx] * (1.0 - frac)[:, None] + self.a_table[idx + 1] * frac[:, None]

	def _update(self, base: np.ndarray, implicit: np.ndarray, u: np.ndarray) -> np.ndarray:
		with np.errstate(over="ignore", invalid="ignore"):
			return self._ifft(base + implicit * self._fft(self._source(u)))

	def _escaped(self, u: np.ndarray) -> bool:
		return not np.all(np.isfinite(u)) or float(np.max(self._norms(u, self.r))) >= self.threshold

	def _gain(self, implicit: np.ndarray, u: np.ndarray) -> float:
		# sup-norm bound on the derivative of the implicit map at u
		with np.errstate(over="ignore", invalid="ignore"):
			slopes = [self.weight * rho * np.maximum(u[src], 0.0) ** (rho - 1.0) for src, rho in self.links]
			return float(np.max(np.abs(implicit))) * max(float(np.max(s)) for s in slopes)

	def _settled(self, u: np.ndarray, implicit: np.ndarray) -> bool:
		return bool(np.all(np.isfinite(u))) and self._gain(implicit, u) < 1.0

	def _growth(self, u: np.ndarray, n0_r: np.ndarray) -> float:
		sup = float(np.max(u)) / float(np.max(self.u0))
		lr = float(np.max(self._norms(u, self.r))) / float(np.max(n0_r))
		return max(sup, lr)

	def _solve_step(self, base: np.ndarray, implicit: np.ndarray, guess: np.ndarray) -> Tuple[np.ndarray, int, str]:
		"""Solve u = F^-1[base + implicit F(N(u))] for the next node.

		Picard first. When it does not settle, a Newton-Krylov solve takes
		over from the last iterate, or from the previous state if Picard left
		the threshold. Its root only counts where the map contracts, i.e. on
		the branch continued from the data.
		"""
		u = guess
		for it in range(1, PICARD_MAX_ITER + 1):
			new = self._update(base, implicit, u)
			if self._escaped(new):
				u = guess
				break
			delta = float(np.max(np.abs(new - u)))
			u = new
			if delta <= PICARD_TOL * max(1.0, float(np.max(np.abs(u)))):
				return u, it, "converged"
		shape = guess.shape
		tol = PICARD_TOL * max(1.0, float(np.max(np.abs(u))))
		try:
			with np.errstate(all="ignore"):
				solution = root(
					lambda x: x - self._update(base, implicit, x.reshape(shape)).ravel(),
					u.ravel(),
					method="krylov",
					options={"fatol": tol, "maxiter": NEWTON_MAX_ITER},
				)
		except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
			logger.debug("newton-krylov step raised %s: %s", type(exc).__name__, exc)
			return guess, PICARD_MAX_ITER, "failed"
		candidate = np.asarray(solution.x).reshape(shape)
		if solution.success and self._settled(candidate, implicit):
			return candidate, PICARD_MAX_ITER + int(solution.get("nit", 0)), "converged"
		logger.debug("newton-krylov step rejected: %s", solution.message)
		return guess, PICARD_MAX_ITER + int(solution.get("nit", 0)), "failed"

	def _check_positivity(self, u: np.ndarray, t: float) -> None:
		for comp in u:
			top = float(np.max(comp))
			low = float(np.min(comp))
			if low < -POSITIVITY_SLACK * max(top, 0.0):
				raise PositivityError(f"solution went negative ({low:.3e} vs max {top:.3e}) at t={t:g}", t=t)

	def _record(self, count: int, norms_r: List[np.ndarray], norms_p: List[np.ndarray], status: Status,
			t_blow: Optional[float], history: Optional[np.ndarray], snapshots: Dict[float, List[Field]],
			iterations: List[int]) -> EvolutionRecord:
		return EvolutionRecord(
			mesh=self.mesh.truncated(count) if count < len(self.mesh) else self.mesh,
			component_norms_r=np.array(norms_r),
			component_norms_p=np.array(norms_p),
			status=status,
			blow_threshold=self.threshold,
			r=self.r,
			p=self.p,
			t_blow=t_blow,
			growth_power=self.nl.growth_power,
			history=history[:count] if history is not None else None,
			snapshots=snapshots,
			inner_iterations=iterations,
			warnings=self.warnings,
			grid=self.grid,
		)

	def _snapshot(self, snapshots: Dict[float, List[Field]], index: int, u: np.ndarray) -> None:
		if index in self.snapshot_index:
			snapshots[self.snapshot_index[index]] = [Field(self.grid, c) for c in u]

	def run(self) -> EvolutionRecord:
		nodes = self.mesh.nodes
		size = len(self.mesh)
		comps = self.u0.shape[0]
		n0_r = self._norms(self.u0, self.r)
		n0_p = self._norms(self.u0, self.p)
		self.threshold = self.threshold_factor * float(np.max(n0_r))
		history = np.zeros((size, comps) + self.grid.shape) if self.keep_history else None
		snapshots: Dict[float, List[Field]] = {}
		self._snapshot(snapshots, 0, self.u0)
		if float(np.max(n0_r)) == 0.0:
			# zero data is a fixed point
			for i in range(1, size):
				self._snapshot(snapshots, i, self.u0)
			zeros = [np.zeros(comps)] * size
			self.threshold = 0.0
			return self._record(size, zeros, zeros, "Global", None, history, snapshots, [0] * (size - 1))

		if self.mesh.grading < default_grading(self.nl.gamma) - 1e-12:
			msg = f"mesh grading {self.mesh.grading:g} below {default_grading(self.nl.gamma):g} for gamma={self.nl.gamma:g}"
			logger.warning(msg)
			self.warnings.append(msg)

		u0_hat = self._fft(self.u0)
		spec_shape = u0_hat.shape[1:]
		src_hat = np.zeros((size, comps) + spec_shape, dtype=complex)
		if self.source:
			src_hat[0] = self._fft(self._source(self.u0))
		if history is not None:
			history[0] = self.u0
		norms_r = [n0_r]
		norms_p = [n0_p]
		iterations: List[int] = []
		u = self.u0

		for n in range(1, size):
			t_n = float(nodes[n])
			linear = self.s_table[n][self.inverse] * u0_hat
			if not self.source:
				u = self._ifft(linear)
				outcome = "converged"
				iterations.append(0)
			else:
				A = self._integrated(t_n - nodes[: n + 1])
				coef = self.means[:n, None] * (A[:-1] - A[1:])
				w = 0.5 * coef
				w[1:] += 0.5 * coef[:-1]
				base = linear + np.einsum("j...,jk...->k...", w[:, self.inverse], src_hat[:n])
				implicit = (0.5 * coef[-1])[self.inverse]
				u, its, outcome = self._solve_step(base, implicit, u)
				iterations.append(its)

			failed = outcome == "failed"
			if failed:
				growth = self._growth(u, n0_r)
				if growth < STALL_GROWTH_RATIO:
					msg = f"implicit step has no contracting solution at t={t_n:g} (growth {growth:.3g}); run stopped"
					logger.warning(msg)
					self.warnings.append(msg)
					if n == 1:
						# nothing accepted past the data; the first node is unknown
						norms_r.append(np.full(comps, np.nan))
						norms_p.append(np.full(comps, np.nan))
						return self._record(2, norms_r, norms_p, "Inconclusive", None, history, snapshots, iterations)
					return self._record(n, norms_r, norms_p, "Inconclusive", None, history, snapshots, iterations)
				msg = f"implicit step lost its solution at t={t_n:g} after growth {growth:.3g}; counted as blow-up"
				logger.info(msg)
				self.warnings.append(msg)
			if failed or self._escaped(u):
				crossed = self._norms(u, self.r)
				crossed = np.where(np.isfinite(crossed), crossed, self.threshold)
				if float(np.max(crossed)) < self.threshold:
					crossed[int(np.argmax(crossed))] = self.threshold
				pn = self._norms(u, self.p)
				norms_r.append(crossed)
				norms_p.append(np.where(np.isfinite(pn), pn, np.inf))
				logger.info("norm crossed threshold %.3g at t=%g", self.threshold, t_n)
				return self._record(n + 1, norms_r, norms_p, "BlewUp", t_n, history, snapshots, iterations)

			self._check_positivity(u, t_n)
			norms_r.append(self._norms(u, self.r))
			norms_p.append(self._norms(u, self.p))
			if history is not None:
				history[n] = u
			self._snapshot(snapshots, n, u)
			if self.source:
				src_hat[n] = self._fft(self._source(u))

		ratio = float(np.max(norms_r[-1]) / np.max(n0_r))
		status: Status = "Global" if ratio < GLOBAL_DECAY_RATIO else "Inconclusive"
		logger.debug("run finished at t=%g with norm ratio %.3g -> %s", nodes[-1], ratio, status)
		return self._record(size, norms_r, norms_p, status, None, history, snapshots, iterations)


def _validate(fields: List[Field], grid: Optional[Grid], r: float, p: float, threshold_factor: float) -> None:
	base = fields[0].grid
	if grid is not None and grid != base:
		raise InputError("initial data does not live on the given grid")
	for f in fields:
		if f.grid != base:
			raise InputError("all components must share one grid")
		if np.any(f.values < 0.0):
			raise InputError("initial data must be nonnegative")
	admissible_q(base.dim, r, p)
	if not threshold_factor > 1.0:
		raise InputError(f"blow-up threshold factor must exceed 1, got {threshold_factor}")


def duhamel_evolve(
	u0: Field,
	params: FracParams,
	nl: NonlinearitySpec,
	mesh: TimeMesh,
	grid: Optional[Grid] = None,
	r: float = 2.0,
	p: float = 4.0,
	*,
	cache: Optional[MultiplierCache] = None,
	threshold_factor: float = DEFAULT_THRESHOLD_FACTOR,
	keep_history: bool = False,
	snapshot_times: Sequence[float] = (),
	source: bool = True,
) -> EvolutionRecord:
	"""March the mild formulation of the scalar problem over `mesh`.

	Stops at the first node where ||u||_r reaches `threshold_factor` * ||u0||_r
	(BlewUp). `source=False` gives the linear flow S(t_n) u0.
	"""
	if nl.is_system:
		raise InputError("duhamel_evolve takes a scalar nonlinearity; use duhamel_evolve_system")
	_validate([u0], grid, r, p, threshold_factor)
	march = _DuhamelMarch(
		[u0], params, nl, mesh, r, p,
		cache if cache is not None else default_cache(),
		threshold_factor, keep_history, snapshot_times, source,
	)
	return march.run()


def duhamel_evolve_system(
	u0: Field,
	v0: Field,
	params: FracParams,
	nl: NonlinearitySpec,
	mesh: TimeMesh,
	grid: Optional[Grid] = None,
	r: float = 2.0,
	p: float = 4.0,
	*,
	cache: Optional[MultiplierCache] = None,
	threshold_factor: float = DEFAULT_THRESHOLD_FACTOR,
	keep_history: bool = False,
	snapshot_times: Sequence[float] = (),
	source: bool = True,
) -> EvolutionRecord:
	"""Coupled run with sources v^rho1 (first equation) and u^rho2 (second)."""
	if not nl.is_system:
		raise InputError("duhamel_evolve_system needs rho1 and rho2")
	_validate([u0, v0], grid, r, p, threshold_factor)
	march = _DuhamelMarch(
		[u0, v0], params, nl, mesh, r, p,
		cache if cache is not None else default_cache(),
		threshold_factor, keep_history, snapshot_times, source,
	)
	return march.run()


def estimate_blowup_time(record: EvolutionRecord) -> Optional[float]:
	"""Blow-up time from the last two finite norms before the crossing.

	1/||u||^a, a = record.growth_power, is extrapolated linearly to zero and clamped to the
	crossing panel; None unless the run blew up.
	"""
	if record.status != "BlewUp" or record.t_blow is None:
		return None
	norms = record.norms_r
	t = record.times
	if norms.size < 3:
		return record.t_blow
	ya = norms[-3] ** (-record.growth_power)
	yb = norms[-2] ** (-record.growth_power)
	if not (ya > yb > 0.0):
		return record.t_blow
	estimate = t[-2] + yb * (t[-2] - t[-3]) / (ya - yb)
	return float(min(max(estimate, t[-2]), t[-1]))
