from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from rslab.config import RunConfig
from rslab.errors import InputError, RslabError, relabel
from rslab.fujita.formulas import critical_curve_system, critical_exponent, default_indices, smallness_scale, system_indices
from rslab.mild import (
	EvolutionRecord,
	NonlinearitySpec,
	Status,
	duhamel_evolve,
	duhamel_evolve_system,
	estimate_blowup_time,
)
from rslab.spectral import Field, MultiplierCache, initial_profile

logger = logging.getLogger(__name__)

# fraction of the contraction radius used by evolve.amplitude = radius
RADIUS_FRACTION = 0.1
# L^r / L^p pair tracked when norm.r / norm.p are left on auto
TRACKING_INDICES = (2.0, 4.0)


def resolve_workers(requested: Optional[int], jobs: int) -> int:
	"""Worker count: the request (or the I/O-style default), capped by RSLAB_THREADS and the job count."""
	workers = requested if requested is not None else min(32, (os.cpu_count() or 4) * 2)
	cap = os.getenv("RSLAB_THREADS")
	if cap:
		try:
			workers = min(workers, max(1, int(cap)))
		except ValueError:
			logger.warning("ignoring RSLAB_THREADS=%r (not an integer)", cap)
	return max(1, min(workers, max(jobs, 1)))


@dataclass(frozen=True)
class SweepReport:
	"""Status per axis value (rho, or the product rho1*rho2 with rho1 fixed in system sweeps)."""
	axis: List[float]
	statuses: List[Status]
	rho_c: float
	critical: List[float] = field(default_factory=list)
	t_blow: List[Optional[float]] = field(default_factory=list)
	final_ratios: List[float] = field(default_factory=list)
	system: bool = False
	metadata: Dict[str, Any] = field(default_factory=dict)

	def __post_init__(self) -> None:
		if len(self.statuses) != len(self.axis):
			raise InputError(f"{len(self.statuses)} statuses for {len(self.axis)} axis values")

	@property
	def inconclusive_only(self) -> bool:
		return bool(self.statuses) and all(s == "Inconclusive" for s in self.statuses)

	def rows(self) -> List[Dict[str, Any]]:
		return [
			{
				"axis": value,
				"status": status,
				"critical": crit,
				"supercritical": value > crit,
				"t_blow": tb,
				"final_ratio": ratio,
			}
			for value, status, crit, tb, ratio in zip(self.axis, self.statuses, self.critical, self.t_blow, self.final_ratios)
		]

	def to_dict(self) -> Dict[str, Any]:
		return {
			"system": self.system,
			"rho_c": self.rho_c,
			"axis": list(self.axis),
			"statuses": list(self.statuses),
			"critical": list(self.critical),
			"t_blow": list(self.t_blow),
			"final_ratios": list(self.final_ratios),
			"metadata": self.metadata,
		}


def _point_nonlinearity(config: RunConfig, value: float) -> NonlinearitySpec:
	if config["sweep.system"]:
		rho1 = float(config["nl.rho1"])
		return config.nonlinearity(rho2=value / rho1)
	return config.nonlinearity(rho=value)


def _critical_at(nl: NonlinearitySpec, N: int) -> float:
	if nl.is_system:
		return critical_curve_system(N, nl.sigma, nl.gamma, float(nl.rho1), float(nl.rho2)).product
	return critical_exponent(N, nl.sigma, nl.gamma)


def initial_data(config: RunConfig, nl: NonlinearitySpec) -> Tuple[Field, Dict[str, Any]]:
	"""Initial profile from the evolve.* keys; `radius` amplitude is 0.1 x the contraction radius of `nl`."""
	grid = config.grid()
	N = grid.dim
	amplitude = config["evolve.amplitude"]
	kind = config["evolve.profile"]
	width = config["evolve.width"]
	if amplitude != "radius":
		r = config["norm.r"] if kind == "powerlaw" else None
		return initial_profile(grid, kind, amplitude, width, r=r), {"amplitude": amplitude, "amplitude_mode": "peak"}
	scale = smallness_scale(nl, N, config["evolve.c_op"])
	if nl.is_system:
		r = system_indices(N, nl.sigma, nl.gamma, float(nl.rho1), float(nl.rho2))[0]
	else:
		r = default_indices(nl, N)[0]
	target = RADIUS_FRACTION * scale
	logger.info("data L^%.4g norm %.4g (0.1 x radius %.4g)", r, target, scale)
	meta = {"amplitude": target, "amplitude_mode": "radius", "radius": scale, "radius_index": r}
	return initial_profile(grid, kind, target, width, r=r), meta


def _run_point(config: RunConfig, value: float, u0: Field, cache: MultiplierCache) -> EvolutionRecord:
	nl = _point_nonlinearity(config, value)
	r = config["norm.r"] or TRACKING_INDICES[0]
	p = config["norm.p"] or TRACKING_INDICES[1]
	common = dict(
		cache=cache,
		threshold_factor=config["evolve.blow_threshold"],
	)
	params = config.frac_params()
	mesh = config.mesh()
	if nl.is_system:
		return duhamel_evolve_system(u0, u0, params, nl, mesh, u0.grid, r, p, **common)
	return duhamel_evolve(u0, params, nl, mesh, u0.grid, r, p, **common)


def dichotomy_sweep(config: RunConfig, cache: Optional[MultiplierCache] = None) -> SweepReport:
	"""Classify the run at every axis value as BlewUp, Global or Inconclusive.

	Points run as independent jobs on a thread pool; results are gathered
	back into axis order, so the report does not depend on the worker count.
	"""
	axis = [float(v) for v in config["sweep.axis"]]
	system = bool(config["sweep.system"])
	N = config["grid.dim"]
	rho_c = critical_exponent(N, config["nl.sigma"], config["nl.gamma"])
	grid = config.grid()
	mesh = config.mesh()
	metadata: Dict[str, Any] = {
		"config_hash": config.digest(),
		"grid": {"dim": grid.dim, "points": grid.points, "box": grid.half_length},
		"mesh": {"tmax": mesh.tmax, "nodes": len(mesh), "grading": mesh.grading},
		"blow_threshold": config["evolve.blow_threshold"],
		"norm_indices": [config["norm.r"] or TRACKING_INDICES[0], config["norm.p"] or TRACKING_INDICES[1]],
	}
	if not axis:
		return SweepReport(axis=[], statuses=[], rho_c=rho_c, system=system, metadata=metadata)

	try:
		u0, data_meta = initial_data(config, _point_nonlinearity(config, max(axis)))
	except RslabError as exc:
		raise relabel(exc, f"initial data for axis value {max(axis):g}") from exc
	metadata.update(data_meta)
	cache = cache if cache is not None else MultiplierCache()
	workers = resolve_workers(config["sweep.workers"], len(axis))
	metadata["workers"] = workers
	logger.info("sweeping %d points on %d workers (rho_c=%.6g)", len(axis), workers, rho_c)

	records: Dict[int, EvolutionRecord] = {}
	with ThreadPoolExecutor(max_workers=workers) as executor:
		futures = {executor.submit(_run_point, config, value, u0, cache): i for i, value in enumerate(axis)}
		for fut in as_completed(futures):
			i = futures[fut]
			label = f"rho1*rho2={axis[i]:g}" if system else f"rho={axis[i]:g}"
			try:
				records[i] = fut.result()
			except RslabError as exc:
				raise relabel(exc, label) from exc
			logger.info("%s -> %s", label, records[i].status)

	ordered = [records[i] for i in range(len(axis))]
	warnings = {str(axis[i]): rec.warnings for i, rec in enumerate(ordered) if rec.warnings}
	if warnings:
		metadata["warnings"] = warnings
	return SweepReport(
		axis=axis,
		statuses=[rec.status for rec in ordered],
		rho_c=rho_c,
		critical=[_critical_at(_point_nonlinearity(config, v), N) for v in axis],
		t_blow=[estimate_blowup_time(rec) for rec in ordered],
		final_ratios=[rec.final_ratio for rec in ordered],
		system=system,
		metadata=metadata,
	)
