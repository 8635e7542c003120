from __future__ import annotations

import copy
import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

from rslab.config.schema import KEY_INDEX, KEYS, coerce, render
from rslab.errors import ConfigError, RslabError
from rslab.fractional import FracParams, TimeMesh, default_grading
from rslab.mild import NonlinearitySpec
from rslab.spectral import Grid, admissible_q, auto_box

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
	"""Validated run configuration: every key of the schema, plus the line each came from (0 = default or override)."""
	values: Dict[str, Any]
	lines: Dict[str, int] = field(default_factory=dict)

	def __getitem__(self, key: str) -> Any:
		if key not in KEY_INDEX:
			raise KeyError(key)
		return copy.copy(self.values[key])

	@property
	def mode(self) -> str:
		return self.values["mode"]

	def frac_params(self) -> FracParams:
		return FracParams(alpha=self.values["frac.alpha"], k=self.values["frac.k"])

	def nonlinearity(self, rho: Optional[float] = None, rho2: Optional[float] = None) -> NonlinearitySpec:
		"""Source of the run; `rho` replaces nl.rho, `rho2` replaces nl.rho2 in system mode."""
		v = self.values
		common = dict(sigma=v["nl.sigma"], gamma=v["nl.gamma"], epsilon=v["nl.epsilon"])
		if rho2 is not None or (v["nl.rho1"] is not None and rho is None):
			second = rho2 if rho2 is not None else v["nl.rho2"]
			return NonlinearitySpec(rho1=v["nl.rho1"], rho2=second, **common)
		exponent = rho if rho is not None else v["nl.rho"]
		if exponent is None:
			raise ConfigError("no exponent: set nl.rho or nl.rho1 and nl.rho2", field="nl.rho", line=self.lines.get("nl.rho", 0))
		return NonlinearitySpec(rho=exponent, **common)

	@property
	def box(self) -> float:
		box = self.values["grid.box"]
		return box if box is not None else auto_box(self.frac_params(), self.values["mesh.tmax"])

	def grid(self) -> Grid:
		return Grid(dim=self.values["grid.dim"], points=self.values["grid.points"], half_length=self.box)

	def mesh(self) -> TimeMesh:
		grading = self.values["mesh.grading"]
		if grading is None:
			grading = default_grading(self.values["nl.gamma"])
		return TimeMesh.graded(self.values["mesh.tmax"], self.values["mesh.nodes"] - 1, grading)

	def to_text(self) -> str:
		"""Canonical text: every key in schema order; parse_config(to_text()) gives an equal config."""
		return "".join(f"{key.name} = {render(key, self.values[key.name])}\n" for key in KEYS)

	def digest(self) -> str:
		return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

	def echo(self) -> Dict[str, Any]:
		return {key.name: copy.copy(self.values[key.name]) for key in KEYS}

	def with_overrides(self, assignments: Iterable[str]) -> "RunConfig":
		"""Apply `key=value` overrides (reported as line 0) and re-validate."""
		values = dict(self.values)
		lines = dict(self.lines)
		seen = set()
		for item in assignments:
			name, text = _split_assignment(item, 0)
			if name in seen:
				raise ConfigError("duplicate override", field=name)
			seen.add(name)
			values[name] = coerce(KEY_INDEX[name], text, 0)
			lines[name] = 0
		_cross_check(values, lines)
		return RunConfig(values=values, lines=lines)


def _split_assignment(text: str, line: int) -> Tuple[str, str]:
	if "=" not in text:
		raise ConfigError(f"expected 'key = value', got {text.strip()!r}", line=line)
	name, _, value = text.partition("=")
	name = name.strip()
	if name not in KEY_INDEX:
		raise ConfigError("unknown key", field=name, line=line)
	return name, value


def _where(lines: Dict[str, int], *names: str) -> int:
	return next((lines[n] for n in names if lines.get(n)), 0)


def _cross_check(values: Dict[str, Any], lines: Dict[str, int]) -> None:
	sigma, gamma = values["nl.sigma"], values["nl.gamma"]
	if not sigma + 2.0 * (gamma + 1.0) > 0.0:
		raise ConfigError("sigma+2(gamma+1)>0 violated", field="nl.sigma", line=_where(lines, "nl.sigma", "nl.gamma"))
	scalar = values["nl.rho"] is not None
	rho1, rho2 = values["nl.rho1"], values["nl.rho2"]
	if scalar and (rho1 is not None or rho2 is not None):
		raise ConfigError("give either nl.rho or nl.rho1 and nl.rho2", field="nl.rho", line=_where(lines, "nl.rho"))
	if values["sweep.system"] and rho1 is None:
		raise ConfigError("system sweeps need nl.rho1", field="nl.rho1", line=_where(lines, "sweep.system"))
	if rho1 is not None and rho2 is not None:
		try:
			NonlinearitySpec(sigma=sigma, gamma=gamma, rho1=rho1, rho2=rho2)
		except RslabError as exc:
			raise ConfigError(str(exc), field="nl.rho2", line=_where(lines, "nl.rho2", "nl.rho1")) from None
	r, p = values["norm.r"], values["norm.p"]
	if r is not None and p is not None:
		try:
			admissible_q(values["grid.dim"], r, p)
		except RslabError as exc:
			raise ConfigError(str(exc), field="norm.p", line=_where(lines, "norm.p", "norm.r")) from None


def parse_config(text: str) -> RunConfig:
	"""Parse `key = value` lines; `#` starts a comment, blank lines are skipped.

	Unknown, duplicate or invalid keys raise ConfigError carrying the line and field.
	"""
	values = {key.name: copy.copy(key.default) for key in KEYS}
	lines: Dict[str, int] = {}
	for number, raw in enumerate(text.splitlines(), start=1):
		body = raw.split("#", 1)[0].strip()
		if not body:
			continue
		name, value = _split_assignment(body, number)
		if name in lines:
			raise ConfigError(f"duplicate key (first set on line {lines[name]})", field=name, line=number)
		values[name] = coerce(KEY_INDEX[name], value, number)
		lines[name] = number
	_cross_check(values, lines)
	logger.debug("parsed %d keys", len(lines))
	return RunConfig(values=values, lines=lines)


def load_config(path: Path) -> RunConfig:
	return parse_config(Path(path).read_text(encoding="utf-8"))


def default_config(**overrides: Any) -> RunConfig:
	"""Defaults with keyword overrides given as `section_key=value` (dot replaced by underscore)."""
	assignments = []
	for name, value in overrides.items():
		dotted = name.replace("_", ".", 1)
		key = KEY_INDEX.get(dotted)
		if key is None:
			raise ConfigError("unknown key", field=dotted)
		assignments.append(f"{dotted}={render(key, value)}")
	return parse_config("").with_overrides(assignments)
