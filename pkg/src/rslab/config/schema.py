from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from rslab.errors import ConfigError, RslabError
from rslab.fractional import FracParams

Modes = ("relax", "decay", "evolve", "sweep", "verify")
CHECK_FAMILIES = ("lemma43", "lemma44", "theta", "monotonicity", "continuity", "formulas", "inequality")

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


@dataclass(frozen=True)
class Key:
	"""One dotted configuration key: value kind, default and an optional value check."""
	name: str
	kind: str
	default: Any
	choices: Optional[Tuple[str, ...]] = None
	check: Optional[Callable[[Any], None]] = None


def _positive(value: float) -> None:
	if not (value > 0.0 and math.isfinite(value)):
		raise ValueError(f"must be positive, got {value}")


def _nonpositive(value: float) -> None:
	if not value <= 0.0:
		raise ValueError(f"must be <= 0, got {value}")


def _alpha(value: float) -> None:
	FracParams(alpha=value, k=0.0)


def _k(value: float) -> None:
	FracParams(alpha=0.5, k=value)


def _dimension(value: int) -> None:
	if value not in (1, 2):
		raise ValueError(f"must be 1 or 2, got {value}")


def _points(value: int) -> None:
	if value < 64 or value & (value - 1):
		raise ValueError(f"must be a power of two >= 64, got {value}")


def _at_least(bound: float) -> Callable[[Any], None]:
	def check(value: float) -> None:
		if value < bound:
			raise ValueError(f"must be >= {bound:g}, got {value}")
	return check


def _above(bound: float) -> Callable[[Any], None]:
	def check(value: float) -> None:
		if not value > bound:
			raise ValueError(f"must exceed {bound:g}, got {value}")
	return check


def _amplitude(value: Any) -> None:
	if value != "radius":
		_positive(value)


def _nonnegative_list(values: List[float]) -> None:
	if any(v < 0.0 for v in values):
		raise ValueError("entries must be >= 0")


def _positive_list(values: List[float]) -> None:
	if any(not v > 0.0 for v in values):
		raise ValueError("entries must be positive")


def _families(values: List[str]) -> None:
	unknown = [v for v in values if v not in CHECK_FAMILIES]
	if unknown:
		raise ValueError(f"unknown check families {unknown}; known: {', '.join(CHECK_FAMILIES)}")


KEYS: Tuple[Key, ...] = (
	Key("mode", "choice", "evolve", choices=Modes),
	Key("frac.alpha", "float", 0.5, check=_alpha),
	Key("frac.k", "float", 1.0, check=_k),
	Key("grid.dim", "int", 1, check=_dimension),
	Key("grid.points", "int", 256, check=_points),
	Key("grid.box", "auto", None, check=_positive),
	Key("mesh.tmax", "float", 10.0, check=_positive),
	Key("mesh.nodes", "int", 201, check=_at_least(2)),
	Key("mesh.grading", "auto", None, check=_at_least(1.0)),
	Key("nl.sigma", "float", 0.0, check=_nonpositive),
	Key("nl.gamma", "float", 0.0, check=_nonpositive),
	Key("nl.rho", "auto", None, check=_above(1.0)),
	Key("nl.rho1", "auto", None, check=_at_least(1.0)),
	Key("nl.rho2", "auto", None, check=_at_least(1.0)),
	Key("nl.epsilon", "auto", None, check=_at_least(0.0)),
	Key("norm.r", "auto", None, check=_above(1.0)),
	Key("norm.p", "auto", None, check=_above(1.0)),
	Key("evolve.amplitude", "amplitude", "radius", check=_amplitude),
	Key("evolve.profile", "choice", "gaussian", choices=("gaussian", "bump", "powerlaw")),
	Key("evolve.width", "float", 1.0, check=_positive),
	Key("evolve.blow_threshold", "float", 1e6, check=_above(1.0)),
	Key("evolve.c_op", "float", 1.0, check=_positive),
	Key("evolve.snapshots", "floats", [], check=_nonnegative_list),
	Key("sweep.axis", "floats", [], check=_positive_list),
	Key("sweep.system", "bool", False),
	Key("sweep.workers", "auto_int", None, check=_at_least(1)),
	Key("decay.times", "floats", [0.1, 0.3, 1.0, 3.0, 10.0], check=_positive_list),
	Key("relax.mu", "floats", [1.0], check=_nonnegative_list),
	Key("relax.method", "choice", "both", choices=("volterra", "contour", "both")),
	Key("verify.checks", "strs", list(CHECK_FAMILIES), check=_families),
	Key("output.provenance", "bool", True),
)

KEY_INDEX: Dict[str, Key] = {k.name: k for k in KEYS}


def _split_list(text: str) -> List[str]:
	body = text.strip()
	if body.startswith("[") and body.endswith("]"):
		body = body[1:-1]
	return [item.strip() for item in body.split(",") if item.strip()]


def coerce(key: Key, text: str, line: int = 0) -> Any:
	"""Convert the raw text of `key` and run its check; failures become ConfigError."""
	raw = text.strip()
	try:
		if key.kind == "float":
			value: Any = float(raw)
		elif key.kind == "int":
			value = int(raw)
		elif key.kind == "bool":
			low = raw.lower()
			if low not in _TRUE | _FALSE:
				raise ValueError(f"expected true or false, got {raw!r}")
			value = low in _TRUE
		elif key.kind == "choice":
			if raw not in (key.choices or ()):
				raise ValueError(f"expected one of {', '.join(key.choices or ())}, got {raw!r}")
			value = raw
		elif key.kind in ("auto", "auto_int"):
			if raw.lower() in ("", "auto"):
				return None
			value = int(raw) if key.kind == "auto_int" else float(raw)
		elif key.kind == "amplitude":
			value = "radius" if raw.lower() == "radius" else float(raw)
		elif key.kind == "floats":
			value = [float(item) for item in _split_list(raw)]
		elif key.kind == "strs":
			value = _split_list(raw)
		else:
			raise ValueError(f"unsupported kind {key.kind}")
		if isinstance(value, float) and not math.isfinite(value):
			raise ValueError(f"must be finite, got {raw!r}")
		if key.check is not None:
			key.check(value)
	except (ValueError, RslabError) as exc:
		raise ConfigError(str(exc), field=key.name, line=line) from None
	return value


def render(key: Key, value: Any) -> str:
	"""Text form of a value that `coerce` maps back to the same value."""
	if value is None:
		return "auto"
	if isinstance(value, bool):
		return "true" if value else "false"
	if isinstance(value, float):
		return repr(value)
	if isinstance(value, list):
		return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in value)
	return str(value)
