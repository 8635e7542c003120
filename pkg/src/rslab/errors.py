from __future__ import annotations

from typing import Optional


class RslabError(Exception):
	"""Base class for every error raised by rslab."""


class DomainError(RslabError, ValueError):
	pass


class InputError(RslabError, ValueError):
	pass


class RegimeError(DomainError):
	"""Exponents outside the range where a formula or estimate is claimed."""


class AccuracyError(RslabError, ArithmeticError):
	pass


class PositivityError(AccuracyError):
	def __init__(self, message: str, t: Optional[float] = None) -> None:
		super().__init__(message)
		self.t = t


class InternalError(RslabError, RuntimeError):
	pass


class OutputError(RslabError, OSError):
	def __init__(self, message: str, path: str = "") -> None:
		super().__init__(message)
		self.path = path


class ConfigError(RslabError, ValueError):
	def __init__(self, message: str, field: str = "", line: int = 0) -> None:
		self.field = field
		self.line = line
		where = []
		if line:
			where.append(f"line {line}")
		if field:
			where.append(f"field '{field}'")
		prefix = f"[{', '.join(where)}] " if where else ""
		super().__init__(prefix + message)
		self.message = message


def relabel(exc: RslabError, label: str) -> RslabError:
	"""Copy of `exc` (same class) with `label` prefixed to its message."""
	if isinstance(exc, ConfigError):
		return ConfigError(f"{label}: {exc.message}", field=exc.field, line=exc.line)
	if isinstance(exc, PositivityError):
		return PositivityError(f"{label}: {exc}", t=exc.t)
	if isinstance(exc, OutputError):
		return OutputError(f"{label}: {exc}", path=exc.path)
	return type(exc)(f"{label}: {exc}")


__all__ = [
	"RslabError",
	"DomainError",
	"InputError",
	"RegimeError",
	"AccuracyError",
	"PositivityError",
	"InternalError",
	"OutputError",
	"ConfigError",
	"relabel",
]
