from __future__ import annotations

import math
from typing import Tuple

from rslab.errors import InputError, RegimeError
from rslab.fractional import beta_fn
from rslab.mild.nonlinearity import NonlinearitySpec


def critical_r(N: int, sigma: float, gamma: float, rho: float) -> float:
	"""r_c = N (rho - 1) / (sigma + 2 (gamma + 1))."""
	return N * (rho - 1.0) / (sigma + 2.0 * (gamma + 1.0))


def _beta_checked(a: float, b: float, first: str, second: str) -> float:
	if a <= 0.0:
		raise RegimeError(f"{first} > 0 violated ({a:.6g})")
	if b <= 0.0:
		raise RegimeError(f"{second} > 0 violated ({b:.6g})")
	return float(beta_fn(a, b))


def beta_one(N: int, sigma: float, gamma: float, rho: float, p: float, q: float) -> float:
	"""B(1 - N(rho-1)/(2p) + sigma/2, 1 + gamma - rho/q)."""
	return _beta_checked(
		1.0 - N * (rho - 1.0) / (2.0 * p) + sigma / 2.0,
		1.0 + gamma - rho / q,
		"1 - N(rho-1)/(2p) + sigma/2",
		"1 + gamma - rho/q",
	)


def _scalar_rho(nl: NonlinearitySpec) -> float:
	if nl.is_system:
		raise InputError("expected a scalar nonlinearity")
	return float(nl.rho)


def _check_constants(q: float, c_op: float) -> None:
	if not q > 0.0:
		raise InputError(f"q must be positive, got {q}")
	if not c_op > 0.0:
		raise InputError(f"C_op must be positive, got {c_op}")


def contraction_radius(nl: NonlinearitySpec, N: int, p: float, r: float, q: float, c_op: float = 1.0) -> Tuple[float, float]:
	"""(2 C_op B1)^(1/(1-rho)) together with B1.

	Data with ||u0||_r below this radius (up to the operator constant C_op,
	which has no explicit value) yields a global mild solution.
	"""
	_check_constants(q, c_op)
	rho = _scalar_rho(nl)
	b1 = beta_one(N, nl.sigma, nl.gamma, rho, p, q)
	return (2.0 * c_op * b1) ** (1.0 / (1.0 - rho)), b1


def local_existence_horizon(
	norm_u0_r: float,
	nl: NonlinearitySpec,
	N: int,
	r: float,
	p: float,
	q: float,
	c_op: float = 1.0,
) -> float:
	"""Bound on <T> for which the local mild solution exists."""
	_check_constants(q, c_op)
	rho = _scalar_rho(nl)
	r_c = critical_r(N, nl.sigma, nl.gamma, rho)
	if r <= r_c:
		raise RegimeError(f"local horizon needs r > r_c = {r_c:.6g}, got r = {r}")
	if norm_u0_r < 0.0:
		raise InputError(f"norm must be >= 0, got {norm_u0_r}")
	if norm_u0_r == 0.0:
		return math.inf
	b1 = beta_one(N, nl.sigma, nl.gamma, rho, p, q)
	exponent = 1.0 / (N * (rho - 1.0) / (2.0 * r) - nl.sigma / 2.0 - nl.gamma - 1.0)
	return (2.0 ** rho * c_op ** rho * b1 * norm_u0_r ** (rho - 1.0)) ** exponent


def system_beta_constants(
	N: int,
	sigma: float,
	gamma: float,
	rho1: float,
	rho2: float,
	p1: float,
	p2: float,
	q1: float,
	q2: float,
) -> Tuple[float, float]:
	"""(B2, B3) for the coupled estimate."""
	b2 = _beta_checked(
		1.0 - N / 2.0 * (rho1 / p2 - 1.0 / p1) + sigma / 2.0,
		1.0 + gamma - rho1 / q2,
		"1 - N/2 (rho1/p2 - 1/p1) + sigma/2",
		"1 + gamma - rho1/q2",
	)
	b3 = _beta_checked(
		1.0 - N / 2.0 * (rho2 / p1 - 1.0 / p2) + sigma / 2.0,
		1.0 + gamma - rho2 / q1,
		"1 - N/2 (rho2/p1 - 1/p2) + sigma/2",
		"1 + gamma - rho2/q1",
	)
	return b2, b3


def _radius_term(c_op: float, b: float, rho: float) -> float:
	if rho == 1.0:
		return math.inf
	return (2.0 * c_op * b) ** (1.0 / (1.0 - rho))


def system_contraction_radius(
	nl: NonlinearitySpec,
	N: int,
	p1: float,
	p2: float,
	q1: float,
	q2: float,
	c_op: float = 1.0,
) -> float:
	"""min{(2 C B2)^(1/(1-rho1)), (2 C B3)^(1/(1-rho2))}; a rho_i = 1 term imposes no limit."""
	if not nl.is_system:
		raise InputError("expected a system nonlinearity")
	_check_constants(min(q1, q2), c_op)
	rho1, rho2 = float(nl.rho1), float(nl.rho2)
	b2, b3 = system_beta_constants(N, nl.sigma, nl.gamma, rho1, rho2, p1, p2, q1, q2)
	return min(_radius_term(c_op, b2, rho1), _radius_term(c_op, b3, rho2))

