from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from rslab.errors import DomainError, InputError, RegimeError
from rslab.mild import NonlinearitySpec, contraction_radius, critical_r, system_contraction_radius
from rslab.spectral import admissible_q

# r used for the contraction radius when r_c <= 1 (any r > 1 is allowed there)
FALLBACK_R = 2.0


def _scaling(N: int, sigma: float, gamma: float) -> float:
	if int(N) != N or N < 1:
		raise DomainError(f"N must be a positive integer, got {N}")
	if sigma > 0.0 or gamma > 0.0:
		raise DomainError(f"sigma and gamma must be <= 0, got sigma={sigma}, gamma={gamma}")
	scale = sigma + 2.0 * (gamma + 1.0)
	if not scale > 0.0:
		raise DomainError("sigma+2(gamma+1)>0 violated")
	return scale


def critical_exponent(N: int, sigma: float = 0.0, gamma: float = 0.0) -> float:
	"""rho_c = 1 + (sigma + 2(gamma+1)) / N."""
	return 1.0 + _scaling(N, sigma, gamma) / N


@dataclass(frozen=True)
class SystemCritical:
	"""Critical product (rho1 rho2)_c and the critical indices (r1)_c, (r2)_c."""
	product: float
	r1: float
	r2: float

	def supercritical(self, rho1: float, rho2: float) -> bool:
		return rho1 * rho2 > self.product


def critical_curve_system(N: int, sigma: float, gamma: float, rho1: float, rho2: float) -> SystemCritical:
	scale = _scaling(N, sigma, gamma)
	if rho1 < 1.0 or rho2 < 1.0 or rho1 * rho2 <= 1.0:
		raise DomainError(f"need rho1, rho2 >= 1 and rho1*rho2 > 1, got ({rho1}, {rho2})")
	product = 1.0 + scale / N * max(rho1 + 1.0, rho2 + 1.0)
	excess = N * (rho1 * rho2 - 1.0) / scale
	return SystemCritical(product=product, r1=excess / (rho1 + 1.0), r2=excess / (rho2 + 1.0))


def index_window(N: int, sigma: float, gamma: float, rho: float, r: float) -> Tuple[float, float]:
	"""Open interval of p for which (q, p, r) is admissible and both Beta arguments are positive."""
	_scaling(N, sigma, gamma)
	if not r > 1.0:
		raise InputError(f"r must exceed 1, got {r}")
	low = max(r, rho, N * (rho - 1.0) / (2.0 + sigma))
	high = r * rho
	if N > 2.0 * r:
		high = min(high, N * r / (N - 2.0 * r))
	# 1 + gamma - rho/q > 0 with 1/q = N/2 (1/r - 1/p)
	slack = 1.0 / r - 2.0 * (1.0 + gamma) / (rho * N)
	if slack > 0.0:
		high = min(high, 1.0 / slack)
	return low, high


def choose_indices(N: int, sigma: float, gamma: float, rho: float, r: float) -> Tuple[float, float]:
	"""(p, q) with p at the middle of the feasible window."""
	low, high = index_window(N, sigma, gamma, rho, r)
	if not low < high:
		raise RegimeError(f"no admissible p for rho={rho:g}, r={r:g}: window [{low:.6g}, {high:.6g}] is empty")
	p = 0.5 * (low + high)
	return p, admissible_q(N, r, p)


def default_indices(nl: NonlinearitySpec, N: int) -> Tuple[float, float, float]:
	"""(r, p, q) used for the smallness scale of scalar runs: r = r_c when r_c > 1."""
	if nl.is_system:
		raise InputError("default_indices takes a scalar nonlinearity")
	r_c = critical_r(N, nl.sigma, nl.gamma, float(nl.rho))
	r = r_c if r_c > 1.0 else FALLBACK_R
	p, q = choose_indices(N, nl.sigma, nl.gamma, float(nl.rho), r)
	return r, p, q


def system_indices(
	N: int,
	sigma: float,
	gamma: float,
	rho1: float,
	rho2: float,
	theta: float = 1.5,
) -> Tuple[float, float, float, float, float, float]:
	"""(r1, r2, p1, p2, q1, q2) with r_i = (r_i)_c and p_i = theta * r_i."""
	if not theta > 1.0:
		raise InputError(f"theta must exceed 1, got {theta}")
	crit = critical_curve_system(N, sigma, gamma, rho1, rho2)
	if crit.r1 <= 1.0 or crit.r2 <= 1.0:
		raise RegimeError(f"critical indices ({crit.r1:.6g}, {crit.r2:.6g}) must both exceed 1")
	p1, p2 = theta * crit.r1, theta * crit.r2
	return crit.r1, crit.r2, p1, p2, admissible_q(N, crit.r1, p1), admissible_q(N, crit.r2, p2)


def smallness_scale(nl: NonlinearitySpec, N: int, c_op: float = 1.0) -> float:
	"""Contraction radius at the default indices; scalar or system."""
	if nl.is_system:
		_, _, p1, p2, q1, q2 = system_indices(N, nl.sigma, nl.gamma, float(nl.rho1), float(nl.rho2))
		return system_contraction_radius(nl, N, p1, p2, q1, q2, c_op)
	r, p, q = default_indices(nl, N)
	radius, _ = contraction_radius(nl, N, p, r, q, c_op)
	return radius


def inequality_exponent(nl: NonlinearitySpec, N: int) -> float:
	"""Power of R bounding the test-function functional of a global solution.

	Scalar: N - (sigma+2gamma+2)/(rho-1). System: N - (max(rho_i)+1)(sigma+2gamma+2)/(rho1 rho2 - 1).
	Positive exponents (supercritical data) carry no bound and raise RegimeError.
	"""
	scale = _scaling(N, nl.sigma, nl.gamma)
	if nl.is_system:
		rho1, rho2 = float(nl.rho1), float(nl.rho2)
		exponent = N - (max(rho1, rho2) + 1.0) * scale / (rho1 * rho2 - 1.0)
	else:
		exponent = N - scale / (float(nl.rho) - 1.0)
	if exponent > 1e-12 * max(1.0, abs(N)):
		raise RegimeError(f"supercritical exponents: R-power {exponent:.6g} > 0, no bound is claimed")
	return 0.0 if math.isclose(exponent, 0.0, abs_tol=1e-12) else exponent
