from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import hyp2f1

from rslab.errors import DomainError
from rslab.fractional import gamma_fn

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
CutoffKind = Literal["SmoothBump", "EigenfunctionProfile"]

# relative slack on quadrature results when comparing against bounds
QUAD_RTOL = 1e-8


@dataclass(frozen=True)
class TestFunctionSpec:
	"""Time horizon T, decay power `lam` of theta and cutoff radius R."""
	__test__ = False

	T: float
	lam: float
	R: float
	cutoff_kind: CutoffKind = "SmoothBump"

	def __post_init__(self) -> None:
		if not (self.T > 0.0 and math.isfinite(self.T)):
			raise DomainError(f"T must be positive, got {self.T}")
		if not self.lam > 0.0:
			raise DomainError(f"lambda must be positive, got {self.lam}")
		if not self.R > 1.0:
			raise DomainError(f"R must exceed 1, got {self.R}")
		if self.cutoff_kind not in ("SmoothBump", "EigenfunctionProfile"):
			raise DomainError(f"unknown cutoff kind {self.cutoff_kind!r}")

	@classmethod
	def coupled(cls, R: float, q: float = 2.0, beta: float = 2.0, cutoff_kind: CutoffKind = "SmoothBump") -> "TestFunctionSpec":
		"""T = R^beta and lambda large enough for both lemma checks at exponent q."""
		return cls(T=R ** beta, lam=default_lambda(q), R=R, cutoff_kind=cutoff_kind)


def default_lambda(q: float) -> float:
	return max(2.0, math.ceil(q) + 1.0)


def theta(t: ArrayLike, spec: TestFunctionSpec) -> ArrayLike:
	"""1 before T/2, 2^lam T^-lam (T-t)^lam up to T, 0 after."""
	arr = np.asarray(t, dtype=float)
	if np.any(arr < 0.0):
		raise DomainError("theta is defined for t >= 0")
	T, lam = spec.T, spec.lam
	tail = (2.0 / T) ** lam * np.clip(T - arr, 0.0, None) ** lam
	value = np.where(arr < 0.5 * T, 1.0, tail)
	return float(value) if value.ndim == 0 else value


def theta_prime(t: ArrayLike, spec: TestFunctionSpec) -> ArrayLike:
	arr = np.asarray(t, dtype=float)
	T, lam = spec.T, spec.lam
	inside = (arr >= 0.5 * T) & (arr <= T)
	value = np.where(inside, -lam * (2.0 / T) ** lam * np.clip(T - arr, 0.0, None) ** (lam - 1.0), 0.0)
	return float(value) if value.ndim == 0 else value


def _gamma_ratio(lam: float, alpha: float) -> float:
	return gamma_fn(lam + 1.0) / gamma_fn(lam + 1.0 - alpha)


def _check_order(spec: TestFunctionSpec, alpha: float) -> None:
	if not (0.0 < alpha < 1.0):
		raise DomainError(f"alpha must lie in open (0,1), got {alpha}")
	if not spec.lam > alpha:
		raise DomainError(f"right-sided derivative of theta needs lambda > alpha, got {spec.lam} <= {alpha}")


def theta_frac_derivative(t: ArrayLike, spec: TestFunctionSpec, alpha: float) -> ArrayLike:
	"""D^alpha_{T-} theta in closed form.

	On [T/2, T] this is 2^lam T^-lam Gamma(lam+1)/Gamma(lam+1-alpha) (T-t)^(lam-alpha);
	on [0, T/2) it is (T-t)^-alpha 2F1(alpha, lam; lam+1; T/(2(T-t))) / Gamma(1-alpha).
	"""
	_check_order(spec, alpha)
	arr = np.atleast_1d(np.asarray(t, dtype=float))
	if np.any(arr < 0.0):
		raise DomainError("theta is defined for t >= 0")
	T, lam = spec.T, spec.lam
	late = (arr >= 0.5 * T) & (arr <= T)
	early = arr < 0.5 * T
	out = np.zeros_like(arr)
	out[late] = (2.0 / T) ** lam * _gamma_ratio(lam, alpha) * (T - arr[late]) ** (lam - alpha)
	gap = T - arr[early]
	out[early] = gap ** (-alpha) * hyp2f1(alpha, lam, lam + 1.0, 0.5 * T / gap) / gamma_fn(1.0 - alpha)
	return float(out[0]) if np.ndim(t) == 0 else out


def theta_frac_derivative_bound(spec: TestFunctionSpec, alpha: float) -> float:
	"""Upper bound 2^alpha T^-alpha Gamma(lam+1)/Gamma(lam+1-alpha) of D^alpha_{T-} theta on [0, T/2)."""
	_check_order(spec, alpha)
	return (2.0 / spec.T) ** alpha * _gamma_ratio(spec.lam, alpha)


@dataclass(frozen=True)
class LemmaCheck:
	"""Weighted theta integral against its claimed power of T.

	`pieces` are the integrals over [0, T/2] and [T/2, T]; `piece_bounds` the bounds
	each piece satisfies. `stated_bound` is the published constant times the T power,
	`corrected_bound` the sum of the piece bounds.
	"""
	name: str
	lhs: float
	pieces: Tuple[float, float]
	piece_bounds: Tuple[float, float]
	closed_form: float
	exponent: float
	stated_bound: float
	corrected_bound: float
	T: float

	@property
	def scaled(self) -> float:
		"""lhs / T^exponent, independent of T."""
		return self.lhs / self.T ** self.exponent

	@property
	def stated_holds(self) -> bool:
		return self.lhs <= self.stated_bound * (1.0 + QUAD_RTOL)

	@property
	def ok(self) -> bool:
		pieces_ok = all(p <= b * (1.0 + QUAD_RTOL) for p, b in zip(self.pieces, self.piece_bounds))
		return pieces_ok and self.lhs <= self.corrected_bound * (1.0 + QUAD_RTOL)


def _tail_integral(g: float, m: float) -> float:
	"""int_0^1 tau^m (1 - tau/2)^(g-1) dtau."""
	return float(hyp2f1(1.0 - g, m + 1.0, m + 2.0, 0.5)) / (m + 1.0)


def _integrate(func, a: float, b: float) -> float:
	value, error = quad(func, a, b, limit=200, epsabs=0.0, epsrel=1e-11)
	if error > 1e-6 * max(abs(value), 1e-300):
		logger.warning("quadrature on [%g, %g] reports error %.3e for value %.6e", a, b, error, value)
	return float(value)


def _weight_exponent(q: float, gamma: float) -> float:
	if not q > 1.0:
		raise DomainError(f"q must exceed 1, got {q}")
	g = gamma * (1.0 - q) + 1.0
	if not g > 0.0:
		raise DomainError(f"gamma(1-q)+1 > 0 violated ({g:.6g})")
	return g


def verify_lemma43(spec: TestFunctionSpec, q: float, alpha: float, gamma: float = 0.0) -> LemmaCheck:
	"""int_0^T t^(gamma(1-q)) theta^(1-q) (D^alpha_{T-} theta)^q dt <= C T^(gamma(1-q)+1-q alpha)."""
	g = _weight_exponent(q, gamma)
	if spec.lam < q * alpha:
		raise DomainError(f"lambda >= q*alpha violated ({spec.lam} < {q * alpha:.6g})")
	_check_order(spec, alpha)
	T, lam = spec.T, spec.lam
	w = gamma * (1.0 - q)
	ratio_q = _gamma_ratio(lam, alpha) ** q

	def integrand(t: float) -> float:
		return t ** w * theta(t, spec) ** (1.0 - q) * theta_frac_derivative(t, spec, alpha) ** q

	low = _integrate(integrand, 0.0, 0.5 * T)
	high = _integrate(integrand, 0.5 * T, T)
	exponent = g - q * alpha
	stated = ratio_q * 2.0 ** (q * alpha - w - 1.0) / g
	# sup of (T-t)^(lam - q alpha) on [T/2, T] times int t^w
	high_bound = ratio_q * 2.0 ** (q * alpha) * (1.0 - 2.0 ** (-g)) / g
	closed = ratio_q * 2.0 ** (q * alpha - 1.0) * _tail_integral(g, lam - q * alpha) * T ** exponent
	scale = T ** exponent
	return LemmaCheck(
		name="lemma43",
		lhs=low + high,
		pieces=(low, high),
		piece_bounds=(stated * scale, high_bound * scale),
		closed_form=closed,
		exponent=exponent,
		stated_bound=stated * scale,
		corrected_bound=(stated + high_bound) * scale,
		T=T,
	)


def verify_lemma44(spec: TestFunctionSpec, q: float, gamma: float = 0.0) -> LemmaCheck:
	"""int_{T/2}^T t^(gamma(1-q)) theta^(1-q) |theta'|^q dt <= C T^((gamma+1)(1-q))."""
	g = _weight_exponent(q, gamma)
	if spec.lam < q:
		raise DomainError(f"lambda >= q violated ({spec.lam} < {q})")
	T, lam = spec.T, spec.lam
	w = gamma * (1.0 - q)

	def integrand(t: float) -> float:
		return t ** w * theta(t, spec) ** (1.0 - q) * abs(theta_prime(t, spec)) ** q

	high = _integrate(integrand, 0.5 * T, T)
	exponent = (gamma + 1.0) * (1.0 - q)
	scale = T ** exponent
	stated = 2.0 ** ((gamma + 1.0) * (q - 1.0)) * lam ** q / g
	high_bound = lam ** q * 2.0 ** q * (1.0 - 2.0 ** (-g)) / g
	closed = lam ** q * 2.0 ** (q - 1.0) * _tail_integral(g, lam - q) * scale
	return LemmaCheck(
		name="lemma44",
		lhs=high,
		pieces=(0.0, high),
		piece_bounds=(0.0, high_bound * scale),
		closed_form=closed,
		exponent=exponent,
		stated_bound=stated * scale,
		corrected_bound=high_bound * scale,
		T=T,
	)
