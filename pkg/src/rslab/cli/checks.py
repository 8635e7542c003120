from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np

from rslab.config import RunConfig
from rslab.fractional import TimeMesh, relaxation_grading, rl_right_derivative
from rslab.fujita import (
	TestFunctionSpec,
	critical_curve_system,
	critical_exponent,
	critical_r,
	functional_series,
	theta,
	theta_frac_derivative,
	verify_blowup_inequality,
	verify_lemma43,
	verify_lemma44,
)
from rslab.mild import NonlinearitySpec, duhamel_evolve
from rslab.relaxation import check_complete_monotonicity, solve_volterra
from rslab.spectral import Grid, auto_box, check_strong_continuity, initial_profile

logger = logging.getLogger(__name__)

LEMMA_Q = (1.5, 2.0, 3.0)
LEMMA_ALPHA = (0.3, 0.5, 0.8)
LEMMA_GAMMA = (0.0, -0.2)
FORMULA_SAMPLES = 1000
CONVERGENCE_RATIO = 1.5


@dataclass
class CheckResult:
	name: str
	ok: bool
	details: Dict[str, Any] = field(default_factory=dict)

	def as_dict(self) -> Dict[str, Any]:
		return {"name": self.name, "ok": self.ok, **self.details}


def _lemma_grid(which: str) -> CheckResult:
	failures: List[Dict[str, float]] = []
	stated_failures = 0
	count = 0
	for q in LEMMA_Q:
		for alpha in LEMMA_ALPHA:
			for gamma in LEMMA_GAMMA:
				for lam in (q * alpha, 2.0 * q * alpha, 5.0):
					if which == "lemma44" and lam < q:
						continue
					spec = TestFunctionSpec(T=2.0, lam=lam, R=2.0)
					check = verify_lemma43(spec, q, alpha, gamma) if which == "lemma43" else verify_lemma44(spec, q, gamma)
					count += 1
					stated_failures += int(not check.stated_holds)
					if not check.ok:
						failures.append({"q": q, "alpha": alpha, "gamma": gamma, "lambda": lam, "lhs": check.lhs})
	return CheckResult(which, not failures, {"cases": count, "failures": failures, "stated_constant_failures": stated_failures})


def check_lemma43(config: RunConfig) -> CheckResult:
	return _lemma_grid("lemma43")


def check_lemma44(config: RunConfig) -> CheckResult:
	return _lemma_grid("lemma44")


def check_theta(config: RunConfig) -> CheckResult:
	"""Closed-form right-sided derivative of theta against the discrete one on refined meshes."""
	alpha = config["frac.alpha"]
	spec = TestFunctionSpec(T=2.0, lam=2.0, R=2.0)
	errors = []
	for intervals in (32, 64, 128, 256):
		mesh = TimeMesh.uniform(spec.T, intervals)
		numeric = rl_right_derivative(theta(mesh.nodes, spec), mesh, alpha).values
		exact = theta_frac_derivative(mesh.nodes, spec, alpha)
		errors.append(float(np.max(np.abs(numeric[:-1] - exact[:-1])) / np.max(np.abs(exact))))
	ratios = [errors[i] / errors[i + 1] for i in range(len(errors) - 1)]
	return CheckResult("theta", all(r >= CONVERGENCE_RATIO for r in ratios), {"errors": errors, "ratios": ratios})


def check_monotonicity(config: RunConfig) -> CheckResult:
	params = config.frac_params()
	mesh = TimeMesh.graded(config["mesh.tmax"], config["mesh.nodes"] - 1, relaxation_grading(params.alpha))
	passed: Dict[str, bool] = {}
	for mu in config["relax.mu"]:
		report = check_complete_monotonicity(solve_volterra(mu, params, mesh))
		passed[repr(mu)] = report.ok
	return CheckResult("monotonicity", all(passed.values()), {"mu": passed})


def check_continuity(config: RunConfig) -> CheckResult:
	grid = Grid(dim=config["grid.dim"], points=config["grid.points"], half_length=16.0)
	u0 = initial_profile(grid, "gaussian", 1.0, config["evolve.width"])
	report = check_strong_continuity(u0, config.frac_params(), [1e-1, 1e-2, 1e-3, 1e-4])
	return CheckResult("continuity", report.ok, {"times": report.times, "errors": report.errors})


def check_formulas(config: RunConfig) -> CheckResult:
	rng = np.random.default_rng(0)
	mismatches = 0
	for _ in range(FORMULA_SAMPLES):
		N = int(rng.integers(1, 4))
		gamma = -rng.uniform(0.0, 0.9)
		sigma = -rng.uniform(0.0, 0.99 * 2.0 * (gamma + 1.0))
		rho1, rho2 = 1.0 + rng.uniform(0.0, 6.0, size=2)
		scalar = (rho1 > critical_exponent(N, sigma, gamma)) == (critical_r(N, sigma, gamma, rho1) > 1.0)
		crit = critical_curve_system(N, sigma, gamma, rho1, rho2)
		system = crit.supercritical(rho1, rho2) == (crit.r1 > 1.0 and crit.r2 > 1.0)
		mismatches += int(not scalar) + int(not system)
	return CheckResult("formulas", mismatches == 0, {"samples": FORMULA_SAMPLES, "mismatches": mismatches})


def check_inequality(config: RunConfig) -> CheckResult:
	"""Functional growth of a small subcritical run against the bound any global solution obeys."""
	N = config["grid.dim"]
	sigma, gamma = config["nl.sigma"], config["nl.gamma"]
	rho = 1.0 + 0.5 * (critical_exponent(N, sigma, gamma) - 1.0)
	nl = NonlinearitySpec(sigma=sigma, gamma=gamma, rho=rho)
	params = config.frac_params()
	tmax = 256.0
	grid = Grid(dim=N, points=config["grid.points"], half_length=auto_box(params, tmax))
	u0 = initial_profile(grid, "gaussian", 0.01, 2.0)
	record = duhamel_evolve(u0, params, nl, TimeMesh.graded(tmax, 200, 2.0), grid, keep_history=True)
	details: Dict[str, Any] = {"rho": rho, "status": record.status}
	if record.status == "BlewUp":
		details["note"] = "run blew up before T=256; functional not evaluated"
		return CheckResult("inequality", True, details)
	radii = [2.0, 4.0, 8.0, 16.0]
	report = verify_blowup_inequality(radii, functional_series(record, nl, radii), nl, N, params)
	details.update({
		"exponent": report.exponent,
		"slope": report.slope,
		"holds": report.holds,
		"contradicts_global": report.contradicts_global,
	})
	return CheckResult("inequality", report.contradicts_global, details)


CHECKS: Dict[str, Callable[[RunConfig], CheckResult]] = {
	"lemma43": check_lemma43,
	"lemma44": check_lemma44,
	"theta": check_theta,
	"monotonicity": check_monotonicity,
	"continuity": check_continuity,
	"formulas": check_formulas,
	"inequality": check_inequality,
}


def run_checks(config: RunConfig) -> List[CheckResult]:
	results = []
	for name in config["verify.checks"]:
		result = CHECKS[name](config)
		logger.info("check %s: %s", name, "ok" if result.ok else "FAILED")
		results.append(result)
	return results
