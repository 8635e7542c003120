from __future__ import annotations

import math

import numpy as np
import pytest

from rslab.config import parse_config
from rslab.errors import DomainError, InputError, RegimeError
from rslab.fractional import FracParams, TimeMesh, rl_right_derivative
from rslab.fujita import (
	SweepReport,
	TestFunctionSpec,
	blowup_functional,
	choose_indices,
	critical_curve_system,
	critical_exponent,
	critical_r,
	cutoff_field,
	cutoff_laplacian,
	cutoff_xi,
	default_indices,
	default_lambda,
	dichotomy_sweep,
	functional_series,
	inequality_exponent,
	laplacian_ratio,
	profile_constant,
	resolve_workers,
	smallness_scale,
	system_indices,
	theta,
	theta_frac_derivative,
	theta_frac_derivative_bound,
	verify_blowup_inequality,
	verify_lemma43,
	verify_lemma44,
	weak_form_residual,
	weak_form_terms,
)
from rslab.mild import NonlinearitySpec, duhamel_evolve
from rslab.spectral import Grid, auto_box, initial_profile


# exponent formulas

@pytest.mark.parametrize(
	"N, sigma, gamma, expected",
	[(1, 0.0, 0.0, 3.0), (2, 0.0, 0.0, 2.0), (1, -0.5, -0.25, 2.0)],
)
def test_critical_exponent_examples(N, sigma, gamma, expected):
	assert critical_exponent(N, sigma, gamma) == pytest.approx(expected, abs=1e-15)


def test_critical_exponent_rejects_standing_assumption():
	with pytest.raises(DomainError, match=r"sigma\+2\(gamma\+1\)>0 violated"):
		critical_exponent(1, -3.0, 0.0)
	with pytest.raises(DomainError):
		critical_exponent(0)


def test_critical_system_example():
	crit = critical_curve_system(1, 0.0, 0.0, 3.0, 1.0)
	assert crit.product == pytest.approx(9.0)
	assert not crit.supercritical(3.0, 1.0)
	assert critical_curve_system(1, 0.0, 0.0, 3.0, 4.0).supercritical(3.0, 4.0)


def test_scalar_threshold_matches_critical_r():
	rng = np.random.default_rng(0)
	for _ in range(1000):
		N = int(rng.integers(1, 4))
		gamma = -rng.uniform(0.0, 0.9)
		sigma = -rng.uniform(0.0, 0.99 * 2.0 * (gamma + 1.0))
		rho = 1.0 + rng.uniform(0.0, 6.0)
		assert (rho > critical_exponent(N, sigma, gamma)) == (critical_r(N, sigma, gamma, rho) > 1.0)


def test_system_threshold_matches_critical_indices():
	rng = np.random.default_rng(1)
	for _ in range(1000):
		N = int(rng.integers(1, 4))
		gamma = -rng.uniform(0.0, 0.9)
		sigma = -rng.uniform(0.0, 0.99 * 2.0 * (gamma + 1.0))
		rho1 = 1.0 + rng.uniform(0.0, 6.0)
		rho2 = 1.0 + rng.uniform(0.0, 6.0)
		crit = critical_curve_system(N, sigma, gamma, rho1, rho2)
		assert crit.supercritical(rho1, rho2) == (crit.r1 > 1.0 and crit.r2 > 1.0)


def test_choose_indices_midpoint():
	p, q = choose_indices(1, 0.0, 0.0, 4.0, 1.5)
	assert p == pytest.approx(5.0)
	assert q == pytest.approx(30.0 / 7.0)
	with pytest.raises(RegimeError):
		choose_indices(1, 0.0, 0.0, 10.0, 1.5)


def test_default_indices_and_scale():
	nl = NonlinearitySpec(rho=4.0)
	r, p, q = default_indices(nl, 1)
	assert r == pytest.approx(1.5)
	assert 4.0 < p < 6.0
	assert smallness_scale(nl, 1) > 0.0
	# subcritical exponent: r_c <= 1 falls back to r = 2
	assert default_indices(NonlinearitySpec(rho=2.0), 1)[0] == 2.0


def test_system_indices_supercritical_only():
	r1, r2, p1, p2, q1, q2 = system_indices(1, 0.0, 0.0, 3.0, 4.0)
	assert r1 > 1.0 and r2 > 1.0
	assert p1 == pytest.approx(1.5 * r1)
	with pytest.raises(RegimeError):
		system_indices(1, 0.0, 0.0, 3.0, 1.0)


def test_inequality_exponent():
	assert inequality_exponent(NonlinearitySpec(rho=2.0), 1) == pytest.approx(-1.0)
	assert inequality_exponent(NonlinearitySpec(rho=3.0), 1) == 0.0
	assert inequality_exponent(NonlinearitySpec(rho1=3.0, rho2=1.0), 1) == pytest.approx(-3.0)
	with pytest.raises(RegimeError):
		inequality_exponent(NonlinearitySpec(rho=4.0), 1)


# test functions and lemma checks

def test_test_function_spec_validation():
	with pytest.raises(DomainError):
		TestFunctionSpec(T=0.0, lam=2.0, R=2.0)
	with pytest.raises(DomainError):
		TestFunctionSpec(T=1.0, lam=2.0, R=1.0)
	spec = TestFunctionSpec.coupled(3.0, q=2.0)
	assert spec.T == pytest.approx(9.0)
	assert spec.lam == default_lambda(2.0) == 3.0


def test_theta_shape():
	spec = TestFunctionSpec(T=4.0, lam=3.0, R=2.0)
	assert theta(0.0, spec) == 1.0
	assert theta(2.0, spec) == pytest.approx(1.0)
	assert theta(4.0, spec) == 0.0
	assert theta(5.0, spec) == 0.0
	t = np.linspace(0.0, 4.0, 101)
	assert np.all(np.diff(theta(t, spec)) <= 0.0)


def test_theta_frac_derivative_domain():
	spec = TestFunctionSpec(T=2.0, lam=0.4, R=2.0)
	with pytest.raises(DomainError):
		theta_frac_derivative(0.5, spec, 0.5)
	ok = TestFunctionSpec(T=2.0, lam=2.0, R=2.0)
	assert theta_frac_derivative(3.0, ok, 0.5) == 0.0


def test_theta_frac_derivative_bound_on_first_half():
	spec = TestFunctionSpec(T=3.0, lam=2.5, R=2.0)
	alpha = 0.4
	t = np.linspace(0.0, 1.5, 60)[:-1]
	values = theta_frac_derivative(t, spec, alpha)
	bound = theta_frac_derivative_bound(spec, alpha)
	assert np.all(values > 0.0)
	assert np.all(values <= bound * (1.0 + 1e-12))
	# continuous at T/2, where the bound is attained
	assert theta_frac_derivative(1.5, spec, alpha) == pytest.approx(bound, rel=1e-12)


def test_theta_frac_derivative_matches_numeric():
	spec = TestFunctionSpec(T=2.0, lam=2.0, R=2.0)
	alpha = 0.5
	errors = []
	for intervals in (32, 64, 128, 256):
		mesh = TimeMesh.uniform(2.0, intervals)
		numeric = rl_right_derivative(theta(mesh.nodes, spec), mesh, alpha)
		exact = theta_frac_derivative(mesh.nodes, spec, alpha)
		assert numeric.warnings == []
		inner = slice(0, -1)
		errors.append(np.max(np.abs(numeric.values[inner] - exact[inner])) / np.max(np.abs(exact)))
	ratios = [errors[i] / errors[i + 1] for i in range(3)]
	assert all(ratio >= 1.5 for ratio in ratios)


def test_lemma43_example():
	spec = TestFunctionSpec(T=1.0, lam=2.0, R=2.0)
	check = verify_lemma43(spec, q=2.0, alpha=0.5)
	ratio = math.gamma(3.0) / math.gamma(2.5)
	assert check.stated_bound == pytest.approx(ratio ** 2)
	assert 1.0 < check.lhs < check.stated_bound
	assert check.ok and check.stated_holds
	assert check.pieces[1] == pytest.approx(check.closed_form, rel=1e-8)


def test_lemma43_scales_with_T():
	scaled = [verify_lemma43(TestFunctionSpec(T=T, lam=3.0, R=2.0), q=2.0, alpha=0.3, gamma=-0.2).scaled for T in (1.0, 4.0, 16.0)]
	assert max(scaled) / min(scaled) < 1.01


def test_lemma44_scales_with_T():
	scaled = [verify_lemma44(TestFunctionSpec(T=T, lam=3.0, R=2.0), q=2.0, gamma=-0.2).scaled for T in (1.0, 4.0, 16.0)]
	assert max(scaled) / min(scaled) < 1.01


def test_stated_constants_can_fail():
	# at lam = q*alpha the [T/2, T] piece alone reaches the published constant
	check = verify_lemma43(TestFunctionSpec(T=1.0, lam=1.0, R=2.0), q=2.0, alpha=0.5)
	assert check.ok
	assert not check.stated_holds
	tight = verify_lemma44(TestFunctionSpec(T=1.0, lam=2.0, R=2.0), q=2.0, gamma=-0.2)
	assert tight.ok
	assert not tight.stated_holds
	assert tight.lhs == pytest.approx(tight.corrected_bound, rel=1e-8)


def test_lemma_hypotheses():
	with pytest.raises(DomainError):
		verify_lemma43(TestFunctionSpec(T=1.0, lam=0.5, R=2.0), q=2.0, alpha=0.5)
	with pytest.raises(DomainError):
		verify_lemma44(TestFunctionSpec(T=1.0, lam=1.5, R=2.0), q=2.0)


def test_lemma_grid():
	failures = []
	for q in (1.5, 2.0, 3.0):
		for alpha in (0.3, 0.5, 0.8):
			for gamma in (0.0, -0.2):
				for lam in (q * alpha, 2.0 * q * alpha, 5.0):
					spec = TestFunctionSpec(T=2.0, lam=lam, R=2.0)
					check = verify_lemma43(spec, q, alpha, gamma)
					if not check.ok or not check.pieces[1] == pytest.approx(check.closed_form, rel=1e-7):
						failures.append(("lemma43", q, alpha, gamma, lam))
					if lam >= q:
						check = verify_lemma44(spec, q, gamma)
						if not check.ok or not check.lhs == pytest.approx(check.closed_form, rel=1e-7):
							failures.append(("lemma44", q, alpha, gamma, lam))
	assert failures == []


# cutoff

def test_cutoff_profile_values():
	R = 4.0
	r = np.linspace(0.0, 5.0, 501)
	for kind in ("SmoothBump", "EigenfunctionProfile"):
		xi = cutoff_xi(r, R, kind)
		assert np.all(xi[r <= 0.5 * R] == 1.0)
		assert np.all(xi[r >= R] == 0.0)
		assert np.all(np.diff(xi) <= 1e-15)


def test_cutoff_field_must_fit():
	grid = Grid(dim=1, points=128, half_length=8.0)
	with pytest.raises(DomainError):
		cutoff_field(grid, TestFunctionSpec(T=1.0, lam=2.0, R=8.0))
	assert cutoff_field(grid, TestFunctionSpec(T=1.0, lam=2.0, R=4.0)).values.max() == 1.0


@pytest.mark.parametrize("kind", ["SmoothBump", "EigenfunctionProfile"])
@pytest.mark.parametrize("dim", [1, 2])
def test_cutoff_laplacian_matches_differences(kind, dim):
	R = 4.0
	h = 1e-4 * R
	for s in (0.6, 0.75, 0.9):
		r = s * R
		plus, mid, minus = (cutoff_xi(x, R, kind) for x in (r + h, r, r - h))
		numeric = (plus - 2.0 * mid + minus) / h ** 2 + (dim - 1) / r * (plus - minus) / (2.0 * h)
		assert cutoff_laplacian(r, R, dim, kind) == pytest.approx(numeric, rel=1e-4, abs=1e-8)


@pytest.mark.parametrize("R", [2.0, 4.0, 8.0])
def test_eigenfunction_laplacian_ratio_is_pi_squared(R):
	grid = Grid(dim=1, points=512, half_length=16.0)
	spec = TestFunctionSpec(T=1.0, lam=2.0, R=R, cutoff_kind="EigenfunctionProfile")
	assert laplacian_ratio(grid, spec) == pytest.approx(math.pi ** 2, rel=1e-9)
	assert profile_constant("EigenfunctionProfile", 1) == pytest.approx(math.pi ** 2, rel=1e-9)


@pytest.mark.parametrize("kind", ["SmoothBump", "EigenfunctionProfile"])
@pytest.mark.parametrize("dim", [1, 2])
def test_laplacian_ratio_below_profile_constant(kind, dim):
	grid = Grid(dim=dim, points=128 if dim == 2 else 512, half_length=16.0)
	constant = profile_constant(kind, dim)
	for R in (2.0, 4.0, 8.0):
		spec = TestFunctionSpec(T=1.0, lam=2.0, R=R, cutoff_kind=kind)
		assert laplacian_ratio(grid, spec) <= constant * (1.0 + 1e-9)


# functional and weak form

def test_blowup_inequality_report():
	nl = NonlinearitySpec(rho=2.0)
	radii = [2.0, 4.0, 8.0, 16.0]
	decaying = verify_blowup_inequality(radii, [3.0 * R ** -1.5 for R in radii], nl, 1, FracParams(alpha=0.5, k=1.0))
	assert decaying.slope == pytest.approx(-1.5)
	assert decaying.holds and not decaying.contradicts_global
	assert decaying.prefactor == pytest.approx(9.0)
	assert decaying.limit_bound == 0.0
	growing = verify_blowup_inequality(radii, [0.1 * R for R in radii], nl, 1)
	assert growing.contradicts_global
	critical = verify_blowup_inequality(radii, [1.0, 1.0, 1.0, 1.0], NonlinearitySpec(rho=3.0), 1)
	assert critical.exponent == 0.0 and critical.limit_bound is None
	with pytest.raises(InputError):
		verify_blowup_inequality([2.0], [1.0], nl, 1)


def test_functional_needs_history():
	grid = Grid(dim=1, points=64, half_length=8.0)
	u0 = initial_profile(grid, amplitude=0.1)
	nl = NonlinearitySpec(rho=2.0)
	record = duhamel_evolve(u0, FracParams(alpha=0.5, k=1.0), nl, TimeMesh.uniform(1.0, 10), grid)
	with pytest.raises(InputError):
		blowup_functional(record, nl, TestFunctionSpec(T=1.0, lam=3.0, R=2.0))


def test_zero_solution_has_zero_residual():
	grid = Grid(dim=1, points=64, half_length=8.0)
	u0 = initial_profile(grid, amplitude=0.0)
	nl = NonlinearitySpec(rho=2.0)
	params = FracParams(alpha=0.5, k=1.0)
	record = duhamel_evolve(u0, params, nl, TimeMesh.uniform(2.0, 20), grid, keep_history=True)
	spec = TestFunctionSpec(T=2.0, lam=3.0, R=2.0)
	terms = weak_form_terms(record, u0, params, nl, spec)
	assert terms.residual == 0.0
	assert weak_form_residual(record, u0, params, nl, spec) == 0.0


def _weak_residual(params: FracParams, nl: NonlinearitySpec, amplitude: float, intervals: int, source: bool) -> float:
	grid = Grid(dim=1, points=512, half_length=16.0)
	u0 = initial_profile(grid, amplitude=amplitude)
	record = duhamel_evolve(u0, params, nl, TimeMesh.uniform(4.0, intervals), grid, keep_history=True, source=source)
	spec = TestFunctionSpec(T=4.0, lam=3.0, R=2.0)
	return weak_form_residual(record, u0, params, nl, spec, source=source)


def test_weak_residual_heat_converges():
	heat = FracParams(alpha=0.5, k=0.0)
	residuals = [_weak_residual(heat, NonlinearitySpec(rho=2.0), 1.0, n, False) for n in (32, 64, 128)]
	assert residuals[0] / residuals[1] >= 1.5
	assert residuals[1] / residuals[2] >= 1.5
	assert residuals[-1] < 1e-3


def test_weak_residual_nonlinear_converges():
	params = FracParams(alpha=0.5, k=1.0)
	residuals = [_weak_residual(params, NonlinearitySpec(rho=3.0), 0.5, n, True) for n in (32, 64, 128)]
	assert residuals[0] / residuals[1] >= 1.5
	assert residuals[1] / residuals[2] >= 1.5


@pytest.mark.slow
def test_subcritical_functional_outgrows_bound():
	params = FracParams(alpha=0.5, k=1.0)
	nl = NonlinearitySpec(rho=2.0)
	grid = Grid(dim=1, points=512, half_length=auto_box(params, 256.0))
	u0 = initial_profile(grid, amplitude=0.01, width=2.0)
	record = duhamel_evolve(u0, params, nl, TimeMesh.graded(256.0, 400, 2.0), grid, keep_history=True)
	assert record.status != "BlewUp"
	radii = [2.0, 4.0, 8.0, 16.0]
	values = functional_series(record, nl, radii)
	assert np.all(values > 0.0)
	report = verify_blowup_inequality(radii, values, nl, 1, params)
	assert report.exponent == pytest.approx(-1.0)
	assert report.contradicts_global


# sweeps

def _sweep_config(extra: str = ""):
	text = """
mode = sweep
frac.alpha = 0.5
frac.k = 0.0
grid.points = 64
grid.box = 16
mesh.tmax = 2
mesh.nodes = 41
evolve.amplitude = 0.1
sweep.axis = 2, 5
"""
	return parse_config(text + extra)


def test_empty_sweep():
	report = dichotomy_sweep(_sweep_config().with_overrides(["sweep.axis="]))
	assert report.axis == [] and report.statuses == []
	assert report.rho_c == pytest.approx(3.0)
	assert not report.inconclusive_only


def test_sweep_is_independent_of_worker_count():
	one = dichotomy_sweep(_sweep_config("sweep.workers = 1\n"))
	two = dichotomy_sweep(_sweep_config("sweep.workers = 2\n"))
	assert one.statuses == two.statuses
	assert one.final_ratios == two.final_ratios
	assert one.critical == [3.0, 3.0]
	assert one.metadata["config_hash"] != two.metadata["config_hash"]
	assert one.metadata["workers"] == 1
	assert len(one.rows()) == 2


def test_sweep_labels_failing_point():
	config = _sweep_config().with_overrides(["sweep.axis=2, 0.5"])
	with pytest.raises(DomainError, match=r"rho=0\.5"):
		dichotomy_sweep(config)


def test_resolve_workers(monkeypatch):
	monkeypatch.setenv("RSLAB_THREADS", "2")
	assert resolve_workers(8, 10) == 2
	assert resolve_workers(None, 10) <= 2
	monkeypatch.delenv("RSLAB_THREADS")
	assert resolve_workers(8, 3) == 3
	assert resolve_workers(None, 0) == 1


def test_sweep_report_length_check():
	with pytest.raises(InputError):
		SweepReport(axis=[2.0], statuses=[], rho_c=3.0)


@pytest.mark.slow
@pytest.mark.parametrize("k", [1.0, 0.0])
def test_scalar_dichotomy_stable_across_resolutions(k):
	statuses = []
	for points in (256, 512):
		config = parse_config(
			f"""
mode = sweep
frac.alpha = 0.5
frac.k = {k}
grid.points = {points}
mesh.tmax = 40
mesh.nodes = 1601
evolve.amplitude = 0.6
sweep.axis = 2, 2.5, 4, 5
"""
		)
		statuses.append(dichotomy_sweep(config).statuses)
	assert statuses[0] == statuses[1] == ["BlewUp", "BlewUp", "Global", "Global"]


@pytest.mark.slow
def test_radius_amplitude_sweep_stays_global_above_critical():
	statuses = []
	for points in (256, 512):
		config = parse_config(
			f"""
mode = sweep
frac.alpha = 0.5
frac.k = 1
grid.points = {points}
mesh.tmax = 20
mesh.nodes = 801
evolve.amplitude = radius
sweep.axis = 4, 5
"""
		)
		report = dichotomy_sweep(config)
		assert report.metadata["amplitude_mode"] == "radius"
		statuses.append(report.statuses)
	assert statuses[0] == statuses[1] == ["Global", "Global"]


@pytest.mark.slow
def test_system_dichotomy_stable_across_resolutions():
	statuses = []
	for points in (256, 512):
		config = parse_config(
			f"""
mode = sweep
frac.alpha = 0.5
frac.k = 0
grid.points = {points}
mesh.tmax = 100
mesh.nodes = 1001
nl.rho1 = 3
evolve.amplitude = 0.1
evolve.width = 2
sweep.system = true
sweep.axis = 3, 12
"""
		)
		report = dichotomy_sweep(config)
		assert report.system
		assert report.critical == pytest.approx([9.0, 11.0])
		statuses.append(report.statuses)
	assert statuses[0] == statuses[1] == ["BlewUp", "Global"]
