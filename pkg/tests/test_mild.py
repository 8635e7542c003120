from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import beta

from rslab.errors import DomainError, InputError, RegimeError
from rslab.fractional import FracParams, TimeMesh
from rslab.mild import (
	NonlinearitySpec,
	contraction_radius,
	critical_r,
	duhamel_evolve,
	duhamel_evolve_system,
	estimate_blowup_time,
	local_existence_horizon,
	panel_weight_means,
	system_beta_constants,
	system_contraction_radius,
)
from rslab.spectral import Field, Grid, MultiplierCache, apply_S, initial_profile


@pytest.fixture
def line_grid() -> Grid:
	return Grid(dim=1, points=128, half_length=16.0)


def test_nonlinearity_validation():
	with pytest.raises(DomainError, match=r"sigma\+2\(gamma\+1\)>0 violated"):
		NonlinearitySpec(sigma=-2.0, gamma=0.0, rho=2.0)
	with pytest.raises(DomainError):
		NonlinearitySpec(rho=1.0)
	with pytest.raises(DomainError):
		NonlinearitySpec(sigma=0.5, rho=2.0)
	with pytest.raises(InputError):
		NonlinearitySpec(rho=2.0, rho1=2.0, rho2=2.0)
	with pytest.raises(InputError):
		NonlinearitySpec()
	with pytest.raises(DomainError):
		NonlinearitySpec(rho1=1.0, rho2=1.0)
	system = NonlinearitySpec(rho1=3.0, rho2=1.0)
	assert system.is_system
	assert system.sources() == [(1, 3.0), (0, 1.0)]


def test_weight_regularisation(line_grid):
	nl = NonlinearitySpec(sigma=-0.5, rho=2.0)
	w = nl.weight(line_grid)
	assert np.all(np.isfinite(w))
	assert np.max(w) == pytest.approx(line_grid.dx ** -0.5)
	with pytest.raises(DomainError):
		NonlinearitySpec(sigma=-0.5, rho=2.0, epsilon=0.0).weight(line_grid)
	assert np.all(NonlinearitySpec(rho=2.0).weight(line_grid) == 1.0)


def test_panel_weight_means():
	mesh = TimeMesh.graded(1.0, 10, 2.0)
	assert np.allclose(panel_weight_means(mesh, 0.0), 1.0)
	means = panel_weight_means(mesh, -0.5)
	assert means[0] == pytest.approx(2.0 / math.sqrt(mesh.nodes[1]))


def test_zero_data_is_global(half_params, line_grid):
	zero = Field(line_grid, np.zeros(line_grid.shape))
	mesh = TimeMesh.uniform(2.0, 20)
	record = duhamel_evolve(zero, half_params, NonlinearitySpec(rho=2.0), mesh, line_grid, 2.0, 4.0)
	assert record.status == "Global"
	assert len(record.mesh) == len(mesh)
	assert np.all(record.norms_r == 0.0)

	system = duhamel_evolve_system(zero, zero, half_params, NonlinearitySpec(rho1=2.0, rho2=3.0), mesh)
	assert system.status == "Global"
	assert system.components == 2


def test_input_checks(half_params, line_grid):
	mesh = TimeMesh.uniform(1.0, 10)
	u0 = initial_profile(line_grid, "gaussian", amplitude=0.1)
	with pytest.raises(InputError):
		duhamel_evolve(u0.with_values(-u0.values), half_params, NonlinearitySpec(rho=2.0), mesh)
	with pytest.raises(InputError):
		duhamel_evolve(u0, half_params, NonlinearitySpec(rho=2.0), mesh, r=3.0, p=2.0)
	with pytest.raises(InputError):
		duhamel_evolve(u0, half_params, NonlinearitySpec(rho=2.0), mesh, grid=Grid(1, 64, 16.0))
	with pytest.raises(InputError):
		duhamel_evolve(u0, half_params, NonlinearitySpec(rho1=2.0, rho2=2.0), mesh)


def test_linear_flow_matches_operator(half_params, line_grid):
	cache = MultiplierCache()
	mesh = TimeMesh.graded(3.0, 30, 2.0)
	u0 = initial_profile(line_grid, "gaussian", amplitude=0.8)
	record = duhamel_evolve(u0, half_params, NonlinearitySpec(rho=2.0), mesh, cache=cache, keep_history=True, source=False)
	for n in (1, 7, 30):
		direct = apply_S(float(mesh.nodes[n]), u0, half_params, mesh=mesh, cache=cache)
		assert np.allclose(record.history[n, 0], direct.values, rtol=1e-12, atol=1e-14)


def test_small_data_decays(half_params):
	grid = Grid(dim=1, points=256, half_length=40.0)
	mesh = TimeMesh.uniform(20.0, 50)
	u0 = initial_profile(grid, "gaussian", amplitude=0.05)
	record = duhamel_evolve(u0, half_params, NonlinearitySpec(rho=4.0), mesh, grid, 2.0, 4.0)
	assert record.status == "Global"
	assert record.final_ratio < 0.5
	assert estimate_blowup_time(record) is None


def test_monotone_in_data(half_params, line_grid):
	mesh = TimeMesh.uniform(5.0, 50)
	nl = NonlinearitySpec(rho=4.0)
	low = duhamel_evolve(initial_profile(line_grid, amplitude=0.2), half_params, nl, mesh)
	high = duhamel_evolve(initial_profile(line_grid, amplitude=0.3), half_params, nl, mesh)
	assert np.all(low.norms_r <= high.norms_r + 1e-8)


def _heat_blowup(intervals: int):
	grid = Grid(dim=1, points=512, half_length=16.0)
	u0 = initial_profile(grid, "gaussian", amplitude=5.0)
	heat = FracParams(alpha=0.5, k=0.0)
	return duhamel_evolve(u0, heat, NonlinearitySpec(rho=2.0), TimeMesh.uniform(2.0, intervals), grid, 2.0, 4.0)


def test_heat_blowup_and_refinement():
	coarse = _heat_blowup(100)
	fine = _heat_blowup(200)
	assert coarse.status == fine.status == "BlewUp"
	assert coarse.norms_r[-1] >= coarse.blow_threshold
	t_coarse = estimate_blowup_time(coarse)
	t_fine = estimate_blowup_time(fine)
	assert 0.0 < t_fine < 1.0
	assert abs(t_coarse - t_fine) <= 0.2 * t_fine


def test_step_without_solution_and_no_growth_is_inconclusive(heat_params, line_grid):
	# one step of length 0.5 against peak 50: u = b + c u^2 has no real root
	u0 = initial_profile(line_grid, "gaussian", amplitude=50.0)
	record = duhamel_evolve(u0, heat_params, NonlinearitySpec(rho=2.0), TimeMesh.uniform(2.0, 4))
	assert record.status == "Inconclusive"
	assert record.t_blow is None
	assert len(record.mesh) == 2
	assert np.isnan(record.norms_r[-1])
	assert any("no contracting solution" in w for w in record.warnings)


def test_symmetric_system_reduces_to_scalar(half_params, line_grid):
	mesh = TimeMesh.uniform(2.0, 40)
	u0 = initial_profile(line_grid, "gaussian", amplitude=0.5)
	scalar = duhamel_evolve(u0, half_params, NonlinearitySpec(rho=2.0), mesh, keep_history=True)
	system = duhamel_evolve_system(u0, u0, half_params, NonlinearitySpec(rho1=2.0, rho2=2.0), mesh, keep_history=True)
	assert system.status == scalar.status
	assert np.allclose(system.history[:, 0], system.history[:, 1], rtol=1e-13, atol=1e-15)
	assert np.allclose(system.history[:, 0], scalar.history[:, 0], rtol=1e-12, atol=1e-14)


def test_subcritical_system_blows_up():
	grid = Grid(dim=1, points=512, half_length=20.0)
	heat = FracParams(alpha=0.5, k=0.0)
	nl = NonlinearitySpec(rho1=3.0, rho2=1.0)
	u0 = initial_profile(grid, "gaussian", amplitude=1.0, width=2.0)
	runs = [duhamel_evolve_system(u0, u0, heat, nl, TimeMesh.uniform(5.0, n)) for n in (100, 200)]
	assert [run.status for run in runs] == ["BlewUp", "BlewUp"]
	t_coarse, t_fine = (estimate_blowup_time(run) for run in runs)
	assert abs(t_coarse - t_fine) <= 0.2 * t_fine


def test_snapshots(half_params, line_grid):
	mesh = TimeMesh.uniform(1.0, 10)
	u0 = initial_profile(line_grid, amplitude=0.1)
	record = duhamel_evolve(u0, half_params, NonlinearitySpec(rho=3.0), mesh, snapshot_times=[0.5, 1.0])
	assert sorted(record.snapshots) == [0.5, 1.0]
	assert record.snapshots[0.5][0].grid == line_grid


def test_contraction_radius_example():
	nl = NonlinearitySpec(rho=4.0)
	radius, b1 = contraction_radius(nl, 1, 2.0, 1.5, 12.0, 1.0)
	assert b1 == pytest.approx(beta(0.25, 2.0 / 3.0), rel=1e-12)
	assert radius == pytest.approx((2.0 * b1) ** (-1.0 / 3.0))
	doubled, _ = contraction_radius(nl, 1, 2.0, 1.5, 12.0, 2.0)
	assert doubled / radius == pytest.approx(2.0 ** (-1.0 / 3.0))
	with pytest.raises(RegimeError, match="1 - N"):
		contraction_radius(nl, 1, 1.0, 1.5, 12.0)
	with pytest.raises(RegimeError, match="1 \\+ gamma"):
		contraction_radius(nl, 1, 2.0, 1.5, 3.0)


def test_local_existence_horizon():
	nl = NonlinearitySpec(rho=2.0)
	assert critical_r(1, 0.0, 0.0, 2.0) == pytest.approx(0.5)
	one = local_existence_horizon(1.0, nl, 1, 2.0, 3.0, 12.0)
	expected = (4.0 * beta(5.0 / 6.0, 5.0 / 6.0)) ** (-4.0 / 3.0)
	assert one == pytest.approx(expected, rel=1e-12)
	two = local_existence_horizon(2.0, nl, 1, 2.0, 3.0, 12.0)
	assert two / one == pytest.approx(2.0 ** (-4.0 / 3.0))
	assert local_existence_horizon(1e-12, nl, 1, 2.0, 3.0, 12.0) > 1e12
	assert local_existence_horizon(0.0, nl, 1, 2.0, 3.0, 12.0) == math.inf
	with pytest.raises(RegimeError):
		local_existence_horizon(1.0, nl, 1, 0.5, 3.0, 12.0)


def test_system_radius():
	nl = NonlinearitySpec(rho1=2.0, rho2=1.0)
	b2, b3 = system_beta_constants(1, 0.0, 0.0, 2.0, 1.0, 3.0, 3.0, 12.0, 12.0)
	assert b2 == pytest.approx(beta(1.0 - 0.5 * (2.0 / 3.0 - 1.0 / 3.0), 1.0 - 2.0 / 12.0))
	assert b3 == pytest.approx(beta(1.0, 1.0 - 1.0 / 12.0))
	radius = system_contraction_radius(nl, 1, 3.0, 3.0, 12.0, 12.0)
	assert radius == pytest.approx(1.0 / (2.0 * b2))
	with pytest.raises(RegimeError):
		system_beta_constants(1, 0.0, 0.0, 2.0, 1.0, 3.0, 3.0, 1.5, 1.5)
