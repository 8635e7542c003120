from __future__ import annotations

import numpy as np
import pytest

from rslab.errors import DomainError, InputError
from rslab.fractional import FracParams
from rslab.spectral import (
	Field,
	Grid,
	MultiplierCache,
	apply_S,
	auto_box,
	check_strong_continuity,
	initial_profile,
	lp_norm,
	measure_decay_exponent,
	quantize,
	semigroup_defect,
)


def _heat_gaussian(grid: Grid, width: float, t: float) -> np.ndarray:
	var = width ** 2 + 2.0 * t
	return (width ** 2 / var) ** (grid.dim / 2.0) * np.exp(-grid.radius_squared / (2.0 * var))


def test_grid_validation():
	with pytest.raises(InputError):
		Grid(dim=3, points=64, half_length=1.0)
	with pytest.raises(InputError):
		Grid(dim=1, points=100, half_length=1.0)
	with pytest.raises(InputError):
		Grid(dim=1, points=32, half_length=1.0)
	with pytest.raises(InputError):
		Grid(dim=1, points=64, half_length=0.0)


def test_wavenumbers():
	grid = Grid(dim=1, points=64, half_length=2.0)
	unique, inverse = grid.spectrum
	assert unique[0] == 0.0
	assert unique[1] == pytest.approx((np.pi / 2.0) ** 2)
	assert grid.mu.shape == (33,)
	assert np.array_equal(unique[inverse], grid.mu)


def test_quantize_merges_round_off():
	values = np.array([0.0, 25.0, 9.0 + 16.0 * (1.0 + 1e-15)])
	q = quantize(values)
	assert q[0] == 0.0
	assert q[1] == q[2]


def test_field_rejects_bad_values():
	grid = Grid(dim=1, points=64, half_length=1.0)
	with pytest.raises(InputError):
		Field(grid=grid, values=np.ones(10))
	values = np.ones(64)
	values[3] = np.nan
	with pytest.raises(InputError):
		Field(grid=grid, values=values)


def test_lp_norm_examples():
	grid = Grid(dim=1, points=64, half_length=1.0)
	assert lp_norm(Field(grid, np.zeros(64)), 2.0) == 0.0
	assert lp_norm(Field(grid, np.ones(64)), 1.0) == pytest.approx(2.0)
	half = Field(grid, (grid.axis < 0.0).astype(float))
	assert lp_norm(half, 2.0) == pytest.approx(1.0)
	assert lp_norm(Field(grid, 3.0 * np.ones(64)), float("inf")) == 3.0
	with pytest.raises(DomainError):
		lp_norm(half, 0.5)


def test_apply_s_identity_and_constants(half_params):
	grid = Grid(dim=1, points=128, half_length=10.0)
	u0 = initial_profile(grid, "gaussian", amplitude=1.0)
	assert np.array_equal(apply_S(0.0, u0, half_params).values, u0.values)
	flat = Field(grid, 2.5 * np.ones(grid.shape))
	assert np.allclose(apply_S(1.3, flat, half_params).values, 2.5, rtol=1e-12)
	with pytest.raises(DomainError):
		apply_S(-1.0, u0, half_params)


@pytest.mark.parametrize("dim, points, half_length", [(1, 256, 16.0), (2, 64, 8.0)])
def test_heat_semigroup_oracle(heat_params, dim, points, half_length):
	grid = Grid(dim=dim, points=points, half_length=half_length)
	u0 = initial_profile(grid, "gaussian", amplitude=1.0, width=1.0)
	out = apply_S(1.0, u0, heat_params)
	exact = _heat_gaussian(grid, 1.0, 1.0)
	err = np.linalg.norm(out.values - exact) / np.linalg.norm(exact)
	assert err < 1e-3


def test_mass_and_positivity(half_params):
	grid = Grid(dim=1, points=256, half_length=16.0)
	u0 = initial_profile(grid, "gaussian", amplitude=1.0)
	out = apply_S(2.0, u0, half_params)
	assert np.sum(out.values) == pytest.approx(np.sum(u0.values), rel=1e-12)
	assert np.min(out.values) >= -1e-8 * np.max(out.values)


def test_cache_reuses_multipliers(half_params):
	grid = Grid(dim=1, points=64, half_length=8.0)
	u0 = initial_profile(grid, "gaussian")
	cache = MultiplierCache()
	apply_S(1.0, u0, half_params, cache=cache)
	first = cache.solves
	apply_S(1.0, u0, half_params, cache=cache)
	assert first == grid.spectrum[0].size
	assert cache.solves == first


def test_semigroup_defect_separates_heat_from_memory(heat_params, half_params):
	grid = Grid(dim=1, points=128, half_length=12.0)
	u0 = initial_profile(grid, "gaussian")
	assert semigroup_defect(0.5, 0.5, u0, heat_params) < 1e-4
	assert semigroup_defect(0.5, 0.5, u0, half_params) > 1e-2


def test_strong_continuity(half_params):
	grid = Grid(dim=1, points=256, half_length=16.0)
	flat = Field(grid, np.ones(grid.shape))
	report = check_strong_continuity(flat, half_params, [1e-1, 1e-2])
	assert np.allclose(report.errors, 0.0, atol=1e-12)
	assert report.ok

	u0 = initial_profile(grid, "gaussian", width=2.0)
	report = check_strong_continuity(u0, half_params, [1e-1, 1e-2, 1e-3, 1e-4])
	assert report.monotone
	assert report.errors[-1] < 0.01


def test_strong_continuity_flags_stuck_operator(half_params):
	grid = Grid(dim=1, points=64, half_length=8.0)
	u0 = initial_profile(grid, "gaussian")

	def stuck(t, field):
		return field.with_values(field.values * (1.0 + 1.0 / (1.0 + t)))

	report = check_strong_continuity(u0, half_params, [1.0, 0.1, 0.01], operator=stuck)
	assert not report.monotone
	assert not report.ok


def test_auto_box(half_params):
	assert auto_box(half_params, 4.0) == pytest.approx(8.0 * np.sqrt(6.0))


def test_profile_normalisation():
	grid = Grid(dim=1, points=256, half_length=16.0)
	u0 = initial_profile(grid, "gaussian", amplitude=0.3, r=2.0)
	assert lp_norm(u0, 2.0) == pytest.approx(0.3)
	peak = initial_profile(grid, "bump", amplitude=0.7, width=3.0)
	assert np.max(peak.values) == pytest.approx(0.7)
	assert np.all(peak.values[np.abs(grid.axis) >= 3.0] == 0.0)
	with pytest.raises(InputError):
		initial_profile(grid, "powerlaw")


def test_decay_preconditions(heat_params):
	grid = Grid(dim=1, points=64, half_length=8.0)
	u0 = initial_profile(grid, "gaussian")
	with pytest.raises(InputError):
		measure_decay_exponent(u0, heat_params, 2.0, 2.0, [1.0, 100.0])
	with pytest.raises(InputError):
		measure_decay_exponent(u0, heat_params, 1.5, 3.0, [1.0, 10.0])


def test_gaussian_decays_at_least_at_predicted_rate(heat_params, half_params):
	times = np.geomspace(1.0, 50.0, 8)
	for params in (heat_params, half_params):
		grid = Grid(dim=1, points=1024, half_length=auto_box(params, 50.0))
		u0 = initial_profile(grid, "gaussian")
		fit = measure_decay_exponent(u0, params, 1.5, 3.0, times, cache=MultiplierCache())
		assert fit.predicted == pytest.approx(-1.0 / 6.0)
		assert fit.slope <= fit.predicted + 0.02
		if params.k == 0.0:
			assert fit.warnings == []
		assert np.isfinite(fit.sup_ratio)


@pytest.mark.slow
@pytest.mark.parametrize("r, p", [(1.5, 3.0), (2.0, 4.0)])
def test_power_law_data_matches_predicted_rate(heat_params, r, p):
	times = np.geomspace(1.0, 50.0, 8)
	grid = Grid(dim=1, points=8192, half_length=24.0 * np.sqrt(50.0))
	u0 = initial_profile(grid, "powerlaw", amplitude=1.0, width=np.sqrt(times[0] / 50.0), r=r)
	fit = measure_decay_exponent(u0, heat_params, r, p, times, cache=MultiplierCache())
	assert fit.slope == pytest.approx(fit.predicted, rel=0.1)


def test_kummer_tail_is_continuous_across_switch():
	from rslab.spectral.profiles import _kummer_decay

	z = np.array([49.999, 50.001])
	values = _kummer_decay(0.25, 0.5, z)
	assert values[0] == pytest.approx(values[1], rel=1e-4)
