from __future__ import annotations

import json

import numpy as np
import pytest

from rslab.config import default_config
from rslab.errors import InputError, OutputError
from rslab.fractional import TimeMesh
from rslab.fujita import SweepReport
from rslab.relaxation import RelaxationCurve
from rslab.reporting import (
	PROVENANCE_NAME,
	SCHEMA_VERSION,
	build_payload,
	file_digest,
	read_csv,
	read_field_binary,
	read_json,
	relaxation_frame,
	snapshot_name,
	sweep_frame,
	write_csv,
	write_field_binary,
	write_json,
	write_provenance,
)
from rslab.spectral import Field, Grid


def _three_node_curve() -> RelaxationCurve:
	mesh = TimeMesh.uniform(1.0, 2)
	return RelaxationCurve(mesh=mesh, mu=1.0, values=np.array([1.0, 1.0 / 3.0, 0.1]), method="Volterra")


def test_three_node_curve_gives_four_line_csv(tmp_path):
	path = write_csv(tmp_path / "relax.csv", relaxation_frame([_three_node_curve()]))
	lines = path.read_text(encoding="utf-8").splitlines()
	assert len(lines) == 4
	assert lines[0] == "t,s,method,mu"
	assert lines[2].split(",")[1] == "0.33333333333333331"


def test_csv_floats_read_back_exactly(tmp_path):
	curve = _three_node_curve()
	path = write_csv(tmp_path / "relax.csv", relaxation_frame([curve]))
	frame = read_csv(path)
	assert np.array_equal(frame["s"].to_numpy(), curve.values)
	assert np.array_equal(frame["t"].to_numpy(), curve.times)


def test_config_hash_column(tmp_path):
	cfg = default_config(mode="relax")
	path = write_csv(tmp_path / "relax.csv", relaxation_frame([_three_node_curve()]), cfg.digest())
	frame = read_csv(path)
	assert list(frame.columns)[-1] == "config_hash"
	assert set(frame["config_hash"]) == {cfg.digest()}


def test_identical_inputs_give_identical_bytes(tmp_path):
	frame = relaxation_frame([_three_node_curve()])
	a = write_csv(tmp_path / "a.csv", frame).read_bytes()
	b = write_csv(tmp_path / "b.csv", frame).read_bytes()
	assert a == b


def test_empty_sweep_report_json(tmp_path):
	report = SweepReport(axis=[], statuses=[], rho_c=3.0)
	assert sweep_frame(report).empty
	path = write_json(tmp_path / "sweep.json", build_payload("sweep", report.to_dict(), default_config(mode="sweep")))
	payload = read_json(path)
	assert payload["schema_version"] == SCHEMA_VERSION
	assert payload["kind"] == "sweep"
	assert payload["statuses"] == []
	assert payload["config"]["mode"] == "sweep"
	assert len(payload["config_hash"]) == 64


def test_payload_is_plain_json():
	payload = build_payload("demo", {"a": np.float64(np.nan), "b": np.arange(3), "c": np.bool_(True)})
	assert payload["a"] is None
	assert payload["b"] == [0, 1, 2]
	assert payload["c"] is True
	json.dumps(payload)


def test_field_binary_is_bit_identical(tmp_path):
	grid = Grid(dim=2, points=64, half_length=3.5)
	values = np.random.default_rng(7).normal(size=grid.shape)
	path = write_field_binary(tmp_path / snapshot_name(0.25, 1), Field(grid=grid, values=values))
	assert path.name == "field_c1_t0.25.bin"
	assert path.stat().st_size == 24 + 8 * 64 * 64
	back = read_field_binary(path)
	assert back.grid == grid
	assert np.array_equal(back.values, values)


def test_truncated_field_binary(tmp_path):
	grid = Grid(dim=1, points=64, half_length=1.0)
	path = write_field_binary(tmp_path / "f.bin", Field(grid=grid, values=np.ones(64)))
	path.write_bytes(path.read_bytes()[:-8])
	with pytest.raises(InputError, match="expected"):
		read_field_binary(path)


def test_unwritable_path_carries_path(tmp_path):
	blocker = tmp_path / "blocker"
	blocker.write_text("not a directory", encoding="utf-8")
	target = blocker / "relax.csv"
	with pytest.raises(OutputError) as info:
		write_csv(target, relaxation_frame([_three_node_curve()]))
	assert info.value.path == str(target)
	assert str(target) in str(info.value)


def test_missing_input_is_output_error(tmp_path):
	with pytest.raises(OutputError, match="cannot read"):
		read_json(tmp_path / "absent.json")


def test_provenance_sidecar(tmp_path):
	cfg = default_config(mode="relax")
	out = write_json(tmp_path / "relax.json", build_payload("relax", {}, cfg))
	sidecar = write_provenance(tmp_path, cfg, [out])
	assert sidecar == tmp_path / PROVENANCE_NAME
	record = read_json(sidecar)
	assert record["config_hash"] == cfg.digest()
	assert record["outputs"] == {"relax.json": file_digest(out)}
	assert "created_utc" in record


def test_provenance_can_be_suppressed(tmp_path):
	cfg = default_config(mode="relax", output_provenance=False)
	assert write_provenance(tmp_path, cfg, []) is None
	assert not (tmp_path / PROVENANCE_NAME).exists()
