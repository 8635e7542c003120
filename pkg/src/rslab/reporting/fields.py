from __future__ import annotations

from pathlib import Path

import numpy as np

from rslab.errors import InputError
from rslab.reporting._paths import guarded
from rslab.spectral import Field, Grid

# dim and points as <i8, box half length as <f8, then row-major <f8 values
_HEADER_BYTES = 24


def write_field_binary(out_path: Path, field: Field) -> Path:
	out_path = Path(out_path)
	grid = field.grid
	header = np.array([grid.dim, grid.points], dtype="<i8").tobytes() + np.array([grid.half_length], dtype="<f8").tobytes()
	body = np.ascontiguousarray(field.values, dtype="<f8").tobytes(order="C")
	with guarded(out_path):
		out_path.parent.mkdir(parents=True, exist_ok=True)
		out_path.write_bytes(header + body)
	return out_path


def read_field_binary(path: Path) -> Field:
	path = Path(path)
	with guarded(path, "read"):
		raw = path.read_bytes()
	if len(raw) < _HEADER_BYTES:
		raise InputError(f"{path}: truncated header")
	dim, points = (int(v) for v in np.frombuffer(raw, dtype="<i8", count=2))
	half_length = float(np.frombuffer(raw, dtype="<f8", count=1, offset=16)[0])
	grid = Grid(dim=dim, points=points, half_length=half_length)
	expected = _HEADER_BYTES + 8 * points ** dim
	if len(raw) != expected:
		raise InputError(f"{path}: expected {expected} bytes for a {points}^{dim} field, got {len(raw)}")
	values = np.frombuffer(raw, dtype="<f8", offset=_HEADER_BYTES).astype(float).reshape(grid.shape)
	return Field(grid=grid, values=values)


def snapshot_name(t: float, component: int = 0) -> str:
	return f"field_c{component}_t{t:.6g}.bin"
