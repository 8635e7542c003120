from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from rslab.fujita import SweepReport
from rslab.mild import EvolutionRecord
from rslab.relaxation import RelaxationCurve
from rslab.reporting._paths import guarded
from rslab.spectral import DecayFit

# 17 significant digits round-trip every float64
FLOAT_FORMAT = "%.17g"


def relaxation_frame(curves: Sequence[RelaxationCurve]) -> pd.DataFrame:
	frames = [
		pd.DataFrame({"t": c.times, "s": c.values, "method": c.method, "mu": c.mu})
		for c in curves
	]
	if not frames:
		return pd.DataFrame(columns=["t", "s", "method", "mu"])
	return pd.concat(frames, ignore_index=True)


def decay_frame(fit: DecayFit, initial_norm: float) -> pd.DataFrame:
	return pd.DataFrame(
		{
			"t": fit.times,
			"bracket_t": fit.brackets,
			"norm_p": fit.norms,
			"predicted_bound": fit.predicted_bounds(initial_norm),
		}
	)


def evolution_frame(record: EvolutionRecord) -> pd.DataFrame:
	frame = pd.DataFrame({"t": record.times, "norm_r": record.norms_r, "norm_p": record.norms_p})
	if record.components > 1:
		for c in range(record.components):
			frame[f"norm_r_{c}"] = record.component_norms_r[:, c]
	frame["status"] = record.status
	return frame


def sweep_frame(report: SweepReport) -> pd.DataFrame:
	columns = ["axis", "status", "critical", "supercritical", "t_blow", "final_ratio"]
	return pd.DataFrame(report.rows(), columns=columns)


def write_csv(out_path: Path, frame: pd.DataFrame, config_hash: Optional[str] = None) -> Path:
	"""Header row plus 17-significant-digit floats; `config_hash` is appended as a constant column."""
	out_path = Path(out_path)
	if config_hash is not None:
		frame = frame.assign(config_hash=config_hash)
	with guarded(out_path):
		out_path.parent.mkdir(parents=True, exist_ok=True)
		frame.to_csv(out_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
	return out_path


def read_csv(path: Path) -> pd.DataFrame:
	path = Path(path)
	with guarded(path, "read"):
		return pd.read_csv(path, float_precision="round_trip")
