from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from rslab import __version__
from rslab.config import RunConfig
from rslab.reporting._paths import guarded

SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
	"""JSON-safe copy: numpy scalars and arrays become Python values, non-finite floats become null."""
	if isinstance(value, dict):
		return {str(k): _plain(v) for k, v in value.items()}
	if isinstance(value, (list, tuple)):
		return [_plain(v) for v in value]
	if isinstance(value, np.ndarray):
		return [_plain(v) for v in value.tolist()]
	if isinstance(value, np.bool_):
		return bool(value)
	if isinstance(value, np.integer):
		return int(value)
	if isinstance(value, (float, np.floating)):
		f = float(value)
		return f if math.isfinite(f) else None
	return value


def build_payload(kind: str, body: Dict[str, Any], config: Optional[RunConfig] = None) -> Dict[str, Any]:
	payload: Dict[str, Any] = {"schema_version": SCHEMA_VERSION, "version": __version__, "kind": kind}
	if config is not None:
		payload["config_hash"] = config.digest()
		payload["config"] = config.echo()
	payload.update(body)
	return _plain(payload)


def write_json(out_path: Path, payload: Dict[str, Any]) -> Path:
	out_path = Path(out_path)
	with guarded(out_path):
		out_path.parent.mkdir(parents=True, exist_ok=True)
		out_path.write_text(json.dumps(_plain(payload), indent=2) + "\n", encoding="utf-8")
	return out_path


def read_json(path: Path) -> Dict[str, Any]:
	path = Path(path)
	with guarded(path, "read"):
		return json.loads(path.read_text(encoding="utf-8"))
