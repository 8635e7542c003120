from __future__ import annotations

import hashlib
import platform
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Dict, List, Optional, TypedDict

from rslab import __version__
from rslab.config import RunConfig
from rslab.reporting.jsonio import write_json

PROVENANCE_NAME = "provenance.json"


class ProvenanceRecord(TypedDict):
	version: str
	config_hash: str
	created_utc: str
	python: str
	platform: str
	packages: Dict[str, str]
	outputs: Dict[str, str]


def _package_version(name: str) -> str:
	try:
		return version(name)
	except PackageNotFoundError:
		return "unknown"


def file_digest(path: Path) -> str:
	return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def build_provenance(config: RunConfig, outputs: List[Path]) -> ProvenanceRecord:
	return ProvenanceRecord(
		version=__version__,
		config_hash=config.digest(),
		created_utc=datetime.now(timezone.utc).isoformat(timespec="seconds"),
		python=platform.python_version(),
		platform=platform.platform(),
		packages={name: _package_version(name) for name in ("numpy", "scipy", "pandas")},
		outputs={Path(p).name: file_digest(p) for p in outputs},
	)


def write_provenance(out_dir: Path, config: RunConfig, outputs: List[Path]) -> Optional[Path]:
	"""Sidecar with timestamps and output digests; skipped when output.provenance is false."""
	if not config["output.provenance"]:
		return None
	return write_json(Path(out_dir) / PROVENANCE_NAME, dict(build_provenance(config, outputs)))
