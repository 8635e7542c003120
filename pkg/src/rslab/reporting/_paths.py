from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from rslab.errors import OutputError


@contextmanager
def guarded(path: Path, action: str = "write") -> Iterator[Path]:
	"""Turn OSError raised inside the block into OutputError carrying `path`."""
	try:
		yield path
	except OSError as exc:
		if isinstance(exc, OutputError):
			raise
		reason = exc.strerror or str(exc)
		raise OutputError(f"cannot {action} {path}: {reason}", path=str(path)) from exc
