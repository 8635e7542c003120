from __future__ import annotations

import numpy as np
import pytest

from rslab.fractional import FracParams, TimeMesh


@pytest.fixture
def half_params() -> FracParams:
	return FracParams(alpha=0.5, k=1.0)


@pytest.fixture
def heat_params() -> FracParams:
	return FracParams(alpha=0.5, k=0.0)


@pytest.fixture
def log_mesh() -> TimeMesh:
	# 0 followed by log-uniform interior nodes
	return TimeMesh(nodes=np.concatenate(([0.0], np.geomspace(1e-3, 20.0, 120))))
