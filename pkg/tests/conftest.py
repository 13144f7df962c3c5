"""Shared fixtures.

The bundled presets are expensive to simulate, so each unique preset
configuration runs exactly once per session through the real ``simulate``
path; tests read the CSV/JSON artifacts it writes (which also exercises the
file formats end to end).
"""

import json
from pathlib import Path

import numpy as np
import pytest

from qrevival.cli import simulate
from qrevival.presets import get_preset, preset_names


class SimRun:
    """Parsed output of one simulate() call."""

    def __init__(self, config, csv_path: Path, meta_path: Path):
        self.config = config
        self.csv_path = Path(csv_path)
        self.meta_path = Path(meta_path)
        with open(self.csv_path) as fh:
            self.columns = fh.readline().strip().split(",")
            self.data = np.loadtxt(fh, delimiter=",", ndmin=2)
        self.meta = json.loads(self.meta_path.read_text())
        self.scales = self.meta["timescales"]

    def col(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def times(self) -> np.ndarray:
        return self.col("t")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])


_CACHE: dict[str, SimRun] = {}


def _run_preset(name: str, root: Path) -> SimRun:
    config = get_preset(name)
    key = repr(sorted((k, repr(v)) for k, v in config.to_dict().items()))
    if key not in _CACHE:
        csv_path, meta_path = simulate(config, str(root / name))
        _CACHE[key] = SimRun(config, csv_path, meta_path)
    return _CACHE[key]


@pytest.fixture(scope="session")
def run_root(tmp_path_factory) -> Path:
    return tmp_path_factory.mktemp("preset-runs")


@pytest.fixture(scope="session")
def fig1_run(run_root) -> SimRun:
    return _run_preset("well-fig1", run_root)


@pytest.fixture(scope="session")
def fig1_wide_run(run_root) -> SimRun:
    return _run_preset("well-fig1-wide", run_root)


@pytest.fixture(scope="session")
def bouncer_sim(run_root) -> SimRun:
    return _run_preset("bouncer-fig4", run_root)


@pytest.fixture(scope="session")
def all_preset_runs(run_root) -> dict[str, SimRun]:
    return {name: _run_preset(name, run_root) for name in preset_names()}
