# Shared fixtures: reference networks, their codes, and an isolated settings environment
import numpy as np
import pytest

from src.config import reset_settings
from src.constructions import (
    EavesdropMode,
    fig1b_code,
    fig1b_instance,
    gap_instance,
    relay_code,
    relay_instance,
    sum_code,
    two_stage_gap_code,
)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Every test sees default limits and its own report directory."""
    for name in ("ENUM_CAP", "WITNESS_CAP", "SEARCH_CAP", "BUDGET", "KEY_BUDGET", "CHUNK_BITS", "JOBS",
                 "LOG_LEVEL"):
        monkeypatch.delenv(f"KEYCAST_{name}", raising=False)
    monkeypatch.setenv("KEYCAST_REPORT_DIR", str(tmp_path / "reports"))
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def gap2():
    return gap_instance(2)


@pytest.fixture
def gap2_node_all():
    return gap_instance(2, EavesdropMode.NODE_ALL)


@pytest.fixture
def gap2_sum(gap2):
    return gap2, sum_code(gap2)


@pytest.fixture
def gap2_two_stage(gap2):
    return gap2, two_stage_gap_code(gap2)


@pytest.fixture
def fig1b():
    return fig1b_instance(), fig1b_code()


@pytest.fixture
def relay():
    return relay_instance(), relay_code(2)
