import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = Path(os.environ.get("GLG_DATA_DIR", ROOT / "data"))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def have_core_data() -> bool:
    from glg import datasets as ds

    status = ds.verify(DATA_DIR)
    needed = [f for k in ("german", "australian", "co", "cd") for f in ds.dataset_catalog()[k]["files"]]
    return all(status[f] == "ok" for f in needed)


needs_data = pytest.mark.skipif(not have_core_data(), reason="benchmark data not prepared (scripts/fetch_data.py)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n, status, detail in sorted(RESULTS):
            terminalreporter.write_line(f"criterion {n:>2}: {status}  {detail}")
