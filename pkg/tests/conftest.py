import numpy as np
import pytest

from ecomrec.data import encode_dataset
from ecomrec.ingest import SynthConfig, generate_synthetic


@pytest.fixture(scope="session")
def clean_table():
    return generate_synthetic(SynthConfig(n_rows=200, n_products=5, noise=0.0, seed=3))


@pytest.fixture(scope="session")
def noisy_table():
    return generate_synthetic(SynthConfig(n_rows=400, n_products=6, noise=0.2, seed=11))


@pytest.fixture(scope="session")
def clean_ds(clean_table):
    return encode_dataset(clean_table)


@pytest.fixture(scope="session")
def noisy_ds(noisy_table):
    return encode_dataset(noisy_table)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[_ACCEPTANCE]

    def record(number, name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
