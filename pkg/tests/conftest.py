import pathlib

import numpy as np
import pytest

from ladderpt.operators import BandOperator, BasisSpec
from ladderpt.models import quartic_model, stark_model

MODELS_DIR = pathlib.Path(__file__).resolve().parent.parent / "models"

_CRITERIA = []


def record_criterion(number, passed, detail):
    _CRITERIA.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")


def random_band_operator(rng, basis, max_shift=5, density=0.8, hermitian=False):
    """Band operator with random complex entries on shifts |s| <= max_shift."""
    dim = basis.dim
    bands = {}
    for s in range(-max_shift, max_shift + 1):
        if abs(s) >= dim or rng.random() > density:
            continue
        size = dim - abs(s)
        bands[s] = rng.normal(size=size) + 1j * rng.normal(size=size)
    op = BandOperator(basis, bands)
    if hermitian:
        from ladderpt.operators import adjoint
        op = (op + adjoint(op)) * 0.5
    return op


def random_monotone_basis(rng, dim):
    eps0 = np.cumsum(rng.uniform(0.3, 2.0, size=dim))
    c = rng.uniform(0.2, 2.0, size=dim - 1) * np.exp(1j * rng.uniform(0, 2 * np.pi, size=dim - 1))
    return BasisSpec(eps0, c)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture
def boson4():
    """Bosonic basis with four levels, eps0 = k + 1/2."""
    return BasisSpec.harmonic(4)


@pytest.fixture(scope="session")
def stark64():
    return stark_model(64)


@pytest.fixture(scope="session")
def quartic64():
    return quartic_model(64)
