"""Shared fixtures for the weak-wreath test suite."""

from pathlib import Path

import pytest

import weak_wreath
from weak_wreath.finvect import Algebra, flip
from weak_wreath.spinchain import SpinChainSpec, build_spin_chain
from weak_wreath.wdl import WeakDistributiveLaw
from weak_wreath.wdln import WdlNObject, make_object
from weak_wreath.weakbialgebra import WeakBialgebra, builtin_bialgebra

WREATH_ENV_VARS = [
    "WREATH_FIELD",
    "WREATH_WORKERS",
    "WREATH_MAX_FULL_ENUMERATION",
    "WREATH_SAMPLE_ORDERS",
    "WREATH_SAMPLE_SEED",
    "WREATH_SITE_CONVENTION",
    "WREATH_MAX_CUBE_VERTEX_DIM",
    "WREATH_GOLDEN_FILE",
    "WREATH_LOG_LEVEL",
    "WREATH_LOG_OUTPUT",
    "WREATH_LOG_FILE",
    "WREATH_LOG_MAX_SIZE",
    "WREATH_LOG_BACKUP_COUNT",
    "WREATH_LOG_FORMAT",
    "WREATH_METRICS_ENABLED",
    "WREATH_METRICS_FILE",
]


@pytest.fixture
def clean_env(monkeypatch: pytest.MonkeyPatch) -> pytest.MonkeyPatch:
    """Remove every WREATH_* variable so a developer's shell cannot leak in."""
    for var in WREATH_ENV_VARS:
        monkeypatch.delenv(var, raising=False)
    return monkeypatch


@pytest.fixture
def data_dir() -> Path:
    return Path(weak_wreath.__file__).parent / "data"


@pytest.fixture
def z2() -> WeakBialgebra:
    return builtin_bialgebra("z2")


@pytest.fixture
def m2() -> WeakBialgebra:
    return builtin_bialgebra("m2")


@pytest.fixture
def z2_algebra(z2: WeakBialgebra) -> Algebra:
    return z2.algebra


@pytest.fixture
def flip_law(z2_algebra: Algebra) -> WeakDistributiveLaw:
    """The symmetry on F[Z2] (x) F[Z2], a strict law."""
    return WeakDistributiveLaw(
        z2_algebra, z2_algebra, flip(z2_algebra.space, z2_algebra.space)
    )


@pytest.fixture
def flip_object(z2_algebra: Algebra) -> WdlNObject:
    """Three copies of F[Z2] related by symmetries."""
    return make_object([z2_algebra] * 3, name="z2^3")


@pytest.fixture(scope="session")
def m2_chain_1() -> WdlNObject:
    return build_spin_chain(SpinChainSpec(builtin_bialgebra("m2"), 1))


@pytest.fixture(scope="session")
def m2_chain_2() -> WdlNObject:
    return build_spin_chain(SpinChainSpec(builtin_bialgebra("m2"), 2))


@pytest.fixture(scope="session")
def m2_chain_3() -> WdlNObject:
    return build_spin_chain(SpinChainSpec(builtin_bialgebra("m2"), 3))
