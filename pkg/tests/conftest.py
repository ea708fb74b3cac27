"""Shared session fixtures: expensive 120-digit pipelines and reproduction
runs are built once and reused across test modules."""

import time
from fractions import Fraction

import pytest

from fuchsmon import fixtures as fx
from fuchsmon.dmbasis import Pipeline
from fuchsmon.lseries import load_newform, special_values

DIGITS = 120


def pytest_addoption(parser):
    parser.addoption(
        "--paper-digits", action="store_true", default=False,
        help="also run the slow 195-digit reproduction of operator 2.17")


@pytest.fixture(scope="session")
def paper_digits(request):
    return request.config.getoption("--paper-digits")


# -- operators ---------------------------------------------------------------

@pytest.fixture(scope="session")
def op217():
    return fx.builtin_operator("2.17")


@pytest.fixture(scope="session")
def op247():
    return fx.builtin_operator("2.47")


@pytest.fixture(scope="session")
def op615():
    return fx.builtin_operator("6.15")


# -- pipelines at acceptance precision ---------------------------------------

@pytest.fixture(scope="session")
def pipe217(op217):
    return Pipeline(op217, target=Fraction(1, 256), digits=DIGITS)


@pytest.fixture(scope="session")
def pipe247(op247):
    return Pipeline(op247, target=Fraction(1, 16384), digits=DIGITS)


# -- newforms and special L-values -------------------------------------------

@pytest.fixture(scope="session")
def form81():
    return load_newform(fx.DATA_DIR / "8_1.txt")


@pytest.fixture(scope="session")
def form322():
    return load_newform(fx.DATA_DIR / "32_2.txt")


@pytest.fixture(scope="session")
def sv81(form81):
    return special_values(form81, DIGITS)


@pytest.fixture(scope="session")
def sv322(form322):
    return special_values(form322, DIGITS)


# -- reproduction runs (each builds its own pipeline internally) --------------

@pytest.fixture(scope="session")
def rep217():
    start = time.time()
    report = fx.reproduce("2.17", digits=DIGITS)
    report["_runtime_seconds"] = time.time() - start
    return report


@pytest.fixture(scope="session")
def rep247():
    return fx.reproduce("2.47", digits=DIGITS)


@pytest.fixture(scope="session")
def rep615():
    return fx.reproduce("6.15", digits=DIGITS)
