from __future__ import annotations

import functools

import pytest

from twistmackey.fields import FiniteField
from twistmackey.groups import build_group, cyclic, dihedral, symmetric
from twistmackey.twisted import GRing, galois_gring


@functools.lru_cache(maxsize=None)
def group(spec: str):
    return build_group(spec)


@functools.lru_cache(maxsize=None)
def trivial_gring(p: int, k: int, spec: str) -> GRing:
    return GRing.trivial(FiniteField(p, k), group(spec))


@functools.lru_cache(maxsize=None)
def galois(p: int, k: int) -> GRing:
    return galois_gring(p, k)


@pytest.fixture(scope="session")
def S3():
    return symmetric(3)


@pytest.fixture(scope="session")
def D4():
    return dihedral(4)


@pytest.fixture(scope="session")
def C6():
    return cyclic(6)


@pytest.fixture(scope="session")
def gf7_s3() -> GRing:
    return trivial_gring(7, 1, "symmetric(3)")


@pytest.fixture(scope="session")
def gf64_c6() -> GRing:
    return galois(2, 6)


@pytest.fixture(scope="session")
def gf9_c2() -> GRing:
    return galois(3, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:  # pragma: no cover
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
