from __future__ import annotations

import functools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ekr.catalog import build_named, heisenberg_element
from ekr.groupcore import subgroup_generate

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def named(name: str, **params):
    return build_named(name, params)


def heis(p: int):
    return named("heisenberg", p=p)


def eta(G, p, x, y, z) -> int:
    return G.index_of(heisenberg_element(p, x, y, z))


def heis_H(p: int):
    G = heis(p)
    return G, subgroup_generate(G, [eta(G, p, 1, 0, 0)])


@pytest.fixture(scope="session")
def g3():
    return heis_H(3)


@pytest.fixture(scope="session")
def s3():
    return named("symmetric", n=3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance criteria reporting ---------------------------------------------

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, [True, title, 0.0])
    entry[0] = entry[0] and rep.passed
    entry[2] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, title, secs = _CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {secs:7.1f}s  {title}")
