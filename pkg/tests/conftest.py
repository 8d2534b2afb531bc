import functools
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from apictorial import ClosedPolyline, generate_rectangular_puzzle, scatter_pieces

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def regular_polygon(n, radius=1.0, center=(0.0, 0.0), phase=0.0):
    t = phase + 2 * math.pi * np.arange(n) / n
    return ClosedPolyline(np.c_[center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)])


def dense_rectangle(w, h, spacing):
    """Axis-aligned rectangle with corner at the origin, sampled every ``spacing``."""
    nx, ny = round(w / spacing), round(h / spacing)
    bottom = np.c_[np.arange(nx) * spacing, np.zeros(nx)]
    right = np.c_[np.full(ny, w), np.arange(ny) * spacing]
    top = np.c_[w - np.arange(nx) * spacing, np.full(nx, h)]
    left = np.c_[np.zeros(ny), h - np.arange(ny) * spacing]
    return ClosedPolyline(np.vstack([bottom, right, top, left]))


def random_convex_polygon(rng, n=None, radius=100.0):
    n = n or int(rng.integers(6, 25))
    ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    squash = rng.uniform(0.6, 1.0)
    tilt = rng.uniform(0, math.pi)
    pts = np.c_[radius * np.cos(ang), squash * radius * np.sin(ang)]
    c, s = math.cos(tilt), math.sin(tilt)
    return ClosedPolyline(pts @ np.array([[c, s], [-s, c]]))


@functools.lru_cache(maxsize=None)
def puzzle(m, n, seed=0, noise=0.0, **kw):
    """Cached scattered puzzle; tests must not mutate it."""
    gt = generate_rectangular_puzzle(m, n, seed=seed, **kw)
    return scatter_pieces(gt, noise, seed=seed + 100)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance report -----------------------------------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        number, title = mark.args
        ok = call.excinfo is None
        detail = dict(item.user_properties).get("detail", "")
        _criteria[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, detail = _criteria[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
