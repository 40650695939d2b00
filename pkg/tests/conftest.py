import math

import pytest
from hypothesis import settings

from accelcv.channel import compute_alpha_curve
from accelcv.gaussian import PHYSICALITY_TOL, GaussianState, physicality_margin

settings.register_profile("accelcv", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("accelcv")

# every GaussianState built during a test is checked for sigma + i Omega >= 0
_original_post_init = GaussianState.__post_init__
PHYSICALITY = {"checked": 0, "worst_margin": math.inf, "violations": [], "enabled": False}
# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def _checked_post_init(self):
    _original_post_init(self)
    if not PHYSICALITY["enabled"] or self.partially_transposed:
        return
    margin = physicality_margin(self.covariance)
    PHYSICALITY["checked"] += 1
    PHYSICALITY["worst_margin"] = min(PHYSICALITY["worst_margin"], margin)
    if margin < -PHYSICALITY_TOL:
        PHYSICALITY["violations"].append(margin)
        raise AssertionError(f"unphysical state produced: min eig of sigma + i Omega = {margin:.3e}")


def pytest_configure(config):
    GaussianState.__post_init__ = _checked_post_init


def pytest_unconfigure(config):
    GaussianState.__post_init__ = _original_post_init


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    PHYSICALITY["enabled"] = item.get_closest_marker("allow_unphysical") is None
    try:
        yield
    finally:
        PHYSICALITY["enabled"] = False


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        tr.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    tr.write_line(
        f"physicality hook: {PHYSICALITY['checked']} states checked, "
        f"{len(PHYSICALITY['violations'])} violations, worst margin {PHYSICALITY['worst_margin']:.3e}"
    )


@pytest.fixture(scope="session")
def alpha_curve(tmp_path_factory):
    """Default-parameter alpha curve, computed once per session."""
    return compute_alpha_curve(threads=4, cache_dir=tmp_path_factory.mktemp("curve"))
