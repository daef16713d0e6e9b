import os

import pytest
from hypothesis import HealthCheck, settings

from vacfilm.elastic import FilmElasticParams
from vacfilm.physmodels import DielectricModel, LayerStack

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def ideal_cavity():
    mirror = DielectricModel.perfect_reflector()
    return LayerStack(mirror, mirror, DielectricModel.vacuum(), 1e-6)


@pytest.fixture
def defaults():
    return FilmElasticParams()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.verdict_lines():
        terminalreporter.write_line(line)
