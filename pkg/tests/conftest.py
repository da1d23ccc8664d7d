import pytest

from kolmofocus.flow import FlowOptions, family_for, staged_unfolding, three_cycle_experiment
from kolmofocus.pwfield import get_preset


@pytest.fixture(scope="session")
def opts():
    return FlowOptions()


@pytest.fixture(scope="session")
def tu_staged(opts):
    return three_cycle_experiment(get_preset("Tu-eq19"), opts=opts)


@pytest.fixture(scope="session")
def ts_staged(opts):
    return staged_unfolding(family_for(get_preset("Ts-eq20")), n_stages=2, opts=opts)


@pytest.fixture(scope="session")
def continuous_staged(opts):
    return staged_unfolding(family_for(get_preset("continuous-C")), n_stages=2, opts=opts)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get("acceptance", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, title = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
