import pytest

from godist.synth import SynthParams, generate_corpus

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {detail}")


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(100, SynthParams(seed=11, moves_per_game=(20, 60), pass_rate=0.05))


@pytest.fixture(scope="session")
def dated_corpus():
    return generate_corpus(60, SynthParams(seed=5, moves_per_game=(10, 30), date_range=(1995, 2016)))


@pytest.fixture(scope="session")
def tail_cohorts():
    """Three 1,000-game cohorts with step exponents 2.0 / 2.6 / 3.0."""
    return {
        alpha: generate_corpus(1000, SynthParams(tail_alpha=alpha, seed=2016))
        for alpha in (2.0, 2.6, 3.0)
    }
