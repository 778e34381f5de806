import pytest

from agiwelfare import scenarios


@pytest.fixture
def e0():
    e, cand, _ = scenarios.scenario("classical_e0")
    return e, cand


@pytest.fixture
def example1():
    e, cand, _ = scenarios.scenario("example1")
    return e, cand


@pytest.fixture
def example2():
    e, cand, _ = scenarios.scenario("example2")
    return e, cand


import contextlib

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


class _Record:
    detail = ""


@pytest.fixture
def acceptance(request):
    """Context manager recording a pass/fail line for an acceptance criterion."""
    log = request.config.stash[ACCEPTANCE_KEY]

    @contextlib.contextmanager
    def criterion(number, title):
        rec = _Record()
        try:
            yield rec
        except BaseException:
            log.append((number, "FAIL", title, rec.detail))
            raise
        log.append((number, "PASS", title, rec.detail))

    return criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, detail in sorted(log):
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}" + (f"  [{detail}]" if detail else ""))
