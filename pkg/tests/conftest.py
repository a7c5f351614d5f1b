import pytest
from hypothesis import settings

from hemisum.local import cached_J, verify_local
from hemisum.poly import homog_decompose

ACCEPTANCE = []  # (criterion, check, ok, detail)

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def J():
    return cached_J()


@pytest.fixture(scope="session")
def H(J):
    return homog_decompose(J)


@pytest.fixture(scope="session")
def local_cert():
    return verify_local(samples=500)


@pytest.fixture(scope="session")
def global_run():
    """The default global search; about a minute on one core."""
    from hemisum.search import SearchConfig, run_global
    return run_global(SearchConfig())


@pytest.fixture
def record():
    """Log one acceptance check; the terminal summary groups them per criterion."""
    def _record(criterion: int, check: str, ok: bool, detail: str = ""):
        ACCEPTANCE.append((criterion, check, bool(ok), detail))
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted({c for c, *_ in ACCEPTANCE}):
        rows = [r for r in ACCEPTANCE if r[0] == crit]
        verdict = "PASS" if all(r[2] for r in rows) else "FAIL"
        tr.write_line(f"criterion {crit}: {verdict}")
        for _, check, ok, detail in rows:
            tr.write_line(f"    [{'PASS' if ok else 'FAIL'}] {check}" + (f": {detail}" if detail else ""))
