import pytest

from ontodp.fixtures import hospital_dir, load_hospital


@pytest.fixture(scope="session")
def hospital():
    return load_hospital()


@pytest.fixture(scope="session")
def hospital_paths():
    d = hospital_dir()
    return {
        "data": str(d / "true.triples"),
        "antecedent": str(d / "antecedent.triples"),
        "prior": str(d / "prior.triples"),
        "rules": str(d / "rules.txt"),
        "schema": str(d / "schema.txt"),
        "query": str(d / "query.txt"),
    }


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request, capsys):
    """Record one PASS/FAIL line for an acceptance criterion and print it uncaptured."""
    import time

    state = {"detail": ""}
    start = time.perf_counter()
    yield state
    elapsed = time.perf_counter() - start
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    line = f"{'FAIL' if failed else 'PASS'}  {request.node.name:<40} {elapsed:7.2f}s  {state['detail']}"
    _ACCEPTANCE.append(line)
    with capsys.disabled():
        print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
