import pytest

from acm_forge import GradedRing
from acm_forge.constructions import linear_space_bundle


@pytest.fixture(scope="session")
def S():
    return GradedRing(["x0", "x1", "x2", "x3", "x4"])


@pytest.fixture(scope="session")
def quadric(S):
    x = S.gens
    return x[0] * x[4] + x[1] * x[3] + x[2] ** 2


@pytest.fixture(scope="session")
def X(S, quadric):
    return S.quotient(quadric)


@pytest.fixture(scope="session")
def spinor(S, X):
    x = S.gens
    return linear_space_bundle(X, [x[2], x[3], x[4]]).module


@pytest.fixture(scope="session")
def voisin2():
    from acm_forge.constructions import voisin_build
    return voisin_build(2, seed=7)


@pytest.fixture(scope="session")
def voisin3():
    from acm_forge.constructions import voisin_build
    return voisin_build(3, seed=7)


_criteria: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            outcome = "xfail" if report.skipped else "xpass"
        else:
            outcome = report.outcome
        _criteria.setdefault(n, []).append(f"{outcome}:{name}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        bad = [r for r in results if not r.startswith("passed")]
        verdict = "PASS" if not bad else "FAIL"
        detail = "" if not bad else "  (" + ", ".join(bad) + ")"
        terminalreporter.write_line(f"criterion {n}: {verdict} [{len(results)} checks]{detail}")
