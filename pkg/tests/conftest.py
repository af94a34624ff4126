import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CRITERIA = {
    1: "Virasoro central term on M(1)",
    2: "NS relations with c = 3/2 and the corrected form",
    3: "pure-monomial central terms",
    4: "symbolic bracket formulas and property suites",
    5: "projectivity of the generator images",
    6: "zeta and Hurwitz values",
    7: "Dirichlet suite",
    8: "chi-twisted operators",
    9: "iterate bridge for the free pairs",
    10: "characters and q-series identities",
    11: "kernel property suites",
}

# criterion -> list of (label, passed, note)
ACCEPTANCE: dict[int, list] = {}


@pytest.fixture
def record():
    def _record(criterion: int, label: str, passed: bool, note: str = "") -> bool:
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(passed), note))
        return passed
    return _record


def acceptance_lines() -> list[str]:
    lines = []
    for n, title in CRITERIA.items():
        rows = ACCEPTANCE.get(n)
        if not rows:
            lines.append(f"criterion {n:2d} NOT RUN  {title}")
            continue
        failed = [r for r in rows if not r[1]]
        status = "PASS" if not failed else "FAIL"
        tail = f"{len(rows) - len(failed)}/{len(rows)} sub-checks"
        if failed:
            tail += "; failing: " + ", ".join(f"{lab} ({note})" if note else lab for lab, _, note in failed)
        lines.append(f"criterion {n:2d} {status:8s} {title}: {tail}")
    return lines


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines():
        terminalreporter.write_line(line)
