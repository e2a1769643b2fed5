"""Acceptance criteria 1-11, each at its stated tolerance.

The full validation suite runs once per session; each criterion is then a
separate test. A one-line pass/fail table is printed in the terminal summary
(see ``conftest.py``) and, with ``-s``, as each criterion is checked.
"""

import pytest

from thermocasimir.validation import criterion_summary, run_suite

CRITERIA = {
    1: "dilute pressure extremum",
    2: "low-temperature asymptote validity",
    3: "high-temperature asymptote",
    4: "constant-permittivity sign structure",
    5: "entropy dip",
    6: "Nernst theorem coefficient and slope",
    7: "Abel-Plana vs Matsubara route equivalence",
    8: "thermodynamic self-consistency",
    9: "dilute entropy non-negativity",
    10: "real-material qualitative reproduction",
    11: "diagnostic constants",
}

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def results():
    return run_suite("all")


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, results):
    rows = [r for r in results if r.criterion == criterion]
    assert rows, f"no checks recorded for criterion {criterion}"
    ok = criterion_summary(rows)[criterion]
    line = f"criterion {criterion:>2} ({CRITERIA[criterion]}): {'pass' if ok else 'FAIL'}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    failing = [f"{r.name}: measured {r.measured}; expected {r.expected}" for r in rows
               if not r.passed]
    assert ok, "\n".join(failing)
