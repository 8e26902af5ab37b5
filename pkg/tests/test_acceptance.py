"""Every primary acceptance criterion, at its stated tolerance (exact equality).

A line per criterion is printed and collected into the terminal summary.
"""
import pytest

from hecketrace.verify import CHECKS

from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("name", list(CHECKS))
def test_criterion(name):
    result = CHECKS[name]()
    line = result.line()
    print(line)
    for d in result.detail:
        print("  " + d)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, "\n".join([line] + result.detail)
