from __future__ import annotations

from fractions import Fraction as F
from pathlib import Path

import pytest

from bibnet import AggregationMap, CountingScheme, PaperRecord, build_incidence

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# Worked example of three papers by four authors.
TABLE1 = [
    PaperRecord("p1", ("a1", "a2", "a3")),
    PaperRecord("p2", ("a1", "a3")),
    PaperRecord("p3", ("a2", "a4")),
]

# Exact network matrices, derived by hand from the corpus above.
B_FRACTIONAL = [
    [F(13, 36), F(1, 9), F(13, 36), F(0)],
    [F(1, 9), F(13, 36), F(1, 9), F(1, 4)],
    [F(13, 36), F(1, 9), F(13, 36), F(0)],
    [F(0), F(1, 4), F(0), F(1, 4)],
]
B_FULL = [
    [2, 1, 2, 0],
    [1, 2, 1, 1],
    [2, 1, 2, 0],
    [0, 1, 0, 1],
]


@pytest.fixture
def table1_records() -> list[PaperRecord]:
    return list(TABLE1)


@pytest.fixture
def frac_A():
    return build_incidence(TABLE1, CountingScheme.FRACTIONAL_EQUAL)


@pytest.fixture
def full_A():
    return build_incidence(TABLE1, CountingScheme.FULL)


@pytest.fixture
def two_group_map() -> AggregationMap:
    return AggregationMap.from_pairs(
        [("a1", "g1"), ("a3", "g1"), ("a2", "g2"), ("a4", "g2")], "author", "institute"
    )


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
