from __future__ import annotations

import pytest

from enriques import surface_forge as sf
from enriques.ff_core import make_field
from enriques.group_scheme import GroupSchemeParams

# first accepted seed of each group in the campaign starting at seed 0
PINNED_SEEDS = {"etale2": 4, "mu2": 160, "alpha2": 26, "ordinary": 1}
CHAR = {"etale2": 2, "mu2": 2, "alpha2": 2, "ordinary": 3}


def params_for(group: str, k: int = 1) -> GroupSchemeParams:
    return GroupSchemeParams.for_group(make_field(CHAR[group], k), group)


@pytest.fixture(scope="session")
def pinned_systems():
    return {g: sf.sample_system(params_for(g).ring, params_for(g), s) for g, s in PINNED_SEEDS.items()}


@pytest.fixture(scope="session")
def pinned_candidates(pinned_systems):
    return {g: sf.verify(s) for g, s in pinned_systems.items()}


# lines recorded by test_acceptance.py, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
