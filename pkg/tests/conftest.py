from functools import lru_cache
from pathlib import Path

import pytest

from toric_qdm.catalog import (blowup_basis, blowup_bundle, blowup_point, hyperplane_bundle, p1xp1,
                               product_bundle, projective_space)
from toric_qdm.cli import build_model, parse
from toric_qdm.model import ToricModel

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
PROBLEM_FILES = sorted(PROBLEMS.glob("*.json"))

# criterion lines collected by the acceptance suite
ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def pn(n, a):
    return ToricModel.build(projective_space(n), hyperplane_bundle(n, a))


@lru_cache(maxsize=None)
def blp(n, a=None, b=None):
    if a is None:
        return ToricModel.build(blowup_point(n), h2_basis=blowup_basis(n))
    return ToricModel.build(blowup_point(n), blowup_bundle(n, a, b), h2_basis=blowup_basis(n, a, b))


@lru_cache(maxsize=None)
def p1p1(coeffs=(1, 0, 1, 0)):
    return ToricModel.build(p1xp1(), product_bundle(coeffs))


@lru_cache(maxsize=None)
def shipped(name):
    return build_model(parse(PROBLEMS / f"{name}.json"))


def shipped_names():
    return [p.stem for p in PROBLEM_FILES]


@pytest.fixture
def acceptance_line():
    def record(text):
        ACCEPTANCE_LINES.append(text)
        print(text)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
