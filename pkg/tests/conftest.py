import shutil
from pathlib import Path

import pytest

from sketchrepair.cegis import Assignment
from sketchrepair.decider import TestSuite
from sketchrepair.lang import parse

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
ASSIGNMENTS = FIXTURES / "assignments"
MAX3 = ASSIGNMENTS / "max3"

HAVE_GCC = shutil.which("gcc") is not None


def read(path):
    return Path(path).read_text()


@pytest.fixture
def buggy():
    return read(MAX3 / "submissions" / "buggy.c")


@pytest.fixture
def repaired():
    return read(MAX3 / "correct" / "repaired.c")


@pytest.fixture
def reference():
    return read(MAX3 / "reference.c")


@pytest.fixture
def suite():
    return TestSuite.load(MAX3 / "tests")


@pytest.fixture
def max3(suite, reference):
    correct = (("repaired", read(MAX3 / "correct" / "repaired.c")),)
    return Assignment("max3", read(MAX3 / "description.txt"), suite, reference, correct)


@pytest.fixture
def buggy_ast(buggy):
    return parse(buggy)


def corpus_programs():
    """Every C file of the fixture tree with the suite of its assignment."""
    out = []
    for d in sorted(p for p in ASSIGNMENTS.iterdir() if p.is_dir()):
        suite = TestSuite.load(d / "tests")
        for p in sorted(d.rglob("*.c")):
            out.append((p.relative_to(ASSIGNMENTS).as_posix(), p.read_text(), suite))
    return out
GOLDEN_DIR = FIXTURES / "prompts"


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
