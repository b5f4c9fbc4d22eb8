"""Reading a benchmark tree of assignments and their submissions.

Layout of one assignment directory::

    description.txt
    tests/tN.in, tests/tN.out
    reference.c
    correct/*.c        optional, earlier correct submissions
    submissions/*.c    the programs to repair
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..cegis import Assignment
from ..decider import LayoutError, TestSuite, run_tests
from ..lang import CSyntaxError, UnsupportedConstruct, cyclomatic_complexity, parse

log = logging.getLogger(__name__)


class ReferenceFailsTests(Exception):
    def __init__(self, assignment, failing):
        super().__init__(f"reference of {assignment} fails {', '.join(failing)}")
        self.assignment = assignment
        self.failing = tuple(failing)


@dataclass(frozen=True)
class Submission:
    id: str
    source: str
    program: object = field(repr=False, compare=False)
    complexity: float = 0.0


@dataclass(frozen=True)
class AssignmentBundle:
    assignment: Assignment
    submissions: tuple
    excluded: tuple = ()  # (submission id, note)

    @property
    def id(self):
        return self.assignment.id


@dataclass
class IngestReport:
    bundles: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (path, reason)


def _read(path, what):
    if not path.is_file():
        raise LayoutError(f"missing {what}: {path}")
    return path.read_text()


def _parse_or_none(src):
    try:
        return parse(src)
    except (CSyntaxError, UnsupportedConstruct):
        return None


def load_assignment(directory):
    """One validated bundle; raises ``LayoutError`` or ``ReferenceFailsTests``."""
    d = Path(directory)
    if not d.is_dir():
        raise LayoutError(f"{d} is not a directory")
    description = _read(d / "description.txt", "description")
    suite = TestSuite.load(d / "tests")
    if len(suite) == 0:
        raise LayoutError(f"{d / 'tests'} holds no tests")
    reference = _read(d / "reference.c", "reference implementation")
    ref_ast = _parse_or_none(reference)
    if ref_ast is None:
        raise LayoutError(f"{d / 'reference.c'} is outside the supported C subset")
    verdict = run_tests(ref_ast, suite)
    if not verdict.passed:
        raise ReferenceFailsTests(d.name, verdict.failing_ids)
    correct = []
    for p in sorted((d / "correct").glob("*.c")) if (d / "correct").is_dir() else ():
        src = p.read_text()
        if _parse_or_none(src) is None:
            log.warning("ignoring unparsable correct program %s", p)
            continue
        correct.append((p.stem, src))
    sub_dir = d / "submissions"
    if not sub_dir.is_dir():
        raise LayoutError(f"missing submissions directory in {d}")
    subs, excluded = [], []
    for p in sorted(sub_dir.glob("*.c")):
        sid = f"{d.name}/{p.stem}"
        src = p.read_text()
        ast = _parse_or_none(src)
        if ast is None:
            excluded.append((sid, "unsupported"))
            continue
        if run_tests(ast, suite).passed:
            excluded.append((sid, "already-correct"))
            continue
        subs.append(Submission(sid, src, ast, cyclomatic_complexity(ast).average))
    a = Assignment(d.name, description, suite, reference, tuple(correct))
    return AssignmentBundle(a, tuple(subs), tuple(excluded))


def ingest(root, strict=False):
    """Every assignment directory under ``root``, sorted by name.

    Malformed assignments are logged and listed in ``skipped``; with
    ``strict`` the first problem is raised instead.
    """
    root = Path(root)
    if not root.is_dir():
        raise LayoutError(f"{root} is not a directory")
    rep = IngestReport()
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        try:
            rep.bundles.append(load_assignment(d))
        except (LayoutError, ReferenceFailsTests) as e:
            if strict:
                raise
            log.warning("skipping %s: %s", d, e)
            rep.skipped.append((str(d), str(e)))
    return rep
