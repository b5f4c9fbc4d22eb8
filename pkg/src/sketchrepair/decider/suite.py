import re
from dataclasses import dataclass, field
from pathlib import Path

_TEST_FILE = re.compile(r"^t(\d+)\.in$")
_TRAILING_WS = " \t\r\f\v"


class LayoutError(Exception):
    pass


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    id: str
    input: str
    expected: str


@dataclass(frozen=True)
class TestSuite:
    """Ordered input/output examples; the order drives counterexample choice."""

    __test__ = False

    tests: tuple

    def __post_init__(self):
        ids = [t.id for t in self.tests]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate test ids in {ids}")
        object.__setattr__(self, "tests", tuple(self.tests))

    def __iter__(self):
        return iter(self.tests)

    def __len__(self):
        return len(self.tests)

    def __getitem__(self, test_id):
        for t in self.tests:
            if t.id == test_id:
                return t
        raise KeyError(test_id)

    def subset(self, ids):
        wanted = set(ids)
        return TestSuite(tuple(t for t in self.tests if t.id in wanted))

    @classmethod
    def from_pairs(cls, pairs):
        return cls(tuple(TestCase(f"t{i}", a, b) for i, (a, b) in enumerate(pairs)))

    @classmethod
    def load(cls, directory):
        """Read ``tN.in``/``tN.out`` pairs from a directory, ordered by N."""
        directory = Path(directory)
        if not directory.is_dir():
            raise LayoutError(f"{directory} is not a directory")
        found = []
        for p in directory.iterdir():
            m = _TEST_FILE.match(p.name)
            if m:
                out = p.with_suffix(".out")
                if not out.exists():
                    raise LayoutError(f"{p} has no matching {out.name}")
                found.append((int(m.group(1)), p, out))
        if not found:
            raise LayoutError(f"no tests in {directory}")
        found.sort()
        return cls(tuple(TestCase(f"t{n}", i.read_text(), o.read_text()) for n, i, o in found))

    def save(self, directory):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for t in self.tests:
            (directory / f"{t.id}.in").write_text(t.input)
            (directory / f"{t.id}.out").write_text(t.expected)


def normalize_output(text):
    """Strip trailing whitespace on each line, then trailing newlines."""
    lines = [line.rstrip(_TRAILING_WS) for line in text.split("\n")]
    return "\n".join(lines).rstrip("\n")


def outputs_match(actual, expected):
    return normalize_output(actual) == normalize_output(expected)


def first_divergence(actual, expected):
    """``(line, column)`` of the first difference after normalization, 1-based."""
    a = normalize_output(actual)
    b = normalize_output(expected)
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return _location(a, i)
    if len(a) == len(b):
        return None
    return _location(a, min(len(a), len(b)))


def _location(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return (line, col)


@dataclass(frozen=True)
class TestOutcome:
    test_id: str
    status: str  # pass fail crash timeout
    actual: str
    divergence: object = None
    detail: str = ""


@dataclass(frozen=True)
class Verdict:
    status: str  # pass fail crash timeout
    failing: tuple = ()
    outcomes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if (self.status == "pass") != (len(self.failing) == 0):
            raise ValueError("a passing verdict has no failing tests")

    @property
    def passed(self):
        return self.status == "pass"

    @property
    def failing_ids(self):
        return [o.test_id for o in self.failing]

    def to_dict(self):
        return {
            "status": self.status,
            "failing": [
                {"test": o.test_id, "status": o.status, "actual": o.actual, "detail": o.detail}
                for o in self.failing
            ],
        }


def combine(outcomes):
    outcomes = tuple(outcomes)
    failing = tuple(o for o in outcomes if o.status != "pass")
    statuses = {o.status for o in failing}
    if "timeout" in statuses:
        status = "timeout"
    elif "crash" in statuses:
        status = "crash"
    elif failing:
        status = "fail"
    else:
        status = "pass"
    return Verdict(status, failing, outcomes)
