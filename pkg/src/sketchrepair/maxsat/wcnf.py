import time
from dataclasses import dataclass, field

from .sat import Solver, Timeout


class Unsatisfiable(Exception):
    """The hard clauses have no model."""


class HardUnsat(Unsatisfiable):
    pass


@dataclass
class Wcnf:
    """Weighted partial CNF. ``soft`` holds ``(clause, weight)`` pairs."""

    num_vars: int = 0
    hard: list = field(default_factory=list)
    soft: list = field(default_factory=list)

    def __post_init__(self):
        self.hard = [list(c) for c in self.hard]
        self.soft = [(list(c), w) for c, w in self.soft]
        for c in self.hard:
            self._check(c)
        for c, w in self.soft:
            self._check(c)
            if not isinstance(w, int) or w <= 0:
                raise ValueError(f"soft weight must be a positive integer, got {w!r}")

    def _check(self, clause):
        if not clause:
            raise ValueError("empty clause")
        for lit in clause:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} outside 1..{self.num_vars}")

    def new_var(self):
        self.num_vars += 1
        return self.num_vars

    def add_hard(self, clause):
        clause = list(clause)
        self._check(clause)
        self.hard.append(clause)

    def add_soft(self, clause, weight=1):
        clause = list(clause)
        self._check(clause)
        if weight <= 0:
            raise ValueError("soft weight must be positive")
        self.soft.append((clause, weight))
        return len(self.soft) - 1

    @property
    def top(self):
        return 1 + sum(w for _, w in self.soft)

    def falsified(self, model):
        """Indices of soft clauses false under ``model`` (indexable by var)."""
        return [i for i, (c, _) in enumerate(self.soft) if not _sat(c, model)]

    def cost(self, model):
        return sum(self.soft[i][1] for i in self.falsified(model))

    def hard_ok(self, model):
        return all(_sat(c, model) for c in self.hard)


def _sat(clause, model):
    return any(model[abs(lit)] == (lit > 0) for lit in clause)


@dataclass(frozen=True)
class Solution:
    model: tuple  # index 0 unused; model[v] is the value of variable v
    cost: int

    def value(self, lit):
        return self.model[abs(lit)] == (lit > 0)

    def literals(self):
        return [v if self.model[v] else -v for v in range(1, len(self.model))]


class _Relaxed:
    """A SAT instance with one blocking literal per soft clause and a
    totalizer counting the true blocking literals."""

    def __init__(self, f, weighted):
        self.f = f
        self.sat = Solver()
        self.sat.ensure_vars(f.num_vars)
        for c in f.hard:
            self.sat.add_clause(c)
        self.block = []
        for c, _ in f.soft:
            if len(c) == 1:
                b = -c[0]
            else:
                b = self.sat.new_var()
                self.sat.add_clause(c + [b])
            self.block.append(b)
        inputs = []
        for b, (_, w) in zip(self.block, f.soft):
            inputs.extend([b] * (w if weighted else 1))
        self.outputs = _totalizer(self.sat, inputs)

    def at_most(self, k):
        """Assumptions bounding the count of true inputs by ``k``."""
        if k < len(self.outputs):
            return [-self.outputs[k]]
        return []


def _totalizer(sat, inputs):
    """Unary counter: ``out[i]`` is forced true once more than ``i`` inputs hold."""
    if not inputs:
        return []
    leaves = [[lit] for lit in inputs]
    while len(leaves) > 1:
        merged = []
        for i in range(0, len(leaves) - 1, 2):
            merged.append(_merge(sat, leaves[i], leaves[i + 1]))
        if len(leaves) % 2:
            merged.append(leaves[-1])
        leaves = merged
    return leaves[0]


def _merge(sat, a, b):
    out = [sat.new_var() for _ in range(len(a) + len(b))]
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            if i + j == 0:
                continue
            clause = [out[i + j - 1]]
            if i:
                clause.append(-a[i - 1])
            if j:
                clause.append(-b[j - 1])
            sat.add_clause(clause)
    return out


def _deadline(budget):
    return None if budget is None else time.monotonic() + budget


def solve(f, budget=None):
    """Minimum-cost model of ``f``.

    Linear search on the cost bound from below: the bound k is raised until
    the hard clauses plus "at most k falsified weight" become satisfiable.
    Weights are expanded into totalizer inputs, so large weights are slow.
    """
    deadline = _deadline(budget)
    r = _Relaxed(f, weighted=True)
    if not r.sat.solve(deadline=deadline):
        raise Unsatisfiable("hard clauses are inconsistent")
    best = tuple(r.sat.model[: f.num_vars + 1])
    upper = f.cost(best)
    for k in range(upper):
        if r.sat.solve(r.at_most(k), deadline=deadline):
            best = tuple(r.sat.model[: f.num_vars + 1])
            break
    cost = f.cost(best)
    assert f.hard_ok(best)
    return Solution(best, cost)


def enumerate_mcs(f, max_count=None, budget=None, finish_level=False):
    """Minimal correction sets of ``f`` in non-decreasing cardinality.

    Each set is a sorted tuple of soft-clause indices. After a set is found
    a clause forbidding all of its members from being relaxed together is
    added, which excludes the set and all its supersets. With
    ``finish_level`` the sets of the last cardinality reached are all
    produced even when that goes past ``max_count``.
    """
    deadline = _deadline(budget)
    r = _Relaxed(f, weighted=False)
    if not r.sat.solve(deadline=deadline):
        raise HardUnsat("hard clauses are inconsistent")
    found = []
    k = 0
    n = len(f.soft)
    while k <= n:
        if max_count is not None and len(found) >= max_count:
            if not finish_level or len(found[-1]) < k:
                break
        if not r.sat.solve(r.at_most(k), deadline=deadline):
            k += 1
            continue
        model = r.sat.model
        mcs = tuple(f.falsified(model))
        if len(mcs) != k:
            # a smaller unblocked set would have been found at a lower bound
            raise AssertionError(f"correction set {mcs} found at bound {k}")
        found.append(mcs)
        if not mcs:
            break
        r.sat.add_clause([-r.block[i] for i in mcs])
    return found


__all__ = ["HardUnsat", "Solution", "Timeout", "Unsatisfiable", "Wcnf", "enumerate_mcs", "solve"]
