"""DIMACS WCNF text and external MaxSAT solver output."""

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass

from .wcnf import Solution, Unsatisfiable, Wcnf


class MalformedSolverOutput(Exception):
    pass


def to_dimacs_wcnf(f, comments=()):
    top = f.top
    lines = [f"c {c}" for c in comments]
    lines.append(f"p wcnf {f.num_vars} {len(f.hard) + len(f.soft)} {top}")
    for c in f.hard:
        lines.append(f"{top} {' '.join(map(str, c))} 0")
    for c, w in f.soft:
        lines.append(f"{w} {' '.join(map(str, c))} 0")
    return "\n".join(lines) + "\n"


def from_dimacs_wcnf(text):
    header = None
    hard, soft = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 5 or parts[1] != "wcnf":
                raise ValueError(f"bad header: {line}")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
            continue
        if header is None:
            raise ValueError("clause before header")
        nums = [int(x) for x in line.split()]
        if not nums or nums[-1] != 0:
            raise ValueError(f"clause not terminated by 0: {line}")
        w, lits = nums[0], nums[1:-1]
        (hard if w >= header[2] else soft).append(lits if w >= header[2] else (lits, w))
    if header is None:
        raise ValueError("missing header")
    return Wcnf(header[0], hard, soft)


@dataclass(frozen=True)
class SolverOutput:
    status: str  # optimum or satisfiable
    cost: object  # int or None
    model: object  # Solution-style tuple or None


def parse_solver_output(text, num_vars=None):
    """Read ``s``/``o``/``v`` certificate lines of a MaxSAT solver.

    ``v`` lines may list signed literals or a single 0/1 string. Raises
    ``Unsatisfiable`` for an ``s UNSATISFIABLE`` answer.
    """
    status = None
    cost = None
    lits = []
    bits = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tag, _, rest = line.partition(" ")
        rest = rest.strip()
        if tag == "s":
            if rest == "OPTIMUM FOUND":
                status = "optimum"
            elif rest == "SATISFIABLE":
                status = "satisfiable"
            elif rest == "UNSATISFIABLE":
                raise Unsatisfiable("solver reports unsatisfiable hard clauses")
            else:
                raise MalformedSolverOutput(f"unknown status line: {line}")
        elif tag == "o":
            try:
                cost = int(rest)
            except ValueError:
                raise MalformedSolverOutput(f"bad cost line: {line}") from None
        elif tag == "v":
            if _is_bitstring(rest, num_vars):
                bits = rest
                continue
            try:
                lits.extend(int(x) for x in rest.split())
            except ValueError:
                raise MalformedSolverOutput(f"bad model line: {line}") from None
        else:
            raise MalformedSolverOutput(f"unexpected line: {line}")
    if status is None:
        raise MalformedSolverOutput("no status line")
    if cost is None and not lits and bits is None:
        raise MalformedSolverOutput("neither cost nor model present")
    model = None
    if bits is not None:
        model = (False,) + tuple(b == "1" for b in bits)
    elif lits:
        lits = [x for x in lits if x != 0]
        n = num_vars if num_vars is not None else max(abs(x) for x in lits)
        values = [False] * (n + 1)
        for x in lits:
            if abs(x) <= n:
                values[abs(x)] = x > 0
        model = tuple(values)
    if model is not None and num_vars is not None and len(model) < num_vars + 1:
        model = model + (False,) * (num_vars + 1 - len(model))
    return SolverOutput(status, cost, model)


def _is_bitstring(text, num_vars):
    if " " in text or not text or set(text) - {"0", "1"}:
        return False
    if num_vars is not None:
        return len(text) == num_vars
    return len(text) > 1


def solve_external(f, command, budget=None):
    """Run an external MaxSAT solver on ``f``; ``command`` gets the WCNF
    path appended. The reported cost is checked against the model."""
    with tempfile.TemporaryDirectory(prefix="wcnf-") as tmp:
        path = os.path.join(tmp, "formula.wcnf")
        with open(path, "w") as fh:
            fh.write(to_dimacs_wcnf(f))
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        proc = subprocess.run(argv + [path], capture_output=True, text=True, timeout=budget)
    out = parse_solver_output(proc.stdout, f.num_vars)
    if out.model is None:
        raise MalformedSolverOutput("solver printed no model")
    model = out.model[: f.num_vars + 1]
    if not f.hard_ok(model):
        raise MalformedSolverOutput("solver model violates a hard clause")
    cost = f.cost(model)
    if out.cost is not None and out.cost != cost:
        raise MalformedSolverOutput(f"reported cost {out.cost} but model costs {cost}")
    return Solution(model, cost)
