import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass

from ..lang.parser import ProgramAst, parse
from .interpreter import Interpreter, ResourceExhausted, RuntimeFault
from .suite import TestOutcome, combine, first_divergence, outputs_match

DEFAULT_COMPILER = "gcc -std=gnu99 -O0 -w -o {exe} {src} -lm"
_PRELUDE = "#include <stdio.h>\n#line 1\n"


class NoFailure(Exception):
    """Raised when a counterexample is requested from a passing verdict."""


class CompileError(Exception):
    def __init__(self, log):
        super().__init__(log.strip().splitlines()[0] if log.strip() else "compilation failed")
        self.log = log


@dataclass(frozen=True)
class Limits:
    time_per_test: float = 2.0
    max_steps: int = 10**7
    int_bits: int = 32


def _judge(test, stdout):
    if outputs_match(stdout, test.expected):
        return TestOutcome(test.id, "pass", stdout)
    return TestOutcome(test.id, "fail", stdout, first_divergence(stdout, test.expected))


def run_one(ast, test, limits=Limits()):
    interp = Interpreter(ast, int_bits=limits.int_bits, max_steps=limits.max_steps,
                         time_limit=limits.time_per_test)
    try:
        res = interp.run(test.input)
    except ResourceExhausted as e:
        status = "crash" if e.what == "output" else "timeout"
        return TestOutcome(test.id, status, "".join(interp.out), detail=e.what)
    except RuntimeFault as e:
        return TestOutcome(test.id, "crash", "".join(interp.out), detail=str(e))
    return _judge(test, res.stdout)


def run_tests(program, suite, limits=Limits()):
    """Interpret ``program`` on every test of ``suite`` and combine the outcomes."""
    ast = program if isinstance(program, ProgramAst) else parse(program)
    return combine(run_one(ast, t, limits) for t in suite)


def select_counterexample(verdict, suite):
    """First failing test in suite order."""
    if verdict.passed:
        raise NoFailure("the program passes every test")
    bad = set(verdict.failing_ids)
    for t in suite:
        if t.id in bad:
            return t
    raise NoFailure("verdict refers to tests outside the suite")


def run_tests_external(source, suite, limits=Limits(), compiler=DEFAULT_COMPILER):
    """Compile ``source`` with a real C compiler and run it on the suite.

    ``compiler`` is a command template with ``{src}`` and ``{exe}`` fields.
    """
    if "#include" not in source:
        source = _PRELUDE + source
    with tempfile.TemporaryDirectory(prefix="decider-") as tmp:
        src = os.path.join(tmp, "prog.c")
        exe = os.path.join(tmp, "prog")
        with open(src, "w") as fh:
            fh.write(source)
        cmd = shlex.split(compiler.format(src=shlex.quote(src), exe=shlex.quote(exe)))
        proc = subprocess.run(cmd, capture_output=True, text=True, cwd=tmp)
        if proc.returncode != 0 or not os.path.exists(exe):
            raise CompileError(proc.stderr or proc.stdout)
        outcomes = []
        for t in suite:
            try:
                run = subprocess.run([exe], input=t.input.encode(), capture_output=True,
                                     timeout=limits.time_per_test, cwd=tmp)
            except subprocess.TimeoutExpired as e:
                out = (e.stdout or b"").decode("latin-1")
                outcomes.append(TestOutcome(t.id, "timeout", out, detail="time"))
                continue
            out = run.stdout.decode("latin-1")
            if run.returncode < 0:
                outcomes.append(TestOutcome(t.id, "crash", out, detail=f"signal {-run.returncode}"))
            else:
                outcomes.append(_judge(t, out))
        return combine(outcomes)
