import math
from dataclasses import dataclass, field

from ..decider.interpreter import Interpreter, ResourceExhausted, RuntimeFault
from ..decider.suite import outputs_match
from ..lang import ast as A
from ..maxsat import enumerate_mcs
from .encoder import (EncodingConfig, UnrollBoundExceeded, UnsupportedForEncoding, encode_program,
                      uses_floats)

SLACK = 2
TRACE_STEPS = 10**6


class NoFailingTests(Exception):
    pass


@dataclass(frozen=True)
class Diagnosis:
    statements: frozenset
    lines: tuple = ()
    approximate: bool = False
    score: float = field(default=None, compare=False)

    @property
    def cardinality(self):
        return len(self.statements)

    def to_dict(self):
        return {"statements": sorted(self.statements), "lines": list(self.lines),
                "cardinality": self.cardinality, "approximate": self.approximate}


def make_diagnosis(ast, sids, approximate=False, score=None):
    sids = frozenset(sids)
    for sid in sids:
        if not A.is_diagnosable(ast.statement(sid)):
            raise ValueError(f"statement {sid} is not diagnosable")
    lines = tuple(sorted({ast.head_line(s) for s in sids}))
    return Diagnosis(sids, lines, approximate, score)


@dataclass(frozen=True)
class Trace:
    statements: tuple
    loop_counts: dict
    stdout: str
    fault: object = None


def concrete_trace(ast, stdin, int_bits=16, max_steps=TRACE_STEPS):
    """Executed diagnosable units (conditions once per evaluation) and the
    iteration count of every loop entry."""
    interp = Interpreter(ast, int_bits=int_bits, max_steps=max_steps, trace=True)
    res = interp.run(stdin)
    return Trace(tuple(res.trace), {k: tuple(v) for k, v in res.loop_counts.items()}, res.stdout)


def _observe(ast, test, int_bits):
    """Run one test concretely; returns (passed, trace); a fault is kept on the trace."""
    interp = Interpreter(ast, int_bits=int_bits, max_steps=TRACE_STEPS, trace=True)
    try:
        res = interp.run(test.input)
    except RuntimeFault as e:
        return False, Trace(tuple(interp.trace), dict(interp.loop_counts), "".join(interp.out), e)
    except ResourceExhausted as e:
        return False, Trace(tuple(interp.trace), dict(interp.loop_counts), "".join(interp.out), e)
    return outputs_match(res.stdout, test.expected), Trace(tuple(res.trace), res.loop_counts,
                                                          res.stdout)


def failing_tests(ast, suite, int_bits=16):
    return [t for t in suite if not _observe(ast, t, int_bits)[0]]


def _unroll_bound(ast, tests, cfg):
    needed = 0
    for t in tests:
        _, trace = _observe(ast, t, cfg.int_bit_width)
        if isinstance(trace.fault, ResourceExhausted):
            if cfg.unroll_bound is None:
                raise UnrollBoundExceeded(f"test {t.id} does not terminate within {TRACE_STEPS} steps")
            continue
        for counts in trace.loop_counts.values():
            needed = max(needed, max(counts, default=0))
    if cfg.unroll_bound is None:
        return needed + SLACK
    if cfg.unroll_bound < needed:
        raise UnrollBoundExceeded(f"a loop runs {needed} times, above the bound {cfg.unroll_bound}")
    return cfg.unroll_bound


def _selected(ast, suite, cfg):
    if cfg.failing_tests is not None:
        wanted = set(cfg.failing_tests)
        return [t for t in suite if t.id in wanted]
    return failing_tests(ast, suite, cfg.int_bit_width)


def encode(ast, suite, cfg=EncodingConfig()):
    """Unified formula over the failing tests (or ``cfg.failing_tests``)."""
    if uses_floats(ast):
        raise UnsupportedForEncoding("floating-point programs are not bit-blasted")
    tests = _selected(ast, suite, cfg)
    bound = _unroll_bound(ast, tests, cfg)
    return encode_program(ast, tests, cfg.int_bit_width, bound)


def _output_units(ast, sids):
    return sum(1 for s in sids if A.is_output_stmt(ast.statement(s)))


def rank_key(ast, sids):
    """Order among diagnoses: size, then fewer output statements, then ids."""
    return (len(sids), _output_units(ast, sids), tuple(sorted(sids)))


def localize(ast, suite, cfg=EncodingConfig(), max_diagnoses=10, budget=None):
    """Diagnoses of ``ast`` in non-decreasing cardinality.

    All minimum-cardinality diagnoses are computed before ranking, so the
    first element is independent of the solver's search order.
    """
    tests = _selected(ast, suite, cfg)
    if not tests:
        raise NoFailingTests("every test passes")
    if uses_floats(ast):
        return spectrum_ranking(ast, suite, cfg.int_bit_width)[:max_diagnoses]
    try:
        enc = encode(ast, suite, EncodingConfig(cfg.unroll_bound, cfg.int_bit_width,
                                                tuple(t.id for t in tests)))
    except UnsupportedForEncoding:
        return spectrum_ranking(ast, suite, cfg.int_bit_width)[:max_diagnoses]
    sets = enumerate_mcs(enc.wcnf, max_count=max_diagnoses, budget=budget, finish_level=True)
    found = [frozenset(enc.soft_to_sid[i] for i in mcs) for mcs in sets]
    found = [s for s in found if s]
    found.sort(key=lambda s: rank_key(ast, s))
    return [make_diagnosis(ast, s) for s in found[:max_diagnoses]]


def spectrum_ranking(ast, suite, int_bits=16):
    """Ochiai suspiciousness of each unit; one single-statement diagnosis
    per covered unit, most suspicious first."""
    fail_cov, pass_cov = {}, {}
    total_fail = 0
    for t in suite:
        ok, trace = _observe(ast, t, int_bits)
        covered = set(trace.statements)
        if not ok:
            total_fail += 1
        for sid in covered:
            bucket = pass_cov if ok else fail_cov
            bucket[sid] = bucket.get(sid, 0) + 1
    scored = []
    for unit in ast.units():
        ef = fail_cov.get(unit.sid, 0)
        ep = pass_cov.get(unit.sid, 0)
        if ef == 0:
            continue
        score = ef / math.sqrt(total_fail * (ef + ep))
        scored.append((-score, _output_units(ast, [unit.sid]), unit.sid, score))
    scored.sort()
    return [make_diagnosis(ast, [sid], approximate=True, score=score) for _, _, sid, score in scored]
