"""The repair loop: localize once, prompt, generate, check, feed back."""

import hashlib
import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from .decider import Limits, run_tests, select_counterexample
from .gen import GenerationError
from .lang import CSyntaxError, UnsupportedConstruct, parse
from .lang.parser import ProgramAst
from .localize import (EncodingConfig, NoFailingTests, UnrollBoundExceeded, localize)
from .maxsat import Timeout, Unsatisfiable
from .prompts import (AssignmentInfo, MissingArtifact, NoCodeFound, PromptConfig, build_feedback,
                      build_prompt, extract_code)
from .tree_metrics import EmptyCorpus, closest_correct, score_from_teds, ted

log = logging.getLogger(__name__)

STATUSES = ("fixed", "exhausted", "timeout", "fl_failed", "generation_failed")


class NothingToRepair(Exception):
    """The submitted program already passes the suite."""


class VerificationGateViolation(AssertionError):
    pass


@dataclass(frozen=True)
class Budgets:
    wall_clock: float = 90.0
    max_iterations: int = 10

    def __post_init__(self):
        if self.wall_clock <= 0 or self.max_iterations <= 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class Assignment:
    id: str
    description: Optional[str]
    suite: object
    reference: Optional[str] = None
    correct: tuple = ()  # pairs (id, source)


@dataclass
class RepairJob:
    program: ProgramAst
    assignment: Assignment
    cfg: PromptConfig
    backend: object
    budgets: Budgets = field(default_factory=Budgets)
    tag: Optional[str] = None
    limits: Limits = field(default_factory=Limits)

    def __post_init__(self):
        if isinstance(self.program, str):
            self.program = parse(self.program)
        a, cfg = self.assignment, self.cfg
        if a.suite is None or len(a.suite) == 0:
            raise MissingArtifact("test suite")
        if cfg.description and not a.description:
            raise MissingArtifact("description")
        if cfg.reference == "lecturer" and not a.reference:
            raise MissingArtifact("reference")
        if cfg.reference == "closest" and not a.correct:
            raise MissingArtifact("correct programs")


@dataclass(frozen=True)
class Iteration:
    prompt_digest: str
    reply_digest: Optional[str]
    verdict: str  # pass, fail, invalid
    counterexample: Optional[str] = None
    failing: tuple = ()

    def to_dict(self):
        return {"prompt_digest": self.prompt_digest, "reply_digest": self.reply_digest,
                "verdict": self.verdict, "counterexample": self.counterexample,
                "failing": list(self.failing)}


@dataclass(frozen=True)
class RepairResult:
    status: str
    iterations: tuple = ()
    final_program: Optional[str] = None
    diagnosis: Optional[dict] = None
    ted_fix_to_orig: Optional[int] = None
    ted_ref_to_orig: Optional[int] = None
    distance_score: Optional[float] = None
    elapsed: float = 0.0
    config: str = ""
    backend: str = ""
    warnings: tuple = ()
    detail: Optional[str] = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "fixed" and self.final_program is None:
            raise ValueError("a fixed result needs its program")

    @property
    def fixed(self):
        return self.status == "fixed"

    def to_dict(self):
        return {
            "status": self.status,
            "final_program": self.final_program,
            "iterations": [it.to_dict() for it in self.iterations],
            "diagnosis": self.diagnosis,
            "ted_fix_to_orig": self.ted_fix_to_orig,
            "ted_ref_to_orig": self.ted_ref_to_orig,
            "distance_score": self.distance_score,
            "elapsed": self.elapsed,
            "config": self.config,
            "backend": self.backend,
            "warnings": list(self.warnings),
            "detail": self.detail,
        }


def _sha(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class _Expired(Exception):
    pass


def _call_before(deadline, fn, *args):
    """Run ``fn`` on a daemon thread; give up when ``deadline`` passes.

    An abandoned call keeps running in the background but its result is
    dropped, which is what lets a hung endpoint not hold the job hostage.
    """
    box = {}

    def target():
        try:
            box["value"] = fn(*args)
        except BaseException as e:  # re-raised on the caller's thread
            box["error"] = e

    t = threading.Thread(target=target, daemon=True)
    t.start()
    t.join(max(0.0, deadline - time.monotonic()))
    if t.is_alive():
        raise _Expired()
    if "error" in box:
        raise box["error"]
    return box["value"]


def _prompt_info(job):
    a = job.assignment
    closest = None
    if job.cfg.reference == "closest":
        corpus = [(cid, parse(src)) for cid, src in a.correct]
        try:
            closest = closest_correct(job.program, corpus).program.source
        except EmptyCorpus:
            raise MissingArtifact("correct programs") from None
    return AssignmentInfo(a.description, a.suite, a.reference, closest)


def repair(job):
    """Run the generate-and-check loop for one job and report how it went."""
    start = time.monotonic()
    deadline = start + job.budgets.wall_clock
    cfg = job.cfg
    suite = job.assignment.suite
    warnings = []
    iterations = []

    def result(status, **kw):
        return RepairResult(status, tuple(iterations), elapsed=time.monotonic() - start,
                            config=cfg.name, backend=job.backend.describe(),
                            warnings=tuple(warnings), **kw)

    first = run_tests(job.program, suite, job.limits)
    if first.passed:
        raise NothingToRepair("the program passes every test")

    diagnosis = None
    if cfg.needs_diagnosis:
        try:
            found = _call_before(deadline, localize, job.program, suite,
                                 EncodingConfig(), 10, max(0.0, deadline - time.monotonic()))
            if not found:
                raise Unsatisfiable("no diagnosis")
            diagnosis = found[0]
        except _Expired:
            return result("timeout", detail="fault localization")
        except (Timeout, Unsatisfiable, UnrollBoundExceeded, NoFailingTests) as e:
            if cfg.fault_format == "fixme":
                warnings.append(f"fault localization failed ({type(e).__name__}: {e}); "
                                "prompting without fault markers")
                log.warning("%s: %s", job.tag or "job", warnings[-1])
                cfg = cfg.as_plain()
            else:
                return result("fl_failed", detail=f"{type(e).__name__}: {e}")
    diag_dict = diagnosis.to_dict() if diagnosis is not None else None

    bundle = build_prompt(cfg, _prompt_info(job), job.program, diagnosis)
    for _ in range(job.budgets.max_iterations):
        if time.monotonic() >= deadline:
            return result("timeout", diagnosis=diag_dict)
        try:
            reply = _call_before(deadline, job.backend.generate, bundle, job.tag).text
        except _Expired:
            return result("timeout", diagnosis=diag_dict, detail="generation")
        except GenerationError as e:
            return result("generation_failed", diagnosis=diag_dict,
                          detail=f"{type(e).__name__}: {e}")
        digest = bundle.digest()
        try:
            code = extract_code(reply)
            cand = parse(code)
        except (NoCodeFound, CSyntaxError, UnsupportedConstruct):
            iterations.append(Iteration(digest, _sha(reply), "invalid"))
            bundle = bundle.with_turn(reply, build_feedback(None, cfg.fault_format, invalid=True))
            continue
        remaining = deadline - time.monotonic()
        limits = Limits(min(job.limits.time_per_test, max(remaining, 0.01)),
                        job.limits.max_steps, job.limits.int_bits)
        verdict = run_tests(cand, suite, limits)
        if verdict.passed:
            iterations.append(Iteration(digest, _sha(reply), "pass"))
            return _fixed(job, cand, suite, result, diag_dict)
        ce = select_counterexample(verdict, suite)
        iterations.append(Iteration(digest, _sha(reply), "fail", ce.id, verdict.failing_ids))
        bundle = bundle.with_turn(
            reply, build_feedback(ce if cfg.counterexample else None, cfg.fault_format))
    return result("exhausted", diagnosis=diag_dict)


def _fixed(job, cand, suite, result, diag_dict):
    # the gate: re-run with the job's own limits, independent of the loop's
    if not run_tests(cand, suite, job.limits).passed:
        raise VerificationGateViolation("candidate failed re-verification")
    t_f = ted(cand, job.program)
    t_r = ds = None
    if job.assignment.reference:
        t_r = ted(parse(job.assignment.reference), job.program)
        ds = score_from_teds(t_f, t_r)
    return result("fixed", final_program=cand.source, diagnosis=diag_dict,
                  ted_fix_to_orig=t_f, ted_ref_to_orig=t_r, distance_score=ds)
