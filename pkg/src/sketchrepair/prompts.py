"""Program sketches, FIXME annotations, prompt rendering and reply parsing.

The template text below is part of the contract (goldens compare bytes), so
it lives in code rather than in configuration.
"""

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from typing import Optional

from .decider.suite import normalize_output
from .lang import ast as A

HOLE_TEXT = "@ HOLE {} @"
FIXME = "/* FIXME */"
MAX_PROMPT_TESTS = 10

_KEEP_MINIMAL = "Modify the code as little as possible. Do not provide any explanation."
COMMANDS = {
    "plain": "Fix all semantic bugs in the buggy program below. " + _KEEP_MINIMAL,
    "fixme": "Fix all buggy lines with '/* FIXME */' comments in the buggy program below. "
             + _KEEP_MINIMAL,
    "sketch": "Complete all the '@ HOLES N @' in the incomplete program below. " + _KEEP_MINIMAL,
}
DESCRIPTION_HEADER = "### Problem Description ###"
TESTS_HEADER = "### Test Suite"
REFERENCE_HEADER = "# Reference Implementation (Do not copy this program) <c> #"
PROGRAM_HEADERS = {
    "plain": ("### Buggy Program <c> ###", "### Fixed Program <c> ###"),
    "fixme": ("### Buggy Program <c> ###", "### Fixed Program <c> ###"),
    "sketch": ("### Incomplete Program <c> ###", "### Complete Program <c> ###"),
}
FEEDBACK_HEADER = "### Feedback ###"
WRONG = "Your previous suggestion was incorrect!"
INVALID = "Your previous suggestion was not a valid program!"
RETRY = "Try again. Code only. Provide no explanation."
COUNTEREXAMPLE_HEADER = "### Counterexample  ###"
FENCE = "```"


class MissingArtifact(Exception):
    def __init__(self, which):
        super().__init__(f"prompt needs the {which}")
        self.which = which


class StatementNotFound(Exception):
    pass


class NoCodeFound(Exception):
    pass


# -- configurations ---------------------------------------------------------------

_FLAGS = {"De": "description", "TS": "test_suite", "CE": "counterexample"}


@dataclass(frozen=True)
class PromptConfig:
    description: bool = True
    test_suite: bool = True
    counterexample: bool = False
    reference: Optional[str] = None  # None, "lecturer" or "closest"
    fault_format: str = "plain"  # plain, fixme or sketch

    def __post_init__(self):
        if self.reference not in (None, "lecturer", "closest"):
            raise ValueError(f"unknown reference kind {self.reference!r}")
        if self.fault_format not in COMMANDS:
            raise ValueError(f"unknown fault format {self.fault_format!r}")

    @classmethod
    def parse(cls, name):
        """Read names such as ``Sk_De-TS-CE`` or ``FIXME_De-TS-CE-CPA``."""
        fault = "plain"
        body = name.strip()
        for prefix, kind in (("Sk_", "sketch"), ("FIXME_", "fixme")):
            if body.startswith(prefix):
                fault, body = kind, body[len(prefix):]
        flags = dict.fromkeys(_FLAGS.values(), False)
        reference = None
        for part in filter(None, body.split("-")):
            if part in _FLAGS:
                flags[_FLAGS[part]] = True
            elif part == "RI":
                reference = "lecturer"
            elif part == "CPA":
                reference = "closest"
            else:
                raise ValueError(f"unknown configuration component {part!r} in {name!r}")
        return cls(reference=reference, fault_format=fault, **flags)

    @property
    def name(self):
        parts = [abbr for abbr, attr in _FLAGS.items() if getattr(self, attr)]
        if self.reference == "lecturer":
            parts.append("RI")
        elif self.reference == "closest":
            parts.append("CPA")
        prefix = {"plain": "", "fixme": "FIXME_", "sketch": "Sk_"}[self.fault_format]
        return prefix + "-".join(parts)

    @property
    def needs_diagnosis(self):
        return self.fault_format != "plain"

    def as_plain(self):
        return replace(self, fault_format="plain")

    def __str__(self):
        return self.name


# -- sketches and annotations ----------------------------------------------------------


@dataclass(frozen=True)
class HoleInfo:
    number: int
    sid: int
    original: str


@dataclass(frozen=True)
class Sketch:
    text: str
    holes: tuple

    @property
    def hole_count(self):
        return len(self.holes)


def _diagnosed(ast, diagnosis):
    sids = getattr(diagnosis, "statements", diagnosis)
    stmts = []
    for sid in sorted(sids):
        try:
            stmts.append(ast.statement(sid))
        except KeyError:
            raise StatementNotFound(f"no statement {sid} in the program") from None
    if not stmts:
        raise StatementNotFound("empty diagnosis")
    return sorted(stmts, key=lambda s: s.span.head_start)


def _line_bounds(src, offset):
    start = src.rfind("\n", 0, offset) + 1
    end = src.find("\n", offset)
    return start, len(src) if end < 0 else end


def _comment_spans(ast):
    return [(c.start, c.end) for c in ast.comments]


def make_sketch(ast, diagnosis):
    """Replace each diagnosed statement by ``@ HOLE k @`` (k in source order).

    A statement alone on its line (trailing comments aside) turns the whole
    line into the hole, keeping the indentation; otherwise only the
    statement text is replaced. Comments are dropped from the sketch.
    """
    src = ast.source
    stmts = _diagnosed(ast, diagnosis)
    comments = _comment_spans(ast)
    edits = []
    holes = []
    for k, s in enumerate(stmts, 1):
        hs, he = s.span.head_start, s.span.head_end
        ls, le = _line_bounds(src, hs)
        before = src[ls:hs]
        after = src[he:le]
        for cs, ce in comments:
            if he <= cs < le:
                after = src[he:cs]
                break
        if not before.strip() and not after.strip():
            edits.append((ls, max(le, _covering_comment_end(comments, he, le)), before + HOLE_TEXT.format(k)))
        else:
            edits.append((hs, he, HOLE_TEXT.format(k)))
        holes.append(HoleInfo(k, s.sid, src[hs:he]))
    for cs, ce in comments:
        if not any(a <= cs < b for a, b, _ in edits):
            ls, _ = _line_bounds(src, cs)
            start = cs
            while start > ls and src[start - 1] in " \t":
                start -= 1
            if not src[ls:start].strip():
                start = ls  # a comment on its own line leaves an empty line
            edits.append((start, ce, "\n" * src.count("\n", cs, ce)))
    text = _apply(src, edits)
    return Sketch(text, tuple(holes))


def _covering_comment_end(comments, start, line_end):
    for cs, ce in comments:
        if start <= cs < line_end:
            return ce if ce > line_end else line_end
    return line_end


def _apply(src, edits):
    out = []
    pos = 0
    for a, b, text in sorted(edits):
        if a < pos:
            raise ValueError("overlapping edits")
        out.append(src[pos:a])
        out.append(text)
        pos = b
    out.append(src[pos:])
    return "".join(out)


def fill_sketch(sketch):
    """Put the original statements back into the holes."""
    text = sketch.text
    for h in sketch.holes:
        text = text.replace(HOLE_TEXT.format(h.number), h.original, 1)
    return text


def annotate_fixme(ast, diagnosis):
    """Mark every line holding a diagnosed statement with ``/* FIXME */``.

    The marker goes at the end of the code, before a trailing ``//``
    comment if the line has one, so it always reads as a comment.
    """
    stmts = _diagnosed(ast, diagnosis)
    src = ast.source
    edits = []
    for ln in sorted({s.span.head_line for s in stmts}):
        s = next(x for x in stmts if x.span.head_line == ln)
        ls, le = _line_bounds(src, s.span.head_start)
        at = le
        for cs, ce in _comment_spans(ast):
            if ls <= cs < le and ce >= le and src.startswith("//", cs):
                at = cs
                while at > ls and src[at - 1] in " \t":
                    at -= 1
                break
        tail = src[at:le]
        edits.append((at, le, " " + FIXME + tail))
    return _apply(src, edits)


def strip_fixme(text):
    return text.replace(" " + FIXME, "")


# -- prompts ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssignmentInfo:
    description: Optional[str] = None
    suite: object = None
    reference: Optional[str] = None
    closest: Optional[str] = None


@dataclass(frozen=True)
class PromptBundle:
    messages: tuple
    config: PromptConfig
    hole_count: int = 0
    program: str = ""
    holes: tuple = field(default=(), compare=False)

    def with_turn(self, reply, feedback):
        """Conversation extended by the model's reply and a feedback message."""
        msgs = self.messages + (("assistant", reply), ("user", feedback))
        return replace(self, messages=msgs)

    def as_json(self):
        return [{"role": r, "content": t} for r, t in self.messages]

    def digest(self):
        raw = json.dumps(self.as_json(), sort_keys=True, ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(raw).hexdigest()

    def render(self):
        """The first prompt as one text: command, blank line, sections."""
        return "\n\n".join(t for r, t in self.messages[:2])

    def transcript(self):
        return "".join(f"=== {r} ===\n{t}\n" for r, t in self.messages)


def fence(code):
    return FENCE + "c\n" + code.rstrip() + FENCE


def _test_block(test):
    return f"#input:\n{test.input.rstrip(chr(10))}\n#output:\n{normalize_output(test.expected)}"


def _field(obj, name):
    if isinstance(obj, dict):
        return obj.get(name)
    return getattr(obj, name, None)


def build_prompt(cfg, assignment, program, diagnosis=None, counterexample=None,
                 previous_reply=None, max_tests=MAX_PROMPT_TESTS):
    """Render the opening conversation for ``cfg``.

    ``program`` is the buggy ``ProgramAst`` (plain source text is enough for
    the plain format). With ``previous_reply`` the bundle also carries that
    reply and the feedback built from ``counterexample``.
    """
    description = _field(assignment, "description")
    suite = _field(assignment, "suite")
    sections = []
    if cfg.description:
        if not description:
            raise MissingArtifact("description")
        sections.append(DESCRIPTION_HEADER + "\n" + description.strip())
    if cfg.test_suite:
        if suite is None or len(suite) == 0:
            raise MissingArtifact("test suite")
        tests = list(suite)[:max_tests]
        sections.append(TESTS_HEADER + "\n" + "\n".join(_test_block(t) for t in tests))
    if cfg.reference is not None:
        which = "reference" if cfg.reference == "lecturer" else "closest"
        code = _field(assignment, which)
        if not code:
            raise MissingArtifact(which)
        sections.append(REFERENCE_HEADER + "\n" + fence(code))
    holes = ()
    if cfg.fault_format == "plain":
        shown = program if isinstance(program, str) else program.source
    else:
        if diagnosis is None:
            raise MissingArtifact("diagnosis")
        if isinstance(program, str):
            raise TypeError("sketch and FIXME prompts need a parsed program")
        if cfg.fault_format == "fixme":
            shown = annotate_fixme(program, diagnosis)
        else:
            sk = make_sketch(program, diagnosis)
            shown, holes = sk.text, sk.holes
    given, wanted = PROGRAM_HEADERS[cfg.fault_format]
    sections.append(given + "\n" + fence(shown))
    sections.append(wanted + "\n" + FENCE + "c")
    bundle = PromptBundle((("system", COMMANDS[cfg.fault_format]), ("user", "\n\n".join(sections))),
                          cfg, len(holes), shown, holes)
    if previous_reply is not None:
        ce = counterexample if cfg.counterexample else None
        bundle = bundle.with_turn(previous_reply, build_feedback(ce, cfg.fault_format))
    return bundle


def build_feedback(counterexample=None, fault_format="plain", invalid=False):
    """Feedback message after a rejected candidate.

    Without a counterexample the counterexample section is left out.
    """
    lines = [FEEDBACK_HEADER, INVALID if invalid else WRONG, RETRY]
    if counterexample is not None:
        lines += [COUNTEREXAMPLE_HEADER, _test_block(counterexample)]
    return "\n".join(lines) + "\n\n" + PROGRAM_HEADERS[fault_format][1] + "\n" + FENCE + "c"


# -- replies ---------------------------------------------------------------------------

_CODE_START = re.compile(r"#include|\bint\s+main\b")


def extract_code(reply):
    """Program text from a model reply.

    The first fenced block wins. A reply that continues the prompt's open
    fence (code first, then a closing fence) yields the text before that
    fence. Without fences, the text from the first ``#include`` or
    ``int main`` on is taken.
    """
    first = reply.find(FENCE)
    if first >= 0:
        head = reply[:first]
        m = _CODE_START.search(head)
        if m:
            return head[m.start():].strip() + "\n"
        nl = reply.find("\n", first)
        if nl < 0:
            raise NoCodeFound("fence without content")
        body_start = nl + 1
        end = reply.find(FENCE, body_start)
        body = reply[body_start:] if end < 0 else reply[body_start:end]
        if body.strip():
            return body.strip() + "\n"
        raise NoCodeFound("empty code block")
    m = _CODE_START.search(reply)
    if m:
        return reply[m.start():].strip() + "\n"
    raise NoCodeFound("reply contains no program")
