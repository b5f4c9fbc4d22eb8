import pytest

from conftest import FIXTURES, MAX3, read
from sketchrepair.decider import TestCase, TestSuite
from sketchrepair.lang import parse
from sketchrepair.localize import localize, make_diagnosis
from sketchrepair.prompts import (COUNTEREXAMPLE_HEADER, FIXME, AssignmentInfo, MissingArtifact,
                                  NoCodeFound, PromptConfig, StatementNotFound, annotate_fixme,
                                  build_feedback, build_prompt, extract_code, fill_sketch,
                                  make_sketch, strip_fixme)

GOLDEN = FIXTURES / "prompts"
CONFIGS = ["De-TS", "FIXME_De-TS", "Sk_De-TS", "Sk_De-TS-CE", "De-TS-CE-RI"]

SKETCH = """int main(){
   int f,s,t;
   scanf("%d %d %d", &f, &s, &t);
   @ HOLE 1 @
      printf("%d\\n", f);
   else if (s > f && s >= t)
      printf("%d\\n", s);
   @ HOLE 2 @
      printf("%d\\n", t);

   return 0;
}
"""


@pytest.fixture
def info(suite, reference):
    return AssignmentInfo(read(MAX3 / "description.txt"), suite, reference)


@pytest.fixture
def diag(buggy_ast, suite):
    return localize(buggy_ast, suite)[0]


def bundle_for(name, info, buggy_ast, diag, **kw):
    cfg = PromptConfig.parse(name)
    return build_prompt(cfg, info, buggy_ast, diag if cfg.needs_diagnosis else None, **kw)


@pytest.mark.parametrize("name", CONFIGS)
def test_first_prompt_matches_golden(name, info, buggy_ast, diag):
    assert bundle_for(name, info, buggy_ast, diag).render() == read(GOLDEN / f"{name}.txt")


@pytest.mark.parametrize("name", ["Sk_De-TS-CE", "De-TS-CE-RI"])
def test_second_turn_matches_golden(name, info, buggy_ast, diag, buggy, suite):
    b = bundle_for(name, info, buggy_ast, diag, counterexample=suite["t0"], previous_reply=buggy)
    assert b.transcript() == read(GOLDEN / f"{name}.turn2.txt")


def test_golden_markers(info, buggy_ast, diag):
    assert read(GOLDEN / "De-TS.txt").startswith("Fix all semantic bugs in the buggy program below.")
    fixme = read(GOLDEN / "FIXME_De-TS.txt")
    assert fixme.startswith("Fix all buggy lines with '/* FIXME */' comments")
    assert fixme.count(FIXME) == 3  # two marks plus the command
    sk = read(GOLDEN / "Sk_De-TS.txt")
    assert sk.startswith("Complete all the '@ HOLES N @' in the incomplete program below.")
    assert "### Incomplete Program <c> ###" in sk and sk.endswith("### Complete Program <c> ###\n```c")
    ri = read(GOLDEN / "De-TS-CE-RI.txt")
    assert "# Reference Implementation (Do not copy this program) <c> #" in ri
    for name in CONFIGS:
        text = read(GOLDEN / f"{name}.txt")
        assert ("Reference Implementation" in text) == name.endswith("RI")


def test_sketch_of_buggy_program(buggy_ast, diag):
    sk = make_sketch(buggy_ast, diag)
    assert sk.text == SKETCH
    assert sk.hole_count == 2
    assert [(h.number, buggy_ast.head_line(h.sid)) for h in sk.holes] == [(1, 4), (2, 8)]


def test_filling_holes_restores_the_program(buggy_ast, diag):
    assert parse(fill_sketch(make_sketch(buggy_ast, diag)), sketch=False) == buggy_ast


def test_single_statement_sketch():
    ast = parse("int main(){ return 0; }")
    sk = make_sketch(ast, {ast.units()[0].sid})
    assert sk.text == "int main(){ @ HOLE 1 @ }"
    assert sk.hole_count == 1


def test_unknown_statement(buggy_ast):
    with pytest.raises(StatementNotFound):
        make_sketch(buggy_ast, {999})
    with pytest.raises(StatementNotFound):
        annotate_fixme(buggy_ast, {999})


def test_fixme_marks_diagnosed_lines(buggy_ast, buggy, diag):
    text = annotate_fixme(buggy_ast, diag)
    lines = text.splitlines()
    marked = [i + 1 for i, l in enumerate(lines) if FIXME in l]
    assert marked == [4, 8]
    # the marker goes in front of an existing line comment so it stays visible
    assert lines[3] == "   if (f < s && f >= t) /* FIXME */ //fix: f >= s"
    assert strip_fixme(text) == buggy
    assert parse(text) == buggy_ast


def test_fixme_single_line():
    src = 'int main(){\n  int x = 1;\n  printf("%d\\n", x);\n  return 0;\n}\n'
    ast = parse(src)
    text = annotate_fixme(ast, make_diagnosis(ast, {ast.units()[0].sid}))
    assert text.count(FIXME) == 1
    assert text.splitlines()[1] == "  int x = 1; " + FIXME


def test_missing_artifacts(info, buggy_ast, diag, suite):
    with pytest.raises(MissingArtifact) as e:
        build_prompt(PromptConfig.parse("De-TS-RI"), AssignmentInfo("d", suite), buggy_ast)
    assert e.value.which == "reference"
    with pytest.raises(MissingArtifact) as e:
        build_prompt(PromptConfig.parse("De-TS"), AssignmentInfo(None, suite), buggy_ast)
    assert e.value.which == "description"
    with pytest.raises(MissingArtifact) as e:
        build_prompt(PromptConfig.parse("Sk_De-TS"), info, buggy_ast)
    assert e.value.which == "diagnosis"
    with pytest.raises(MissingArtifact):
        build_prompt(PromptConfig.parse("De-TS-CPA"), info, buggy_ast)


def test_no_reference_without_flag(info, buggy_ast, reference):
    text = build_prompt(PromptConfig.parse("De-TS-CE"), info, buggy_ast).render()
    assert reference.strip() not in text


def test_prompt_is_deterministic(info, buggy_ast, diag):
    for name in CONFIGS:
        a, b = bundle_for(name, info, buggy_ast, diag), bundle_for(name, info, buggy_ast, diag)
        assert a.messages == b.messages and a.digest() == b.digest()


def test_message_framing(info, buggy_ast, diag):
    b = bundle_for("Sk_De-TS", info, buggy_ast, diag)
    assert [r for r, _ in b.messages] == ["system", "user"]
    assert b.hole_count == 2
    longer = b.with_turn("x", "y")
    assert longer.messages[:2] == b.messages


def test_test_cap():
    suite = TestSuite.from_pairs([(str(i), str(i)) for i in range(14)])
    text = build_prompt(PromptConfig.parse("TS"), AssignmentInfo(None, suite), "int main(){}").render()
    assert text.count("#input:") == 10
    text = build_prompt(PromptConfig.parse("TS"), AssignmentInfo(None, suite), "int main(){}",
                        max_tests=3).render()
    assert text.count("#input:") == 3


def test_feedback_block():
    ce = TestCase("t1", "6 2 1\n", "6\n")
    assert build_feedback(ce) == (
        "### Feedback ###\n"
        "Your previous suggestion was incorrect!\n"
        "Try again. Code only. Provide no explanation.\n"
        "### Counterexample  ###\n"
        "#input:\n6 2 1\n#output:\n6\n\n"
        "### Fixed Program <c> ###\n```c")


def test_feedback_multiline_input_and_sketch_header():
    ce = TestCase("t0", "3\n1 2 3\n", "6\n")
    text = build_feedback(ce, "sketch")
    assert "#input:\n3\n1 2 3\n#output:" in text
    assert text.endswith("### Complete Program <c> ###\n```c")


def test_feedback_without_counterexample():
    text = build_feedback(None)
    assert COUNTEREXAMPLE_HEADER not in text
    assert "not a valid program" in build_feedback(None, invalid=True)


@pytest.mark.parametrize("reply,code", [
    ("```c\nint main(){ return 0; }\n```", "int main(){ return 0; }\n"),
    ("Here you go:\n```\nint main(){ return 1; }\n```\n", "int main(){ return 1; }\n"),
    ("```c\nint main(){ return 2; }\n```\nExplanation:\n```c\nint x;\n```", "int main(){ return 2; }\n"),
    ("int main(){ return 3; }\n```", "int main(){ return 3; }\n"),
    ("Sure. int main(){ return 4; }", "int main(){ return 4; }\n"),
    ("#include <stdio.h>\nint main(){ return 5; }", "#include <stdio.h>\nint main(){ return 5; }\n"),
])
def test_extract_code(reply, code):
    assert extract_code(reply) == code


@pytest.mark.parametrize("reply", ["no code here", "```c\n\n```", "```"])
def test_extract_code_failures(reply):
    with pytest.raises(NoCodeFound):
        extract_code(reply)


@pytest.mark.parametrize("name", ["De-TS", "FIXME_De-TS", "Sk_De-TS", "Sk_De-TS-CE", "De-TS-CE-RI",
                                  "TS-CE-CPA", "Sk_TS", "De"])
def test_config_names_round_trip(name):
    assert PromptConfig.parse(name).name == name


def test_config_fields():
    cfg = PromptConfig.parse("FIXME_De-TS-CE-CPA")
    assert (cfg.description, cfg.test_suite, cfg.counterexample) == (True, True, True)
    assert (cfg.reference, cfg.fault_format) == ("closest", "fixme")
    assert cfg.needs_diagnosis and not cfg.as_plain().needs_diagnosis
    with pytest.raises(ValueError):
        PromptConfig.parse("De-XX")
