import pytest
from hypothesis import given, strategies as st

from conftest import HAVE_GCC, corpus_programs
from sketchrepair.decider import (CompileError, LayoutError, Limits, NoFailure, TestCase,
                                  TestSuite, Verdict, normalize_output, outputs_match, run_tests,
                                  run_tests_external, select_counterexample)

needs_gcc = pytest.mark.skipif(not HAVE_GCC, reason="no external C compiler")

INFINITE = "int main(){ int x = 0; while (1) { x = x + 1; } return 0; }"
DIV_ZERO = 'int main(){ int a, b; scanf("%d %d", &a, &b); printf("%d\\n", a / b); return 0; }'


def test_suite_round_trips_through_disk(tmp_path, suite):
    suite.save(tmp_path / "t")
    assert TestSuite.load(tmp_path / "t") == suite
    assert [t.id for t in suite] == ["t0", "t1", "t2"]
    assert suite["t1"].input.split() == ["6", "2", "1"]


def test_suite_orders_numerically(tmp_path):
    d = tmp_path / "tests"
    d.mkdir()
    for n in (10, 2, 1):
        (d / f"t{n}.in").write_text(str(n))
        (d / f"t{n}.out").write_text(str(n))
    assert [t.id for t in TestSuite.load(d)] == ["t1", "t2", "t10"]


def test_suite_layout_errors(tmp_path):
    with pytest.raises(LayoutError):
        TestSuite.load(tmp_path / "missing")
    (tmp_path / "t0.in").write_text("1")
    with pytest.raises(LayoutError):
        TestSuite.load(tmp_path)


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError):
        TestSuite((TestCase("t0", "", ""), TestCase("t0", "", "")))


def test_repaired_program_passes(repaired, suite):
    assert run_tests(repaired, suite).passed


def test_buggy_program_fails_t0_with_no_output(buggy, suite):
    v = run_tests(buggy, suite)
    assert v.status == "fail"
    assert v.failing_ids == ["t0", "t1"]
    assert v.failing[0].actual == ""
    assert v.failing[1].actual == "1\n"
    assert select_counterexample(v, suite).id == "t0"


def test_counterexample_is_first_failure_in_suite_order(suite):
    only_t2 = 'int main(){ int a,b,c; scanf("%d %d %d",&a,&b,&c); if (a == -1) printf("0\\n"); else printf("%d\\n", a > b ? (a > c ? a : c) : (b > c ? b : c)); return 0; }'
    v = run_tests(only_t2, suite)
    assert v.failing_ids == ["t2"]
    assert select_counterexample(v, suite).id == "t2"


def test_passing_verdict_has_no_counterexample(repaired, suite):
    with pytest.raises(NoFailure):
        select_counterexample(run_tests(repaired, suite), suite)


def test_infinite_loop_times_out():
    suite = TestSuite.from_pairs([("", "")])
    v = run_tests(INFINITE, suite, Limits(max_steps=10_000))
    assert v.status == "timeout"


def test_division_by_zero_crashes():
    suite = TestSuite.from_pairs([("4 2", "2\n"), ("1 0", "0\n")])
    v = run_tests(DIV_ZERO, suite)
    assert v.status == "crash"
    assert v.failing_ids == ["t1"]


def test_timeout_outranks_other_failures():
    src = 'int main(){ int a; scanf("%d", &a); while (a) { } printf("x\\n"); return 0; }'
    v = run_tests(src, TestSuite.from_pairs([("0", "y"), ("1", "x")]), Limits(max_steps=5000))
    assert v.status == "timeout"
    assert v.failing_ids == ["t0", "t1"]


def test_verdict_invariant():
    with pytest.raises(ValueError):
        Verdict("pass", failing=(object(),))
    with pytest.raises(ValueError):
        Verdict("fail")


def test_determinism(buggy, suite):
    assert run_tests(buggy, suite).to_dict() == run_tests(buggy, suite).to_dict()


@pytest.mark.parametrize("actual,expected,same", [
    ("3\n", "3", True),
    ("3  \n\n\n", "3", True),
    ("a \nb\t\n", "a\nb", True),
    (" 3", "3", False),
    ("3\n\n4", "3\n4", False),
    ("", "3", False),
])
def test_output_comparison(actual, expected, same):
    assert outputs_match(actual, expected) is same


@given(st.text(alphabet=" \t\nab1\r"))
def test_normalization_is_idempotent(text):
    once = normalize_output(text)
    assert normalize_output(once) == once


@given(st.lists(st.text(alphabet="ab1 ", max_size=6), max_size=6))
def test_normalization_keeps_line_order(lines):
    norm = normalize_output("\n".join(lines))
    kept = [l.rstrip() for l in lines]
    while kept and kept[-1] == "":
        kept.pop()
    assert norm.split("\n") == (kept or [""])


@needs_gcc
def test_external_reference_passes(reference, suite):
    assert run_tests_external(reference, suite).passed
    assert run_tests(reference, suite).passed


@needs_gcc
def test_external_compile_error(suite):
    with pytest.raises(CompileError) as e:
        run_tests_external("int main( { return 0; }", suite)
    assert e.value.log


@needs_gcc
def test_external_infinite_loop_times_out():
    v = run_tests_external(INFINITE, TestSuite.from_pairs([("", "")]), Limits(time_per_test=0.3))
    assert v.status == "timeout"


@needs_gcc
@pytest.mark.parametrize("rel,src,suite", corpus_programs(), ids=lambda v: v if isinstance(v, str) else "")
def test_interpreter_agrees_with_compiler(rel, src, suite):
    mine = run_tests(src, suite)
    theirs = run_tests_external(src, suite)
    assert mine.status == theirs.status
    assert [(o.test_id, o.status, normalize_output(o.actual)) for o in mine.outcomes] == \
        [(o.test_id, o.status, normalize_output(o.actual)) for o in theirs.outcomes]
