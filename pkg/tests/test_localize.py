import pytest

import oracles
from conftest import ASSIGNMENTS, read
from sketchrepair.decider import TestSuite
from sketchrepair.lang import parse
from sketchrepair.localize import (EncodingConfig, NoFailingTests, UnrollBoundExceeded,
                                   UnsupportedForEncoding, concrete_trace, encode, localize,
                                   make_diagnosis)
from sketchrepair.maxsat import Solver, solve

STRAIGHT = 'int main(){\n  int x;\n  x = 1;\n  printf("%d\\n", x);\n  return 0;\n}\n'
CONST_PRINT = ('int main(){\n  int a;\n  scanf("%d", &a);\n  a = a * 2;\n'
               '  printf("%d\\n", 5);\n  return 0;\n}\n')
TWO_BUGS = """int main(){
  int a, b;
  scanf("%d", &a);
  b = a * 3;
  if (a > 0) printf("%d\\n", b);
  else printf("%d\\n", a - 1);
  return 0;
}
"""
LOOP_SUM = ('int main(){\n  int i, s, v;\n  s = 0;\n  for (i = 0; i < 3; i++) {\n'
            '    scanf("%d", &v);\n    s = s + v;\n  }\n  printf("%d\\n", s);\n  return 0;\n}\n')


def sid_on(ast, line, kind=None):
    hits = [u.sid for u in ast.units() if ast.head_line(u.sid) == line
            and (kind is None or type(u).__name__ == kind)]
    assert len(hits) == 1, hits
    return hits[0]


def min_sets(diagnoses):
    least = min(d.cardinality for d in diagnoses)
    return {d.statements for d in diagnoses if d.cardinality == least}


def satisfiable_without(enc, relaxed):
    """Hard clauses plus every soft clause outside ``relaxed``."""
    s = Solver()
    s.ensure_vars(enc.wcnf.num_vars)
    for c in enc.wcnf.hard:
        s.add_clause(c)
    for i, (c, _) in enumerate(enc.wcnf.soft):
        if enc.soft_to_sid[i] not in relaxed:
            s.add_clause(c)
    return s.solve()


def test_buggy_first_diagnosis_is_lines_4_and_8(buggy_ast, suite):
    first = localize(buggy_ast, suite)[0]
    assert first.lines == (4, 8)
    assert first.cardinality == 2
    assert not first.approximate


def test_buggy_minimum_diagnoses_match_oracle(buggy_ast, suite):
    got = min_sets(localize(buggy_ast, suite, max_diagnoses=100))
    assert got == set(oracles.brute_force_diagnoses(buggy_ast, suite))
    assert len(got) == 4


def test_diagnoses_are_sound_and_minimal(buggy_ast, suite):
    enc = encode(buggy_ast, suite)
    assert not satisfiable_without(enc, frozenset())
    for d in localize(buggy_ast, suite, max_diagnoses=100):
        assert satisfiable_without(enc, d.statements)
        for sid in d.statements:
            assert not satisfiable_without(enc, d.statements - {sid})


def test_diagnoses_come_in_non_decreasing_size(buggy_ast, suite):
    sizes = [d.cardinality for d in localize(buggy_ast, suite, max_diagnoses=100)]
    assert sizes == sorted(sizes)


def test_straight_line_blames_the_assignment_first():
    ast = parse(STRAIGHT)
    suite = TestSuite.from_pairs([("", "2\n")])
    diags = localize(ast, suite)
    assert diags[0].statements == {sid_on(ast, 3)}
    # the printf argument is an equally small explanation; ranking puts it second
    assert min_sets(diags) == set(oracles.brute_force_diagnoses(ast, suite))


def test_wrong_printf_constant():
    ast = parse(CONST_PRINT)
    suite = TestSuite.from_pairs([("1", "2\n"), ("3", "6\n")])
    assert [d.statements for d in localize(ast, suite)] == [{sid_on(ast, 5)}]
    assert oracles.brute_force_diagnoses(ast, suite) == [frozenset({sid_on(ast, 5)})]


def test_independent_bugs_share_one_diagnosis():
    ast = parse(TWO_BUGS)
    suite = TestSuite.from_pairs([("2", "4\n"), ("-2", "-1\n"), ("0", "1\n")])
    diags = localize(ast, suite, max_diagnoses=100)
    assert min(d.cardinality for d in diags) == 2
    both = frozenset({sid_on(ast, 4), sid_on(ast, 6)})
    assert both in min_sets(diags)
    assert min_sets(diags) == set(oracles.brute_force_diagnoses(ast, suite))


def test_passing_program_has_nothing_to_localize(repaired, suite):
    with pytest.raises(NoFailingTests):
        localize(parse(repaired), suite)


def test_passing_program_encodes_with_cost_zero(repaired, suite):
    enc = encode(parse(repaired), suite, EncodingConfig(failing_tests=tuple(t.id for t in suite)))
    assert solve(enc.wcnf).cost == 0
    # with no failing tests selected there is nothing to constrain
    assert solve(encode(parse(repaired), suite).wcnf).cost == 0


def test_unroll_bound_too_small():
    ast = parse(LOOP_SUM)
    suite = TestSuite.from_pairs([("1 2 3", "7\n")])
    with pytest.raises(UnrollBoundExceeded):
        encode(ast, suite, EncodingConfig(unroll_bound=1))
    assert localize(ast, suite)[0].cardinality == 1


def test_non_terminating_failure_is_reported():
    src = 'int main(){ int a; scanf("%d", &a); while (a > 0) { a = a * 1; } printf("0\\n"); return 0; }'
    with pytest.raises(UnrollBoundExceeded):
        localize(parse(src), TestSuite.from_pairs([("1", "0\n")]))


def test_encoding_config_validation():
    with pytest.raises(ValueError):
        EncodingConfig(int_bit_width=12)
    with pytest.raises(ValueError):
        EncodingConfig(unroll_bound=0)


def test_float_programs_fall_back_to_spectrum():
    d = ASSIGNMENTS / "average"
    ast = parse(read(d / "submissions" / "int_division.c"))
    suite = TestSuite.load(d / "tests")
    with pytest.raises(UnsupportedForEncoding):
        encode(ast, suite)
    diags = localize(ast, suite)
    assert diags and all(d.approximate and d.cardinality == 1 for d in diags)
    assert [d.score for d in diags] == sorted((d.score for d in diags), reverse=True)


def test_declarations_are_not_diagnosable(buggy_ast):
    decl = next(s.sid for s in buggy_ast.statements() if type(s).__name__ == "Decl")
    with pytest.raises(ValueError):
        make_diagnosis(buggy_ast, {decl})


def test_trace_of_buggy_program(buggy_ast):
    tr = concrete_trace(buggy_ast, "6 2 1")
    conds = [buggy_ast.head_line(s) for s in tr.statements if type(buggy_ast.statement(s)).__name__ == "If"]
    assert conds == [4, 6, 8]
    assert tr.loop_counts == {}
    assert tr.stdout == "1\n"


def test_trace_of_empty_main():
    tr = concrete_trace(parse("int main(){ }"), "")
    assert tr.statements == ()


def test_trace_counts_loop_iterations():
    ast = parse(LOOP_SUM)
    tr = concrete_trace(ast, "1 2 3")
    body = sid_on(ast, 6)
    assert tr.statements.count(body) == 3
    assert list(tr.loop_counts.values()) == [(3,)]
    assert tr.stdout == "6\n"


FIXTURES = oracles.fl_fixtures(40)


@pytest.mark.parametrize("k", range(len(FIXTURES)))
def test_minimum_diagnoses_match_subset_enumeration(k):
    src, suite = FIXTURES[k]
    ast = parse(src)
    assert len(ast.units()) <= 12
    expected = set(oracles.brute_force_diagnoses(ast, suite))
    assert expected
    assert min_sets(localize(ast, suite, max_diagnoses=1000)) == expected
