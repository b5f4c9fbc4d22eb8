import pytest

from conftest import MAX3, corpus_programs, read
from sketchrepair.lang import (CSyntaxError, UnsupportedConstruct, cyclomatic_complexity, parse,
                               pretty_print)
from sketchrepair.lang import ast as A


def test_buggy_conditions_sit_on_lines_4_6_8(buggy_ast):
    ifs = [s for s in buggy_ast.statements() if isinstance(s, A.If)]
    assert [buggy_ast.head_line(s.sid) for s in ifs] == [4, 6, 8]


def test_minimal_program_has_one_unit():
    ast = parse("int main(){ return 0; }")
    units = ast.units()
    assert len(units) == 1
    assert isinstance(units[0], A.Return)


@pytest.mark.parametrize("src,construct", [
    ("int main(){ int *p; }", "pointer"),
    ("int main(){ goto x; }", "goto"),
    ("struct s {int a;}; int main(){return 0;}", "struct"),
    ("int main(){ switch(1){} }", "switch"),
])
def test_out_of_subset_constructs(src, construct):
    with pytest.raises(UnsupportedConstruct) as e:
        parse(src)
    assert e.value.construct == construct
    assert e.value.line == 1


def test_syntax_error_location():
    with pytest.raises(CSyntaxError) as e:
        parse("int main(){\n  return 0\n}")
    assert e.value.line == 3
    assert "expected ';'" in e.value.message


def test_statement_ids_are_stable(buggy):
    assert dict(parse(buggy).stmt_index) == dict(parse(buggy).stmt_index)


def test_comments_are_kept_as_trivia(buggy_ast):
    assert [(c.line, c.text) for c in buggy_ast.comments][1:] == [
        (4, "//fix: f >= s"), (8, "//fix: t > f and t > s")]


@pytest.mark.parametrize("rel,src,suite", corpus_programs(), ids=lambda v: v if isinstance(v, str) else "")
def test_pretty_print_round_trip(rel, src, suite):
    ast = parse(src)
    again = parse(pretty_print(ast))
    assert again == ast
    assert parse(pretty_print(again)) == ast


def test_reference_keeps_both_ternaries(reference):
    text = pretty_print(parse(reference))
    assert text.count("?") == 2
    assert text.count(":") == 2


def test_hole_marker_prints_on_its_own_line():
    ast = parse("int main(){\n  int x;\n  @ HOLE 1 @\n  printf(\"%d\\n\", x);\n}", sketch=True)
    text = pretty_print(ast)
    assert any(line.strip() == "@ HOLE 1 @" for line in text.splitlines())
    assert parse(text, sketch=True) == ast


def test_hole_marker_needs_sketch_mode():
    with pytest.raises(CSyntaxError):
        parse("int main(){ @ HOLE 1 @ }")


def test_complexity_straight_line():
    assert cyclomatic_complexity(parse("int main(){ int x = 1; return x; }")).per_function == {"main": 1}


def test_complexity_of_max3_programs(buggy_ast, reference):
    assert cyclomatic_complexity(buggy_ast).per_function == {"main": 7}
    assert cyclomatic_complexity(parse(reference)).per_function == {"main": 3}


def test_complexity_averages_over_functions():
    src = read(MAX3.parent / "prime" / "reference.c")
    c = cyclomatic_complexity(parse(src))
    assert len(c.per_function) == 2
    assert c.average == sum(c.per_function.values()) / 2


def test_complexity_matches_lizard():
    lizard = pytest.importorskip("lizard")
    for rel, src, _ in corpus_programs():
        mine = cyclomatic_complexity(parse(src)).per_function
        theirs = {f.name: f.cyclomatic_complexity
                  for f in lizard.analyze_file.analyze_source_code("x.c", src).function_list}
        assert mine == theirs, rel


def test_every_accepted_corpus_program_runs():
    from sketchrepair.decider import run_tests
    for rel, src, suite in corpus_programs():
        verdict = run_tests(src, suite)
        assert verdict.status in ("pass", "fail"), rel
