import csv
import json
import shutil
import time

import pytest

import synth
from conftest import ASSIGNMENTS, MAX3
from sketchrepair.bench import (DEFAULT_CUTPOINTS, EmptyStore, ReferenceFailsTests, ResultsStore,
                                build_report, ingest, load_assignment, quartile, render, report,
                                run_matrix, write_scatter)
from sketchrepair.bench.report import cutpoint_header, recomputed_cutpoints
from sketchrepair.cegis import Budgets
from sketchrepair.decider import LayoutError
from sketchrepair.gen import Backend, ScriptedBackend
from sketchrepair.prompts import PromptConfig


@pytest.fixture
def tree(tmp_path, buggy):
    """A copy of the max3 assignment with three identical submissions."""
    root = tmp_path / "bench"
    shutil.copytree(MAX3, root / "max3")
    for name in ("p1", "p2", "p3"):
        (root / "max3" / "submissions" / f"{name}.c").write_text(buggy)
    (root / "max3" / "submissions" / "buggy.c").unlink()
    return root


# -- ingest -------------------------------------------------------------------------


def test_max3_bundle():
    b = load_assignment(MAX3)
    assert b.id == "max3"
    assert len(b.assignment.suite) == 3
    assert [s.id for s in b.submissions] == ["max3/buggy"]
    assert b.submissions[0].complexity == 7.0
    assert b.assignment.correct[0][0] == "repaired"


def test_whole_fixture_tree_ingests():
    rep = ingest(ASSIGNMENTS)
    assert rep.skipped == []
    assert len(rep.bundles) == 10
    assert sum(len(b.submissions) for b in rep.bundles) >= 15


def test_already_correct_submission_is_excluded():
    b = load_assignment(ASSIGNMENTS / "sum_to_n")
    assert ("sum_to_n/no_newline_ok", "already-correct") in b.excluded
    assert "sum_to_n/no_newline_ok" not in [s.id for s in b.submissions]


def test_unsupported_submission_is_excluded(tree):
    (tree / "max3" / "submissions" / "ptr.c").write_text("int main(){ int *p; return 0; }")
    b = load_assignment(tree / "max3")
    assert ("max3/ptr", "unsupported") in b.excluded


def test_reference_failing_a_test(tree):
    (tree / "max3" / "tests" / "t1.out").write_text("7\n")
    with pytest.raises(ReferenceFailsTests) as e:
        load_assignment(tree / "max3")
    assert e.value.failing == ("t1",)
    rep = ingest(tree)
    assert rep.bundles == [] and len(rep.skipped) == 1
    with pytest.raises(ReferenceFailsTests):
        ingest(tree, strict=True)


@pytest.mark.parametrize("missing", ["description.txt", "reference.c", "submissions", "tests"])
def test_layout_errors(tree, missing):
    target = tree / "max3" / missing
    shutil.rmtree(target) if target.is_dir() else target.unlink()
    with pytest.raises(LayoutError):
        load_assignment(tree / "max3")


# -- store --------------------------------------------------------------------------


def test_store_appends_and_survives_torn_lines(tmp_path):
    s = ResultsStore(tmp_path / "r.jsonl")
    assert s.records() == []
    s.append(synth.rec("a", "B", "C", synth.unfixed()))
    with open(s.path, "a") as fh:
        fh.write('{"run_id": "r1", "job": ')
    s.append(synth.rec("b", "B", "C", synth.unfixed()))
    assert [r["job"]["submission"] for r in s.records()] == ["a", "b"]
    assert len(s) == 2


# -- matrix -------------------------------------------------------------------------


def small_bundle(tree, keep=1):
    b = ingest(tree).bundles[0]
    return type(b)(b.assignment, b.submissions[:keep], b.excluded)


def test_matrix_cardinality_and_resume(tree, tmp_path, repaired):
    bundle = small_bundle(tree)
    configs = [PromptConfig.parse("De-TS"), PromptConfig.parse("Sk_De-TS")]
    backend = ScriptedBackend([repaired], model_name="fix")
    store, run_id = run_matrix([bundle], configs, [backend], tmp_path / "r.jsonl", seed=5)
    recs = store.records()
    assert len(recs) == 2
    assert {r["job"]["config"] for r in recs} == {"De-TS", "Sk_De-TS"}
    assert all(r["result"]["status"] == "fixed" and r["run_id"] == run_id for r in recs)
    assert all(r["meta"]["seed"] == 5 and r["meta"]["complexity"] == 7.0 for r in recs)
    # same run id again: nothing new
    run_matrix([bundle], configs, [backend], store, run_id=run_id)
    assert len(store.records()) == 2
    # a fresh run appends its own records
    _, other = run_matrix([bundle], configs, [backend], store)
    assert other != run_id and len(store.records()) == 4


def test_matrix_resumes_a_partial_run(tree, tmp_path, repaired):
    bundle = small_bundle(tree, keep=3)
    cfgs = [PromptConfig.parse("De-TS")]
    backend = ScriptedBackend([repaired], model_name="fix")
    store = ResultsStore(tmp_path / "r.jsonl")
    store.append(synth.rec("max3/p1", "scripted:fix", "De-TS", synth.unfixed(), run_id="half"))
    run_matrix([bundle], cfgs, [backend], store, run_id="half")
    keys = [(r["job"]["submission"], r["run_id"]) for r in store.records()]
    assert sorted(keys) == [("max3/p1", "half"), ("max3/p2", "half"), ("max3/p3", "half")]


class Exploding(Backend):
    kind = "broken"
    model_name = "x"

    def generate(self, conversation, job=None):
        raise RuntimeError("boom")


def test_job_errors_are_recorded(tree, tmp_path, repaired):
    bundle = small_bundle(tree)
    store, _ = run_matrix([bundle], [PromptConfig.parse("De-TS")],
                          [Exploding(), ScriptedBackend([repaired], model_name="ok")],
                          tmp_path / "r.jsonl")
    by_backend = {r["job"]["backend"]: r["result"] for r in store.records()}
    assert by_backend["broken:x"]["status"] == "error"
    assert "boom" in by_backend["broken:x"]["detail"]
    assert by_backend["scripted:ok"]["status"] == "fixed"


def test_backend_names_must_differ(tree, tmp_path, repaired):
    with pytest.raises(ValueError):
        run_matrix([small_bundle(tree)], [PromptConfig.parse("De-TS")],
                   [ScriptedBackend([repaired]), ScriptedBackend([buggy_text(tree)])],
                   tmp_path / "r.jsonl")


def buggy_text(tree):
    return (tree / "max3" / "submissions" / "p1.c").read_text()


def test_parallel_jobs_overlap(tree, tmp_path, repaired):
    bundle = small_bundle(tree, keep=3)
    backend = ScriptedBackend([repaired], model_name="slow", delay=0.6)
    cfgs = [PromptConfig.parse("De-TS")]
    t0 = time.monotonic()
    run_matrix([bundle], cfgs, [backend], tmp_path / "seq.jsonl", parallelism=1)
    sequential = time.monotonic() - t0
    t0 = time.monotonic()
    store, _ = run_matrix([bundle], cfgs, [backend], tmp_path / "par.jsonl", parallelism=3)
    parallel = time.monotonic() - t0
    single = max(r["result"]["elapsed"] for r in store.records())
    assert len(store.records()) == 3
    assert sequential >= 3 * 0.6
    assert parallel < 2 * single
    assert parallel < sequential / 2


# -- report -------------------------------------------------------------------------


@pytest.fixture
def synthetic(tmp_path):
    return synth.build(tmp_path / "synthetic.jsonl")


def test_report_counts(synthetic):
    rep = build_report(synthetic.records())
    assert rep.backends == list(synth.BACKENDS) and rep.configs == list(synth.CONFIGS)
    assert rep.counts == synth.EXPECTED_COUNTS


def test_report_distance_sums(synthetic):
    rep = build_report(synthetic.records())
    assert rep.distance == pytest.approx(synth.EXPECTED_DISTANCE, abs=1e-9)


def test_report_iterations(synthetic):
    assert build_report(synthetic.records()).iterations == synth.EXPECTED_ITERATIONS


def test_report_quartiles(synthetic):
    rep = build_report(synthetic.records())
    assert rep.quartile_rows == synth.EXPECTED_QUARTILES
    assert rep.cutpoints == DEFAULT_CUTPOINTS
    assert rep.header() == ("complexity quartiles: Q1 <= 2.5 < Q2 <= 3.5 < Q3 <= 7.0 < Q4 "
                            "(a boundary value belongs to the lower quartile)")


def test_portfolio_dominates_its_cells(synthetic):
    counts = build_report(synthetic.records()).counts
    for b in synth.BACKENDS:
        assert counts[(b, "Portfolio")][0] >= max(counts[(b, c)][0] for c in synth.CONFIGS)
    for c in synth.CONFIGS:
        assert counts[("Portfolio", c)][0] >= max(counts[(b, c)][0] for b in synth.BACKENDS)


def test_percentages_come_from_counts(synthetic):
    d = json.loads(report(synthetic, "json"))
    assert d["fixed"]["A"]["X"] == {"fixed": 2, "total": 4, "percent": 50.0}
    assert d["fixed"]["Portfolio"]["Portfolio"]["percent"] == 75.0


def test_report_bytes_are_deterministic(synthetic):
    for fmt in ("text", "csv", "json"):
        assert report(synthetic, fmt) == report(synthetic, fmt)


def test_text_table(synthetic):
    text = report(synthetic, "text")
    assert text.splitlines()[0].startswith("complexity quartiles: Q1 <= 2.5")
    assert "3/4 (75.00%)" in text
    assert "1.50" in text


def test_csv_cells(synthetic):
    rows = list(csv.reader(report(synthetic, "csv").splitlines()[1:]))
    cells = {(t, r, c): v for t, r, c, v in rows[1:]}
    assert cells[("fixed", "Portfolio", "X")] == "3"
    assert cells[("distance_score_sum", "A", "X")] == "1.500000"
    assert cells[("iterations_max", "all", "all")] == "7"


def test_run_id_filter(synthetic):
    only_old = build_report(synthetic.records(), run_id="r0")
    assert only_old.counts[("A", "X")] == (1, 1)
    with pytest.raises(EmptyStore):
        build_report(synthetic.records(), run_id="nope")


def test_empty_store(tmp_path):
    with pytest.raises(EmptyStore):
        report(tmp_path / "missing.jsonl")


def test_portfolio_union_of_two_backends():
    recs = [synth.rec(s, b, "X", synth.fixed(1, 1, 2) if s in fixed else synth.unfixed())
            for b, fixed in (("A", {"p1", "p2"}), ("B", {"p2", "p3"})) for s in ("p1", "p2", "p3")]
    rep = build_report(recs)
    assert rep.counts[("Portfolio", "X")] == (3, 3)


def test_iteration_statistics_example():
    recs = [synth.rec(f"p{i}", "A", "X", synth.fixed(n, 1, 2)) for i, n in enumerate((1, 1, 7))]
    assert build_report(recs).iterations[("A", "X")] == (1, 7, 3.0)


def test_single_record_distance_cell():
    rep = build_report([synth.rec("p", "A", "X", synth.fixed(1, 2, 8))])
    assert rep.distance[("A", "X")] == pytest.approx(0.75, abs=1e-9)


@pytest.mark.parametrize("value,bucket", [(1.0, "Q1"), (2.5, "Q1"), (2.51, "Q2"), (3.5, "Q2"),
                                          (3.6, "Q3"), (7.0, "Q3"), (7.01, "Q4"), (30, "Q4")])
def test_quartile_boundaries(value, bucket):
    assert quartile(value) == bucket


def test_recomputed_quartiles(synthetic):
    values = list(synth.COMPLEXITY.values())
    cuts = recomputed_cutpoints(values)
    assert cuts == (3.25, 5.25, 7.125)
    rep = build_report(synthetic.records(), recompute_quartiles=True)
    assert rep.cutpoints == cuts
    assert rep.header() == cutpoint_header(cuts)
    assert sum(rep.quartile_sizes.values()) == 4


def test_baseline_rows(synthetic, tmp_path):
    from sketchrepair.bench import load_baselines
    path = tmp_path / "baselines.csv"
    path.write_text("submission,tool,fixed\ns/p1,Clara,1\ns/p4,Clara,true\ns/p2,Verifix,0\n")
    rep = build_report(synthetic.records(), baselines=load_baselines(path))
    assert rep.quartile_rows["Clara"] == {"Q1": (1, 1), "Q2": (0, 1), "Q3": (0, 1), "Q4": (1, 1)}
    assert rep.quartile_rows["Verifix"]["Q2"] == (0, 1)
    assert "Clara" in render(rep, "text")


def test_scatter_export(synthetic, tmp_path):
    rep = build_report(synthetic.records())
    write_scatter(rep, tmp_path / "scatter.csv")
    rows = list(csv.DictReader((tmp_path / "scatter.csv").open()))
    assert len(rows) == sum(len(v) for v in synth.FIXES.values())
    row = next(r for r in rows if (r["submission"], r["backend"], r["config"]) == ("s/p1", "A", "X"))
    assert (row["ted_fix_to_orig"], row["ted_ref_to_orig"], row["distance_score"]) == ("2", "8", "0.75")


def test_end_to_end_matrix_then_report(tree, tmp_path, repaired):
    bundle = small_bundle(tree, keep=2)
    store, _ = run_matrix([bundle], [PromptConfig.parse("Sk_De-TS")],
                          [ScriptedBackend([repaired], model_name="g")], tmp_path / "r.jsonl",
                          budgets=Budgets(30, 3))
    rep = build_report(store.records())
    assert rep.counts[("scripted:g", "Sk_De-TS")] == (2, 2)
    assert rep.quartile_rows["Portfolio"]["Q3"] == (2, 2)
