import argparse
import json
import logging
import sys
from pathlib import Path

from .cegis import Assignment, Budgets, NothingToRepair, RepairJob, repair
from .decider import Limits, TestSuite, run_tests, run_tests_external
from .decider.runner import DEFAULT_COMPILER
from .gen import GenParams, make_backend
from .lang import parse
from .localize import EncodingConfig, localize
from .maxsat import from_dimacs_wcnf, solve, solve_external, to_dimacs_wcnf
from .prompts import AssignmentInfo, PromptConfig, build_prompt

log = logging.getLogger("sketchrepair")


def _read_assignment(directory):
    d = Path(directory)

    def opt(name):
        p = d / name
        return p.read_text() if p.is_file() else None

    correct = tuple((p.stem, p.read_text()) for p in sorted((d / "correct").glob("*.c")))
    return Assignment(d.name, opt("description.txt"), TestSuite.load(d / "tests"),
                      opt("reference.c"), correct)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _backend(args):
    params = GenParams(args.temperature, args.max_new_tokens, args.seed)
    return make_backend(args.backend, args.model, params)


def cmd_repair(args):
    assignment = _read_assignment(args.assignment)
    job = RepairJob(parse(Path(args.program).read_text()), assignment,
                    PromptConfig.parse(args.config), _backend(args),
                    Budgets(args.budget_secs, args.max_iters), tag=args.tag)
    try:
        result = repair(job)
    except NothingToRepair as e:
        log.error("%s", e)
        return 2
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    return 0 if result.fixed else 1


def cmd_localize(args):
    ast = parse(Path(args.program).read_text())
    suite = TestSuite.load(args.tests)
    cfg = EncodingConfig(args.unroll, args.width)
    if args.dump_wcnf:
        from .localize import encode
        enc = encode(ast, suite, cfg)
        names = [f"soft {i}: statement {sid} line {ast.head_line(sid)}"
                 for i, sid in sorted(enc.soft_to_sid.items())]
        Path(args.dump_wcnf).write_text(to_dimacs_wcnf(enc.wcnf, comments=names))
    diags = localize(ast, suite, cfg, max_diagnoses=args.max, budget=args.budget_secs)
    _emit(json.dumps([d.to_dict() for d in diags], indent=2) + "\n", args.out)
    return 0


def cmd_prompt(args):
    a = _read_assignment(args.assignment)
    cfg = PromptConfig.parse(args.config)
    ast = parse(Path(args.program).read_text())
    diag = localize(ast, a.suite)[0] if cfg.needs_diagnosis else None
    closest = None
    if cfg.reference == "closest":
        from .tree_metrics import closest_correct
        closest = closest_correct(ast, [(i, parse(s)) for i, s in a.correct]).program.source
    info = AssignmentInfo(a.description, a.suite, a.reference, closest)
    _emit(build_prompt(cfg, info, ast, diag).render(), args.out)
    return 0


def cmd_test(args):
    suite = TestSuite.load(args.tests)
    source = Path(args.program).read_text()
    limits = Limits(time_per_test=args.time_per_test)
    if args.compiler:
        verdict = run_tests_external(source, suite, limits, args.compiler)
    else:
        verdict = run_tests(source, suite, limits)
    _emit(json.dumps(verdict.to_dict(), indent=2) + "\n", args.out)
    return 0 if verdict.passed else 1


def cmd_maxsat(args):
    f = from_dimacs_wcnf(Path(args.wcnf).read_text())
    sol = solve_external(f, args.solver, args.budget_secs) if args.solver else solve(f, args.budget_secs)
    print(f"o {sol.cost}")
    print("v " + " ".join(str(l) for l in sol.literals()))
    return 0


def cmd_bench_run(args):
    from .bench import ingest, run_matrix
    rep = ingest(args.root)
    for path, why in rep.skipped:
        log.warning("skipped %s: %s", path, why)
    configs = [PromptConfig.parse(c) for c in args.configs.split(",") if c.strip()]
    params = GenParams(args.temperature, args.max_new_tokens, args.seed)
    backends = [make_backend(spec, args.model, params) for spec in args.backend]
    _, run_id = run_matrix(rep.bundles, configs, backends, args.store, args.jobs, args.run_id,
                           Budgets(args.budget_secs, args.max_iters), seed=args.seed)
    print(run_id)
    return 0


def cmd_bench_report(args):
    from .bench import ResultsStore, build_report, load_baselines, render, write_scatter
    baselines = load_baselines(args.baseline) if args.baseline else None
    rep = build_report(ResultsStore(args.store).records(), run_id=args.run_id,
                       recompute_quartiles=args.recompute_quartiles, baselines=baselines)
    if args.scatter:
        write_scatter(rep, args.scatter)
    _emit(render(rep, args.format), args.out)
    return 0


def _gen_options(p, several=False):
    p.add_argument("--backend", required=True, action="append" if several else "store",
                   help="scripted:PATH, replay:CASSETTE, live:MODEL or record:MODEL:CASSETTE"
                   + (" (repeatable)" if several else ""))
    p.add_argument("--model", default=None, help="model name (overrides the backend spec)")
    p.add_argument("--temperature", type=float, default=0.2)
    p.add_argument("--max-new-tokens", type=int, default=1024)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget-secs", type=float, default=90.0)
    p.add_argument("--max-iters", type=int, default=10)


def build_parser():
    ap = argparse.ArgumentParser(prog="sketchrepair",
                                 description="Repair small C programs against their test suites.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repair", help="repair one program")
    p.add_argument("--program", required=True)
    p.add_argument("--assignment", required=True, help="assignment directory")
    p.add_argument("--config", default="Sk_De-TS-CE")
    p.add_argument("--tag", default=None, help="job tag for per-job scripted replies")
    p.add_argument("--out")
    _gen_options(p)
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("localize", help="minimal diagnoses of a failing program")
    p.add_argument("--program", required=True)
    p.add_argument("--tests", required=True, help="directory of tN.in/tN.out")
    p.add_argument("--max", type=int, default=10)
    p.add_argument("--unroll", type=int, default=None)
    p.add_argument("--width", type=int, default=16)
    p.add_argument("--budget-secs", type=float, default=None)
    p.add_argument("--dump-wcnf", metavar="PATH")
    p.add_argument("--out")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("prompt", help="render the opening prompt for a configuration")
    p.add_argument("--program", required=True)
    p.add_argument("--assignment", required=True)
    p.add_argument("--config", default="Sk_De-TS-CE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_prompt)

    p = sub.add_parser("test", help="run a program on a test suite")
    p.add_argument("--program", required=True)
    p.add_argument("--tests", required=True)
    p.add_argument("--time-per-test", type=float, default=2.0)
    p.add_argument("--compiler", nargs="?", const=DEFAULT_COMPILER, default=None,
                   help="compile and run natively instead of interpreting")
    p.add_argument("--out")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("maxsat", help="solve a WCNF file")
    p.add_argument("wcnf")
    p.add_argument("--solver", help="external solver command; the file path is appended")
    p.add_argument("--budget-secs", type=float, default=None)
    p.set_defaults(func=cmd_maxsat)

    bench = sub.add_parser("bench", help="benchmark runs and reports")
    bsub = bench.add_subparsers(dest="bench_command", required=True)
    p = bsub.add_parser("run")
    p.add_argument("--root", required=True)
    p.add_argument("--configs", required=True, help="comma-separated configuration names")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--store", required=True)
    p.add_argument("--run-id", default=None, help="resume this run")
    _gen_options(p, several=True)
    p.set_defaults(func=cmd_bench_run)
    p = bsub.add_parser("report")
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--run-id", default=None)
    p.add_argument("--recompute-quartiles", action="store_true")
    p.add_argument("--baseline", help="CSV of submission,tool,fixed")
    p.add_argument("--scatter", help="write per-fix TED pairs to this CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench_report)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
