"""Aggregate tables over a results store.

The report is a pure function of the records: same store, same bytes out.
"""

import csv
import io
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .store import EmptyStore, ResultsStore, record_key

DEFAULT_CUTPOINTS = (2.5, 3.5, 7.0)
QUARTILES = ("Q1", "Q2", "Q3", "Q4")
PORTFOLIO = "Portfolio"


def latest(records, run_id=None):
    """One record per (submission, config, backend): the last one in file order."""
    chosen = {}
    for r in records:
        if run_id is not None and r.get("run_id") != run_id:
            continue
        chosen[record_key(r)] = r
    return list(chosen.values())


def quartile(value, cutpoints=DEFAULT_CUTPOINTS):
    """Bucket name; a value equal to a cutpoint belongs to the lower bucket."""
    for name, cut in zip(QUARTILES, cutpoints):
        if value <= cut:
            return name
    return QUARTILES[len(cutpoints)]


def recomputed_cutpoints(values):
    values = sorted(values)
    if len(values) < 2:
        v = values[0] if values else 0.0
        return (v, v, v)
    return tuple(statistics.quantiles(values, n=4, method="inclusive"))


def cutpoint_header(cutpoints):
    a, b, c = (float(x) for x in cutpoints)
    return (f"complexity quartiles: Q1 <= {a} < Q2 <= {b} < Q3 <= {c} < Q4 "
            "(a boundary value belongs to the lower quartile)")


def _order(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return list(seen)


def _pct(n, d):
    return round(100.0 * n / d, 2) if d else 0.0


def load_baselines(path):
    """CSV with columns ``submission,tool,fixed``; fixed is 1/0 or true/false."""
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            fixed = row["fixed"].strip().lower() in ("1", "true", "yes", "fixed")
            out.setdefault(row["tool"].strip(), {})[row["submission"].strip()] = fixed
    return out


@dataclass
class Report:
    backends: list
    configs: list
    submissions: list
    counts: dict  # (backend, config) -> (fixed, total); PORTFOLIO on either axis
    distance: dict  # (backend, config) -> sum of distance scores
    iterations: dict  # (backend, config) or ("all", "all") -> (min, max, mean) or None
    quartile_rows: dict  # tool -> {quartile: (fixed, total)}
    cutpoints: tuple
    quartile_sizes: dict
    scatter: list = field(default_factory=list)

    def header(self):
        return cutpoint_header(self.cutpoints)

    def as_dict(self):
        def cell(k):
            f, t = self.counts[k]
            return {"fixed": f, "total": t, "percent": _pct(f, t)}

        return {
            "header": self.header(),
            "cutpoints": list(self.cutpoints),
            "backends": self.backends,
            "configs": self.configs,
            "fixed": {b: {c: cell((b, c)) for c in self.configs + [PORTFOLIO]}
                      for b in self.backends + [PORTFOLIO]},
            "distance_score_sum": {b: {c: self.distance[(b, c)] for c in self.configs}
                                   for b in self.backends},
            "iterations": {f"{b}|{c}": (None if v is None else
                                        {"min": v[0], "max": v[1], "mean": v[2]})
                           for (b, c), v in sorted(self.iterations.items())},
            "quartiles": {tool: {q: {"fixed": f, "total": t} for q, (f, t) in row.items()}
                          for tool, row in self.quartile_rows.items()},
        }


def _stats(values):
    if not values:
        return None
    return (min(values), max(values), round(statistics.fmean(values), 6))


def build_report(records, run_id=None, cutpoints=DEFAULT_CUTPOINTS, recompute_quartiles=False,
                 baselines=None):
    recs = latest(records, run_id)
    if not recs:
        raise EmptyStore("no records to report on")
    backends = _order(r["job"]["backend"] for r in recs)
    configs = _order(r["job"]["config"] for r in recs)
    submissions = sorted({r["job"]["submission"] for r in recs})
    complexity = {}
    for r in recs:
        c = (r.get("meta") or {}).get("complexity")
        if c is not None:
            complexity[r["job"]["submission"]] = c

    fixed_by = {}  # (backend, config) -> set of submissions
    seen_by = {}
    iters = {}
    dist = {}
    scatter = []
    for r in recs:
        j, res = r["job"], r["result"]
        key = (j["backend"], j["config"])
        seen_by.setdefault(key, set()).add(j["submission"])
        if res.get("status") != "fixed":
            continue
        fixed_by.setdefault(key, set()).add(j["submission"])
        iters.setdefault(key, []).append(len(res.get("iterations") or ()))
        ds = res.get("distance_score")
        if ds is not None:
            dist[key] = dist.get(key, 0.0) + ds
        scatter.append((j["submission"], j["backend"], j["config"], res.get("ted_fix_to_orig"),
                        res.get("ted_ref_to_orig"), ds))

    def union(keys, table):
        out = set()
        for k in keys:
            out |= table.get(k, set())
        return out

    counts = {}
    for b in backends + [PORTFOLIO]:
        for c in configs + [PORTFOLIO]:
            keys = [(bb, cc) for bb in (backends if b == PORTFOLIO else [b])
                    for cc in (configs if c == PORTFOLIO else [c])]
            counts[(b, c)] = (len(union(keys, fixed_by)), len(union(keys, seen_by)))

    distance = {(b, c): round(dist.get((b, c), 0.0), 9) for b in backends for c in configs}
    iterations = {k: _stats(iters.get(k, [])) for k in ((b, c) for b in backends for c in configs)}
    iterations[("all", "all")] = _stats([n for v in iters.values() for n in v])

    if recompute_quartiles:
        cutpoints = recomputed_cutpoints(complexity[s] for s in submissions if s in complexity)
    buckets = {s: quartile(complexity[s], cutpoints) for s in submissions if s in complexity}
    sizes = {q: sum(1 for s in buckets.values() if s == q) for q in QUARTILES}

    def qrow(fixed_set):
        return {q: (sum(1 for s, b in buckets.items() if b == q and s in fixed_set), sizes[q])
                for q in QUARTILES}

    rows = {}
    for b in backends:
        rows[b] = qrow(union([(b, c) for c in configs], fixed_by))
    rows[PORTFOLIO] = qrow(union(list(fixed_by), fixed_by))
    for tool, verdicts in sorted((baselines or {}).items()):
        rows[tool] = qrow({s for s, ok in verdicts.items() if ok})

    scatter.sort(key=lambda row: tuple("" if v is None else str(v) for v in row))
    return Report(backends, configs, submissions, counts, distance, iterations, rows,
                  tuple(cutpoints), sizes, scatter)


def _table(headers, rows):
    cols = [headers] + rows
    widths = [max(len(str(r[i])) for r in cols) for i in range(len(headers))]
    fmt = lambda r: "  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([fmt(headers), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows])


def render_text(rep):
    parts = [rep.header(), ""]
    cols = rep.configs + [PORTFOLIO]
    rows = []
    for b in rep.backends + [PORTFOLIO]:
        cells = []
        for c in cols:
            f, t = rep.counts[(b, c)]
            cells.append(f"{f}/{t} ({_pct(f, t):.2f}%)")
        rows.append([b] + cells)
    parts += ["fixed programs", _table(["backend"] + cols, rows), ""]
    rows = [[b] + [f"{rep.distance[(b, c)]:.2f}" for c in rep.configs] for b in rep.backends]
    parts += ["cumulative distance score", _table(["backend"] + rep.configs, rows), ""]
    rows = []
    for (b, c), v in sorted(rep.iterations.items(), key=lambda kv: kv[0] == ("all", "all")):
        rows.append([b, c] + (["-", "-", "-"] if v is None else [v[0], v[1], f"{v[2]:.2f}"]))
    parts += ["iterations to fix", _table(["backend", "config", "min", "max", "mean"], rows), ""]
    rows = [[tool] + [f"{f}/{t}" for f, t in (row[q] for q in QUARTILES)]
            for tool, row in rep.quartile_rows.items()]
    parts += ["fixed programs by complexity quartile", _table(["tool"] + list(QUARTILES), rows)]
    return "\n".join(parts) + "\n"


def render_csv(rep):
    """Long format: one ``table,row,column,value`` line per cell."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# " + rep.header()])
    w.writerow(["table", "row", "column", "value"])
    for b in rep.backends + [PORTFOLIO]:
        for c in rep.configs + [PORTFOLIO]:
            f, t = rep.counts[(b, c)]
            w.writerow(["fixed", b, c, f])
            w.writerow(["total", b, c, t])
            w.writerow(["percent", b, c, f"{_pct(f, t):.2f}"])
    for b in rep.backends:
        for c in rep.configs:
            w.writerow(["distance_score_sum", b, c, f"{rep.distance[(b, c)]:.6f}"])
    for (b, c), v in sorted(rep.iterations.items()):
        if v is not None:
            for name, x in zip(("min", "max", "mean"), v):
                w.writerow([f"iterations_{name}", b, c, x])
    for tool, row in rep.quartile_rows.items():
        for q in QUARTILES:
            f, t = row[q]
            w.writerow(["quartile_fixed", tool, q, f])
            w.writerow(["quartile_total", tool, q, t])
    return buf.getvalue()


def render_json(rep):
    return json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def render(rep, fmt="text"):
    return RENDERERS[fmt](rep)


def write_scatter(rep, path):
    """Per-fix TED pairs for plotting patch size against reference distance."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["submission", "backend", "config", "ted_fix_to_orig", "ted_ref_to_orig",
                    "distance_score"])
        for row in rep.scatter:
            w.writerow(["" if v is None else v for v in row])


def report(store, fmt="text", **kw):
    if not isinstance(store, ResultsStore):
        store = ResultsStore(Path(store))
    return render(build_report(store.records(), **kw), fmt)
