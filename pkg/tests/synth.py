"""A hand-built results store with known aggregate tables.

Four submissions sit exactly on or just past the default complexity
cutpoints, so each lands in a different quartile. Every expected number
below was worked out by hand from the FIXES table.
"""

from sketchrepair.bench import ResultsStore

BACKENDS = ("A", "B", "C")
CONFIGS = ("X", "Y")
COMPLEXITY = {"s/p1": 2.5, "s/p2": 3.5, "s/p3": 7.0, "s/p4": 7.5}

# (backend, config) -> {submission: (iterations, ted_fix_to_orig, ted_ref_to_orig)}
FIXES = {
    ("A", "X"): {"s/p1": (1, 2, 8), "s/p2": (1, 1, 4)},
    ("A", "Y"): {"s/p2": (7, 4, 4)},
    ("B", "X"): {"s/p3": (2, 3, 6)},
    ("B", "Y"): {"s/p2": (1, 0, 5), "s/p3": (3, 6, 3)},
    ("C", "X"): {},
    ("C", "Y"): {"s/p1": (4, 1, 2)},
}

EXPECTED_COUNTS = {
    ("A", "X"): (2, 4), ("A", "Y"): (1, 4), ("A", "Portfolio"): (2, 4),
    ("B", "X"): (1, 4), ("B", "Y"): (2, 4), ("B", "Portfolio"): (2, 4),
    ("C", "X"): (0, 4), ("C", "Y"): (1, 4), ("C", "Portfolio"): (1, 4),
    ("Portfolio", "X"): (3, 4), ("Portfolio", "Y"): (3, 4), ("Portfolio", "Portfolio"): (3, 4),
}
EXPECTED_DISTANCE = {("A", "X"): 1.5, ("A", "Y"): 0.0, ("B", "X"): 0.5, ("B", "Y"): 1.0,
                     ("C", "X"): 0.0, ("C", "Y"): 0.5}
EXPECTED_ITERATIONS = {("A", "X"): (1, 1, 1.0), ("A", "Y"): (7, 7, 7.0), ("B", "X"): (2, 2, 2.0),
                       ("B", "Y"): (1, 3, 2.0), ("C", "X"): None, ("C", "Y"): (4, 4, 4.0),
                       ("all", "all"): (1, 7, round(19 / 7, 6))}
EXPECTED_QUARTILES = {
    "A": {"Q1": (1, 1), "Q2": (1, 1), "Q3": (0, 1), "Q4": (0, 1)},
    "B": {"Q1": (0, 1), "Q2": (1, 1), "Q3": (1, 1), "Q4": (0, 1)},
    "C": {"Q1": (1, 1), "Q2": (0, 1), "Q3": (0, 1), "Q4": (0, 1)},
    "Portfolio": {"Q1": (1, 1), "Q2": (1, 1), "Q3": (1, 1), "Q4": (0, 1)},
}


def score(t_f, t_r):
    return max(0.0, 1.0 - t_f / t_r)


def rec(sub, backend, config, result, run_id="r1"):
    return {"run_id": run_id,
            "job": {"submission": sub, "assignment": "s", "config": config, "backend": backend},
            "result": result,
            "meta": {"commit": None, "seed": None, "complexity": COMPLEXITY.get(sub, 1.0)}}


def fixed(iterations, t_f, t_r):
    return {"status": "fixed", "iterations": [{"verdict": "fail"}] * (iterations - 1)
            + [{"verdict": "pass"}], "ted_fix_to_orig": t_f, "ted_ref_to_orig": t_r,
            "distance_score": score(t_f, t_r)}


def unfixed(status="exhausted", iterations=10):
    return {"status": status, "iterations": [{"verdict": "fail"}] * iterations}


def build(path):
    store = ResultsStore(path)
    # an older attempt that a later record for the same key supersedes
    store.append(rec("s/p4", "A", "X", fixed(1, 1, 9), run_id="r0"))
    for b in BACKENDS:
        for c in CONFIGS:
            for sub in COMPLEXITY:
                hit = FIXES[(b, c)].get(sub)
                store.append(rec(sub, b, c, fixed(*hit) if hit else unfixed()))
    return store
