import logging
import subprocess
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

from ..cegis import Budgets, NothingToRepair, RepairJob, repair
from ..prompts import MissingArtifact
from .store import ResultsStore, record_key

log = logging.getLogger(__name__)


def _commit():
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True, text=True,
                             timeout=5)
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() or None


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def new_run_id():
    return datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S") + "-" + uuid.uuid4().hex[:6]


def _run_job(bundle, sub, cfg, backend, budgets):
    job = RepairJob(sub.program, bundle.assignment, cfg, backend, budgets, tag=sub.id)
    return repair(job).to_dict()


def run_matrix(bundles, configs, backends, store, parallelism=1, run_id=None,
               budgets=Budgets(), seed=None):
    """Repair every submission under every (config, backend) pair.

    Records already present in ``store`` for ``run_id`` are skipped, so an
    interrupted run resumes by passing its id again. A job that raises is
    stored with status ``error`` and the matrix carries on.
    """
    if not isinstance(store, ResultsStore):
        store = ResultsStore(store)
    names = [b.describe() for b in backends]
    if len(set(names)) != len(names):
        raise ValueError(f"backends must have distinct names, got {names}")
    run_id = run_id or new_run_id()
    done = store.keys(run_id)
    commit = _commit()
    pending = []
    for bundle in bundles:
        for sub in bundle.submissions:
            for cfg in configs:
                for backend in backends:
                    job = {"submission": sub.id, "assignment": bundle.id, "config": cfg.name,
                           "backend": backend.describe()}
                    if record_key({"job": job}) not in done:
                        pending.append((job, bundle, sub, cfg, backend))
    log.info("run %s: %d jobs pending, %d already stored", run_id, len(pending), len(done))

    def work(item):
        job, bundle, sub, cfg, backend = item
        started = _now()
        t0 = time.monotonic()
        try:
            result = _run_job(bundle, sub, cfg, backend, budgets)
        except (MissingArtifact, NothingToRepair, ValueError) as e:
            result = {"status": "error", "detail": f"{type(e).__name__}: {e}",
                      "elapsed": time.monotonic() - t0, "iterations": []}
        except Exception as e:  # noqa: BLE001 - one bad job must not stop the matrix
            log.exception("job %s failed", job)
            result = {"status": "error", "detail": f"{type(e).__name__}: {e}",
                      "elapsed": time.monotonic() - t0, "iterations": []}
        meta = {"commit": commit, "seed": seed, "started": started, "finished": _now(),
                "complexity": sub.complexity}
        store.append({"run_id": run_id, "job": job, "result": result, "meta": meta})
        return job, result["status"]

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        for job, status in pool.map(work, pending):
            log.info("%s %s %s: %s", job["submission"], job["config"], job["backend"], status)
    return store, run_id
