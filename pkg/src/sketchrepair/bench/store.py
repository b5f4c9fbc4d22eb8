import json
import threading
from pathlib import Path


class EmptyStore(Exception):
    pass


def record_key(rec):
    j = rec["job"]
    return (j["submission"], j["config"], j["backend"])


class ResultsStore:
    """Append-only JSON Lines file of repair records.

    Each record is ``{"run_id", "job": {...}, "result": {...}, "meta": {...}}``.
    Existing lines are never rewritten.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record):
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a+b") as fh:
                fh.seek(0, 2)
                if fh.tell():
                    fh.seek(-1, 2)
                    if fh.read(1) != b"\n":
                        fh.write(b"\n")  # close off a torn line
                fh.write(line.encode("utf-8") + b"\n")

    def records(self):
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    out.append(json.loads(line))
                except json.JSONDecodeError:
                    # a run killed mid-write leaves a torn line; the job reruns
                    continue
        return out

    def keys(self, run_id):
        return {record_key(r) for r in self.records() if r.get("run_id") == run_id}

    def __len__(self):
        return len(self.records())
