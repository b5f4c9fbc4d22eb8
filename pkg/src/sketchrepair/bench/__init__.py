from .ingest import (AssignmentBundle, IngestReport, ReferenceFailsTests, Submission, ingest,
                     load_assignment)
from .matrix import new_run_id, run_matrix
from .report import (DEFAULT_CUTPOINTS, Report, build_report, load_baselines, quartile, render,
                     report, write_scatter)
from .store import EmptyStore, ResultsStore

__all__ = [
    "AssignmentBundle", "DEFAULT_CUTPOINTS", "EmptyStore", "IngestReport", "ReferenceFailsTests",
    "Report", "ResultsStore", "Submission", "build_report", "ingest", "load_assignment",
    "load_baselines", "new_run_id", "quartile", "render", "report", "run_matrix",
    "write_scatter",
]
