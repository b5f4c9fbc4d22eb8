from .interpreter import ExecResult, Interpreter, ResourceExhausted, RuntimeFault
from .runner import (CompileError, Limits, NoFailure, run_tests, run_tests_external,
                     select_counterexample)
from .suite import (LayoutError, TestCase, TestOutcome, TestSuite, Verdict, normalize_output,
                    outputs_match)

__all__ = [
    "CompileError", "ExecResult", "Interpreter", "LayoutError", "Limits", "NoFailure",
    "ResourceExhausted", "RuntimeFault", "TestCase", "TestOutcome", "TestSuite", "Verdict",
    "normalize_output", "outputs_match", "run_tests", "run_tests_external",
    "select_counterexample",
]
