from .dimacs import (MalformedSolverOutput, from_dimacs_wcnf, parse_solver_output, solve_external,
                     to_dimacs_wcnf)
from .sat import Solver, Timeout
from .wcnf import HardUnsat, Solution, Unsatisfiable, Wcnf, enumerate_mcs, solve

__all__ = [
    "HardUnsat", "MalformedSolverOutput", "Solution", "Solver", "Timeout", "Unsatisfiable", "Wcnf",
    "enumerate_mcs", "from_dimacs_wcnf", "parse_solver_output", "solve", "solve_external",
    "to_dimacs_wcnf",
]
