from .ast import Program, is_diagnosable, is_output_stmt
from .complexity import Complexity, cyclomatic_complexity
from .errors import CSyntaxError, UnsupportedConstruct
from .parser import ProgramAst, parse
from .printer import pretty_print

__all__ = [
    "CSyntaxError",
    "Complexity",
    "Program",
    "ProgramAst",
    "UnsupportedConstruct",
    "cyclomatic_complexity",
    "is_diagnosable",
    "is_output_stmt",
    "parse",
    "pretty_print",
]
