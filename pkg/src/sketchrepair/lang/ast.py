"""Syntax tree node types for the C subset.

Nodes are frozen dataclasses. Positional bookkeeping (statement ids, line
spans, character offsets) is excluded from equality, so ``a == b`` means the
two trees are isomorphic as labeled ordered trees.
"""

from dataclasses import dataclass, field, fields
from typing import Optional

SCALAR_TYPES = ("int", "char", "float")


def _pos(default=None):
    return field(default=default, compare=False, repr=False)


class Node:
    def children(self):
        out = []
        for f in fields(self):
            if not f.compare:
                continue
            value = getattr(self, f.name)
            if isinstance(value, Node):
                out.append(value)
            elif isinstance(value, tuple):
                out.extend(v for v in value if isinstance(v, Node))
        return out


# -- expressions -------------------------------------------------------------

class Expr(Node):
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class FloatLit(Expr):
    text: str

    @property
    def value(self):
        return float(self.text.rstrip("fF"))

    @property
    def is_single(self):
        return self.text[-1] in "fF"


@dataclass(frozen=True)
class CharLit(Expr):
    value: int


@dataclass(frozen=True)
class StrLit(Expr):
    value: str


@dataclass(frozen=True)
class Name(Expr):
    id: str


@dataclass(frozen=True)
class Index(Expr):
    base: Name
    index: Expr


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # '-', '+', '!'
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Cond(Expr):
    test: Expr
    then: Expr
    other: Expr


@dataclass(frozen=True)
class Cast(Expr):
    ctype: str
    operand: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple


@dataclass(frozen=True)
class AddrOf(Expr):
    target: Expr


# -- statements --------------------------------------------------------------

@dataclass(frozen=True)
class Span:
    """Location of a statement: full line range plus the header offsets.

    ``head`` is the character range that stands for the statement as a
    diagnosable unit: the whole text for simple statements, the ``if (...)``
    or ``while (...)`` header for branches and loops, the condition
    expression for ``for`` loops.
    """

    first_line: int
    last_line: int
    head_start: int
    head_end: int
    head_line: int


class Stmt(Node):
    pass


@dataclass(frozen=True)
class Declarator(Node):
    name: str
    size: Optional[int] = None
    init: object = None  # Expr, tuple of Expr (array list), or None


@dataclass(frozen=True)
class Decl(Stmt):
    ctype: str
    items: tuple
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class Assign(Stmt):
    op: str  # '=', '+=', ...
    target: Expr
    value: Expr
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class IncDec(Stmt):
    op: str  # '++' or '--'
    target: Expr
    prefix: bool = False
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Call
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class Block(Stmt):
    body: tuple
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class If(Stmt):
    cond: Expr
    then: Stmt
    other: Optional[Stmt] = None
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: Stmt
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class For(Stmt):
    init: Optional[Stmt]
    cond: Optional[Expr]
    update: Optional[Stmt]
    body: Stmt
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class Return(Stmt):
    value: Optional[Expr] = None
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class Empty(Stmt):
    sid: int = _pos()
    span: Span = _pos()


@dataclass(frozen=True)
class Hole(Stmt):
    number: int
    sid: int = _pos()
    span: Span = _pos()


# -- top level ---------------------------------------------------------------

@dataclass(frozen=True)
class Param(Node):
    ctype: str
    name: str
    is_array: bool = False


@dataclass(frozen=True)
class FuncDef(Node):
    ret: str
    name: str
    params: tuple
    body: Block
    span: Span = _pos()


@dataclass(frozen=True)
class Program(Node):
    functions: tuple

    def function(self, name):
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)


def walk(node):
    """Pre-order traversal over every node."""
    stack = [node]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(cur.children()))


def statements(node):
    """Statements below ``node`` in pre-order (statement-id order)."""
    return [n for n in walk(node) if isinstance(n, Stmt)]


def is_output_stmt(stmt):
    return isinstance(stmt, ExprStmt) and stmt.expr.func == "printf"


def is_input_stmt(stmt):
    return isinstance(stmt, ExprStmt) and stmt.expr.func == "scanf"


def is_diagnosable(stmt):
    """Whether a statement is a fault-localization unit.

    Branch and loop statements stand for their condition. Declarations
    without initializers and ``scanf`` calls are never units.
    """
    if isinstance(stmt, Decl):
        return any(d.init is not None for d in stmt.items)
    if isinstance(stmt, (If, While, Assign, IncDec, Return)):
        return True
    if isinstance(stmt, For):
        return stmt.cond is not None
    if isinstance(stmt, ExprStmt):
        return stmt.expr.func == "printf"
    return False
