"""Tree-walking interpreter for the C subset.

Integers wrap at a configurable width (``int_bits``); ``char`` is a signed
8-bit integer; ``float`` values are rounded to IEEE single precision after
every operation, while unsuffixed floating literals are doubles as in C.

The interpreter can also run a program with some statements *relaxed*: a
relaxed statement asks ``hooks.choose`` for its effect instead of computing
it. This is what the brute-force fault-localization oracle uses.
"""

import math
import re
import time
from dataclasses import dataclass, field

import numpy as np

from ..lang import ast as A
from ..lang.parser import PRINTF_DIRECTIVE

_INT_RE = re.compile(r"[+-]?\d+")
_FLOAT_RE = re.compile(r"[+-]?(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)")
_WS = " \t\n\r\f\v"
_SCANF_TOKEN = re.compile(r"%(l?)([dcfs%])|(\s+)|(.)", re.S)
MAX_OUTPUT = 1 << 20


class RuntimeFault(Exception):
    def __init__(self, kind, sid, message=""):
        super().__init__(f"{kind} at statement {sid}" + (f": {message}" if message else ""))
        self.kind = kind
        self.sid = sid


class ResourceExhausted(Exception):
    """Step budget, wall-clock limit or output cap exceeded."""

    def __init__(self, what):
        super().__init__(what)
        self.what = what


class Prune(Exception):
    """Raised by oracle hooks to abandon the current execution."""


@dataclass
class ExecResult:
    stdout: str
    exit_code: int
    steps: int
    trace: list = field(default_factory=list)
    loop_counts: dict = field(default_factory=dict)


def wrap(value, bits):
    mask = (1 << bits) - 1
    value &= mask
    if value >> (bits - 1):
        value -= 1 << bits
    return value


def f32(x):
    with np.errstate(over="ignore", invalid="ignore"):
        return float(np.float32(x))


def c_div(a, b):
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


class Cell:
    __slots__ = ("ctype", "value")

    def __init__(self, ctype, value):
        self.ctype = ctype
        self.value = value


class ArrayCell:
    __slots__ = ("ctype", "values")

    def __init__(self, ctype, size):
        self.ctype = ctype
        self.values = [0.0 if ctype == "float" else 0] * size


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class Interpreter:
    """Executes one program; create one per run (instances are not shared)."""

    def __init__(self, ast, int_bits=32, max_steps=10**7, time_limit=None,
                 relaxed=frozenset(), hooks=None, trace=False):
        self.ast = ast
        self.tree = getattr(ast, "tree", ast)
        self.funcs = {f.name: f for f in self.tree.functions}
        self.int_bits = int_bits
        self.max_steps = max_steps
        self.time_limit = time_limit
        self.relaxed = frozenset(relaxed)
        self.hooks = hooks
        self.tracing = trace
        self._types = {}

    # -- entry point ------------------------------------------------------

    def run(self, stdin):
        self.stdin = stdin
        self.pos = 0
        self.out = []
        self.out_len = 0
        self.steps = 0
        self.trace = []
        self.loop_counts = {}
        self.deadline = None if self.time_limit is None else time.monotonic() + self.time_limit
        self.scopes = []
        try:
            code = self.call(self.funcs["main"], [])
        except RecursionError:
            raise ResourceExhausted("stack")
        return ExecResult("".join(self.out), code, self.steps, self.trace, self.loop_counts)

    # -- bookkeeping ------------------------------------------------------

    def tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise ResourceExhausted("steps")
        if self.deadline is not None and not self.steps & 0xFFF and time.monotonic() > self.deadline:
            raise ResourceExhausted("time")

    def emit(self, text):
        self.out.append(text)
        self.out_len += len(text)
        if self.out_len > MAX_OUTPUT:
            raise ResourceExhausted("output")

    def lookup(self, name):
        for frame in reversed(self.scopes):
            if name in frame:
                return frame[name]
        raise KeyError(name)

    def is_relaxed(self, stmt):
        return stmt.sid in self.relaxed

    def choose(self, stmt, kind, default, ctype="int"):
        return self.hooks.choose(stmt, kind, default, ctype)

    # -- values -----------------------------------------------------------

    def convert(self, ctype, value_type, value):
        if ctype == "int":
            if value_type in ("float", "double"):
                if value != value or value in (float("inf"), float("-inf")):
                    return wrap(-(1 << (self.int_bits - 1)), self.int_bits)
                value = int(value)
            return wrap(value, self.int_bits)
        if ctype == "char":
            if value_type in ("float", "double"):
                value = int(value) if value == value and abs(value) != float("inf") else 0
            return wrap(value, 8)
        if ctype == "float":
            return f32(value)
        return float(value)

    def static_type(self, e):
        key = id(e)
        t = self._types.get(key)
        if t is None:
            t = self._static_type(e)
            self._types[key] = t
        return t

    def _static_type(self, e):
        if isinstance(e, (A.IntLit, A.CharLit)):
            return "int"
        if isinstance(e, A.FloatLit):
            return "float" if e.is_single else "double"
        if isinstance(e, A.Name):
            t = self.lookup(e.id).ctype
            return "int" if t == "char" else t
        if isinstance(e, A.Index):
            t = self.lookup(e.base.id).ctype
            return "int" if t == "char" else t
        if isinstance(e, A.Unary):
            return "int" if e.op == "!" else self.static_type(e.operand)
        if isinstance(e, A.Cast):
            return "int" if e.ctype == "char" else e.ctype
        if isinstance(e, A.Binary):
            if e.op in ("+", "-", "*", "/", "%"):
                return _arith(self.static_type(e.left), self.static_type(e.right))
            return "int"
        if isinstance(e, A.Cond):
            return _arith(self.static_type(e.then), self.static_type(e.other))
        if isinstance(e, A.Call):
            if e.func in ("printf", "scanf"):
                return "int"
            ret = self.funcs[e.func].ret
            return "int" if ret == "char" else ret
        raise TypeError(e)

    # -- statements -------------------------------------------------------

    def call(self, func, args):
        saved = self.scopes
        frame = {}
        for p, a in zip(func.params, args):
            frame[p.name] = a if p.is_array else Cell(p.ctype, self.convert(p.ctype, *a))
        self.scopes = [frame]
        result = None
        try:
            self.exec_block(func.body)
        except _Return as r:
            result = r.value
        finally:
            self.scopes = saved
        if func.ret == "void":
            return None
        if result is None:
            return self.convert(func.ret, "int", 0)
        return self.convert(func.ret, *result)

    def exec_block(self, block):
        self.scopes.append({})
        try:
            for s in block.body:
                self.exec(s)
        finally:
            self.scopes.pop()

    def exec(self, s):
        self.tick()
        t = type(s)
        if t is A.Block:
            self.exec_block(s)
        elif t is A.Decl:
            self.exec_decl(s)
        elif t is A.Assign:
            self.exec_assign(s)
        elif t is A.IncDec:
            self.exec_incdec(s)
        elif t is A.ExprStmt:
            if self.tracing and s.expr.func == "printf":
                self.trace.append(s.sid)
            if s.expr.func == "printf":
                self.printf(s.expr, s, self.is_relaxed(s))
            else:
                self.eval(s.expr, s)
        elif t is A.If:
            if self.test(s.cond, s):
                self.exec_scoped(s.then)
            elif s.other is not None:
                self.exec_scoped(s.other)
        elif t is A.While:
            count = 0
            while self.test(s.cond, s):
                count += 1
                self.exec_scoped(s.body)
                self.tick()
            self.loop_counts.setdefault(s.sid, []).append(count)
        elif t is A.For:
            self.scopes.append({})
            try:
                if s.init is not None:
                    self.exec(s.init)
                count = 0
                while s.cond is None or self.test(s.cond, s):
                    count += 1
                    self.exec_scoped(s.body)
                    if s.update is not None:
                        self.exec(s.update)
                    self.tick()
                self.loop_counts.setdefault(s.sid, []).append(count)
            finally:
                self.scopes.pop()
        elif t is A.Return:
            if self.tracing:
                self.trace.append(s.sid)
            value = None
            if s.value is not None:
                value = self.eval(s.value, s)
                if self.is_relaxed(s):
                    value = (value[0], self.choose(s, "value", value[1], value[0]))
            raise _Return(value)
        elif t is A.Empty:
            pass
        elif t is A.Hole:
            raise RuntimeFault("hole", s.sid, "program sketch is not executable")
        else:
            raise TypeError(s)

    def exec_scoped(self, s):
        if type(s) is A.Block:
            self.exec_block(s)
        else:
            self.scopes.append({})
            try:
                self.exec(s)
            finally:
                self.scopes.pop()

    def test(self, cond, stmt):
        if self.tracing:
            self.trace.append(stmt.sid)
        value = bool(self.eval(cond, stmt)[1])
        if self.is_relaxed(stmt):
            value = bool(self.choose(stmt, "cond", value))
        return value

    def exec_decl(self, s):
        if self.tracing and A.is_diagnosable(s):
            self.trace.append(s.sid)
        frame = self.scopes[-1]
        relaxed = self.is_relaxed(s)
        for d in s.items:
            if d.size is None:
                cell = Cell(s.ctype, 0.0 if s.ctype == "float" else 0)
                if d.init is not None:
                    cell.value = self.convert(s.ctype, *self.eval(d.init, s))
                    if relaxed:
                        cell.value = self.convert(s.ctype, s.ctype, self.choose(s, "value", cell.value, s.ctype))
            else:
                cell = ArrayCell(s.ctype, d.size)
                if isinstance(d.init, A.StrLit):
                    for i, ch in enumerate(d.init.value):
                        cell.values[i] = wrap(ord(ch), 8)
                elif d.init is not None:
                    for i, e in enumerate(d.init):
                        cell.values[i] = self.convert(s.ctype, *self.eval(e, s))
                if relaxed and d.init is not None:
                    for i in range(d.size):
                        cell.values[i] = self.convert(s.ctype, s.ctype,
                                                      self.choose(s, "value", cell.values[i], s.ctype))
            frame[d.name] = cell

    def locate(self, target, stmt):
        """Return ``(container, key)`` for an lvalue."""
        if type(target) is A.Name:
            return self.lookup(target.id), None
        arr = self.lookup(target.base.id)
        idx = self.eval(target.index, stmt)[1]
        if not 0 <= idx < len(arr.values):
            raise RuntimeFault("array index out of bounds", stmt.sid, f"{target.base.id}[{idx}]")
        return arr, idx

    def load(self, container, key):
        return container.value if key is None else container.values[key]

    def store(self, container, key, value):
        if key is None:
            container.value = value
        else:
            container.values[key] = value

    def exec_assign(self, s):
        if self.tracing:
            self.trace.append(s.sid)
        container, key = self.locate(s.target, s)
        ctype = container.ctype
        rhs = self.eval(s.value, s)
        if s.op == "=":
            value = self.convert(ctype, *rhs)
        else:
            cur = (ctype if ctype != "char" else "int", self.load(container, key))
            res = self.binop(s.op[0], cur, rhs, s)
            value = self.convert(ctype, *res)
        if self.is_relaxed(s):
            value = self.convert(ctype, ctype, self.choose(s, "value", value, ctype))
        self.store(container, key, value)

    def exec_incdec(self, s):
        if self.tracing:
            self.trace.append(s.sid)
        container, key = self.locate(s.target, s)
        ctype = container.ctype
        cur = (ctype if ctype != "char" else "int", self.load(container, key))
        res = self.binop("+" if s.op == "++" else "-", cur, ("int", 1), s)
        value = self.convert(ctype, *res)
        if self.is_relaxed(s):
            value = self.convert(ctype, ctype, self.choose(s, "value", value, ctype))
        self.store(container, key, value)

    # -- expressions ------------------------------------------------------

    def eval(self, e, stmt):
        """Evaluate ``e`` to a ``(type, value)`` pair."""
        t = type(e)
        if t is A.IntLit:
            return ("int", wrap(e.value, self.int_bits))
        if t is A.Name:
            cell = self.lookup(e.id)
            return ("int" if cell.ctype == "char" else cell.ctype, cell.value)
        if t is A.Binary:
            if e.op == "&&":
                if not self.eval(e.left, stmt)[1]:
                    return ("int", 0)
                return ("int", int(bool(self.eval(e.right, stmt)[1])))
            if e.op == "||":
                if self.eval(e.left, stmt)[1]:
                    return ("int", 1)
                return ("int", int(bool(self.eval(e.right, stmt)[1])))
            return self.binop(e.op, self.eval(e.left, stmt), self.eval(e.right, stmt), stmt)
        if t is A.Index:
            container, key = self.locate(e, stmt)
            return ("int" if container.ctype == "char" else container.ctype, container.values[key])
        if t is A.CharLit:
            return ("int", e.value)
        if t is A.FloatLit:
            return ("float", f32(e.value)) if e.is_single else ("double", e.value)
        if t is A.Unary:
            vt, v = self.eval(e.operand, stmt)
            if e.op == "!":
                return ("int", int(not v))
            if e.op == "-":
                return (vt, wrap(-v, self.int_bits)) if vt == "int" else (vt, -v)
            return (vt, v)
        if t is A.Cond:
            branch = e.then if self.eval(e.test, stmt)[1] else e.other
            rt = self.static_type(e)
            vt, v = self.eval(branch, stmt)
            return (rt, self.convert(rt, vt, v) if rt != vt else v)
        if t is A.Cast:
            vt, v = self.eval(e.operand, stmt)
            value = self.convert(e.ctype, vt, v)
            return ("int" if e.ctype == "char" else e.ctype, value)
        if t is A.Call:
            if e.func == "printf":
                return ("int", self.printf(e, stmt))
            if e.func == "scanf":
                return ("int", self.scanf(e, stmt))
            func = self.funcs[e.func]
            args = []
            for p, a in zip(func.params, e.args):
                args.append(self.lookup(a.id) if p.is_array else self.eval(a, stmt))
            value = self.call(func, args)
            ret = func.ret
            return ("int" if ret in ("char", "void") else ret, 0 if value is None else value)
        raise TypeError(e)

    def binop(self, op, a, b, stmt):
        at, av = a
        bt, bv = b
        if at == "int" and bt == "int":
            if op == "+":
                return ("int", wrap(av + bv, self.int_bits))
            if op == "-":
                return ("int", wrap(av - bv, self.int_bits))
            if op == "*":
                return ("int", wrap(av * bv, self.int_bits))
            if op in ("/", "%"):
                if bv == 0:
                    raise RuntimeFault("division by zero", stmt.sid)
                q = c_div(av, bv)
                return ("int", wrap(q if op == "/" else av - bv * q, self.int_bits))
            return ("int", int(_compare(op, av, bv)))
        rt = _arith(at, bt)
        av, bv = float(av), float(bv)
        if op in ("+", "-", "*", "/"):
            if op == "+":
                r = av + bv
            elif op == "-":
                r = av - bv
            elif op == "*":
                r = av * bv
            elif bv == 0.0:
                r = math.nan if av == 0.0 or av != av else math.copysign(math.inf, av) * math.copysign(1.0, bv)
            else:
                r = av / bv
            return (rt, f32(r) if rt == "float" else r)
        return ("int", int(_compare(op, av, bv)))

    # -- I/O ----------------------------------------------------------------

    def printf(self, call, stmt, relaxed=False):
        fmt = call.args[0].value
        args = list(call.args[1:])
        parts = []
        last = 0
        k = 0
        for m in PRINTF_DIRECTIVE.finditer(fmt):
            parts.append(fmt[last:m.start()])
            last = m.end()
            flags, width, prec, _length, conv = m.groups()
            if conv == "%":
                parts.append("%")
                continue
            arg = args[k]
            k += 1
            if conv == "s":
                arr = self.lookup(arg.id)
                chars = []
                for v in arr.values:
                    if v == 0:
                        break
                    chars.append(chr(v & 0xFF))
                else:
                    raise RuntimeFault("unterminated string", stmt.sid)
                spec = "%" + flags + width + ("." + prec if prec is not None else "") + "s"
                parts.append(spec % "".join(chars))
                continue
            vt, v = self.eval(arg, stmt)
            if relaxed:
                v = self.choose(stmt, "print", v, vt)
            parts.append(render_conversion(flags, width, prec, conv, v))
        parts.append(fmt[last:])
        text = "".join(parts)
        self.emit(text)
        if self.hooks is not None and hasattr(self.hooks, "after_output"):
            self.hooks.after_output("".join(self.out))
        return len(text)

    def scanf(self, call, stmt):
        targets = list(call.args[1:])
        self.pos, items, count = scan_input(call.args[0].value, self.stdin, self.pos)
        for k, conv, value in items:
            target = targets[k]
            if conv == "s":
                arr = self.lookup(target.id)
                if len(value) + 1 > len(arr.values):
                    raise RuntimeFault("buffer overflow", stmt.sid, target.id)
                for i, ch in enumerate(value):
                    arr.values[i] = wrap(ord(ch), 8)
                arr.values[len(value)] = 0
                continue
            container, key = self.locate(target.target, stmt)
            if conv == "c":
                value = wrap(value, 8)
                vt = "int"
            else:
                vt = "double" if conv == "f" else "int"
            self.store(container, key, self.convert(container.ctype, vt, value))
        return count


def scan_input(fmt, s, pos):
    """Concrete ``scanf`` matching of ``fmt`` against ``s`` from ``pos``.

    Returns ``(new_pos, items, count)`` where ``items`` lists
    ``(argument_index, conversion, value)`` for each successful conversion:
    ints for ``d``, character codes for ``c``, floats for ``f`` and words
    for ``s``. ``count`` is the C return value (-1 on early end of input).
    """
    n = len(s)
    items = []
    count = 0
    k = 0
    for m in _SCANF_TOKEN.finditer(fmt):
        _length, conv, ws, lit = m.groups()
        if ws:
            while pos < n and s[pos] in _WS:
                pos += 1
            continue
        if lit is not None or conv == "%":
            ch = lit if lit is not None else "%"
            if conv == "%":
                while pos < n and s[pos] in _WS:
                    pos += 1
            if pos >= n:
                return pos, items, count if count else -1
            if s[pos] != ch:
                return pos, items, count
            pos += 1
            continue
        index = k
        k += 1
        if conv != "c":
            while pos < n and s[pos] in _WS:
                pos += 1
        if pos >= n:
            return pos, items, count if count else -1
        if conv == "d":
            mm = _INT_RE.match(s, pos)
            if not mm:
                return pos, items, count
            pos = mm.end()
            items.append((index, "d", int(mm.group(0))))
        elif conv == "f":
            mm = _FLOAT_RE.match(s, pos)
            if not mm:
                return pos, items, count
            pos = mm.end()
            items.append((index, "f", float(mm.group(0))))
        elif conv == "c":
            items.append((index, "c", ord(s[pos])))
            pos += 1
        else:
            start = pos
            while pos < n and s[pos] not in _WS:
                pos += 1
            items.append((index, "s", s[start:pos]))
        count += 1
    return pos, items, count


def render_conversion(flags, width, prec, conv, value):
    spec = "%" + flags + width + ("." + prec if prec is not None else "")
    if conv in "di":
        return (spec + "d") % int(value)
    if conv == "c":
        return (spec + "c") % chr(int(value) & 0xFF)
    if conv == "f":
        return (spec + "f") % float(value)
    raise ValueError(conv)


def _arith(a, b):
    if "double" in (a, b):
        return "double"
    if "float" in (a, b):
        return "float"
    return "int"


def _compare(op, a, b):
    if op == "<":
        return a < b
    if op == ">":
        return a > b
    if op == "<=":
        return a <= b
    if op == ">=":
        return a >= b
    if op == "==":
        return a == b
    return a != b
