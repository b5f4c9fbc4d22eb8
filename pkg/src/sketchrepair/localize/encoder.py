"""Symbolic execution of a program on concrete test inputs into CNF.

Every diagnosable statement owns one relaxation variable shared by all
tests and loop unrollings. When it is set, each execution of the statement
produces a fresh unconstrained value (or branch outcome) instead of the
computed one. Hard clauses pin the inputs and require the output to
normalize to the expected text; a unit-weight soft clause per statement
asks for it to behave as written.
"""

from dataclasses import dataclass, field
from typing import Optional

from ..decider.interpreter import render_conversion, scan_input, wrap, c_div
from ..lang import ast as A
from ..lang.parser import PRINTF_DIRECTIVE
from .circuit import FALSE, TRUE, Circuit
from .output import START, OutputAutomaton, _TRAILING_WS


class UnrollBoundExceeded(Exception):
    pass


class UnsupportedForEncoding(Exception):
    pass


@dataclass(frozen=True)
class EncodingConfig:
    unroll_bound: Optional[int] = None
    int_bit_width: int = 16
    failing_tests: Optional[tuple] = None

    def __post_init__(self):
        if self.int_bit_width not in (8, 16, 32):
            raise ValueError("int_bit_width must be 8, 16 or 32")
        if self.unroll_bound is not None and self.unroll_bound < 1:
            raise ValueError("unroll_bound must be at least 1")


@dataclass
class Encoding:
    wcnf: object
    soft_to_sid: dict
    relax_var: dict
    tests: tuple
    unroll_bound: int
    stats: dict = field(default_factory=dict)


class _Slot:
    __slots__ = ("ctype", "bv")

    def __init__(self, ctype, bv):
        self.ctype = ctype
        self.bv = bv


class _ArraySlot:
    __slots__ = ("ctype", "elems")

    def __init__(self, ctype, elems):
        self.ctype = ctype
        self.elems = elems


class _Frame:
    def __init__(self, func, scope):
        self.func = func
        self.scopes = [scope]
        self.alive = TRUE
        self.ret = None


def uses_floats(ast):
    tree = getattr(ast, "tree", ast)
    for f in tree.functions:
        if f.ret == "float" or any(p.ctype == "float" for p in f.params):
            return True
    for node in A.walk(tree):
        if isinstance(node, A.FloatLit):
            return True
        if isinstance(node, (A.Decl, A.Cast)) and node.ctype == "float":
            return True
        if isinstance(node, A.Call) and node.func in ("printf", "scanf") and node.args:
            fmt = node.args[0].value
            if any(m.group(5) == "f" for m in PRINTF_DIRECTIVE.finditer(fmt)):
                return True
    return False


class Encoder:
    def __init__(self, ast, width=16, unroll_bound=4):
        self.ast = ast
        self.tree = getattr(ast, "tree", ast)
        self.funcs = {f.name: f for f in self.tree.functions}
        self.w = width
        self.bound = unroll_bound
        self.c = Circuit()
        self.relax = {}
        self.soft_to_sid = {}
        units = ast.units() if hasattr(ast, "units") else [
            s for s in A.statements(self.tree) if A.is_diagnosable(s)]
        for s in units:
            r = self.c.var()
            self.relax[s.sid] = r
            idx = self.c.f.add_soft([-r], 1)
            self.soft_to_sid[idx] = s.sid

    # -- per test -------------------------------------------------------------

    def add_test(self, test):
        self.stdin = test.input
        self.cursor = {0: TRUE}
        self.dfa = OutputAutomaton(test.expected)
        self.states = {START: TRUE}
        self.frames = []
        self.call_function(self.funcs["main"], [], TRUE)
        accept = [lit for st, lit in self.states.items() if self.dfa.accepting(st)]
        self.c.clause(accept if accept else [FALSE])

    def call_function(self, func, args, guard):
        scope = {}
        for p, a in zip(func.params, args):
            scope[p.name] = a if p.is_array else _Slot(p.ctype, self.convert(p.ctype, a))
        frame = _Frame(func, scope)
        self.frames.append(frame)
        try:
            self.exec_block(func.body, guard, new_scope=False)
        finally:
            self.frames.pop()
        if func.ret == "void":
            return self.c.const(0, self.w)
        if frame.ret is None:
            return self.c.const(0, self.w)
        return frame.ret

    # -- helpers --------------------------------------------------------------

    @property
    def frame(self):
        return self.frames[-1]

    def eff(self, guard):
        return self.c.and2(guard, self.frame.alive)

    def lookup(self, name):
        for scope in reversed(self.frame.scopes):
            if name in scope:
                return scope[name]
        raise KeyError(name)

    def convert(self, ctype, bv):
        if ctype == "char" and self.w > 8:
            return self.c.sext(bv[:8], self.w)
        return bv

    def fresh(self, ctype="int"):
        return self.convert(ctype, self.c.fresh(self.w))

    def relaxed(self, stmt):
        return self.relax.get(stmt.sid)

    def relax_value(self, stmt, bv, ctype="int"):
        r = self.relaxed(stmt)
        if r is None:
            return bv
        return self.c.bite(r, self.fresh(ctype), bv)

    def relax_bool(self, stmt, lit):
        r = self.relaxed(stmt)
        if r is None:
            return lit
        return self.c.ite(r, self.c.var(), lit)

    def const(self, value):
        return self.c.const(wrap(value, self.w), self.w)

    # -- statements ----------------------------------------------------------------

    def exec_block(self, block, guard, new_scope=True):
        if new_scope:
            self.frame.scopes.append({})
        try:
            for s in block.body:
                self.exec(s, guard)
        finally:
            if new_scope:
                self.frame.scopes.pop()

    def exec_scoped(self, s, guard):
        if isinstance(s, A.Block):
            self.exec_block(s, guard)
        else:
            self.frame.scopes.append({})
            try:
                self.exec(s, guard)
            finally:
                self.frame.scopes.pop()

    def exec(self, s, guard):
        g = self.eff(guard)
        if g == FALSE and not isinstance(s, A.Decl):
            return
        t = type(s)
        if t is A.Block:
            self.exec_block(s, g)
        elif t is A.Decl:
            self.exec_decl(s, g)
        elif t is A.Assign:
            slot, key = self.lvalue(s.target, g)
            rhs = self.eval(s.value, g)
            if s.op == "=":
                value = rhs
            else:
                value = self.arith(s.op[0], self.load(slot, key), rhs, g)
            value = self.relax_value(s, self.convert(slot.ctype, value), slot.ctype)
            self.store(slot, key, value, g)
        elif t is A.IncDec:
            slot, key = self.lvalue(s.target, g)
            value = self.arith("+" if s.op == "++" else "-", self.load(slot, key), self.const(1), g)
            value = self.relax_value(s, self.convert(slot.ctype, value), slot.ctype)
            self.store(slot, key, value, g)
        elif t is A.ExprStmt:
            if s.expr.func == "printf":
                self.printf(s.expr, g, s)
            else:
                self.eval(s.expr, g)
        elif t is A.If:
            cond = self.relax_bool(s, self.truth(s.cond, g))
            self.exec_scoped(s.then, self.c.and2(g, cond))
            if s.other is not None:
                self.exec_scoped(s.other, self.c.and2(g, -cond))
        elif t is A.While:
            self.loop(s, s.cond, s.body, None, g)
        elif t is A.For:
            self.frame.scopes.append({})
            try:
                if s.init is not None:
                    self.exec(s.init, g)
                self.loop(s, s.cond, s.body, s.update, g)
            finally:
                self.frame.scopes.pop()
        elif t is A.Return:
            value = None
            if s.value is not None:
                value = self.relax_value(s, self.convert(self.frame.func.ret, self.eval(s.value, g)),
                                         self.frame.func.ret)
            frame = self.frame
            if value is not None:
                prev = frame.ret if frame.ret is not None else self.const(0)
                frame.ret = self.c.bite(g, value, prev)
            frame.alive = self.c.and2(frame.alive, -g)
        elif t is A.Empty:
            pass
        else:
            raise UnsupportedForEncoding(f"cannot encode {t.__name__}")

    def loop(self, s, cond_expr, body, update, guard):
        cur = guard
        for _ in range(self.bound):
            g = self.eff(cur)
            if g == FALSE:
                return
            cond = TRUE if cond_expr is None else self.relax_bool(s, self.truth(cond_expr, g))
            cur = self.c.and2(g, cond)
            if cur == FALSE:
                return
            self.exec_scoped(body, cur)
            if update is not None:
                self.exec(update, cur)
        g = self.eff(cur)
        if g == FALSE:
            return
        cond = TRUE if cond_expr is None else self.relax_bool(s, self.truth(cond_expr, g))
        # executions that need more iterations than the bound are excluded
        self.c.assert_false(self.c.and2(g, cond))

    def exec_decl(self, s, g):
        scope = self.frame.scopes[-1]
        for d in s.items:
            if d.size is None:
                if d.init is None:
                    value = self.const(0)
                else:
                    value = self.convert(s.ctype, self.eval(d.init, g))
                    value = self.relax_value(s, value, s.ctype)
                scope[d.name] = _Slot(s.ctype, value)
                continue
            elems = [self.const(0) for _ in range(d.size)]
            if isinstance(d.init, A.StrLit):
                for i, ch in enumerate(d.init.value):
                    elems[i] = self.convert(s.ctype, self.const(ord(ch)))
            elif d.init is not None:
                for i, e in enumerate(d.init):
                    elems[i] = self.convert(s.ctype, self.eval(e, g))
            if d.init is not None:
                elems = [self.relax_value(s, v, s.ctype) for v in elems]
            scope[d.name] = _ArraySlot(s.ctype, elems)

    # -- lvalues --------------------------------------------------------------------

    def lvalue(self, target, g):
        if isinstance(target, A.Name):
            return self.lookup(target.id), None
        slot = self.lookup(target.base.id)
        idx = self.eval(target.index, g)
        self.bounds_check(slot, idx, g)
        return slot, idx

    def bounds_check(self, slot, idx, g):
        k = Circuit.value_of(idx)
        n = len(slot.elems)
        if k is not None:
            if not 0 <= k < n:
                self.c.assert_false(g)
            return
        inside = self.c.any([self.c.eq(idx, self.const(j)) for j in range(n)])
        self.c.assert_false(self.c.and2(g, -inside))

    def load(self, slot, key):
        if key is None:
            return slot.bv
        return self.read_elem(slot, key)

    def read_elem(self, slot, idx):
        k = Circuit.value_of(idx)
        if k is not None:
            return slot.elems[k] if 0 <= k < len(slot.elems) else self.const(0)
        out = self.const(0)
        for j, v in enumerate(slot.elems):
            out = self.c.bite(self.c.eq(idx, self.const(j)), v, out)
        return out

    def store(self, slot, key, value, g):
        if key is None:
            slot.bv = self.c.bite(g, value, slot.bv)
            return
        k = Circuit.value_of(key)
        if k is not None:
            if 0 <= k < len(slot.elems):
                slot.elems[k] = self.c.bite(g, value, slot.elems[k])
            return
        for j in range(len(slot.elems)):
            hit = self.c.and2(g, self.c.eq(key, self.const(j)))
            slot.elems[j] = self.c.bite(hit, value, slot.elems[j])

    # -- expressions --------------------------------------------------------------

    def truth(self, e, g):
        if isinstance(e, A.Binary):
            op = e.op
            if op == "&&":
                a = self.truth(e.left, g)
                b = self.truth(e.right, self.c.and2(g, a))
                return self.c.and2(a, b)
            if op == "||":
                a = self.truth(e.left, g)
                b = self.truth(e.right, self.c.and2(g, -a))
                return self.c.or2(a, b)
            if op in ("<", ">", "<=", ">=", "==", "!="):
                return self.compare(op, self.eval(e.left, g), self.eval(e.right, g))
        if isinstance(e, A.Unary) and e.op == "!":
            return -self.truth(e.operand, g)
        return self.c.nonzero(self.eval(e, g))

    def compare(self, op, a, b):
        x, y = Circuit.value_of(a), Circuit.value_of(b)
        if x is not None and y is not None:
            res = {"<": x < y, ">": x > y, "<=": x <= y, ">=": x >= y,
                   "==": x == y, "!=": x != y}[op]
            return TRUE if res else FALSE
        c = self.c
        if op == "<":
            return c.slt(a, b)
        if op == ">":
            return c.slt(b, a)
        if op == "<=":
            return -c.slt(b, a)
        if op == ">=":
            return -c.slt(a, b)
        if op == "==":
            return c.eq(a, b)
        return -c.eq(a, b)

    def arith(self, op, a, b, g):
        x, y = Circuit.value_of(a), Circuit.value_of(b)
        if op in ("/", "%"):
            if y == 0:
                self.c.assert_false(g)
                return self.const(0)
            if y is None:
                self.c.assert_false(self.c.and2(g, -self.c.nonzero(b)))
        if x is not None and y is not None:
            if op == "+":
                return self.const(x + y)
            if op == "-":
                return self.const(x - y)
            if op == "*":
                return self.const(x * y)
            q = c_div(x, y)
            return self.const(q if op == "/" else x - y * q)
        if op == "+":
            return self.c.add(a, b)
        if op == "-":
            return self.c.sub(a, b)
        if op == "*":
            return self.c.mul(a, b)
        q, r = self.c.sdivmod(a, b)
        return q if op == "/" else r

    def eval(self, e, g):
        t = type(e)
        if t is A.IntLit or t is A.CharLit:
            return self.const(e.value)
        if t is A.Name:
            return self.lookup(e.id).bv
        if t is A.Index:
            slot = self.lookup(e.base.id)
            idx = self.eval(e.index, g)
            self.bounds_check(slot, idx, g)
            return self.read_elem(slot, idx)
        if t is A.Unary:
            if e.op == "!":
                return self.c.from_bool(-self.truth(e.operand, g), self.w)
            v = self.eval(e.operand, g)
            if e.op == "-":
                x = Circuit.value_of(v)
                return self.const(-x) if x is not None else self.c.neg(v)
            return v
        if t is A.Binary:
            if e.op in ("+", "-", "*", "/", "%"):
                return self.arith(e.op, self.eval(e.left, g), self.eval(e.right, g), g)
            return self.c.from_bool(self.truth(e, g), self.w)
        if t is A.Cond:
            test = self.truth(e.test, g)
            a = self.eval(e.then, self.c.and2(g, test))
            b = self.eval(e.other, self.c.and2(g, -test))
            return self.c.bite(test, a, b)
        if t is A.Cast:
            if e.ctype == "float":
                raise UnsupportedForEncoding("float cast")
            return self.convert(e.ctype, self.eval(e.operand, g))
        if t is A.Call:
            if e.func == "scanf":
                return self.scanf(e, g)
            if e.func == "printf":
                raise UnsupportedForEncoding("printf used as a value")
            func = self.funcs[e.func]
            args = []
            for p, a in zip(func.params, e.args):
                args.append(self.lookup(a.id) if p.is_array else self.eval(a, g))
            value = self.call_function(func, args, g)
            return self.convert(func.ret, value) if func.ret != "void" else value
        raise UnsupportedForEncoding(f"cannot encode expression {t.__name__}")

    # -- input --------------------------------------------------------------------

    def scanf(self, call, g):
        fmt = call.args[0].value
        targets = list(call.args[1:])
        lvals = []
        for tgt in targets:
            if isinstance(tgt, A.AddrOf):
                if isinstance(tgt.target, A.Name):
                    lvals.append((self.lookup(tgt.target.id), None))
                else:
                    slot = self.lookup(tgt.target.base.id)
                    lvals.append((slot, self.eval(tgt.target.index, g)))
            else:
                lvals.append((self.lookup(tgt.id), "string"))
        new_cursor = {}
        result = self.const(0)
        for pos, at in sorted(self.cursor.items()):
            here = self.c.and2(g, at)
            stay = self.c.and2(-g, at)
            if stay != FALSE:
                new_cursor[pos] = self.c.or2(new_cursor.get(pos, FALSE), stay)
            if here == FALSE:
                continue
            end, items, count = scan_input(fmt, self.stdin, pos)
            new_cursor[end] = self.c.or2(new_cursor.get(end, FALSE), here)
            result = self.c.bite(here, self.const(count), result)
            for k, conv, value in items:
                slot, key = lvals[k]
                if conv == "s":
                    if len(value) + 1 > len(slot.elems):
                        self.c.assert_false(here)
                        continue
                    for i, ch in enumerate(value + "\0"):
                        code = self.convert(slot.ctype, self.const(wrap(ord(ch), 8)))
                        slot.elems[i] = self.c.bite(here, code, slot.elems[i])
                    continue
                if conv == "f":
                    raise UnsupportedForEncoding("float input")
                if conv == "c":
                    value = wrap(value, 8)
                if key is not None:
                    self.bounds_check(slot, key, here)
                self.store(slot, key, self.convert(slot.ctype, self.const(value)), here)
        self.cursor = new_cursor
        return result

    # -- output -------------------------------------------------------------------

    def printf(self, call, g, stmt=None):
        fmt = call.args[0].value
        args = list(call.args[1:])
        pieces = []
        text = []
        last = 0
        k = 0
        for m in PRINTF_DIRECTIVE.finditer(fmt):
            text.append(fmt[last:m.start()])
            last = m.end()
            flags, width, prec, _length, conv = m.groups()
            if conv == "%":
                text.append("%")
                continue
            arg = args[k]
            k += 1
            if conv == "s":
                text.append(self.string_of(self.lookup(arg.id), g, flags, width, prec))
                continue
            if conv == "f":
                raise UnsupportedForEncoding("float output")
            v = self.eval(arg, g)
            if stmt is not None:
                v = self.relax_value(stmt, v)
            x = Circuit.value_of(v)
            if x is not None:
                text.append(render_conversion(flags, width, prec, conv, x))
                continue
            pieces.append("".join(text))
            text = []
            pieces.append((flags, width, prec, conv, v))
        text.append(fmt[last:])
        pieces.append("".join(text))
        for piece in pieces:
            if isinstance(piece, str):
                if piece:
                    self.emit_text(piece, g)
            else:
                self.emit_value(piece, g)

    def string_of(self, slot, g, flags, width, prec):
        chars = []
        for v in slot.elems:
            x = Circuit.value_of(v)
            if x is None:
                raise UnsupportedForEncoding("symbolic string output")
            if x == 0:
                break
            chars.append(chr(x & 0xFF))
        else:
            self.c.assert_false(g)
        spec = "%" + flags + width + ("." + prec if prec is not None else "") + "s"
        return spec % "".join(chars)

    def _advance(self, g, transition):
        """Move every output state; ``transition(state, active)`` returns
        ``[(next_state, condition)]`` and the condition that some move applies."""
        new = {}
        for st, at in self.states.items():
            stay = self.c.and2(at, -g)
            if stay != FALSE:
                new[st] = self.c.or2(new.get(st, FALSE), stay)
            active = self.c.and2(at, g)
            if active == FALSE:
                continue
            moves = transition(st, active)
            for nxt, cond in moves:
                if cond != FALSE:
                    new[nxt] = self.c.or2(new.get(nxt, FALSE), cond)
            self.c.clause([-active] + [cond for _, cond in moves])
        self.states = new

    def emit_text(self, text, g):
        def move(st, active):
            nxt = self.dfa.run(st, text)
            return [] if nxt is None else [(nxt, active)]
        self._advance(g, move)

    def emit_value(self, piece, g):
        flags, width, prec, conv, v = piece
        c = self.c
        if conv == "c":
            low = v[:8]
            chars = set(self.dfa.text) | set(_TRAILING_WS) | {"\n"}
            cands = [(ord(ch), c.eq(low, c.const(ord(ch), 8))) for ch in sorted(chars) if ord(ch) < 256]
        else:
            cands = None

        def move(st, active):
            moves = []
            if conv == "c":
                for code, hit in cands:
                    txt = render_conversion(flags, width, prec, "c", code)
                    nxt = self.dfa.run(st, txt)
                    if nxt is not None:
                        moves.append((nxt, c.and2(active, hit)))
                return moves
            for x, txt in self.int_candidates(st, flags, width, prec):
                nxt = self.dfa.run(st, txt)
                if nxt is not None:
                    moves.append((nxt, c.and2(active, c.eq(v, self.const(x)))))
            return moves
        self._advance(g, move)

    def int_candidates(self, st, flags, width, prec):
        if st[0] != "m":
            return []
        i = st[1]
        rest = self.dfa.text[i:]
        lo, hi = -(1 << (self.w - 1)), (1 << (self.w - 1)) - 1
        pad = int(width) if width else 0
        longest = max(pad, len(str(lo)) + 1, int(prec) + 2 if prec else 0)
        seen = {}
        for n in range(1, min(longest, len(rest)) + 1):
            head = rest[:n]
            for extra in range(0, pad + 1):
                cand = head + " " * extra
                try:
                    x = int(cand.strip())
                except ValueError:
                    continue
                if not lo <= x <= hi or x in seen:
                    continue
                if render_conversion(flags, width, prec, "d", x) == cand:
                    seen[x] = cand
        return sorted(seen.items())


def encode_program(ast, tests, width=16, unroll_bound=4):
    enc = Encoder(ast, width, unroll_bound)
    for t in tests:
        enc.add_test(t)
    f = enc.c.f
    return Encoding(f, dict(enc.soft_to_sid), dict(enc.relax), tuple(t.id for t in tests),
                    unroll_bound, {"vars": f.num_vars, "hard": len(f.hard), "soft": len(f.soft)})
