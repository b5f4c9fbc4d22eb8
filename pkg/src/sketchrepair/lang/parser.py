"""Recursive-descent parser for the C subset."""

import hashlib
import re
from types import MappingProxyType

from . import ast as A
from .errors import CSyntaxError, UnsupportedConstruct
from .lexer import tokenize

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}
TYPE_WORDS = {"int", "float", "char", "void"}
BUILTINS = {"printf", "scanf"}

PRINTF_DIRECTIVE = re.compile(r"%([-+ 0#]*)(\d*)(?:\.(\d*))?(l?)([a-zA-Z%])")
SCANF_DIRECTIVE = re.compile(r"%(\d*)(l?)([a-zA-Z%\[])")


class ProgramAst:
    """A parsed program: syntax tree plus source bookkeeping.

    ``stmt_index`` maps every statement id to its ``(first_line, last_line)``
    span. Instances are treated as immutable.
    """

    def __init__(self, tree, source, comments, stmts):
        self.tree = tree
        self.source = source
        self.comments = tuple(comments)
        self._stmts = MappingProxyType({s.sid: s for s in stmts})
        self.stmt_index = MappingProxyType({s.sid: (s.span.first_line, s.span.last_line) for s in stmts})
        self.source_digest = hashlib.sha256(source.encode("utf-8")).hexdigest()

    def statement(self, sid):
        return self._stmts[sid]

    def statements(self):
        return [self._stmts[k] for k in sorted(self._stmts)]

    def units(self):
        """Diagnosable statements in statement-id order."""
        return [s for s in self.statements() if A.is_diagnosable(s)]

    def head_line(self, sid):
        return self._stmts[sid].span.head_line

    def function_of(self, sid):
        for f in self.tree.functions:
            if any(s.sid == sid for s in A.statements(f.body)):
                return f.name
        raise KeyError(sid)

    def __eq__(self, other):
        return isinstance(other, ProgramAst) and self.tree == other.tree

    def __hash__(self):
        return hash(self.tree)

    def __repr__(self):
        return f"ProgramAst({len(self._stmts)} statements, digest={self.source_digest[:8]})"


def parse(source, sketch=False):
    """Parse C-subset ``source`` text into a :class:`ProgramAst`.

    With ``sketch=True`` the ``@ HOLE k @`` marker is accepted as a statement.
    """
    tokens, comments = tokenize(source, sketch=sketch)
    parser = _Parser(tokens, source)
    tree = parser.program()
    _Checker(tree).check()
    return ProgramAst(tree, source, comments, parser.stmts)


class _Parser:
    def __init__(self, tokens, source):
        self.toks = tokens
        self.pos = 0
        self.source = source
        self.next_sid = 0
        self.stmts = []

    # -- token helpers --------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.pos]

    def peek(self, k=1):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self):
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and t.kind in ((kind,) if kind else ("op", "kw"))

    def accept(self, text):
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected '{text}'")
        return self.advance()

    def error(self, message, tok=None):
        t = tok or self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise CSyntaxError(t.line, t.col, f"{message}, found {found}")

    def prev(self):
        return self.toks[self.pos - 1]

    def new_sid(self):
        sid = self.next_sid
        self.next_sid += 1
        return sid

    def span(self, first, last, head_first=None, head_last=None):
        head_first = head_first or first
        head_last = head_last or last
        return A.Span(first.line, last.line, head_first.start, head_last.end, head_first.line)

    def finish(self, stmt):
        self.stmts.append(stmt)
        return stmt

    # -- declarations ---------------------------------------------------------

    def ctype(self):
        t = self.tok
        if t.kind != "kw" or t.text not in TYPE_WORDS:
            self.error("expected a type")
        self.advance()
        if self.at("*"):
            raise UnsupportedConstruct(self.tok.line, "pointer")
        return t.text

    def program(self):
        functions = []
        seen = set()
        while self.tok.kind != "eof":
            first = self.tok
            ret = self.ctype()
            name_tok = self.tok
            if name_tok.kind != "id":
                self.error("expected a function name")
            self.advance()
            if not self.at("("):
                raise UnsupportedConstruct(name_tok.line, "global variable")
            params = self.params()
            if self.accept(";"):
                continue  # prototype
            if name_tok.text in seen:
                raise CSyntaxError(name_tok.line, name_tok.col, f"redefinition of '{name_tok.text}'")
            seen.add(name_tok.text)
            body = self.block()
            functions.append(A.FuncDef(ret, name_tok.text, params, body,
                                       span=self.span(first, self.prev(), first, name_tok)))
        return A.Program(tuple(functions))

    def params(self):
        self.expect("(")
        params = []
        if self.at(")"):
            self.advance()
            return ()
        if self.at("void") and self.peek().text == ")":
            self.advance()
            self.advance()
            return ()
        while True:
            ctype = self.ctype()
            if ctype == "void":
                self.error("void parameter")
            name = self.tok
            if name.kind != "id":
                self.error("expected a parameter name")
            self.advance()
            is_array = False
            if self.accept("["):
                if self.tok.kind == "int":
                    self.advance()
                self.expect("]")
                is_array = True
                if self.at("["):
                    raise UnsupportedConstruct(self.tok.line, "multi-dimensional array")
            params.append(A.Param(ctype, name.text, is_array))
            if not self.accept(","):
                break
        self.expect(")")
        return tuple(params)

    def declaration(self, sid, first, terminated=True):
        ctype = self.ctype()
        if ctype == "void":
            raise CSyntaxError(first.line, first.col, "void variable")
        items = []
        while True:
            if self.at("*"):
                raise UnsupportedConstruct(self.tok.line, "pointer")
            name = self.tok
            if name.kind != "id":
                self.error("expected a variable name")
            self.advance()
            size = None
            sized = False
            if self.accept("["):
                sized = True
                if self.tok.kind == "int":
                    size = self.advance().value
                    if size <= 0:
                        raise CSyntaxError(name.line, name.col, "array size must be positive")
                elif not self.at("]"):
                    raise UnsupportedConstruct(self.tok.line, "variable-length array")
                self.expect("]")
                if self.at("["):
                    raise UnsupportedConstruct(self.tok.line, "multi-dimensional array")
            init = None
            if self.accept("="):
                if sized:
                    if self.at("{"):
                        init = self.init_list()
                    elif self.tok.kind == "str":
                        init = self.string()
                    else:
                        self.error("expected an array initializer")
                    if size is None:
                        size = len(init) if isinstance(init, tuple) else len(init.value) + 1
                else:
                    init = self.expr()
            if sized and size is None:
                raise CSyntaxError(name.line, name.col, "array size missing")
            if sized and isinstance(init, tuple) and len(init) > size:
                raise CSyntaxError(name.line, name.col, "too many initializers")
            if sized and isinstance(init, A.StrLit):
                if ctype != "char":
                    raise CSyntaxError(name.line, name.col, "string initializer for non-char array")
                if len(init.value) + 1 > size:
                    raise CSyntaxError(name.line, name.col, "string initializer too long")
            items.append(A.Declarator(name.text, size if sized else None, init))
            if not self.accept(","):
                break
        if terminated:
            self.expect(";")
        return self.finish(A.Decl(ctype, tuple(items), sid=sid, span=self.span(first, self.prev())))

    def init_list(self):
        self.expect("{")
        values = []
        while not self.at("}"):
            values.append(self.expr())
            if not self.accept(","):
                break
        self.expect("}")
        return tuple(values)

    # -- statements -----------------------------------------------------------

    def block(self):
        sid = self.new_sid()
        first = self.expect("{")
        body = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("expected '}'")
            body.append(self.statement())
        self.expect("}")
        return self.finish(A.Block(tuple(body), sid=sid, span=self.span(first, self.prev(), first, first)))

    def statement(self):
        t = self.tok
        if t.kind == "op" and t.text == "{":
            return self.block()
        if t.kind == "hole":
            sid = self.new_sid()
            self.advance()
            return self.finish(A.Hole(t.value, sid=sid, span=self.span(t, t)))
        if t.kind == "kw":
            if t.text == "if":
                return self.if_stmt(head_first=t)
            if t.text == "while":
                return self.while_stmt()
            if t.text == "for":
                return self.for_stmt()
            if t.text == "return":
                sid = self.new_sid()
                self.advance()
                value = None if self.at(";") else self.expr()
                self.expect(";")
                return self.finish(A.Return(value, sid=sid, span=self.span(t, self.prev())))
            if t.text in TYPE_WORDS:
                return self.declaration(self.new_sid(), t)
            if t.text == "else":
                self.error("'else' without 'if'")
        if t.kind == "op" and t.text == ";":
            sid = self.new_sid()
            self.advance()
            return self.finish(A.Empty(sid=sid, span=self.span(t, t)))
        sid = self.new_sid()
        stmt = self.simple(sid, t)
        self.expect(";")
        return self.finish(_respan(stmt, self.span(t, self.prev())))

    def if_stmt(self, head_first):
        sid = self.new_sid()
        first = self.expect("if")
        self.expect("(")
        cond = self.expr()
        close = self.expect(")")
        then = self.statement()
        other = None
        if self.at("else"):
            else_tok = self.advance()
            if self.at("if") and self.tok.line == else_tok.line:
                other = self.if_stmt(head_first=else_tok)
            else:
                other = self.statement()
        return self.finish(A.If(cond, then, other, sid=sid,
                                span=self.span(head_first, self.prev(), head_first, close)))

    def while_stmt(self):
        sid = self.new_sid()
        first = self.expect("while")
        self.expect("(")
        cond = self.expr()
        close = self.expect(")")
        body = self.statement()
        return self.finish(A.While(cond, body, sid=sid, span=self.span(first, self.prev(), first, close)))

    def for_stmt(self):
        sid = self.new_sid()
        first = self.expect("for")
        self.expect("(")
        init = None
        if not self.at(";"):
            t = self.tok
            if t.kind == "kw" and t.text in TYPE_WORDS:
                init = self.declaration(self.new_sid(), t, terminated=False)
            else:
                init_sid = self.new_sid()
                init = self.finish(_respan(self.simple(init_sid, t), self.span(t, self.prev())))
        self.expect(";")
        cond = None
        cond_first = self.tok
        if not self.at(";"):
            cond = self.expr()
        cond_last = self.prev() if cond is not None else None
        self.expect(";")
        update = None
        if not self.at(")"):
            t = self.tok
            update_sid = self.new_sid()
            update = self.finish(_respan(self.simple(update_sid, t), self.span(t, self.prev())))
        self.expect(")")
        body = self.statement()
        if cond is not None:
            span = self.span(first, self.prev(), cond_first, cond_last)
        else:
            span = self.span(first, self.prev(), first, first)
        return self.finish(A.For(init, cond, update, body, sid=sid, span=span))

    def simple(self, sid, first):
        """Assignment, increment/decrement or call (without the ';')."""
        if self.at("++") or self.at("--"):
            op = self.advance().text
            target = self.postfix()
            self.require_lvalue(target, first)
            return A.IncDec(op, target, True, sid=sid)
        left = self.expr()
        if self.tok.kind == "op" and self.tok.text in ASSIGN_OPS:
            op = self.advance().text
            self.require_lvalue(left, first)
            value = self.expr()
            if self.tok.kind == "op" and self.tok.text in ASSIGN_OPS:
                raise UnsupportedConstruct(self.tok.line, "nested assignment")
            return A.Assign(op, left, value, sid=sid)
        if self.at("++") or self.at("--"):
            op = self.advance().text
            self.require_lvalue(left, first)
            return A.IncDec(op, left, False, sid=sid)
        if isinstance(left, A.Call):
            return A.ExprStmt(left, sid=sid)
        raise UnsupportedConstruct(first.line, "expression statement without effect")

    def require_lvalue(self, expr, tok):
        if not isinstance(expr, (A.Name, A.Index)):
            raise UnsupportedConstruct(tok.line, "assignment to non-variable")

    # -- expressions ----------------------------------------------------------

    def expr(self):
        test = self.binary(0)
        if self.accept("?"):
            then = self.expr()
            self.expect(":")
            other = self.expr()
            return A.Cond(test, then, other)
        return test

    LEVELS = [("||",), ("&&",), ("==", "!="), ("<", ">", "<=", ">="), ("+", "-"), ("*", "/", "%")]

    def binary(self, level):
        if level == len(self.LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        ops = self.LEVELS[level]
        while self.tok.kind == "op" and self.tok.text in ops:
            op = self.advance().text
            right = self.binary(level + 1)
            left = A.Binary(op, left, right)
        return left

    def unary(self):
        t = self.tok
        if t.kind == "op":
            if t.text in ("-", "+", "!"):
                self.advance()
                return A.Unary(t.text, self.unary())
            if t.text == "&":
                self.advance()
                target = self.postfix()
                if not isinstance(target, (A.Name, A.Index)):
                    raise UnsupportedConstruct(t.line, "address-of expression")
                return A.AddrOf(target)
            if t.text == "*":
                raise UnsupportedConstruct(t.line, "pointer dereference")
            if t.text in ("++", "--"):
                raise UnsupportedConstruct(t.line, "increment inside expression")
            if t.text == "(" and self.peek().kind == "kw" and self.peek().text in TYPE_WORDS:
                self.advance()
                ctype = self.ctype()
                if ctype == "void":
                    raise UnsupportedConstruct(t.line, "void cast")
                self.expect(")")
                return A.Cast(ctype, self.unary())
        return self.postfix()

    def postfix(self):
        node = self.primary()
        while self.at("["):
            bracket = self.advance()
            if not isinstance(node, A.Name):
                raise UnsupportedConstruct(bracket.line, "multi-dimensional array")
            index = self.expr()
            self.expect("]")
            node = A.Index(node, index)
        return node

    def string(self):
        t = self.tok
        parts = []
        while self.tok.kind == "str":
            parts.append(self.advance().value)
        if not parts:
            self.error("expected a string literal", t)
        return A.StrLit("".join(parts))

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(t.value)
        if t.kind == "float":
            self.advance()
            return A.FloatLit(t.text)
        if t.kind == "char":
            self.advance()
            return A.CharLit(t.value)
        if t.kind == "str":
            return self.string()
        if t.kind == "id":
            self.advance()
            if self.at("("):
                self.advance()
                args = []
                while not self.at(")"):
                    args.append(self.expr())
                    if not self.accept(","):
                        break
                self.expect(")")
                return _CallAt(t.text, tuple(args), t.line)
            return A.Name(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.error("expected an expression")


def _CallAt(func, args, line):
    call = A.Call(func, args)
    object.__setattr__(call, "_line", line)
    return call


def _respan(stmt, span):
    object.__setattr__(stmt, "span", span)
    return stmt


# -- semantic checks --------------------------------------------------------

def printf_directives(fmt):
    """Conversions in a printf format as ``(flags, width, precision, length, conv)``."""
    out = []
    for m in PRINTF_DIRECTIVE.finditer(fmt):
        if m.group(5) != "%":
            out.append(m.groups())
    return out


def scanf_directives(fmt):
    out = []
    for m in SCANF_DIRECTIVE.finditer(fmt):
        if m.group(3) != "%":
            out.append(m.groups())
    return out


class _Checker:
    """Rejects programs the interpreter could not run."""

    def __init__(self, tree):
        self.tree = tree
        self.funcs = {f.name: f for f in tree.functions}
        self.calls = {f.name: set() for f in tree.functions}

    def check(self):
        if "main" not in self.funcs:
            raise CSyntaxError(1, 1, "no 'main' function")
        main = self.funcs["main"]
        if main.ret != "int" or main.params:
            raise UnsupportedConstruct(main.span.first_line, "main signature")
        for f in self.tree.functions:
            self.current = f
            scope = [{p.name: (p.ctype, p.is_array) for p in f.params}]
            self.block(f.body, scope)
        self.no_recursion()

    def no_recursion(self):
        state = {}

        def visit(name):
            state[name] = 1
            for callee in self.calls[name]:
                if state.get(callee) == 1:
                    raise UnsupportedConstruct(self.funcs[callee].span.first_line, "recursion")
                if callee not in state:
                    visit(callee)
            state[name] = 2

        for name in self.funcs:
            if name not in state:
                visit(name)

    def line(self, stmt):
        return stmt.span.first_line if stmt.span else 0

    def block(self, block, scope):
        scope = scope + [{}]
        for s in block.body:
            self.stmt(s, scope)

    def lookup(self, name, scope, line):
        for frame in reversed(scope):
            if name in frame:
                return frame[name]
        raise CSyntaxError(line, 1, f"undeclared identifier '{name}'")

    def stmt(self, s, scope):
        line = self.line(s)
        if isinstance(s, A.Block):
            self.block(s, scope)
        elif isinstance(s, A.Decl):
            for d in s.items:
                if d.name in scope[-1]:
                    raise CSyntaxError(line, 1, f"redeclaration of '{d.name}'")
                if isinstance(d.init, tuple):
                    for e in d.init:
                        self.scalar(e, scope, line)
                elif isinstance(d.init, A.Expr) and not isinstance(d.init, A.StrLit):
                    self.scalar(d.init, scope, line)
                scope[-1][d.name] = (s.ctype, d.size is not None)
        elif isinstance(s, A.Assign):
            ctype = self.lvalue(s.target, scope, line)
            vtype = self.scalar(s.value, scope, line)
            if s.op == "%=" and (ctype == "float" or vtype == "float"):
                raise CSyntaxError(line, 1, "'%' on float operands")
        elif isinstance(s, A.IncDec):
            self.lvalue(s.target, scope, line)
        elif isinstance(s, A.ExprStmt):
            self.call(s.expr, scope, line)
        elif isinstance(s, A.If):
            self.scalar(s.cond, scope, line)
            self.stmt(s.then, scope + [{}])
            if s.other is not None:
                self.stmt(s.other, scope + [{}])
        elif isinstance(s, A.While):
            self.scalar(s.cond, scope, line)
            self.stmt(s.body, scope + [{}])
        elif isinstance(s, A.For):
            inner = scope + [{}]
            if s.init is not None:
                self.stmt(s.init, inner)
            if s.cond is not None:
                self.scalar(s.cond, inner, line)
            if s.update is not None:
                self.stmt(s.update, inner)
            self.stmt(s.body, inner + [{}])
        elif isinstance(s, A.Return):
            if self.current.ret == "void":
                if s.value is not None:
                    raise CSyntaxError(line, 1, "return with a value in void function")
            else:
                if s.value is None:
                    raise CSyntaxError(line, 1, "return without a value")
                self.scalar(s.value, scope, line)

    def lvalue(self, e, scope, line):
        if isinstance(e, A.Name):
            ctype, is_array = self.lookup(e.id, scope, line)
            if is_array:
                raise CSyntaxError(line, 1, f"assignment to array '{e.id}'")
            return ctype
        ctype, is_array = self.lookup(e.base.id, scope, line)
        if not is_array:
            raise CSyntaxError(line, 1, f"subscript of non-array '{e.base.id}'")
        if self.scalar(e.index, scope, line) == "float":
            raise CSyntaxError(line, 1, "float array index")
        return ctype

    def scalar(self, e, scope, line):
        """Check an rvalue expression and return its static type."""
        if isinstance(e, A.IntLit):
            return "int"
        if isinstance(e, A.CharLit):
            return "int"
        if isinstance(e, A.FloatLit):
            return "float"
        if isinstance(e, A.StrLit):
            raise UnsupportedConstruct(line, "string value")
        if isinstance(e, A.AddrOf):
            raise UnsupportedConstruct(line, "address-of outside scanf")
        if isinstance(e, A.Name):
            ctype, is_array = self.lookup(e.id, scope, line)
            if is_array:
                raise UnsupportedConstruct(line, "array used as a value")
            return "float" if ctype == "float" else "int"
        if isinstance(e, A.Index):
            return "float" if self.lvalue(e, scope, line) == "float" else "int"
        if isinstance(e, A.Unary):
            t = self.scalar(e.operand, scope, line)
            return "int" if e.op == "!" else t
        if isinstance(e, A.Binary):
            lt = self.scalar(e.left, scope, line)
            rt = self.scalar(e.right, scope, line)
            if e.op == "%" and "float" in (lt, rt):
                raise CSyntaxError(line, 1, "'%' on float operands")
            if e.op in ("+", "-", "*", "/", "%"):
                return "float" if "float" in (lt, rt) else "int"
            return "int"
        if isinstance(e, A.Cond):
            self.scalar(e.test, scope, line)
            a = self.scalar(e.then, scope, line)
            b = self.scalar(e.other, scope, line)
            return "float" if "float" in (a, b) else "int"
        if isinstance(e, A.Cast):
            self.scalar(e.operand, scope, line)
            return "float" if e.ctype == "float" else "int"
        if isinstance(e, A.Call):
            ret = self.call(e, scope, line)
            if ret == "void":
                raise CSyntaxError(line, 1, f"void value of '{e.func}' used")
            return "float" if ret == "float" else "int"
        raise CSyntaxError(line, 1, f"unexpected expression {type(e).__name__}")

    def call(self, call, scope, line):
        line = getattr(call, "_line", line)
        if call.func == "printf":
            return self.printf(call, scope, line)
        if call.func == "scanf":
            return self.scanf(call, scope, line)
        if call.func not in self.funcs:
            raise UnsupportedConstruct(line, f"call to '{call.func}'")
        callee = self.funcs[call.func]
        self.calls[self.current.name].add(call.func)
        if len(call.args) != len(callee.params):
            raise CSyntaxError(line, 1, f"wrong number of arguments to '{call.func}'")
        for arg, param in zip(call.args, callee.params):
            if param.is_array:
                if not isinstance(arg, A.Name):
                    raise CSyntaxError(line, 1, "array argument expected")
                ctype, is_array = self.lookup(arg.id, scope, line)
                if not is_array or ctype != param.ctype:
                    raise CSyntaxError(line, 1, f"array of {param.ctype} expected")
            else:
                self.scalar(arg, scope, line)
        return callee.ret

    def printf(self, call, scope, line):
        if not call.args or not isinstance(call.args[0], A.StrLit):
            raise UnsupportedConstruct(line, "printf without literal format")
        fmt = call.args[0].value
        directives = printf_directives(fmt)
        stripped = PRINTF_DIRECTIVE.sub("", fmt)
        if "%" in stripped:
            raise UnsupportedConstruct(line, "printf directive")
        if len(directives) != len(call.args) - 1:
            raise CSyntaxError(line, 1, "printf argument count mismatch")
        for (flags, width, prec, length, conv), arg in zip(directives, call.args[1:]):
            if conv not in "dicfs" or (length and conv != "f"):
                raise UnsupportedConstruct(line, f"printf %{length}{conv}")
            if conv == "s":
                if not isinstance(arg, A.Name):
                    raise UnsupportedConstruct(line, "printf %s argument")
                ctype, is_array = self.lookup(arg.id, scope, line)
                if not (is_array and ctype == "char"):
                    raise CSyntaxError(line, 1, "%s needs a char array")
                continue
            t = self.scalar(arg, scope, line)
            if (conv == "f") != (t == "float"):
                raise UnsupportedConstruct(line, f"printf %{conv} with {t} argument")
        return "int"

    def scanf(self, call, scope, line):
        if not call.args or not isinstance(call.args[0], A.StrLit):
            raise UnsupportedConstruct(line, "scanf without literal format")
        fmt = call.args[0].value
        directives = scanf_directives(fmt)
        if "%" in SCANF_DIRECTIVE.sub("", fmt):
            raise UnsupportedConstruct(line, "scanf directive")
        if len(directives) != len(call.args) - 1:
            raise CSyntaxError(line, 1, "scanf argument count mismatch")
        for (width, length, conv), arg in zip(directives, call.args[1:]):
            if width or conv not in "dcfs" or (length and conv != "f"):
                raise UnsupportedConstruct(line, f"scanf %{width}{length}{conv}")
            if conv == "s":
                if not isinstance(arg, A.Name):
                    raise UnsupportedConstruct(line, "scanf %s argument")
                ctype, is_array = self.lookup(arg.id, scope, line)
                if not (is_array and ctype == "char"):
                    raise CSyntaxError(line, 1, "%s needs a char array")
                continue
            if not isinstance(arg, A.AddrOf):
                raise UnsupportedConstruct(line, "scanf argument without '&'")
            ctype = self.lvalue(arg.target, scope, line)
            want = {"d": "int", "c": "char", "f": "float"}[conv]
            if ctype != want:
                raise UnsupportedConstruct(line, f"scanf %{conv} into {ctype}")
        return "int"
