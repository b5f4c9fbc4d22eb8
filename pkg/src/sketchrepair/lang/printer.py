"""Canonical C text for syntax trees."""

from . import ast as A

INDENT = "    "

# binding strength, higher binds tighter
_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, ">": 4, "<=": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}
_COND, _UNARY, _POSTFIX = 0, 7, 8

_ESC = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\0": "\\0", "\\": "\\\\", "\a": "\\a",
        "\b": "\\b", "\f": "\\f", "\v": "\\v"}


def quote(text, q='"'):
    out = []
    for ch in text:
        if ch == q:
            out.append("\\" + q)
        elif ch in _ESC:
            out.append(_ESC[ch])
        else:
            out.append(ch)
    return q + "".join(out) + q


def expr_text(e, parent=-1):
    if isinstance(e, A.IntLit):
        return str(e.value)
    if isinstance(e, A.FloatLit):
        return e.text
    if isinstance(e, A.CharLit):
        return quote(chr(e.value), "'")
    if isinstance(e, A.StrLit):
        return quote(e.value)
    if isinstance(e, A.Name):
        return e.id
    if isinstance(e, A.Index):
        return f"{e.base.id}[{expr_text(e.index)}]"
    if isinstance(e, A.Call):
        return f"{e.func}({', '.join(expr_text(a) for a in e.args)})"
    if isinstance(e, A.AddrOf):
        return "&" + expr_text(e.target, _UNARY)
    if isinstance(e, A.Unary):
        inner = expr_text(e.operand, _UNARY)
        # keep "- -x" from turning into the "--" token
        sep = " " if inner[:1] in "-+" else ""
        return _wrap(e.op + sep + inner, _UNARY, parent)
    if isinstance(e, A.Cast):
        return _wrap(f"({e.ctype}) {expr_text(e.operand, _UNARY)}", _UNARY, parent)
    if isinstance(e, A.Binary):
        p = _PREC[e.op]
        left = expr_text(e.left, p)
        right = expr_text(e.right, p + 1)
        return _wrap(f"{left} {e.op} {right}", p, parent, left_assoc_ok=True)
    if isinstance(e, A.Cond):
        text = f"{expr_text(e.test, _COND + 1)} ? {expr_text(e.then)} : {expr_text(e.other, _COND)}"
        return _wrap(text, _COND, parent)
    raise TypeError(f"not an expression: {e!r}")


def _wrap(text, prec, parent, left_assoc_ok=False):
    if prec < parent or (prec == parent and not left_assoc_ok):
        return f"({text})"
    return text


def _decl_text(s):
    parts = []
    for d in s.items:
        t = d.name
        if d.size is not None:
            t += f"[{d.size}]"
        if isinstance(d.init, tuple):
            t += " = {" + ", ".join(expr_text(v) for v in d.init) + "}"
        elif d.init is not None:
            t += " = " + expr_text(d.init)
        parts.append(t)
    return f"{s.ctype} {', '.join(parts)}"


def simple_text(s):
    if isinstance(s, A.Decl):
        return _decl_text(s)
    if isinstance(s, A.Assign):
        return f"{expr_text(s.target)} {s.op} {expr_text(s.value)}"
    if isinstance(s, A.IncDec):
        t = expr_text(s.target)
        return s.op + t if s.prefix else t + s.op
    if isinstance(s, A.ExprStmt):
        return expr_text(s.expr)
    raise TypeError(f"not a simple statement: {s!r}")


def _stmt_lines(s, depth, out):
    pad = INDENT * depth
    if isinstance(s, A.Block):
        out.append(pad + "{")
        for c in s.body:
            _stmt_lines(c, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(s, A.If):
        out.append(f"{pad}if ({expr_text(s.cond)})")
        _body(s.then, depth, out)
        other = s.other
        while other is not None:
            if isinstance(other, A.If):
                out.append(f"{pad}else if ({expr_text(other.cond)})")
                _body(other.then, depth, out)
                other = other.other
            else:
                out.append(pad + "else")
                _body(other, depth, out)
                other = None
    elif isinstance(s, A.While):
        out.append(f"{pad}while ({expr_text(s.cond)})")
        _body(s.body, depth, out)
    elif isinstance(s, A.For):
        init = simple_text(s.init) if s.init is not None else ""
        cond = expr_text(s.cond) if s.cond is not None else ""
        update = simple_text(s.update) if s.update is not None else ""
        out.append(f"{pad}for ({init}; {cond}; {update})".replace("; )", ";)"))
        _body(s.body, depth, out)
    elif isinstance(s, A.Return):
        out.append(pad + ("return;" if s.value is None else f"return {expr_text(s.value)};"))
    elif isinstance(s, A.Empty):
        out.append(pad + ";")
    elif isinstance(s, A.Hole):
        out.append(f"{pad}@ HOLE {s.number} @")
    else:
        out.append(pad + simple_text(s) + ";")


def _body(s, depth, out):
    if isinstance(s, A.Block):
        _stmt_lines(s, depth, out)
    else:
        _stmt_lines(s, depth + 1, out)


def _signature(f):
    params = ", ".join(f"{p.ctype} {p.name}" + ("[]" if p.is_array else "") for p in f.params)
    return f"{f.ret} {f.name}({params or ''})"


def pretty_print(ast):
    """Render a program (``ProgramAst`` or bare ``Program``) as C text."""
    tree = getattr(ast, "tree", ast)
    out = ["#include <stdio.h>", ""]
    helpers = [f for f in tree.functions if f.name != "main"]
    for f in helpers:
        out.append(_signature(f) + ";")
    if helpers:
        out.append("")
    for i, f in enumerate(tree.functions):
        if i:
            out.append("")
        out.append(_signature(f))
        _stmt_lines(f.body, 0, out)
    return "\n".join(out) + "\n"
