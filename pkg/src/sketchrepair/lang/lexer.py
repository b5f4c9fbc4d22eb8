"""Tokenizer for the C subset.

Comments are kept aside as trivia; ``#include`` lines are dropped, any other
preprocessor directive is rejected.
"""

import re
from dataclasses import dataclass

from .errors import CSyntaxError, UnsupportedConstruct

KEYWORDS = {"int", "float", "char", "void", "if", "else", "while", "for", "return"}

UNSUPPORTED_KEYWORDS = {
    "double", "long", "short", "unsigned", "signed", "struct", "union", "enum",
    "switch", "case", "default", "do", "break", "continue", "goto", "typedef",
    "static", "const", "sizeof", "extern", "register", "volatile", "auto",
}

OPERATORS = [
    "<<=", ">>=", "...",
    "++", "--", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&", "||",
    "->", "<<", ">>", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "?", ":", ";", ",", "(", ")",
    "{", "}", "[", "]", "&", "|", "^", "~", ".",
]
UNSUPPORTED_OPERATORS = {"<<=", ">>=", "...", "->", "<<", ">>", "&=", "|=", "^=", "|", "^", "~", "."}

ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\", "'": "'", '"': '"', "a": "\a", "b": "\b", "f": "\f", "v": "\v", "?": "?"}

_NUMBER = re.compile(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?([fF]|[uUlL]+)?")
_IDENT = re.compile(r"[A-Za-z_]\w*")
_HOLE = re.compile(r"@\s*HOLES?\s+(\d+)\s*@")


@dataclass(frozen=True)
class Token:
    kind: str  # id kw int float char str op hole eof
    text: str
    line: int
    col: int
    start: int
    end: int
    value: object = None


@dataclass(frozen=True)
class Comment:
    text: str
    line: int
    start: int
    end: int


def _unescape(body, line, col):
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body):
                raise CSyntaxError(line, col, "dangling escape")
            nxt = body[i + 1]
            if nxt in ESCAPES:
                out.append(ESCAPES[nxt])
                i += 2
                continue
            raise CSyntaxError(line, col, f"unknown escape '\\{nxt}'")
        out.append(ch)
        i += 1
    return "".join(out)


def tokenize(source, sketch=False):
    """Split ``source`` into tokens; returns ``(tokens, comments)``."""
    tokens = []
    comments = []
    i = 0
    n = len(source)
    line = 1
    line_start = 0

    def col():
        return i - line_start + 1

    at_line_start = True
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            line_start = i
            at_line_start = True
            continue
        if ch in " \t\r\f\v":
            i += 1
            continue
        if ch == "#" and at_line_start:
            end = source.find("\n", i)
            end = n if end < 0 else end
            directive = source[i:end].strip()
            if not re.match(r"#\s*include\b", directive):
                name = re.match(r"#\s*(\w*)", directive).group(1)
                raise UnsupportedConstruct(line, "#" + name)
            i = end
            continue
        at_line_start = False
        if source.startswith("//", i):
            end = source.find("\n", i)
            end = n if end < 0 else end
            comments.append(Comment(source[i:end], line, i, end))
            i = end
            continue
        if source.startswith("/*", i):
            end = source.find("*/", i + 2)
            if end < 0:
                raise CSyntaxError(line, col(), "unterminated comment")
            end += 2
            comments.append(Comment(source[i:end], line, i, end))
            line += source.count("\n", i, end)
            last_nl = source.rfind("\n", i, end)
            if last_nl >= 0:
                line_start = last_nl + 1
            i = end
            continue
        if ch == "@":
            m = _HOLE.match(source, i)
            if m and sketch:
                tokens.append(Token("hole", m.group(0), line, col(), i, m.end(), int(m.group(1))))
                i = m.end()
                continue
            raise CSyntaxError(line, col(), "unexpected '@'")
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER.match(source, i)
            text = m.group(0)
            suffix = m.group(3) or ""
            if any(c in "uUlL" for c in suffix):
                raise UnsupportedConstruct(line, "integer suffix " + suffix)
            if i + len(text) < n and (source[i + len(text)].isalnum() or source[i + len(text)] == "_"):
                raise CSyntaxError(line, col(), f"malformed number '{text}{source[i + len(text)]}'")
            is_float = "." in m.group(1) or m.group(2) is not None or suffix in ("f", "F")
            if is_float:
                tokens.append(Token("float", text, line, col(), i, i + len(text), float(text.rstrip("fF"))))
            else:
                if len(text) > 1 and text.startswith("0"):
                    raise UnsupportedConstruct(line, "octal literal")
                tokens.append(Token("int", text, line, col(), i, i + len(text), int(text)))
            i += len(text)
            continue
        if ch.isalpha() or ch == "_":
            m = _IDENT.match(source, i)
            word = m.group(0)
            if word in UNSUPPORTED_KEYWORDS:
                raise UnsupportedConstruct(line, word)
            kind = "kw" if word in KEYWORDS else "id"
            tokens.append(Token(kind, word, line, col(), i, m.end(), word))
            i = m.end()
            continue
        if ch in "'\"":
            quote = ch
            j = i + 1
            while j < n and source[j] != quote:
                if source[j] == "\\":
                    j += 1
                if j < n and source[j] == "\n":
                    raise CSyntaxError(line, col(), "newline in literal")
                j += 1
            if j >= n:
                raise CSyntaxError(line, col(), "unterminated literal")
            body = _unescape(source[i + 1:j], line, col())
            text = source[i:j + 1]
            if quote == "'":
                if len(body) != 1:
                    raise CSyntaxError(line, col(), f"bad character literal {text}")
                tokens.append(Token("char", text, line, col(), i, j + 1, ord(body)))
            else:
                tokens.append(Token("str", text, line, col(), i, j + 1, body))
            i = j + 1
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                if op in UNSUPPORTED_OPERATORS:
                    raise UnsupportedConstruct(line, op)
                tokens.append(Token("op", op, line, col(), i, i + len(op), op))
                i += len(op)
                break
        else:
            raise CSyntaxError(line, col(), f"unexpected character {ch!r}")
    tokens.append(Token("eof", "", line, i - line_start + 1, n, n))
    return tokens, comments
