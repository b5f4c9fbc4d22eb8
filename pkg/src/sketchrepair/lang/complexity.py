from dataclasses import dataclass

from . import ast as A


@dataclass(frozen=True)
class Complexity:
    per_function: dict
    average: float


def _decisions(node):
    count = 0
    for n in A.walk(node):
        if isinstance(n, (A.If, A.While, A.For, A.Cond)):
            count += 1
        elif isinstance(n, A.Binary) and n.op in ("&&", "||"):
            count += 1
    return count


def cyclomatic_complexity(ast):
    """McCabe number per function: one plus each if/while/for/ternary and
    every ``&&``/``||`` operator. ``average`` is the mean over functions."""
    tree = getattr(ast, "tree", ast)
    per = {f.name: 1 + _decisions(f.body) for f in tree.functions}
    return Complexity(per, sum(per.values()) / len(per))
