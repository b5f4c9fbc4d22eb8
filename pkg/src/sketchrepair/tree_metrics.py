"""Tree edit distance over program syntax trees, and scores built on it."""

from dataclasses import dataclass, fields

from .lang import ast as A


class EmptyCorpus(Exception):
    pass


@dataclass(frozen=True)
class LabelTree:
    label: str
    children: tuple = ()

    def size(self):
        return 1 + sum(c.size() for c in self.children)

    def postorder(self):
        for c in self.children:
            yield from c.postorder()
        yield self


_SKIP = {"sid", "span"}


def _label(node):
    parts = [type(node).__name__]
    for f in fields(node):
        if f.name in _SKIP or not f.compare:
            continue
        value = getattr(node, f.name)
        if value is None or isinstance(value, (A.Node, tuple)):
            continue
        parts.append(repr(value) if isinstance(value, str) else str(value))
    return ":".join(parts)


def _convert(node):
    kids = []
    for f in fields(node):
        if not f.compare:
            continue
        value = getattr(node, f.name)
        if isinstance(value, A.Node):
            kids.append(_convert(value))
        elif isinstance(value, tuple):
            kids.extend(_convert(v) for v in value if isinstance(v, A.Node))
        elif value is None and f.name in ("init", "cond", "update") and isinstance(node, A.For):
            # keep the three for-header slots aligned
            kids.append(LabelTree("Missing"))
    return LabelTree(_label(node), tuple(kids))


def label_tree(program):
    """Canonical labeled tree of a program; comments and layout are ignored."""
    if isinstance(program, LabelTree):
        return program
    tree = getattr(program, "tree", program)
    return _convert(tree)


class _Indexed:
    """Postorder arrays needed by the Zhang-Shasha recurrence."""

    def __init__(self, tree):
        self.labels = []
        self.lmd = []
        self._walk(tree)
        n = len(self.labels)
        seen = set()
        roots = []
        for i in range(n - 1, -1, -1):
            if self.lmd[i] not in seen:
                seen.add(self.lmd[i])
                roots.append(i)
        self.keyroots = sorted(roots)

    def _walk(self, node):
        first = None
        for c in node.children:
            leftmost = self._walk(c)
            if first is None:
                first = leftmost
        idx = len(self.labels)
        self.labels.append(node.label)
        self.lmd.append(idx if first is None else first)
        return self.lmd[idx]


def ted(a, b):
    """Unit-cost tree edit distance (insert, delete, relabel)."""
    ta, tb = _Indexed(label_tree(a)), _Indexed(label_tree(b))
    la, lb = ta.lmd, tb.lmd
    na, nb = len(ta.labels), len(tb.labels)
    dist = [[0] * nb for _ in range(na)]
    for i in ta.keyroots:
        for j in tb.keyroots:
            li, lj = la[i], lb[j]
            rows = i - li + 2
            cols = j - lj + 2
            fd = [[0] * cols for _ in range(rows)]
            for x in range(1, rows):
                fd[x][0] = x
            for y in range(1, cols):
                fd[0][y] = y
            for x in range(1, rows):
                ix = li + x - 1
                for y in range(1, cols):
                    jy = lj + y - 1
                    if la[ix] == li and lb[jy] == lj:
                        relabel = 0 if ta.labels[ix] == tb.labels[jy] else 1
                        v = min(fd[x - 1][y] + 1, fd[x][y - 1] + 1, fd[x - 1][y - 1] + relabel)
                        fd[x][y] = v
                        dist[ix][jy] = v
                    else:
                        px = la[ix] - li
                        py = lb[jy] - lj
                        fd[x][y] = min(fd[x - 1][y] + 1, fd[x][y - 1] + 1,
                                       fd[px][py] + dist[ix][jy])
    if na == 0:
        return nb
    if nb == 0:
        return na
    return dist[na - 1][nb - 1]


def score_from_teds(fix_to_orig, ref_to_orig):
    if ref_to_orig == 0:
        return 1.0 if fix_to_orig == 0 else 0.0
    return max(0.0, 1.0 - fix_to_orig / ref_to_orig)


def distance_score(t_f, t_o, t_r):
    """Patch quality in [0, 1]: 1 for an untouched program, 0 for a change
    at least as large as the distance to the reference."""
    return score_from_teds(ted(t_f, t_o), ted(t_r, t_o))


@dataclass(frozen=True)
class CorpusMatch:
    id: object
    program: object
    distance: int


def closest_correct(buggy, corpus):
    """Entry of ``corpus`` (pairs ``(id, program)``) nearest to ``buggy``.

    Ties go to the smallest id.
    """
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("no correct programs to compare against")
    base = label_tree(buggy)
    best = None
    for cid, prog in sorted(corpus, key=lambda e: e[0]):
        d = ted(base, prog)
        if best is None or d < best.distance:
            best = CorpusMatch(cid, prog, d)
    return best
