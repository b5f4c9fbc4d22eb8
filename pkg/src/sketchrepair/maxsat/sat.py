"""A small incremental CDCL SAT solver.

Watched literals, first-UIP clause learning, VSIDS-style activities kept in
a lazy binary heap, phase saving and Luby restarts. Literals use the DIMACS
convention (non-zero signed ints) at the interface.
"""

import heapq
import time


class Timeout(Exception):
    pass


def luby(i):
    """i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


def _code(lit):
    return (lit << 1) if lit > 0 else ((-lit) << 1) | 1


class Solver:
    RESTART_BASE = 64

    def __init__(self):
        self.nvars = 0
        self.val = [0, 0]  # per literal code: 1 true, -1 false, 0 free
        self.level = [0]
        self.reason = [None]
        self.activity = [0.0]
        self.polarity = [False]
        self.seen = [0]
        self.watches = [[], []]
        self.clauses = []
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.heap = []
        self.inc = 1.0
        self.ok = True
        self.conflicts = 0
        self.model = None

    # -- problem construction ---------------------------------------------

    def new_var(self):
        self.nvars += 1
        v = self.nvars
        self.val += [0, 0]
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.polarity.append(False)
        self.seen.append(0)
        self.watches += [[], []]
        heapq.heappush(self.heap, (0.0, v))
        return v

    def ensure_vars(self, n):
        while self.nvars < n:
            self.new_var()

    def add_clause(self, lits):
        """Add a clause; returns False once the formula is known unsatisfiable."""
        if not self.ok:
            return False
        self._cancel_until(0)
        codes = []
        for lit in lits:
            if lit == 0 or abs(lit) > self.nvars:
                raise ValueError(f"literal {lit} out of range")
            c = _code(lit)
            if self.val[c] == 1 or (c ^ 1) in codes:
                return True
            if self.val[c] == 0 and c not in codes:
                codes.append(c)
        if not codes:
            self.ok = False
            return False
        if len(codes) == 1:
            self._enqueue(codes[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        idx = len(self.clauses)
        self.clauses.append(codes)
        self.watches[codes[0]].append(idx)
        self.watches[codes[1]].append(idx)
        return True

    # -- core ----------------------------------------------------------------

    def _enqueue(self, c, reason):
        v = c >> 1
        self.val[c] = 1
        self.val[c ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(c)

    def _propagate(self):
        val = self.val
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        qhead = self.qhead
        while qhead < len(trail):
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            keep = []
            i = 0
            n = len(ws)
            while i < n:
                idx = ws[i]
                i += 1
                cl = clauses[idx]
                first = cl[0]
                if first == false_lit:
                    first = cl[1]
                    cl[0] = first
                    cl[1] = false_lit
                if val[first] == 1:
                    keep.append(idx)
                    continue
                for k in range(2, len(cl)):
                    if val[cl[k]] != -1:
                        lit = cl[k]
                        cl[1] = lit
                        cl[k] = false_lit
                        watches[lit].append(idx)
                        break
                else:
                    keep.append(idx)
                    if val[first] == -1:
                        keep.extend(ws[i:])
                        watches[false_lit] = keep
                        self.qhead = len(trail)
                        return idx
                    # inlined _enqueue
                    val[first] = 1
                    val[first ^ 1] = -1
                    level[first >> 1] = lvl
                    reason[first >> 1] = idx
                    trail.append(first)
            watches[false_lit] = keep
        self.qhead = qhead
        return None

    def _bump(self, v):
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.inc *= 1e-100
            self._rebuild_heap()

    def _rebuild_heap(self):
        self.heap = [(-self.activity[v], v) for v in range(1, self.nvars + 1)
                     if self.val[v << 1] == 0]
        heapq.heapify(self.heap)

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        cur = len(self.trail_lim)
        learnt = [None]
        counter = 0
        p = None
        idx = len(self.trail) - 1
        touched = []
        while True:
            cl = self.clauses[confl]
            for q in cl if p is None else cl[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    touched.append(v)
                    self._bump(v)
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            seen[p >> 1] = 0
            counter -= 1
            if counter == 0:
                break
            confl = self.reason[p >> 1]
        learnt[0] = p ^ 1
        for v in touched:
            seen[v] = 0
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: level[learnt[k] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        val, reason, polarity = self.val, self.reason, self.polarity
        activity, heap = self.activity, self.heap
        push = heapq.heappush
        trail = self.trail
        for j in range(stop, len(trail)):
            c = trail[j]
            v = c >> 1
            val[c] = 0
            val[c ^ 1] = 0
            reason[v] = None
            polarity[v] = not (c & 1)
            push(heap, (-activity[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)
        if len(heap) > 8 * self.nvars + 64:
            self._rebuild_heap()

    def _pick(self):
        heap = self.heap
        while heap:
            _, v = heapq.heappop(heap)
            if self.val[v << 1] == 0:
                return (v << 1) | (0 if self.polarity[v] else 1)
        return None

    def solve(self, assumptions=(), deadline=None):
        """Decide satisfiability under ``assumptions`` (DIMACS literals).

        On success ``self.model`` holds a list indexed by variable (index 0
        unused). ``deadline`` is a ``time.monotonic()`` instant.
        """
        self.model = None
        if not self.ok:
            return False
        assume = [_code(a) for a in assumptions]
        for a in assumptions:
            if abs(a) > self.nvars:
                raise ValueError(f"assumption {a} out of range")
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        restarts = 0
        try:
            while True:
                limit = luby(restarts) * self.RESTART_BASE
                res = self._search(limit, assume, deadline)
                if res is not None:
                    return res
                restarts += 1
        finally:
            self._cancel_until(0)

    def _search(self, limit, assume, deadline):
        local = 0
        steps = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                local += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[learnt[0]].append(idx)
                    self.watches[learnt[1]].append(idx)
                    self._enqueue(learnt[0], idx)
                self.inc /= 0.95
                if deadline is not None and not self.conflicts & 0xFF and time.monotonic() > deadline:
                    raise Timeout()
                continue
            steps += 1
            if deadline is not None and not steps & 0x3F and time.monotonic() > deadline:
                raise Timeout()
            if local >= limit:
                self._cancel_until(0)
                return None
            nxt = None
            while len(self.trail_lim) < len(assume):
                a = assume[len(self.trail_lim)]
                if self.val[a] == 1:
                    self.trail_lim.append(len(self.trail))
                elif self.val[a] == -1:
                    return False
                else:
                    nxt = a
                    break
            if nxt is None:
                nxt = self._pick()
                if nxt is None:
                    self.model = [False] + [self.val[v << 1] == 1 for v in range(1, self.nvars + 1)]
                    return True
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, None)
