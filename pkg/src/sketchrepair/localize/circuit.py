"""Gate-level circuit builder emitting CNF into a Wcnf.

Literals are DIMACS ints. Variable 1 is fixed true, so ``TRUE = 1`` and
``FALSE = -1``. Gates fold constants and are structurally hashed.
Bit-vectors are tuples of literals, least significant bit first, with
two's-complement semantics.
"""

from ..maxsat import Wcnf

TRUE = 1
FALSE = -1


class Circuit:
    def __init__(self):
        self.f = Wcnf()
        self.f.new_var()
        self.f.add_hard([TRUE])
        self._and = {}
        self._xor = {}
        self._ite = {}

    # -- plumbing -----------------------------------------------------------

    def var(self):
        return self.f.new_var()

    def clause(self, lits):
        lits = [x for x in lits if x != FALSE]
        if TRUE in lits:
            return
        if not lits:
            raise ValueError("circuit asserted an empty clause")
        self.f.add_hard(lits)

    def assert_false(self, lit):
        """Hard constraint that ``lit`` does not hold."""
        if lit == TRUE:
            # unreachable under every assignment; keep the formula honest
            self.f.hard.append([FALSE])
            return
        self.clause([-lit])

    # -- boolean gates --------------------------------------------------------

    def and2(self, a, b):
        if a == FALSE or b == FALSE or a == -b:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        key = (a, b) if a < b else (b, a)
        g = self._and.get(key)
        if g is None:
            g = self.var()
            self.f.add_hard([-g, a])
            self.f.add_hard([-g, b])
            self.f.add_hard([g, -a, -b])
            self._and[key] = g
        return g

    def or2(self, a, b):
        return -self.and2(-a, -b)

    def all(self, lits):
        out = TRUE
        for x in lits:
            out = self.and2(out, x)
            if out == FALSE:
                break
        return out

    def any(self, lits):
        return -self.all([-x for x in lits])

    def xor2(self, a, b):
        if a in (TRUE, FALSE):
            return -b if a == TRUE else b
        if b in (TRUE, FALSE):
            return -a if b == TRUE else a
        if a == b:
            return FALSE
        if a == -b:
            return TRUE
        flip = (a < 0) != (b < 0)
        a, b = abs(a), abs(b)
        key = (a, b) if a < b else (b, a)
        g = self._xor.get(key)
        if g is None:
            g = self.var()
            self.f.add_hard([-g, a, b])
            self.f.add_hard([-g, -a, -b])
            self.f.add_hard([g, -a, b])
            self.f.add_hard([g, a, -b])
            self._xor[key] = g
        return -g if flip else g

    def iff(self, a, b):
        return -self.xor2(a, b)

    def ite(self, c, t, e):
        if c == TRUE or t == e:
            return t
        if c == FALSE:
            return e
        if t == TRUE:
            return self.or2(c, e)
        if t == FALSE:
            return self.and2(-c, e)
        if e == TRUE:
            return self.or2(-c, t)
        if e == FALSE:
            return self.and2(c, t)
        if t == -e:
            return self.iff(c, t)
        if c == t:
            return self.or2(c, e)
        if c == -t:
            return self.and2(-c, e)
        if c == e:
            return self.and2(c, t)
        if c == -e:
            return self.or2(-c, t)
        key = (c, t, e)
        g = self._ite.get(key)
        if g is None:
            g = self.var()
            self.f.add_hard([-g, -c, t])
            self.f.add_hard([-g, c, e])
            self.f.add_hard([g, -c, -t])
            self.f.add_hard([g, c, -e])
            self.f.add_hard([-g, t, e])
            self.f.add_hard([g, -t, -e])
            self._ite[key] = g
        return g

    # -- bit-vectors ------------------------------------------------------------

    @staticmethod
    def const(value, width):
        return tuple(TRUE if (value >> i) & 1 else FALSE for i in range(width))

    def fresh(self, width):
        return tuple(self.var() for _ in range(width))

    @staticmethod
    def value_of(bv):
        """Signed value of a constant vector, or None if any bit is symbolic."""
        v = 0
        for i, b in enumerate(bv):
            if b == TRUE:
                v |= 1 << i
            elif b != FALSE:
                return None
        if bv and bv[-1] == TRUE:
            v -= 1 << len(bv)
        return v

    @staticmethod
    def bnot(a):
        return tuple(-x for x in a)

    def bite(self, c, a, b):
        if c == TRUE:
            return a
        if c == FALSE:
            return b
        return tuple(self.ite(c, x, y) for x, y in zip(a, b))

    def add(self, a, b, carry=FALSE):
        out = []
        for x, y in zip(a, b):
            s = self.xor2(x, y)
            out.append(self.xor2(s, carry))
            carry = self.or2(self.and2(x, y), self.and2(s, carry))
        return tuple(out)

    def neg(self, a):
        return self.add(self.bnot(a), self.const(0, len(a)), TRUE)

    def sub(self, a, b):
        return self.add(a, self.bnot(b), TRUE)

    def mul(self, a, b):
        w = len(a)
        acc = self.const(0, w)
        for i, bi in enumerate(b):
            if bi == FALSE:
                continue
            partial = (FALSE,) * i + tuple(self.and2(x, bi) for x in a[: w - i])
            acc = self.add(acc, partial)
        return acc

    def eq(self, a, b):
        return self.all([self.iff(x, y) for x, y in zip(a, b)])

    def nonzero(self, a):
        return self.any(a)

    def ult(self, a, b):
        lt = FALSE
        for x, y in zip(a, b):
            lt = self.ite(self.xor2(x, y), y, lt)
        return lt

    def slt(self, a, b):
        a = a[:-1] + (-a[-1],)
        b = b[:-1] + (-b[-1],)
        return self.ult(a, b)

    def _udivmod(self, a, b):
        w = len(a)
        rem = self.const(0, w + 1)
        den = tuple(b) + (FALSE,)
        quot = [FALSE] * w
        for i in range(w - 1, -1, -1):
            rem = (a[i],) + rem[:-1]
            ge = -self.ult(rem, den)
            quot[i] = ge
            rem = self.bite(ge, self.sub(rem, den), rem)
        return tuple(quot), rem[:w]

    def sdivmod(self, a, b):
        """C division: quotient truncates toward zero, remainder takes the
        sign of the dividend."""
        sa, sb = a[-1], b[-1]
        ua = self.bite(sa, self.neg(a), a)
        ub = self.bite(sb, self.neg(b), b)
        q, r = self._udivmod(ua, ub)
        q = self.bite(self.xor2(sa, sb), self.neg(q), q)
        r = self.bite(sa, self.neg(r), r)
        return q, r

    def sext(self, a, width):
        if len(a) >= width:
            return tuple(a[:width])
        return tuple(a) + (a[-1],) * (width - len(a))

    def from_bool(self, lit, width):
        return (lit,) + (FALSE,) * (width - 1)
