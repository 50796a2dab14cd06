"""Reference semantics for testing.

A deliberately naive normal-order normalizer working on syntax trees with
capture-avoiding (de Bruijn) substitution, a seeded generator of closed
terms, and brute-force answers for the benchmark programs.  Nothing here
uses the spine machinery.
"""

from __future__ import annotations

import random

from . import term as T
from .errors import BudgetExceeded, DtorNonCtor, PrimTypeError


class Proj:
    """Payload extraction from an arbitrary term (a substituted destructor)."""

    __slots__ = ("of",)

    def __init__(self, of):
        self.of = of


class Unsupported(Exception):
    """The oracle reached a form with no syntax-tree counterpart."""


class _Stuck(Exception):
    pass


# -- substitution ------------------------------------------------------------------

_WORK = [0]  # nodes built by substitution in the current normalization


def _shift(t, d, cut=0):
    if d == 0:
        return t
    _WORK[0] += 1
    k = type(t)
    if k in (T.Var, T.VarT, T.Dtor):
        return k(t.index + d) if t.index >= cut else t
    if k is T.Apply:
        return T.Apply(_shift(t.fun, d, cut), _shift(t.arg, d, cut))
    if k is T.Lambda:
        return T.Lambda(t.name, _shift(t.annot, d, cut), _shift(t.body, d, cut + 1))
    if k is T.LetRec:
        return T.LetRec(t.name, _shift(t.annot, d, cut), _shift(t.rhs, d, cut + 1),
                        _shift(t.body, d, cut + 1))
    if k is T.Ctor:
        return t if t.payload is None else T.Ctor(t.tag, _shift(t.payload, d, cut))
    if k is T.Prim:
        return T.Prim(t.prim, _shift(t.annot, d, cut))
    if k is Proj:
        return Proj(_shift(t.of, d, cut))
    raise TypeError(t)


def _subst(t, val, typ, depth=0):
    """Replace index ``depth`` by ``val`` (its annotation by ``typ``) and
    close the gap.  ``val`` may be None when only the annotation is replaced."""
    _WORK[0] += 1
    k = type(t)
    if k in (T.Var, T.VarT, T.Dtor):
        i = t.index
        if i < depth:
            return t
        if i > depth:
            return k(i - 1) if val is not None else t
        if k is T.VarT:
            return _shift(typ, depth)
        if val is None:
            return t
        v = _shift(val, depth)
        return v if k is T.Var else Proj(v)
    if k is T.Apply:
        return T.Apply(_subst(t.fun, val, typ, depth), _subst(t.arg, val, typ, depth))
    if k is T.Lambda:
        return T.Lambda(t.name, _subst(t.annot, val, typ, depth),
                        _subst(t.body, val, typ, depth + 1))
    if k is T.LetRec:
        return T.LetRec(t.name, _subst(t.annot, val, typ, depth),
                        _subst(t.rhs, val, typ, depth + 1), _subst(t.body, val, typ, depth + 1))
    if k is T.Ctor:
        return t if t.payload is None else T.Ctor(t.tag, _subst(t.payload, val, typ, depth))
    if k is T.Prim:
        return T.Prim(t.prim, _subst(t.annot, val, typ, depth))
    if k is Proj:
        return Proj(_subst(t.of, val, typ, depth))
    raise TypeError(t)


def _unapply(t):
    args = []
    while type(t) is T.Apply:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def _reapply(h, args):
    for a in args:
        h = T.Apply(h, a)
    return h


_TRUE = T.Lambda("t", T.STAR_TERM, T.Lambda("f", T.STAR_TERM, T.Var(1)))
_FALSE = T.Lambda("t", T.STAR_TERM, T.Lambda("f", T.STAR_TERM, T.Var(0)))

_DELTA = {
    "addI": lambda a, b: T.int_lit(a + b),
    "subI": lambda a, b: T.int_lit(a - b),
    "mulI": lambda a, b: T.int_lit(a * b),
    "ltI": lambda a, b: _TRUE if a < b else _FALSE,
    "eqI": lambda a, b: _TRUE if a == b else _FALSE,
}


class Normalizer:
    """``budget`` bounds reductions.  Substitution is bounded separately by
    ``work`` copied nodes (default ten per unit of budget), since a few
    reductions can duplicate a term exponentially."""

    WORK_PER_STEP = 10

    def __init__(self, budget=10 ** 6, work=None):
        self.budget = budget
        self.work = budget * self.WORK_PER_STEP if work is None else work
        self.used = 0
        self._ints = {}

    def _tick(self):
        self.used += 1
        if self.used > self.budget:
            raise BudgetExceeded(f"oracle budget of {self.budget} reductions exceeded")
        if _WORK[0] > self.work:
            raise BudgetExceeded("oracle substitution work exceeded")

    def _int(self, t):
        # Terms are immutable and reduce independently of where they occur,
        # so argument values can be remembered; this is what keeps a
        # duplicated argument from being re-reduced at every occurrence.
        hit = self._ints.get(t)
        if hit is None:
            try:
                hit = self._int_uncached(t)
            except (_Stuck, PrimTypeError) as e:
                hit = e
            self._ints[t] = hit
        if isinstance(hit, Exception):
            raise hit
        return hit

    def _int_uncached(self, t):
        w = self.whnf(t)
        h, args = _unapply(w)
        if type(h) in (T.Var, T.VarT, T.Dtor) or type(h) is Proj:
            raise _Stuck()
        if type(h) is T.Ctor and h.tag.name == "IntLit" and not args:
            return h.tag.value
        raise PrimTypeError(f"expected an integer, got {type(h).__name__}")

    def whnf(self, t):
        """Leftmost-outermost reduction until the head cannot reduce."""
        # arguments are kept as a stack, first argument last
        stack = []
        while True:
            while type(t) is T.Apply:
                stack.append(t.arg)
                t = t.fun
            k = type(t)
            if k is T.Lambda and stack:
                self._tick()
                t = _subst(t.body, stack.pop(), t.annot)
            elif k is T.LetRec:
                self._tick()
                fix = T.LetRec(t.name, t.annot, t.rhs, T.Var(0))
                t = _subst(t.rhs if t.body == T.Var(0) else t.body, fix, t.annot)
            elif k is T.Prim and len(stack) >= t.prim.arity:
                n = t.prim.arity
                try:
                    vals = [self._int(stack[-1 - i]) for i in range(n)]
                except _Stuck:
                    break
                self._tick()
                del stack[len(stack) - n:]
                t = _DELTA[t.prim.name](*vals)
            elif k is Proj:
                w = self.whnf(t.of)
                wh, wargs = _unapply(w)
                if type(wh) in (T.Var, T.VarT, T.Dtor, Proj):
                    raise Unsupported("projection blocked on a variable")
                if type(wh) is not T.Ctor or wh.payload is None or wargs:
                    raise DtorNonCtor("destructor applied to a non-constructor")
                self._tick()
                t = wh.payload
            else:
                break
        return _reapply(t, reversed(stack))

    def normalize(self, t, deep=True):
        t = self.whnf(t)
        if type(t) is T.Lambda:
            body = _subst(t.body, None, _shift(t.annot, 1), 0)
            return T.Lambda(t.name, self.normalize(t.annot, deep), self.normalize(body, deep))
        h, args = _unapply(t)
        k = type(h)
        if k is Proj:
            raise Unsupported("projection blocked on a variable")
        if k is T.Ctor and deep and h.payload is not None:
            h = T.Ctor(h.tag, self.normalize(h.payload, deep))
        elif k is T.Prim and deep:
            h = T.Prim(h.prim, self.normalize(h.annot, deep))
        return _reapply(h, [self.normalize(a, deep) for a in args])


def normalize_whnf(t, budget=10 ** 6, deep=True, work=None):
    """Normal form of closed ``t``: head reduced under binders, arguments of
    stuck heads and binder annotations normalized.  Constructor payloads
    are normalized only with ``deep``."""
    _WORK[0] = 0
    try:
        return Normalizer(budget, work).normalize(t, deep)
    except RecursionError:
        raise BudgetExceeded("oracle nesting too deep") from None


# -- random terms ------------------------------------------------------------------

_NAMES = "abcdefghjkmnpqrsuvw"


def _annot(rng, depth):
    r = rng.random()
    if r < 0.55 or depth == 0:
        return T.STAR_TERM
    if r < 0.8:
        return T.hole(T.STAR_TERM)
    if r < 0.9:
        return T.INT_TERM
    return T.Var(rng.randrange(depth))


def _leaf(rng, depth):
    r = rng.random()
    if depth and r < 0.45:
        return T.Var(rng.randrange(depth))
    if depth and r < 0.5:
        return T.VarT(rng.randrange(depth))
    if depth and r < 0.55:
        return T.Dtor(rng.randrange(depth))
    if r < 0.68:
        return T.STAR_TERM
    if r < 0.76:
        return T.hole(_annot(rng, depth))
    if r < 0.9:
        return T.int_lit(rng.randrange(-3, 10))
    if r < 0.95:
        return T.Ctor(T.NIL)
    return T.prim(rng.choice(sorted(T.PRIMS)))


def _gen(rng, depth, budget):
    if budget <= 0 or rng.random() < 0.25:
        return _leaf(rng, depth)
    r = rng.random()
    name = rng.choice(_NAMES)
    if r < 0.3:
        return T.Apply(_gen(rng, depth, budget - 1), _gen(rng, depth, budget - 1))
    if r < 0.5:
        # an explicit redex keeps the corpus busy reducing
        lam = T.Lambda(name, _annot(rng, depth), _gen(rng, depth + 1, budget - 1))
        return T.Apply(lam, _gen(rng, depth, budget - 1))
    if r < 0.7:
        return T.Lambda(name, _annot(rng, depth), _gen(rng, depth + 1, budget - 1))
    if r < 0.78:
        return T.LetRec(name, _annot(rng, depth), _gen(rng, depth + 1, budget - 1),
                        _gen(rng, depth + 1, budget - 1))
    if r < 0.86:
        tag = rng.choice((T.CONS, T.TUP))
        return T.Ctor(tag, _gen(rng, depth, budget - 1))
    if r < 0.93:
        op = rng.choice(sorted(T.PRIMS))
        a = T.int_lit(rng.randrange(0, 6)) if rng.random() < 0.5 else _gen(rng, depth, budget - 1)
        b = T.int_lit(rng.randrange(0, 6)) if rng.random() < 0.5 else _gen(rng, depth, budget - 1)
        return T.Apply(T.Apply(T.prim(op), a), b)
    return T.hole(_gen(rng, depth, budget - 1))


def gen_term(seed, max_depth=8):
    """Deterministic closed term for ``seed`` with nesting at most ``max_depth``."""
    rng = random.Random(seed)
    return _gen(rng, 0, max_depth)


# -- benchmark ground truth --------------------------------------------------------

def tak(x, y, z):
    while y < x:
        x, y, z = tak(x - 1, y, z), tak(y - 1, z, x), tak(z - 1, x, y)
    return z


def queens_count(n):
    """Number of n-queens placements, by backtracking."""
    if n > 10:
        raise ValueError("n must be at most 10")
    count = 0
    cols, diag1, diag2 = set(), set(), set()

    def place(row):
        nonlocal count
        if row == n:
            count += 1
            return
        for c in range(n):
            if c in cols or row + c in diag1 or row - c in diag2:
                continue
            cols.add(c)
            diag1.add(row + c)
            diag2.add(row - c)
            place(row + 1)
            cols.discard(c)
            diag1.discard(row + c)
            diag2.discard(row - c)

    place(0)
    return count
