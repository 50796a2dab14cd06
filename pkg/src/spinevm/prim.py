"""Primitive operations (delta rules).

A primitive of arity k consumes the k innermost pending applications of
the spine it heads.  Its delta function only sees ``Arg`` handles: it may
force an argument, read the resulting head value, and return a fresh term
for the result.  It cannot touch binders or contexts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import term as T
from .errors import PrimTypeError
from .fold import destroy, release_head
from .spine import REF_HEADS, HCtor, Spine
from .wind import absorb, wind

TRUE = T.Lambda("t", T.STAR_TERM, T.Lambda("f", T.STAR_TERM, T.Var(1)))
FALSE = T.Lambda("t", T.STAR_TERM, T.Lambda("f", T.STAR_TERM, T.Var(0)))


class Stuck(Exception):
    """An argument evaluated to a value blocked on an open binder."""


class Arg:
    __slots__ = ("_spine", "_machine")

    def __init__(self, spine, machine):
        self._spine = spine
        self._machine = machine

    def force(self):
        """Evaluate the argument by need and return its head value."""
        self._machine.whnf(self._spine)
        return self._spine.head

    def int(self):
        s = self._spine
        if self._machine.whnf_value(s):
            raise PrimTypeError("expected an integer, got a function")
        h = s.head
        if isinstance(h, REF_HEADS):
            raise Stuck()
        if not isinstance(h, HCtor) or h.tag.name != "IntLit" or s.pending:
            raise PrimTypeError(f"expected an integer, got {h!r}")
        return h.tag.value


@dataclass(frozen=True)
class PrimDef:
    tag: T.PrimTag
    fn: Callable[..., T.Term]  # Arg handles -> result term

    @property
    def arity(self):
        return self.tag.arity


def _bool(b):
    return TRUE if b else FALSE


_FNS = {
    "addI": lambda a, b: T.int_lit(a.int() + b.int()),
    "subI": lambda a, b: T.int_lit(a.int() - b.int()),
    "mulI": lambda a, b: T.int_lit(a.int() * b.int()),
    "ltI": lambda a, b: _bool(a.int() < b.int()),
    "eqI": lambda a, b: _bool(a.int() == b.int()),
}

_TABLE = {name: PrimDef(T.PRIMS[name][0], fn) for name, fn in _FNS.items()}


def builtin_table():
    return list(_TABLE.values())


def lookup(name):
    return _TABLE.get(name)


def delta(machine, s):
    """Apply the primitive heading ``s``.  Returns False (nothing consumed)
    when an argument is stuck on an open binder."""
    p = _TABLE[s.head.prim.name]
    k = p.arity
    pending = s.pending
    args = [Arg(pending[-1 - i], machine) for i in range(k)]
    try:
        result = p.fn(*args)
    except Stuck:
        return False
    release_head(s)
    for _ in range(k):
        destroy(pending.pop())
    absorb(s, wind(Spine(s.ctx), result))
    return True
