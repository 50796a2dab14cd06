"""Generic start-to-end traversal of a spine and its read-only and
reclaiming instances."""

from __future__ import annotations

from .errors import DanglingEnd
from .spine import HCtor, HDtor, HPrim, HVar, HVarT, decref, free_binder, free_spine
from . import term as T

RETRY = object()  # returned by ``val`` when the head changed and must be revisited


class Fold:
    """Four-callback visitor.  Subclasses override what they need."""

    def val(self, s, acc):
        return acc

    def let_l(self, binder, acc):
        return acc

    def let_a(self, acc, rhs):
        return acc

    def apply(self, acc, pending):
        return acc


def unwind(s, fold, acc=None):
    """Fold over ``s``: head first, then each binder from start to end with
    pending applications and bound right-hand sides interleaved where their
    end references place them."""
    while True:
        ret = fold.val(s, acc)
        if ret is not RETRY:
            break
    acc = ret
    c = s.ctx  # read after val: dereferencing may have changed the context
    pending = s.pending
    for k in range(len(pending) - 1, -1, -1):
        app = pending[k]
        acc, c = unwind_context(c, app.end, fold, acc)
        acc = fold.apply(acc, app)
    acc, c = unwind_context(c, s.end, fold, acc)
    return acc


def unwind_context(c, end, fold, acc):
    while c is not end:
        if c is None:
            raise DanglingEnd("context chain ended before its end reference")
        sb = c.rhs  # read first: let_l may release c
        nxt = c.next
        bend = sb.end if sb is not None else None
        acc = fold.let_l(c, acc)
        if sb is not None and bend is not c:
            acc, nxt = unwind_context(nxt, bend, fold, acc)
            acc = fold.let_a(acc, sb)
        c = nxt
    return acc, c


# -- recovering the initial encoding ----------------------------------------------

def steps_to(c, target):
    n = 0
    while c is not target:
        if c is None:
            raise DanglingEnd(f"{target!r} is not reachable from the context")
        c = c.next
        n += 1
    return n


_REF_TERMS = {HVar: T.Var, HVarT: T.VarT, HDtor: T.Dtor}


class _GetAst(Fold):
    def val(self, s, acc):
        h = s.head
        kind = _REF_TERMS.get(type(h))
        if kind is not None:
            return kind(steps_to(s.ctx, h.binder))
        if isinstance(h, HCtor):
            return T.Ctor(h.tag, None if h.payload is None else get_ast(h.payload))
        if isinstance(h, HPrim):
            return T.Prim(h.prim, get_ast(h.annot))
        raise ValueError("spine head is unset")

    def let_l(self, c, acc):
        if c.rhs is not None and c.rhs.end is c:
            return T.LetRec(c.name, get_ast(c.annot), get_ast(c.rhs), acc)
        return T.Lambda(c.name, get_ast(c.annot), acc)

    def let_a(self, acc, rhs):
        return T.Apply(acc, get_ast(rhs))

    apply = let_a


_GET_AST = _GetAst()


def get_ast(s):
    """Initial encoding of ``s`` (read-only).  References that escape
    ``s.end`` come out as indices past the local binder depth."""
    return unwind(s, _GET_AST)


# -- reclamation -------------------------------------------------------------------

def release_head(s):
    """Drop the head value: decrement its binder or destroy its sub-stacks."""
    h = s.head
    if isinstance(h, HVar):
        decref(h.binder)
    elif isinstance(h, HCtor):
        if h.payload is not None:
            destroy(h.payload)
    elif isinstance(h, HPrim):
        destroy(h.annot)
    s.head = None


class _Destroy(Fold):
    def val(self, s, acc):
        release_head(s)
        return acc

    def let_l(self, c, acc):
        destroy(c.annot)
        if c.rhs is not None and c.rhs.end is c:
            destroy(c.rhs)
        free_binder(c)
        return acc

    def let_a(self, acc, rhs):
        destroy(rhs)
        return acc

    apply = let_a


_DESTROY = _Destroy()


def destroy(s):
    """Release every binder and sub-spine owned by ``s``, then ``s`` itself."""
    unwind(s, _DESTROY)
    free_spine(s)
