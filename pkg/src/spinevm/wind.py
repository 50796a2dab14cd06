"""Winding syntax trees into spines, copying spines, and appending one
spine onto the bottom of another."""

from __future__ import annotations

from . import term as T
from .errors import DanglingEnd, UnboundIndex
from .fold import get_ast, release_head, steps_to
from .spine import (Binder, HCtor, HDtor, HPrim, HVar, HVarT, Spine, children,
                    free_spine, incref, owned)

_REF_HEADS = {T.Var: HVar, T.VarT: HVarT, T.Dtor: HDtor}


def _walk(c, n):
    for _ in range(n):
        if c is None:
            break
        c = c.next
    if c is None:
        raise UnboundIndex(f"index {n} runs past the root context")
    return c


def wind(s, t):
    """Wind term ``t`` onto ``s`` (whose head must be unset) and return ``s``."""
    if s.head is not None:
        raise ValueError("winding requires an unset head value")
    while True:
        kind = type(t)
        if kind is T.Apply:
            arg = Spine(s.ctx)
            wind(arg, t.arg)
            s.pending.append(arg)
            t = t.fun
        elif kind is T.Lambda:
            annot = wind(Spine(s.ctx), t.annot)
            rhs = s.pending.pop() if s.pending else None
            s.ctx = Binder(t.name, annot, rhs, s.ctx)
            t = t.body
        elif kind is T.LetRec:
            annot = wind(Spine(s.ctx), t.annot)
            b = s.ctx = Binder(t.name, annot, None, s.ctx)
            b.rhs = wind(Spine(b), t.rhs)
            t = t.body
        elif kind in _REF_HEADS:
            target = _walk(s.ctx, t.index)
            incref(target)
            s.head = _REF_HEADS[kind](target)
            return s
        elif kind is T.Ctor:
            payload = None if t.payload is None else wind(Spine(s.ctx), t.payload)
            s.head = HCtor(t.tag, payload)
            return s
        elif kind is T.Prim:
            s.head = HPrim(t.prim, wind(Spine(s.ctx), t.annot))
            return s
        else:
            raise TypeError(f"not a term: {t!r}")


def wind_term(t, end=None):
    return wind(Spine(end), t)


# -- copying ---------------------------------------------------------------------
#
# ``bmap`` maps source binders to their copies.  End references equal to
# ``src_end`` (the end of the top spine being copied) become ``join``;
# every other end is internal and goes through ``bmap``.

def _map_end(e, bmap, src_end, join):
    if e is src_end:
        return join
    return bmap.get(e, e)


def _copy_segment(binders, link, bmap, src_end, join):
    """Copy ``binders`` (start to end) with the last copy linking to ``link``.
    Returns the first copy, or ``link`` when ``binders`` is empty."""
    prev = link
    fresh = []
    for b in reversed(binders):
        nb = Binder(b.name, None, None, prev)
        bmap[b] = nb
        fresh.append((b, nb))
        prev = nb
    for b, nb in fresh:
        nb.annot = _copy(b.annot, bmap, src_end, join)
        if b.rhs is not None:
            nb.rhs = _copy(b.rhs, bmap, src_end, join)
    return prev


def _copy_head(h, bmap, src_end, join):
    if isinstance(h, HVar):
        target = bmap.get(h.binder, h.binder)
        incref(target)
        return type(h)(target)
    if isinstance(h, HCtor):
        if h.payload is None:
            return HCtor(h.tag)
        return HCtor(h.tag, _copy(h.payload, bmap, src_end, join))
    if isinstance(h, HPrim):
        return HPrim(h.prim, _copy(h.annot, bmap, src_end, join))
    raise ValueError("cannot copy an unset head")


def _fill(src, dst, bmap, src_end, join, link=None):
    dst.ctx = _copy_segment(owned(src), dst.end if link is None else link,
                            bmap, src_end, join)
    dst.head = _copy_head(src.head, bmap, src_end, join)
    dst.pending = [_copy(p, bmap, src_end, join) for p in src.pending]
    return dst


def _copy(src, bmap, src_end, join):
    dst = Spine(_map_end(src.end, bmap, src_end, join))
    return _fill(src, dst, bmap, src_end, join)


def copy_spine(s, join=None):
    """Fresh copy of ``s`` attached at ``join`` (default: ``s.end``).

    Binders owned by ``s`` are renumbered; references past ``s.end`` are
    kept and their counts incremented.
    """
    join = s.end if join is None else join
    return _copy(s, {}, s.end, join)


# -- appending -------------------------------------------------------------------

def absorb(s, u):
    """Install fresh spine ``u`` (with ``u.end is s.ctx``) as the bottom of
    ``s``.  ``u``'s open binders pair with ``s``'s innermost pending
    applications and ``u``'s own pending applications go in front."""
    if u.end is not s.ctx:
        raise DanglingEnd("absorbed spine must end at the context start")
    pending = s.pending
    if pending:
        for b in reversed(owned(u)):
            if b.rhs is None:
                b.rhs = pending.pop()
                if not pending:
                    break
    s.ctx = u.ctx
    s.head = u.head
    pending.extend(u.pending)
    free_spine(u)
    return s


def append_stack(s, u):
    """Replace the bottom of ``s`` by a copy of ``u``."""
    release_head(s)
    return absorb(s, copy_spine(u, join=s.ctx))


def relink(t, old, new):
    """Rewrite every link and end reference to ``old`` inside ``t``'s tree
    (``t``'s chain must pass through ``old``) so that it points at ``new``."""
    todo = [t]
    while todo:
        t = todo.pop()
        binders = owned(t)
        for b in binders:
            if b.next is old:
                b.next = new
        if t.ctx is old:
            t.ctx = new
        if t.end is old:
            t.end = new
        todo.extend(children(t, binders))


def move_stack(s, u):
    """Like ``append_stack`` but consumes ``u`` (already detached) instead
    of copying it."""
    release_head(s)
    relink(u, u.end, s.ctx)
    return absorb(s, u)


def payload_spine(s, rhs):
    """Fresh spine for the payload of constructor spine ``rhs``, dressed with
    copies of ``rhs``'s (closed) context and attached at ``s.ctx``."""
    bmap = {}
    dst = Spine(s.ctx)
    top = _copy_segment(owned(rhs), s.ctx, bmap, rhs.end, s.ctx)
    payload = rhs.head.payload
    return _fill(payload, dst, bmap, payload.end, top, link=top)


def append_stack_via_ast(s, u):
    """Reference route: release the bottom of ``s`` and wind the recovered
    initial encoding of ``u`` in its place."""
    release_head(s)
    t = get_ast(u)
    return wind(s, T.shift(t, steps_to(s.ctx, u.end)))
