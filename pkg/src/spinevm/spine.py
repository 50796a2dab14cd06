"""Stack ("spine") representation of terms.

A spine owns a chain of binders running from ``ctx`` (most recent) to
``end`` (the first binder it does *not* own, or ``None`` for the global
root).  Binder ``next`` links continue past ``end`` into the enclosing
spine, so every chain is a path in one tree of binders.  Pending
applications are kept innermost-last, so the innermost application is
``pending[-1]``.
"""

from __future__ import annotations

import itertools
import threading
from contextlib import contextmanager
from dataclasses import dataclass

from .errors import DanglingEnd, InternalRefcount


# -- allocation statistics ------------------------------------------------------

class Stats:
    __slots__ = ("contexts_alloc", "spines_alloc", "hw_contexts", "hw_spines",
                 "live_contexts", "live_spines", "samples")

    def __init__(self, sample=False):
        self.contexts_alloc = self.spines_alloc = 0
        self.hw_contexts = self.hw_spines = 0
        self.live_contexts = self.live_spines = 0
        # (live_contexts, live_spines) at every context creation, if wanted
        self.samples = [] if sample else None

    def line(self):
        return (f"contexts_alloc={self.contexts_alloc} spines_alloc={self.spines_alloc} "
                f"hw_contexts={self.hw_contexts} hw_spines={self.hw_spines} "
                f"live_contexts={self.live_contexts} live_spines={self.live_spines}")

    def __str__(self):
        return self.line()

    def live(self):
        return self.live_contexts, self.live_spines


_local = threading.local()


def stats():
    """The statistics object receiving this thread's allocations."""
    st = getattr(_local, "stats", None)
    if st is None:
        st = _local.stats = Stats()
    return st


@contextmanager
def collecting(st=None):
    """Route allocations in this thread to ``st`` (a fresh Stats by default)."""
    st = st if st is not None else Stats()
    prev = getattr(_local, "stats", None)
    _local.stats = st
    try:
        yield st
    finally:
        _local.stats = prev


# -- data model -------------------------------------------------------------------

_ids = itertools.count(1)


class Binder:
    __slots__ = ("id", "name", "annot", "rhs", "refs", "next", "dead")

    def __init__(self, name, annot, rhs, nxt):
        self.id = next(_ids)
        self.name = name
        self.annot = annot
        self.rhs = rhs  # None marks an open binder
        self.refs = 0
        self.next = nxt
        self.dead = False
        st = stats()
        st.contexts_alloc += 1
        st.live_contexts += 1
        if st.live_contexts > st.hw_contexts:
            st.hw_contexts = st.live_contexts
        if st.live_spines > st.hw_spines:
            st.hw_spines = st.live_spines
        if st.samples is not None:
            st.samples.append((st.live_contexts, st.live_spines))

    @property
    def is_open(self):
        return self.rhs is None

    @property
    def is_letrec(self):
        return self.rhs is not None and self.rhs.end is self

    def __repr__(self):
        kind = "open" if self.rhs is None else "letrec" if self.rhs.end is self else "paired"
        return f"<Binder {self.name}#{self.id} {kind} refs={self.refs}>"


class HVar:
    __slots__ = ("binder",)

    def __init__(self, binder):
        self.binder = binder

    def __repr__(self):
        return f"{type(self).__name__}({self.binder.name}#{self.binder.id})"


class HVarT(HVar):
    __slots__ = ()


class HDtor(HVar):
    __slots__ = ()


class HCtor:
    __slots__ = ("tag", "payload")

    def __init__(self, tag, payload=None):
        self.tag = tag
        self.payload = payload

    def __repr__(self):
        return f"HCtor({self.tag})"


class HPrim:
    __slots__ = ("prim", "annot")

    def __init__(self, prim, annot):
        self.prim = prim
        self.annot = annot

    def __repr__(self):
        return f"HPrim({self.prim.name})"


REF_HEADS = (HVar, HVarT, HDtor)


class Spine:
    __slots__ = ("head", "ctx", "end", "pending")

    def __init__(self, end=None):
        self.head = None  # unset until winding finishes
        self.ctx = end
        self.end = end
        self.pending = []
        st = stats()
        st.spines_alloc += 1
        st.live_spines += 1

    def __repr__(self):
        return f"<Spine head={self.head!r} binders={len(owned(self))} pending={len(self.pending)}>"


def new_spine(end=None):
    """Empty spine (no context, no pending applications) ending at ``end``."""
    return Spine(end)


def free_spine(s):
    stats().live_spines -= 1
    s.head = None
    s.pending = None


def free_binder(b):
    if b.dead:
        raise InternalRefcount(f"double free of {b!r}")
    stats().live_contexts -= 1
    b.dead = True
    b.annot = b.rhs = None


def incref(b):
    if b.dead:
        raise InternalRefcount(f"reference to released {b!r}")
    b.refs += 1
    return b.refs


def decref(b):
    if b.refs <= 0:
        raise InternalRefcount(f"refcount underflow on {b!r}")
    b.refs -= 1
    return b.refs


# -- traversal helpers ------------------------------------------------------------

def owned(s):
    """Binders owned by ``s``, start to end."""
    out = []
    c, end = s.ctx, s.end
    while c is not end:
        if c is None:
            raise DanglingEnd(f"end of {s!r} is not on its context chain")
        out.append(c)
        c = c.next
    return out


def head_subspines(head):
    if isinstance(head, HCtor):
        return () if head.payload is None else (head.payload,)
    if isinstance(head, HPrim):
        return (head.annot,)
    return ()


def children(s, binders=None):
    """Direct sub-spines of ``s``: head payloads, annotations, bound
    right-hand sides, then pending applications."""
    out = list(head_subspines(s.head))
    for b in owned(s) if binders is None else binders:
        out.append(b.annot)
        if b.rhs is not None:
            out.append(b.rhs)
    out.extend(s.pending)
    return out


def iter_spines(s):
    todo = [s]
    while todo:
        t = todo.pop()
        yield t
        todo.extend(children(t))


def count_shape(s):
    """(number of spines, number of contexts) in the tree rooted at ``s``."""
    spines = contexts = 0
    for t in iter_spines(s):
        spines += 1
        contexts += len(owned(t))
    return spines, contexts


def count_refs(s):
    """Reference counts implied by the head values reachable from ``s``."""
    seen = {}
    for t in iter_spines(s):
        if isinstance(t.head, REF_HEADS):
            b = t.head.binder
            seen[b] = seen.get(b, 0) + 1
    return seen


def check_refcounts(s):
    """Mismatches ``(binder, counted, stored)`` for binders owned inside ``s``.

    Only meaningful for a whole program: references from outside ``s`` are
    invisible to the scan.
    """
    seen = count_refs(s)
    bad = []
    for t in iter_spines(s):
        for b in owned(t):
            if seen.get(b, 0) != b.refs:
                bad.append((b, seen.get(b, 0), b.refs))
    return bad


# -- structural invariants ----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    property: int
    locus: str

    def __str__(self):
        return f"property {self.property} violated at {self.locus}"


def _check_one(s):
    """(property, message) for the first local violation at ``s``, or
    None; also returns the binders ``s`` owns."""
    h = s.head
    if h is None:
        return (3, "head value unset"), ()
    end = s.end
    B = []
    c = s.ctx
    while c is not end:
        if c is None:
            return (1, "end not reachable from context"), ()
        B.append(c)
        c = c.next
    subs = head_subspines(h)

    if not B:
        for t in subs:
            if t.end is not end:
                return (3, "head sub-stack does not end at the context start"), B
        for p in s.pending:
            if p.end is not end:
                return (1, "pending application ends outside the stack"), B
    else:
        n = len(B)
        pos = {b: i for i, b in enumerate(B)}
        pos[end] = n

        # 1: sub-spines end inside the stack; annotations end at the successor
        for b in B:
            if b.annot.end is not b.next:
                return (1, f"annotation of {b!r} does not end at the binder's successor"), B
        # 3: head sub-stacks end at the start of the head's context
        for t in subs:
            if t.end is not s.ctx:
                return (3, "head sub-stack does not end at the context start"), B

        # 4: paired right-hand sides nest; ``inside`` marks positions strictly
        # within some pair, for 6
        inside = None
        stack = []
        for i, b in enumerate(B):
            while stack and stack[-1] <= i:
                stack.pop()
            rhs = b.rhs
            if rhs is None:
                continue
            j = pos.get(rhs.end)
            if j is None:
                return (1, f"right-hand side of {b!r} ends outside the stack"), B
            if j < i:
                return (4, f"right-hand side of {b!r} ends before its binder"), B
            if j == i:
                continue
            if stack and j > stack[-1]:
                return (4, f"right-hand side of {b!r} crosses an enclosing pair"), B
            stack.append(j)
            if inside is None:
                inside = [0] * (n + 2)
            inside[i + 1] += 1
            inside[j] -= 1

        # 5: pending ends ordered, innermost closest to the start
        last = 0
        first_open = next((i for i, b in enumerate(B) if b.rhs is None), None)
        depth = None
        if inside is not None:
            depth = []
            acc = 0
            for k in range(n + 1):
                acc += inside[k]
                depth.append(acc)
        for k in range(len(s.pending) - 1, -1, -1):
            e = pos.get(s.pending[k].end)
            if e is None:
                return (1, "pending application ends outside the stack"), B
            if e < last:
                return (5, "pending applications out of order"), B
            last = e
            # 6: no pending end strictly inside a pair
            if depth is not None and depth[e] > 0:
                return (6, "pending application ends between a binder and its argument"), B
            # 7: open binders reachable from every pending application
            if first_open is not None and e > first_open:
                return (7, f"open binder {B[first_open]!r} unreachable from a pending application"), B

    # 2: head references reachable from the context pointer
    if isinstance(h, REF_HEADS):
        tgt = h.binder
        if tgt.dead:
            return (2, f"head references released {tgt!r}"), B
        c = s.ctx
        while c is not tgt:
            if c is None:
                return (2, f"head references unreachable {tgt!r}"), B
            c = c.next
    return None, B


def _label(kind, obj):
    if kind == "pending":
        return f"pending[{obj}]"
    if kind == "head":
        return "head"
    return f"{kind}({obj.name}#{obj.id})"


def _path(nodes, k):
    parts = []
    while k is not None:
        _, parent, kind, obj = nodes[k]
        parts.append(_label(kind, obj) if parent is not None else kind)
        k = parent
    return "/".join(reversed(parts))


def _scan_py(root):
    """Fast pass over the whole tree: the first spine that fails a local
    check, or None.  Spines without binders are checked inline."""
    todo = [root]
    pop = todo.pop
    push = todo.append
    while todo:
        s = pop()
        h = s.head
        end = s.end
        c = s.ctx
        kh = type(h)
        if kh is HCtor:
            if h.payload is not None:
                if h.payload.end is not c:
                    return s
                push(h.payload)
        elif kh is HPrim:
            if h.annot.end is not c:
                return s
            push(h.annot)
        elif kh is HVar or kh is HVarT or kh is HDtor:
            tgt = h.binder
            if tgt.dead:
                return s
            x = c
            while x is not tgt:
                if x is None:
                    return s
                x = x.next
        else:
            return s
        pending = s.pending
        if c is end:
            for p in pending:
                if p.end is not end:
                    return s
            todo.extend(pending)
            continue
        v, B = _check_one(s)
        if v is not None:
            return s
        for b in B:
            push(b.annot)
            if b.rhs is not None:
                push(b.rhs)
        todo.extend(pending)
    return None


try:
    from ._scan import scan as _scan
except ImportError:  # extension not built
    _scan = _scan_py


def check_invariants(s, path="root"):
    """First violated structural property in the tree at ``s``, or None."""
    if _scan(s) is None:
        return None
    return _check_labelled(s, path) or Violation(0, f"{path}: inconsistent checks")


def _check_labelled(s, path):
    nodes = [(s, None, path, None)]
    todo = [0]
    push = todo.append
    add = nodes.append
    while todo:
        k = todo.pop()
        t = nodes[k][0]
        v, B = _check_one(t)
        if v is not None:
            return Violation(v[0], f"{_path(nodes, k)}: {v[1]}")
        for sub in head_subspines(t.head):
            push(len(nodes))
            add((sub, k, "head", None))
        for b in B:
            push(len(nodes))
            add((b.annot, k, "annot", b))
            if b.rhs is not None:
                push(len(nodes))
                add((b.rhs, k, "rhs", b))
        last = len(t.pending) - 1
        for i, p in enumerate(t.pending):
            push(len(nodes))
            add((p, k, "pending", last - i))
    return None
