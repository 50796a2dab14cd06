"""By-need evaluation of spines.

``Machine.step`` applies one bottom-evaluation rule to the head value.
``need`` drives the head to a value and then folds over the context from
start to end: unreferenced bound binders are destroyed and unlinked,
surviving annotations and pending applications are evaluated in turn.
"""

from __future__ import annotations

from contextlib import contextmanager

from . import prim as P
from . import term as T
from .errors import (DtorNonCtor, InvariantViolation, NonTermination, TypeofError,
                     UnificationRequired)
from .fold import RETRY, Fold, destroy, unwind
from .spine import (REF_HEADS, HCtor, HDtor, HPrim, HVar, HVarT, Spine, check_invariants,
                    free_binder, head_subspines, iter_spines, owned)
from .wind import (_copy, _copy_segment, absorb, append_stack, move_stack, payload_spine,
                   relink, release_head, wind)

PROGRESSED = True
DONE = False

DEFAULT_MAX_STEPS = 10 ** 9


def _self_refs(b):
    n = 0
    for t in iter_spines(b.rhs):
        h = t.head
        if isinstance(h, REF_HEADS) and h.binder is b:
            n += 1
    return n


class _NeedFold(Fold):
    __slots__ = ("m", "owner", "force", "deep", "letrecs")

    def __init__(self, m, owner, force, deep, letrecs=True):
        self.m = m
        self.owner = owner
        self.force = force
        self.deep = deep
        self.letrecs = letrecs

    def val(self, s, acc):
        if self.m.step(s):
            return RETRY
        if self.deep:
            for sub in head_subspines(s.head):
                self.m.need(sub, deep=True)
        return acc

    def let_l(self, c, acc):
        rhs = c.rhs
        if rhs is not None and (c.refs == 0 or self.letrecs and rhs.end is c
                                and c.refs == _self_refs(c)):
            self.m.collect(self.owner, c)
        elif self.force:
            self.m.need(c.annot, self.deep)
        return acc

    def apply(self, acc, app):
        if self.force:
            self.m.need(app, self.deep)
        return acc


class _Sweep(_NeedFold):
    """Collection only; the head is left alone."""

    def val(self, s, acc):
        return acc


class Machine:
    """Evaluation state: step budget, recursion guard and optional
    per-step invariant checking of a root spine."""

    def __init__(self, max_steps=DEFAULT_MAX_STEPS, check_root=None, sweep=True):
        self.max_steps = max_steps
        self.steps = 0
        self.guard = set()
        self.check_root = check_root
        self.sweep = sweep

    def _tick(self, s):
        self.steps += 1
        if self.steps > self.max_steps:
            raise NonTermination(f"step budget of {self.max_steps} exceeded")
        if self.sweep and s.ctx is not s.end:
            unwind(s, _Sweep(self, s, False, False, letrecs=False))
        self.check_now()

    def check_now(self):
        """Raise InvariantViolation if the checked root is malformed."""
        if self.check_root is not None:
            v = check_invariants(self.check_root)
            if v is not None:
                raise InvariantViolation(v)

    # -- single step ------------------------------------------------------------

    def step(self, s):
        """Apply one bottom-evaluation rule; PROGRESSED or DONE."""
        h = s.head
        kind = type(h)
        if kind is HVar:
            progressed = self._deref(s, h.binder)
        elif kind is HVarT:
            annot = h.binder.annot
            self.whnf(annot)
            append_stack(s, annot)
            progressed = True
        elif kind is HDtor:
            progressed = self._project(s, h.binder)
        elif kind is HCtor:
            return DONE
        elif kind is HPrim:
            if len(s.pending) < h.prim.arity:
                return DONE
            progressed = P.delta(self, s)
        else:
            raise ValueError("spine head is unset")
        if progressed:
            self._tick(s)
        return progressed

    def _eval_rhs(self, x, to_value=False):
        rhs = x.rhs
        self.guard.add(x)
        try:
            if to_value:
                self.whnf_value(rhs)
            else:
                self.whnf(rhs)
        finally:
            self.guard.discard(x)
        return rhs

    def _deref(self, s, x):
        if x.rhs is None or x in self.guard:
            return DONE
        rhs = self._eval_rhs(x)
        rh = rhs.head
        if isinstance(rh, REF_HEADS) and rh.binder is x:
            # recursive and already in weak head normal form
            if not s.pending or not any(b.rhs is None for b in owned(rhs)):
                return DONE
        if x.refs == 1 and rhs.end is not x:
            placeholder = Spine(rhs.end)
            placeholder.head = HCtor(T.STAR)
            x.rhs = placeholder
            move_stack(s, rhs)
        else:
            append_stack(s, rhs)
        return PROGRESSED

    def _project(self, s, x):
        if x.rhs is None or x in self.guard:
            return DONE
        rhs = self._eval_rhs(x, to_value=True)
        rh = rhs.head
        if any(b.rhs is None for b in owned(rhs)):
            raise DtorNonCtor("destructor applied to a function")
        if isinstance(rh, REF_HEADS):
            return DONE  # blocked on an open or recursive binder
        if not isinstance(rh, HCtor) or rh.payload is None or rhs.pending:
            raise DtorNonCtor(f"destructor applied to {rh!r}")
        u = payload_spine(s, rhs)
        release_head(s)
        absorb(s, u)
        return PROGRESSED

    # -- driving --------------------------------------------------------------------

    def whnf(self, s):
        """Evaluate the head of ``s`` and collect dead binders; pending
        applications are left as they are."""
        unwind(s, _NeedFold(self, s, False, False))
        return s

    def whnf_value(self, s):
        """Step the head of ``s`` until it is done or ``s`` exposes an open
        binder (a function value, whose body is left alone).  Returns True
        in the latter case."""
        while True:
            if s.ctx is not s.end and any(b.rhs is None for b in owned(s)):
                return True
            if not self.step(s):
                return False

    def need(self, s, deep=False):
        """By-need evaluation of ``s`` in place.  With ``deep``, constructor
        payloads are evaluated too."""
        unwind(s, _NeedFold(self, s, True, deep))
        return s

    def collect(self, owner, c):
        """Destroy binder ``c`` (owned by ``owner``) and unlink it, rewriting
        every link and end reference to it."""
        destroy(c.annot)
        destroy(c.rhs)
        unlink(owner, c)
        free_binder(c)

    # -- types -------------------------------------------------------------------------

    def typeof(self, s):
        """Fresh spine holding the type of ``s``: the head's type applied to
        the pending arguments, dressed with a copy of ``s``'s context."""
        h = s.head
        tmp = None
        if isinstance(h, HDtor):
            raise TypeofError("destructor heads have no annotated type")
        if isinstance(h, HVarT):
            tmp = src = self.typeof(h.binder.annot)
        elif isinstance(h, HVar):
            src = h.binder.annot
        elif isinstance(h, HPrim):
            src = h.annot
        elif isinstance(h, HCtor):
            if h.tag == T.HOLE:
                src = h.payload
            else:
                if h.tag == T.STAR:
                    ty = T.STAR_TERM
                elif h.tag.name == "IntLit":
                    ty = T.INT_TERM
                elif h.tag == T.INT:
                    ty = T.STAR_TERM
                else:
                    raise TypeofError(f"no type known for constructor {h.tag}")
                tmp = src = wind(Spine(s.ctx), ty)
        else:
            raise ValueError("spine head is unset")

        bmap = {}
        out = Spine(s.end)
        out.ctx = _copy_segment(owned(s), s.end, bmap, s.end, s.end)
        out.pending = [_copy(p, bmap, s.end, s.end) for p in s.pending]
        ty = _copy(src, bmap, src.end, out.ctx)
        if tmp is not None:
            destroy(tmp)
        self.whnf(ty)
        if len(out.pending) > sum(b.rhs is None for b in owned(ty)):
            th = ty.head
            stuck = isinstance(th, REF_HEADS) or isinstance(th, HCtor) and th.tag == T.HOLE
            destroy(ty)
            destroy(out)
            if stuck:
                raise UnificationRequired("the head's type must be unified with a function type")
            raise TypeofError("applying a value whose type is not a function")
        absorb(out, ty)
        return self.need(out)


def unlink(owner, c):
    nxt = c.next
    before = []
    b = owner.ctx
    while b is not c:
        before.append(b)
        b = b.next
    reach = set(before)
    reach.add(c)
    for b in before:
        if b.next is c:
            b.next = nxt
    if owner.ctx is c:
        owner.ctx = nxt
    subs = list(head_subspines(owner.head))
    for b in before:
        subs.append(b.annot)
        if b.rhs is not None:
            subs.append(b.rhs)
    subs.extend(owner.pending)
    for t in subs:
        if t.end in reach:
            relink(t, c, nxt)


@contextmanager
def _depth_guard():
    # unbounded nesting (an infinitely unfolding type, say) exhausts the
    # interpreter stack before the step budget
    try:
        yield
    except RecursionError:
        raise NonTermination("evaluation nested too deeply") from None


# -- conveniences ------------------------------------------------------------------------

def step(s, machine=None):
    return (machine or Machine()).step(s)


def whnf(s, machine=None):
    return (machine or Machine()).whnf(s)


def need(s, deep=False, max_steps=DEFAULT_MAX_STEPS, check=False):
    m = Machine(max_steps, check_root=s if check else None)
    with _depth_guard():
        return m.need(s, deep)


def typeof(s, max_steps=DEFAULT_MAX_STEPS):
    return Machine(max_steps).typeof(s)


def evaluate(t, deep=False, max_steps=DEFAULT_MAX_STEPS, check=False):
    """Wind closed term ``t`` and evaluate it; returns ``(spine, machine)``."""
    s = wind(Spine(None), t)
    m = Machine(max_steps, check_root=s if check else None)
    with _depth_guard():
        m.need(s, deep)
    return s, m
