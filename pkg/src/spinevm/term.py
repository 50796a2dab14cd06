"""Initial (syntax-tree) encoding of terms, with de Bruijn indices.

This is the language that winding consumes and ``get_ast`` produces.  Name
hints are carried for printing only and never take part in equality, so
``==`` on terms is alpha-equivalence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import ParseError, UnboundName


@dataclass(frozen=True, slots=True)
class CtorTag:
    name: str
    value: Optional[int] = None

    def __str__(self):
        return self.name if self.value is None else f"{self.name}({self.value})"


STAR = CtorTag("Star")
HOLE = CtorTag("Hole")
INT = CtorTag("Int")  # builtin type of integer literals
CONS = CtorTag("Cons")
NIL = CtorTag("Nil")
TUP = CtorTag("Tup")


def int_tag(n):
    return CtorTag("IntLit", int(n))


@dataclass(frozen=True, slots=True)
class PrimTag:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("primitive arity must be at least 1")


@dataclass(frozen=True, slots=True)
class Apply:
    fun: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Lambda:
    name: str = field(compare=False)
    annot: Term
    body: Term


@dataclass(frozen=True, slots=True)
class LetRec:
    name: str = field(compare=False)
    annot: Term
    rhs: Term
    body: Term


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class VarT:
    index: int


@dataclass(frozen=True, slots=True)
class Dtor:
    index: int


@dataclass(frozen=True, slots=True)
class Ctor:
    tag: CtorTag
    payload: Optional[Term] = None


@dataclass(frozen=True, slots=True)
class Prim:
    prim: PrimTag
    annot: Term


Term = Union[Apply, Lambda, LetRec, Var, VarT, Dtor, Ctor, Prim]

STAR_TERM = Ctor(STAR)
INT_TERM = Ctor(INT)


def int_lit(n):
    return Ctor(int_tag(n), STAR_TERM)


def hole(annot=STAR_TERM):
    return Ctor(HOLE, annot)


# -- primitives known to the surface syntax ---------------------------------

_INT2 = Lambda("_", INT_TERM, Lambda("_", INT_TERM, INT_TERM))
# comparisons answer with a Church boolean: two branch arguments
_BOOL = Lambda("_", STAR_TERM, Lambda("_", STAR_TERM, STAR_TERM))
_CMP = Lambda("_", INT_TERM, Lambda("_", INT_TERM, _BOOL))

PRIMS = {
    "addI": (PrimTag("addI", 2), _INT2),
    "subI": (PrimTag("subI", 2), _INT2),
    "mulI": (PrimTag("mulI", 2), _INT2),
    "ltI": (PrimTag("ltI", 2), _CMP),
    "eqI": (PrimTag("eqI", 2), _CMP),
}


def prim(name):
    """Prim leaf for a builtin name, with its standard annotation."""
    tag, annot = PRIMS[name]
    return Prim(tag, annot)


# -- structural utilities ----------------------------------------------------

def node_counts(t):
    """(non-lambda/apply/letrec node count, lambda+letrec node count)."""
    leaves = binders = 0
    todo = [t]
    while todo:
        t = todo.pop()
        if isinstance(t, Apply):
            todo += (t.fun, t.arg)
        elif isinstance(t, Lambda):
            binders += 1
            todo += (t.annot, t.body)
        elif isinstance(t, LetRec):
            binders += 1
            todo += (t.annot, t.rhs, t.body)
        else:
            leaves += 1
            if isinstance(t, Ctor) and t.payload is not None:
                todo.append(t.payload)
            elif isinstance(t, Prim):
                todo.append(t.annot)
    return leaves, binders


def map_indices(t, fn, depth=0):
    """Rebuild ``t`` replacing every index node ``n`` (at binder ``depth``)
    by ``fn(node, depth)``."""
    if isinstance(t, (Var, VarT, Dtor)):
        return fn(t, depth)
    if isinstance(t, Apply):
        return Apply(map_indices(t.fun, fn, depth), map_indices(t.arg, fn, depth))
    if isinstance(t, Lambda):
        return Lambda(t.name, map_indices(t.annot, fn, depth),
                      map_indices(t.body, fn, depth + 1))
    if isinstance(t, LetRec):
        return LetRec(t.name, map_indices(t.annot, fn, depth),
                      map_indices(t.rhs, fn, depth + 1),
                      map_indices(t.body, fn, depth + 1))
    if isinstance(t, Ctor):
        if t.payload is None:
            return t
        return Ctor(t.tag, map_indices(t.payload, fn, depth))
    if isinstance(t, Prim):
        return Prim(t.prim, map_indices(t.annot, fn, depth))
    raise TypeError(f"not a term: {t!r}")


def shift(t, d, cutoff=0):
    """Add ``d`` to every index that escapes ``cutoff`` enclosing binders."""
    if d == 0:
        return t

    def bump(node, depth):
        if node.index >= depth + cutoff:
            return type(node)(node.index + d)
        return node

    return map_indices(t, bump)


def max_free(t):
    """Largest escaping index relative to the root, or -1 if closed."""
    worst = -1

    def look(node, depth):
        nonlocal worst
        if node.index >= depth:
            worst = max(worst, node.index - depth)
        return node

    map_indices(t, look)
    return worst


def is_closed(t):
    return max_free(t) < 0


def alpha_eq(a, b):
    return a == b


# -- surface syntax ------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<free>\#\d+)
  | (?P<sym>[\\:.()\[\]='!*?])
""", re.VERBOSE)

KEYWORDS = {"letrec", "in", "Int"}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(src):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "name" and text in KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0
        self.scope = []  # innermost name last

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            self.fail(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def binder_name(self):
        tok = self.next()
        if tok.kind != "name" or tok.text in PRIMS:
            self.fail("expected a binder name", tok)
        return tok.text

    def term(self):
        tok = self.peek()
        if tok.text == "\\":
            return self.lam()
        if tok.text == "letrec":
            return self.letrec()
        if tok.text == "?":
            return self.hole()
        return self.app()

    def lam(self):
        self.expect("\\")
        name = self.binder_name()
        self.expect(":")
        annot = self.term()
        self.expect(".")
        self.scope.append(name)
        body = self.term()
        self.scope.pop()
        return Lambda(name, annot, body)

    def letrec(self):
        self.expect("letrec")
        name = self.binder_name()
        self.expect(":")
        annot = self.term()
        self.expect("=")
        self.scope.append(name)
        rhs = self.term()
        self.expect("in")
        body = self.term()
        self.scope.pop()
        return LetRec(name, annot, rhs, body)

    def hole(self):
        self.expect("?")
        self.expect(":")
        return Ctor(HOLE, self.term())

    def app(self):
        fun = self.atom()
        if fun is None:
            self.fail(f"expected a term, found {self.peek().text or 'end of input'!r}")
        while True:
            if self.peek().text in ("\\", "letrec", "?"):
                return Apply(fun, self.term())
            arg = self.atom()
            if arg is None:
                return fun
            fun = Apply(fun, arg)

    def index(self, tok):
        if tok.kind == "free":
            return int(tok.text[1:])
        if tok.kind != "name":
            self.fail("expected a variable name", tok)
        for depth, name in enumerate(reversed(self.scope)):
            if name == tok.text:
                return depth
        raise UnboundName(tok.text, tok.line, tok.col)

    def atom(self):
        tok = self.peek()
        if tok.text == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        if tok.text == "[":
            self.next()
            name = self.next()
            if name.kind != "name" or name.text in ("Star", "Hole", "IntLit"):
                self.fail("expected a constructor name", name)
            payload = None if self.peek().text == "]" else self.term()
            self.expect("]")
            return Ctor(CtorTag(name.text), payload)
        if tok.text == "*":
            self.next()
            return STAR_TERM
        if tok.text == "Int":
            self.next()
            return INT_TERM
        if tok.kind == "int":
            self.next()
            return int_lit(int(tok.text))
        if tok.text == "'":
            self.next()
            return VarT(self.index(self.next()))
        if tok.text == "!":
            self.next()
            return Dtor(self.index(self.next()))
        if tok.kind == "free":
            self.next()
            return Var(self.index(tok))
        if tok.kind == "name":
            self.next()
            if tok.text in PRIMS and tok.text not in self.scope:
                return prim(tok.text)
            return Var(self.index(tok))
        return None


def parse(source):
    """Parse surface syntax into a Term with de Bruijn indices."""
    p = _Parser(source)
    t = p.term()
    if p.peek().kind != "eof":
        p.fail(f"unexpected {p.peek().text!r}")
    return t


_RESERVED = KEYWORDS | set(PRIMS)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _fresh(hint, scope):
    if not hint or not _IDENT.match(hint) or hint in _RESERVED:
        hint = "x"
    taken = set(scope)
    if hint not in taken:
        return hint
    base = hint.rstrip("0123456789") or "x"
    k = 1
    while f"{base}{k}" in taken or f"{base}{k}" in _RESERVED:
        k += 1
    return f"{base}{k}"


def _ref(index, scope, sigil=""):
    if index < len(scope):
        return sigil + scope[-1 - index]
    return f"{sigil}#{index}"


def _pr(t, scope, level):
    # level 0: anything; 1: function position; 2: argument position
    if isinstance(t, Lambda):
        name = _fresh(t.name, scope)
        s = f"\\{name}:{_pr(t.annot, scope, 1)}. {_pr(t.body, scope + [name], 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(t, LetRec):
        name = _fresh(t.name, scope)
        inner = scope + [name]
        s = (f"letrec {name}:{_pr(t.annot, scope, 1)} = {_pr(t.rhs, inner, 0)}"
             f" in {_pr(t.body, inner, 0)}")
        return s if level == 0 else f"({s})"
    if isinstance(t, Apply):
        s = f"{_pr(t.fun, scope, 1)} {_pr(t.arg, scope, 2)}"
        return s if level < 2 else f"({s})"
    if isinstance(t, Var):
        return _ref(t.index, scope)
    if isinstance(t, VarT):
        return _ref(t.index, scope, "'")
    if isinstance(t, Dtor):
        return _ref(t.index, scope, "!")
    if isinstance(t, Prim):
        return t.prim.name
    if isinstance(t, Ctor):
        tag = t.tag
        if tag == STAR:
            return "*"
        if tag == INT:
            return "Int"
        if tag.name == "IntLit":
            return str(tag.value) if tag.value >= 0 or level == 0 else f"({tag.value})"
        if tag == HOLE:
            s = f"?:{_pr(t.payload, scope, 0)}"
            return s if level == 0 else f"({s})"
        if t.payload is None:
            return f"[{tag.name}]"
        return f"[{tag.name} {_pr(t.payload, scope, 0)}]"
    raise TypeError(f"not a term: {t!r}")


def pretty(t):
    """Surface text for ``t``; ``parse(pretty(t)) == t``."""
    return _pr(t, [], 0)


print_term = pretty
