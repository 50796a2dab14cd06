import pytest

from spinevm import term as T
from spinevm.errors import ParseError, UnboundName
from spinevm.bench import program_source


def test_parse_identity():
    assert T.parse(r"\x:*. x") == T.Lambda("x", T.STAR_TERM, T.Var(0))


def test_parse_polymorphic_identity_type():
    t = T.parse(r"(\a:*. \_:a. a) (?:*)")
    inner = T.Lambda("_", T.Var(0), T.Var(1))
    assert t == T.Apply(T.Lambda("a", T.STAR_TERM, inner), T.Ctor(T.HOLE, T.STAR_TERM))


def test_unbound_name_reports_position():
    with pytest.raises(UnboundName) as e:
        T.parse(r"\x:*. y")
    assert e.value.name == "y"
    assert e.value.lineno == 1


@pytest.mark.parametrize("src", ["(", r"\x. x", "letrec f:* = f", "[Star]", "x y ) z"])
def test_malformed_input(src):
    with pytest.raises(ParseError):
        T.parse(src)


def test_literals_and_sigils():
    t = T.parse(r"\p:*. !p ('p) (-3) #0 [Cons 1] [Nil]")
    h, args = t.body, []
    while isinstance(h, T.Apply):
        args.append(h.arg)
        h = h.fun
    assert h == T.Dtor(0)
    assert args[::-1] == [T.VarT(0), T.int_lit(-3), T.Var(0), T.Ctor(T.CONS, T.int_lit(1)),
                          T.Ctor(T.NIL)]


def test_comments_are_ignored():
    assert T.parse("-- a comment\n* -- trailing") == T.STAR_TERM


def test_print_identity():
    assert T.pretty(T.Lambda("x", T.STAR_TERM, T.Var(0))) == r"\x:*. x"


def test_print_free_index_marker():
    t = T.Lambda("x", T.STAR_TERM, T.Lambda("y", T.STAR_TERM, T.Var(3)))
    assert T.pretty(t).endswith("#3")


def test_print_letrec():
    assert T.pretty(T.LetRec("f", T.STAR_TERM, T.Var(0), T.Var(0))) == "letrec f:* = f in f"


def test_print_renames_shadowed_binders():
    t = T.Lambda("x", T.STAR_TERM, T.Lambda("x", T.STAR_TERM, T.Var(1)))
    s = T.pretty(t)
    assert T.parse(s) == t
    assert s != r"\x:*. \x:*. x"


def test_alpha_eq_ignores_names():
    assert T.alpha_eq(T.Lambda("x", T.STAR_TERM, T.Var(0)), T.Lambda("y", T.STAR_TERM, T.Var(0)))
    assert not T.alpha_eq(T.Var(0), T.Var(1))


@pytest.mark.parametrize("name", ["id", "tak", "queens6", "queens8"])
def test_bundled_programs_roundtrip(name):
    t = T.parse(program_source(name))
    assert T.is_closed(t)
    assert T.alpha_eq(T.parse(T.pretty(t)), t)


def test_node_counts():
    assert T.node_counts(T.parse(r"\x:*. x")) == (2, 1)
    assert T.node_counts(T.parse(r"(\x:*. x) *")) == (3, 1)
    assert T.node_counts(T.STAR_TERM) == (1, 0)


def test_shift_and_closedness():
    t = T.Lambda("x", T.STAR_TERM, T.Apply(T.Var(0), T.Var(1)))
    assert not T.is_closed(t)
    assert T.max_free(t) == 0
    assert T.shift(t, 2) == T.Lambda("x", T.STAR_TERM, T.Apply(T.Var(0), T.Var(3)))
