import pytest

from spinevm import term as T
from spinevm.errors import DtorNonCtor, NonTermination, UnificationRequired
from spinevm.eval import DONE, PROGRESSED, Machine, evaluate
from spinevm.fold import destroy, get_ast
from spinevm.oracle import gen_term
from spinevm.spine import (HCtor, HVar, Spine, check_invariants, check_refcounts, collecting,
                           owned)
from spinevm.wind import wind

from conftest import deep


def wound(src):
    return wind(Spine(None), T.parse(src) if isinstance(src, str) else src)


def result(src, deep_=False, **kw):
    with collecting() as st:
        s, _ = evaluate(T.parse(src), deep=deep_, check=True, **kw)
        out = T.pretty(get_ast(s))
        assert check_refcounts(s) == []
        destroy(s)
        assert st.live() == (0, 0)
    return out


def test_step_on_literal_is_done():
    with collecting():
        s = wound("5")
        assert Machine().step(s) is DONE


def test_step_on_open_variable_is_done():
    with collecting():
        s = wound(r"\x:*. x")
        assert Machine().step(s) is DONE


def test_step_dereferences_bound_variable():
    with collecting():
        s = wound(r"(\x:*. x) *")
        [x] = owned(s)
        assert x.refs == 1
        assert Machine().step(s) is PROGRESSED
        assert isinstance(s.head, HCtor) and s.head.tag == T.STAR
        # the binder was collected by the step's sweep
        assert owned(s) == [] and x.dead


def test_need_beta_then_collect():
    with collecting():
        s, _ = evaluate(T.parse(r"(\x:Int. x) 5"))
        assert s.head.tag == T.int_tag(5) and owned(s) == []


def test_ones_stops_at_constructor():
    src = r"letrec ones:* = [Cons (\h:Int. \t:*. [Tup h]) 1 ones] in ones"
    with collecting():
        s, m = evaluate(T.parse(src), check=True)
        assert isinstance(s.head, HCtor) and s.head.tag == T.CONS
        assert m.steps < 10


def test_self_reference_is_stuck_not_looping():
    assert result(r"letrec x:* = x in x") == "letrec x:* = x in x"


@pytest.mark.parametrize("src, expected", [
    (r"(\a:*. \b:*. a) * Int", "*"),
    (r"(\x:Int. addI x 1) 41", "42"),
    (r"\a:*. \b:a. b", r"\a:*. \b:a. b"),
    (r"\n:Int. addI n 1", r"\n:Int. addI n 1"),
    (r"(\p:*. !p 7) [Tup \v:*. addI v 1]", "8"),
    (r"\a:*. (\x:*. x) a", r"\a:*. a"),
    (r"(\a:*. \x:a. x) Int", r"\x:Int. x"),
    (r"(\a:*. \x:'a. x) Int", r"\x:*. x"),
])
def test_results(src, expected):
    assert result(src) == expected


def test_deep_evaluates_payloads():
    assert result(r"[Cons (\x:Int. x) 3]") == r"[Cons (\x:Int. x) 3]"
    assert result(r"[Cons (\x:Int. x) 3]", deep_=True) == "[Cons 3]"


def test_destructor_of_function_fails():
    with pytest.raises(DtorNonCtor):
        result(r"(\p:*. !p) (\x:*. x)")


def test_step_budget():
    src = r"letrec f:* = \n:Int. f (addI n 1) in f 0"
    with pytest.raises(NonTermination):
        result(src, max_steps=200)


def test_typeof_star():
    with collecting():
        assert get_ast(Machine().typeof(wound("*"))) == T.STAR_TERM
        assert get_ast(Machine().typeof(wound("?:*"))) == T.STAR_TERM
        assert get_ast(Machine().typeof(wound("3"))) == T.INT_TERM


def test_typeof_dresses_with_context():
    with collecting():
        ty = Machine().typeof(wound(r"\a:*. \b:a. b"))
        assert T.pretty(get_ast(ty)) == r"\a:*. \b:a. a"


def test_typeof_applies_annotation_to_arguments():
    with collecting():
        ty = Machine().typeof(wound("addI 1 2"))
        assert get_ast(ty) == T.INT_TERM


def test_typeof_needs_unification():
    with collecting(), pytest.raises(UnificationRequired):
        Machine().typeof(wound(r"\a:(?:*). \b:(?:*). a b"))


@deep
def test_interrupted_evaluation_is_valid():
    with collecting() as st:
        for seed in range(150):
            t = gen_term(seed, 8)
            for k in (1, 3, 10):
                s = wound(t)
                m = Machine(max_steps=k, check_root=s)
                try:
                    m.need(s, deep=True)
                except NonTermination:
                    pass
                except DtorNonCtor:
                    pass
                except Exception as e:
                    if type(e).__name__ != "PrimTypeError":
                        raise
                assert check_invariants(s) is None
                back = get_ast(s)
                again = wound(back)
                assert T.alpha_eq(get_ast(again), back)
                destroy(again)
                destroy(s)
        assert st.live() == (0, 0)
