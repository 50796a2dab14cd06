from hypothesis import given, settings
from hypothesis import strategies as st

from spinevm import term as T
from spinevm.corpus import compare
from spinevm.errors import SpineError
from spinevm.eval import DONE, Machine
from spinevm.fold import destroy, get_ast
from spinevm.oracle import Unsupported, gen_term, normalize_whnf
from spinevm.spine import Spine, check_invariants, check_refcounts, collecting, count_shape
from spinevm.wind import wind

from conftest import deep

seeds = st.integers(min_value=0, max_value=10 ** 9)


@given(seeds)
def test_wind_then_read_back(seed):
    t = gen_term(seed)
    with collecting() as gauges:
        s = wind(Spine(None), t)
        assert check_invariants(s) is None
        assert count_shape(s) == T.node_counts(t)
        assert T.alpha_eq(get_ast(s), t)
        destroy(s)
        assert gauges.live() == (0, 0)


@given(seeds)
def test_print_then_parse(seed):
    t = gen_term(seed)
    assert T.alpha_eq(T.parse(T.pretty(t)), t)


@settings(deadline=None, max_examples=300)
@given(seeds, st.integers(min_value=0, max_value=40))
@deep
def test_steps_preserve_invariants(seed, k):
    with collecting() as gauges:
        s = wind(Spine(None), gen_term(seed))
        m = Machine(max_steps=10 ** 4)
        try:
            for _ in range(k):
                if m.step(s) is DONE:
                    break
                assert check_invariants(s) is None
        except SpineError:
            pass  # the term's own error; the structure must still be sound
        assert check_invariants(s) is None
        assert check_refcounts(s) == []
        snapshot = get_ast(s)
        again = wind(Spine(None), snapshot)
        assert check_invariants(again) is None
        assert T.alpha_eq(get_ast(again), snapshot)
        destroy(again)
        destroy(s)
        assert gauges.live() == (0, 0)


@settings(deadline=None, max_examples=300)
@given(seeds)
@deep
def test_agrees_with_oracle(seed):
    o = compare(seed, budget=10 ** 4)
    if o is not None and isinstance(o.expected, T.Term):
        assert isinstance(o.got, T.Term), o.got
        assert T.alpha_eq(o.got, o.expected)


@settings(deadline=None, max_examples=300)
@given(seeds)
@deep
def test_shallow_result_means_the_same(seed):
    # unevaluated payloads read back as syntax the oracle would have
    # rewritten, so compare after normalizing both sides fully
    o = compare(seed, budget=10 ** 4, deep=False)
    if o is None or not isinstance(o.expected, T.Term):
        return
    try:
        want = normalize_whnf(o.term, 10 ** 4)
        got = normalize_whnf(o.got, 10 ** 4)
    except (SpineError, Unsupported):
        return
    assert T.alpha_eq(got, want)
