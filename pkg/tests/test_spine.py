import pytest

from spinevm import spine as S
from spinevm import term as T
from spinevm.errors import InternalRefcount
from spinevm.fold import destroy
from spinevm.oracle import gen_term
from spinevm.spine import (Binder, HCtor, HVar, Spine, check_invariants, check_refcounts,
                           collecting, count_shape, incref, decref, new_spine, owned)
from spinevm.wind import wind


def wound(src):
    return wind(Spine(None), T.parse(src))


def test_new_spine_counts_and_is_valid_once_headed():
    with collecting() as st:
        s = new_spine(None)
        assert st.spines_alloc == 1 and st.live_spines == 1
        s.head = HCtor(T.STAR)
        assert check_invariants(s) is None


def test_new_spine_at_binder():
    with collecting():
        annot = Spine(None)
        annot.head = HCtor(T.STAR)
        b = Binder("x", annot, None, None)
        s = new_spine(b)
        s.head = HCtor(T.STAR)
        assert s.end is b and check_invariants(s) is None


def test_refcounts():
    with collecting():
        b = Binder("x", None, None, None)
        assert incref(b) == 1
        assert decref(b) == 0
        with pytest.raises(InternalRefcount):
            decref(b)


def test_unset_head_is_a_violation():
    with collecting():
        v = check_invariants(Spine(None))
    assert v is not None and v.property == 3


@pytest.mark.parametrize("src, shape", [
    (r"\x:*. x", (2, 1)),
    (r"(\x:*. x) *", (3, 1)),
    ("*", (1, 0)),
])
def test_count_shape(src, shape):
    with collecting():
        assert count_shape(wound(src)) == shape


def test_wound_terms_are_valid():
    srcs = [r"\a:*. \b:a. b", r"(\x:*. x) *", r"letrec f:* = f in f", r"\p:*. !p 'p",
            r"\a:*. (\x:*. x) * a", "addI 1 2"]
    with collecting():
        for src in srcs:
            s = wound(src)
            assert check_invariants(s) is None, src
            assert check_refcounts(s) == []


def test_pending_end_inside_a_pair_is_property_6():
    with collecting():
        s = wound(r"\a:*. (\x:*. x) * a")
        x, a = owned(s)
        assert x.rhs is not None and a.rhs is None and len(s.pending) == 1
        assert check_invariants(s) is None
        x.rhs.end = s.end  # stretch the pair over the pending application's end
        v = check_invariants(s)
    assert v.property == 6
    assert "pending" in v.locus


def test_pending_past_open_binder_is_property_7():
    with collecting():
        s = wound(r"\a:*. \b:*. a")
        b, a = owned(s)
        arg = Spine(None)
        arg.head = HCtor(T.STAR)
        s.pending.append(arg)  # ends at the root, past both open binders
        v = check_invariants(s)
    assert v.property == 7


def test_dangling_head_is_property_2():
    with collecting():
        s = wound(r"\a:*. a")
        stray = Binder("z", None, None, None)
        s.head = HVar(stray)
        v = check_invariants(s)
    assert v.property == 2


def test_annotation_must_end_at_successor():
    with collecting():
        s = wound(r"\a:*. \b:*. a")
        b, a = owned(s)
        b.annot.end = None
        v = check_invariants(s)
    assert v.property == 1


def test_crossing_pairs_are_property_4():
    with collecting():
        s = wound(r"(\a:*. (\b:*. (\c:*. c) *) *) *")
        c, b, a = owned(s)
        # stretch c's pair to a, then let b (inside it) reach the root
        c.rhs.end = c.rhs.ctx = a
        b.rhs.end = b.rhs.ctx = None
        v = check_invariants(s)
    assert v.property == 4


def test_refcount_scan_after_destroy_of_copy_is_clean():
    from spinevm.wind import copy_spine
    with collecting() as st:
        s = wound(r"\a:*. (\x:*. a) *")
        x, a = owned(s)
        before = a.refs
        # the body's reference to a escapes the copied sub-spine
        inner = x.rhs
        c = copy_spine(inner)
        destroy(c)
        assert a.refs == before
        destroy(s)
        assert st.live() == (0, 0)


def _stretch_pair(s):
    x, _ = owned(s)
    x.rhs.end = s.end


def _cross_pairs(s):
    c, b, a = owned(s)
    c.rhs.end = c.rhs.ctx = a
    b.rhs.end = b.rhs.ctx = None


def _past_open(s):
    arg = Spine(None)
    arg.head = HCtor(T.STAR)
    s.pending.append(arg)


def _dangle(s):
    s.head = HVar(Binder("z", None, None, None))


CORRUPTIONS = [
    (r"\a:*. (\x:*. x) * a", _stretch_pair),
    (r"(\a:*. (\b:*. (\c:*. c) *) *) *", _cross_pairs),
    (r"\a:*. \b:*. a", _past_open),
    (r"\a:*. a", _dangle),
    (r"\a:*. \b:*. a", lambda s: setattr(owned(s)[0].annot, "end", None)),
]


@pytest.mark.skipif(S._scan is S._scan_py, reason="compiled scanner not built")
@pytest.mark.parametrize("src, corrupt", CORRUPTIONS)
def test_compiled_scan_matches_python_scan(src, corrupt):
    with collecting():
        s = wound(src)
        assert S._scan(s) is None and S._scan_py(s) is None
        corrupt(s)
        bad = S._scan_py(s)
        assert bad is not None and S._scan(s) is bad


@pytest.mark.skipif(S._scan is S._scan_py, reason="compiled scanner not built")
def test_compiled_scan_accepts_corpus():
    with collecting():
        for seed in range(300):
            s = wind(Spine(None), gen_term(seed))
            assert S._scan(s) is None and S._scan_py(s) is None
            destroy(s)
