import pytest

from spinevm.bench import CONTEXT_BYTES, SPINE_BYTES, Report, bench, evaluate_source
from spinevm.spine import Stats

from conftest import report


def test_id_report():
    rep = bench("id")
    assert rep.result == "*" and rep.stats.live() == (0, 0)
    assert rep.stats.hw_contexts >= 1


def test_byte_estimate_formula():
    st = Stats()
    st.hw_contexts, st.hw_spines = 10, 3
    rep = Report("x", "*", 0, 0.0, st)
    assert rep.hw_bytes == 10 * CONTEXT_BYTES + 3 * SPINE_BYTES == 648


def test_halves():
    st = Stats()
    st.hw_contexts = 5
    rep = Report("x", "*", 0, 0.0, st, [1, 5, 2, 3, 5, 4])
    assert rep.halves() == (5, 5) and rep.constant_space()
    rep.context_trace = [1, 5, 2, 3, 4, 4]
    assert rep.halves() == (5, 4) and not rep.constant_space()
    with pytest.raises(ValueError):
        Report("x", "*", 0, 0.0, st).halves()


def test_trace_peak_is_the_high_water_mark():
    src = r"(\a:Int. (\b:Int. (\c:Int. (\d:Int. addI a (addI b (addI c d))) 4) 3) 2) 1"
    rep = evaluate_source(src, sample=True)
    assert rep.result == "10"
    assert rep.context_trace and max(rep.context_trace) == rep.stats.hw_contexts


def test_sampling_does_not_change_counts():
    src = r"(\f:*. f (f 1)) (\x:Int. mulI x 3)"
    a = evaluate_source(src, sample=True)
    b = evaluate_source(src, sample=False)
    assert a.result == b.result == "9"
    assert a.stats.line() == b.stats.line()
    assert len(a.context_trace) == a.stats.contexts_alloc and b.context_trace == []


@pytest.mark.slow
def test_tak_high_water_is_deterministic():
    runs = [report("tak").stats] + [bench("tak", samples=False).stats for _ in range(2)]
    assert len({(s.hw_contexts, s.hw_spines, s.contexts_alloc) for s in runs}) == 1


@pytest.mark.slow
def test_queens6_constant_space(queens6_report):
    rep = queens6_report
    assert rep.result == "4"
    first, second = rep.halves()
    assert second == rep.stats.hw_contexts
