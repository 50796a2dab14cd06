"""Winding a term into a spine, reading it back, and breaking it on purpose.

    python demos/spines.py
"""

from spinevm import (Spine, check_invariants, collecting, count_shape, destroy, get_ast,
                     node_counts, parse, pretty, wind)
from spinevm.spine import owned

with collecting() as gauges:
    t = parse(r"(\a:*. \b:a. (\f:*. f b) (\x:a. x)) *")
    print("term:         ", pretty(t))

    s = wind(Spine(None), t)
    print("spine:        ", s)
    # Lambdas met by an argument are paired with it; b has none and stays open.
    print("binders:      ", owned(s))
    print("shape:         count_shape =", count_shape(s), " node_counts =", node_counts(t))
    print("read back:    ", pretty(get_ast(s)))
    print("invariants:   ", check_invariants(s) or "all seven hold")
    destroy(s)

    # Stretch a paired binding over a pending application that must stay
    # outside it, and the checker names the broken property.
    s = wind(Spine(None), parse(r"\a:*. (\x:*. x) * a"))
    x, _ = owned(s)
    saved, x.rhs.end = x.rhs.end, s.end
    print("after damage: ", check_invariants(s))
    x.rhs.end = saved
    destroy(s)
    print("after destroy:", gauges)
