"""Call-by-need, one step at a time.

``x`` is used twice but its binding ``addI 20 1`` is reduced once: the
first use evaluates it in place and copies the value out, the second
finds 21 there.  Being the last use, the second moves the value instead of
copying it and leaves ``*`` behind until the binding is collected.  The
binding ``unused`` is never evaluated.

    python demos/by_need.py
"""

from spinevm import Machine, Spine, collecting, destroy, get_ast, parse, pretty, wind


class Tracing(Machine):
    """Prints the whole program after every step, at any nesting depth."""

    def check_now(self):
        print(f"{self.steps:2}  {pretty(get_ast(self.check_root))}")
        super().check_now()


SOURCE = r"(\x:Int. (\unused:Int. addI x x) (mulI 1000 1000)) (addI 20 1)"

with collecting() as gauges:
    s = wind(Spine(None), parse(SOURCE))
    m = Tracing(check_root=s)  # every step is also followed by a full invariant check
    m.check_now()
    m.need(s)
    print("result:", pretty(get_ast(s)), f"after {m.steps} steps")
    destroy(s)
    print(gauges)
