"""Benchmark driver: allocation statistics, high-water marks and the
constant-space check over the bundled programs."""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field
from importlib import resources

from . import term as T
from .eval import DEFAULT_MAX_STEPS, Machine
from .fold import destroy, get_ast
from .spine import Spine, Stats, collecting
from .wind import wind

CONTEXT_BYTES = 48
SPINE_BYTES = 56

PROGRAMS = ("id", "tak", "queens6", "queens8")


def program_source(name):
    """Source text of a bundled program (``tak``, ``tak.lam``, ...)."""
    base = name.rsplit("/", 1)[-1]
    if not base.endswith(".lam"):
        base += ".lam"
    try:
        return resources.files("spinevm").joinpath("programs", base).read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"no bundled program named {base!r}") from None


def run_deep(fn, *args, stack_mb=1024, recursion_limit=300_000, **kwargs):
    """Call ``fn`` on a thread with a large stack and recursion limit.

    Evaluation recurses along the nesting of spines, which for the
    benchmarks is far deeper than the interpreter's defaults allow.
    Exceptions propagate to the caller.
    """
    box = {}

    def target():
        try:
            box["value"] = fn(*args, **kwargs)
        except BaseException as e:  # re-raised in the caller's thread
            box["error"] = e

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, recursion_limit))
    threading.stack_size(stack_mb * 1024 * 1024)
    try:
        th = threading.Thread(target=target, name="spinevm-eval")
        th.start()
        th.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]


@dataclass
class Report:
    program: str
    result: str
    steps: int
    seconds: float
    stats: Stats
    # live context counts at each context creation (empty when not sampling)
    context_trace: list = field(default_factory=list, repr=False)

    @property
    def hw_bytes(self):
        return self.stats.hw_contexts * CONTEXT_BYTES + self.stats.hw_spines * SPINE_BYTES

    def halves(self):
        """Context high-water over the first and the second half of the
        run, time being measured in context creations."""
        tr = self.context_trace
        if not tr:
            raise ValueError("run was not sampled")
        mid = len(tr) // 2
        return max(tr[:mid], default=0), max(tr[mid:])

    def constant_space(self):
        """True when the second half of the run reaches the full-run peak."""
        return self.halves()[1] == self.stats.hw_contexts

    def lines(self):
        out = [f"program={self.program} result={self.result} steps={self.steps} "
               f"seconds={self.seconds:.2f}",
               self.stats.line(),
               f"hw_bytes={self.hw_bytes} ({CONTEXT_BYTES} per context, "
               f"{SPINE_BYTES} per spine)"]
        if self.context_trace:
            first, second = self.halves()
            out.append(f"hw_contexts first_half={first} second_half={second}")
        return out


def evaluate_source(source, *, deep=True, check=False, max_steps=DEFAULT_MAX_STEPS,
                    sample=False, name="<source>"):
    """Parse, wind and evaluate ``source`` under fresh statistics; the
    result spine is destroyed after its encoding is read back."""
    t = T.parse(source)
    st = Stats(sample=sample)
    with collecting(st):
        start = time.perf_counter()
        s = wind(Spine(None), t)
        m = Machine(max_steps, check_root=s if check else None)
        m.need(s, deep)
        seconds = time.perf_counter() - start
        result = get_ast(s)
        destroy(s)
    trace = [c for c, _ in st.samples] if sample else []
    return Report(name, T.pretty(result), m.steps, seconds, st, trace)


def bench(program, samples=True, *, check=False, max_steps=DEFAULT_MAX_STEPS):
    """Run a bundled program (or a path) and report on it.  With
    ``samples`` the live counts are recorded at every context creation;
    timings are only meaningful with sampling off."""
    try:
        source = program_source(program)
    except FileNotFoundError:
        with open(program) as f:
            source = f.read()
    return run_deep(evaluate_source, source, check=check, max_steps=max_steps,
                    sample=samples, name=program)
