"""Live contexts over a benchmark run, sampled at every context creation.

The acceptance check asks that the second half of the run reaches the
whole run's peak.  The bars show the rest: the profile stays level instead
of growing.  Takes about 15 s for tak.

    python demos/constant_space.py [tak|queens6|queens8]
"""

import sys

from spinevm.bench import bench

program = sys.argv[1] if len(sys.argv) > 1 else "tak"
rep = bench(program, samples=True)
for line in rep.lines():
    print(line)

trace = rep.context_trace
buckets = 48
width = 60
size = max(1, len(trace) // buckets)
peak = rep.stats.hw_contexts
print(f"\nlive contexts, max per {size} allocations (peak {peak}):")
for i in range(0, len(trace), size):
    top = max(trace[i:i + size])
    print(f"{i:>9} |{'#' * round(width * top / peak)}")
