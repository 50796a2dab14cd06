"""Random terms through both the evaluator and a plain substitution
normalizer, printing a few of them and a summary.

    python demos/oracle.py [count]
"""

import sys

from spinevm import pretty
from spinevm.bench import run_deep
from spinevm.corpus import compare, run_corpus
from spinevm.term import Term

count = int(sys.argv[1]) if len(sys.argv) > 1 else 200

shown = 0
for seed in range(count):
    if shown == 4:
        break
    o = run_deep(compare, seed, budget=10 ** 5, max_depth=5)
    if o is None or not isinstance(o.expected, Term.__args__) or o.expected == o.term:
        continue
    shown += 1
    print(f"seed {seed}\n  term:      {pretty(o.term)}\n  evaluator: {pretty(o.got)}"
          f"\n  oracle:    {pretty(o.expected)}\n")

summary = run_deep(run_corpus, count, budget=10 ** 5)
print("\n".join(summary.lines()))
