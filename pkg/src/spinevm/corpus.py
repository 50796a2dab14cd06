"""Differential runs of the evaluator against the oracle on generated terms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import oracle as O
from . import term as T
from .errors import BudgetExceeded, NonTermination, SpineError
from .eval import evaluate
from .fold import destroy, get_ast
from .spine import collecting


@dataclass
class Outcome:
    seed: int
    term: T.Term
    expected: object  # normal form, or the exception class raised
    got: object

    @property
    def agrees(self):
        return self.expected == self.got


@dataclass
class Summary:
    counts: Counter = field(default_factory=Counter)
    mismatches: list = field(default_factory=list)      # oracle terminated, evaluator differs
    error_mismatches: list = field(default_factory=list)  # both failed, differently

    @property
    def terminating(self):
        return self.counts["agree"] + len(self.mismatches)

    def lines(self):
        out = [" ".join(f"{k}={v}" for k, v in sorted(self.counts.items()))]
        for o in self.mismatches:
            got = T.pretty(o.got) if isinstance(o.got, T.Term) else o.got.__name__
            out.append(f"seed {o.seed}: expected {T.pretty(o.expected)} got {got}")
        return out


def _evaluate(t, max_steps, deep):
    with collecting():
        try:
            s, _ = evaluate(t, deep=deep, max_steps=max_steps)
        except SpineError as e:
            return type(e)
        r = get_ast(s)
        destroy(s)
        return r


def compare(seed, *, budget=10 ** 6, max_depth=8, deep=True, max_steps=None):
    """Outcome for one generated term, or None when the oracle gives up."""
    t = O.gen_term(seed, max_depth)
    try:
        expected = O.normalize_whnf(t, budget, deep=deep)
    except (BudgetExceeded, O.Unsupported):
        return None
    except SpineError as e:
        expected = type(e)
    got = _evaluate(t, max_steps or budget, deep)
    return Outcome(seed, t, expected, got)


def run_corpus(count, *, seed=0, budget=10 ** 6, max_depth=8, deep=True):
    """Compare ``count`` terms from consecutive seeds starting at ``seed``."""
    summary = Summary()
    for k in range(seed, seed + count):
        o = compare(k, budget=budget, max_depth=max_depth, deep=deep)
        if o is None:
            summary.counts["oracle_gave_up"] += 1
        elif isinstance(o.expected, T.Term):
            if o.agrees:
                summary.counts["agree"] += 1
            else:
                summary.counts["mismatch"] += 1
                summary.mismatches.append(o)
        elif o.agrees:
            summary.counts["same_error"] += 1
        else:
            summary.counts["error_mismatch"] += 1
            summary.error_mismatches.append(o)
        if o is not None and o.got is NonTermination:
            summary.counts["evaluator_step_limit"] += 1
    return summary
