"""By-need evaluation of a type-annotated lambda calculus held in spine
(stack) form.

A term is wound into a spine: a head value, a chain of binders and a list
of pending applications.  Evaluation, read-back of the syntax tree and
reclamation are all folds over that structure, and its seven structural
invariants can be checked after any step.

>>> from spinevm import parse, evaluate, pretty, get_ast
>>> s, _ = evaluate(parse(r"(\\x:Int. addI x 1) 41"))
>>> pretty(get_ast(s))
'42'
"""

from .errors import (BudgetExceeded, DanglingEnd, DtorNonCtor, InternalRefcount,
                     InvariantViolation, NonTermination, ParseError, PrimFailure,
                     PrimTypeError, SpineError, TypeofError, UnboundIndex, UnboundName,
                     UnificationRequired)
from .eval import Machine, evaluate, need, step, typeof, whnf
from .fold import RETRY, Fold, destroy, get_ast, unwind
from .spine import (Binder, Spine, Stats, Violation, check_invariants, check_refcounts,
                    collecting, count_shape, stats)
from .term import (Apply, Ctor, CtorTag, Dtor, Lambda, LetRec, Prim, PrimTag, Var, VarT,
                   alpha_eq, node_counts, parse, pretty, print_term)
from .wind import append_stack, copy_spine, wind, wind_term

__all__ = [
    "Apply", "Binder", "BudgetExceeded", "Ctor", "CtorTag", "DanglingEnd", "Dtor",
    "DtorNonCtor", "Fold", "InternalRefcount", "InvariantViolation", "Lambda", "LetRec",
    "Machine", "NonTermination", "ParseError", "Prim", "PrimFailure", "PrimTag",
    "PrimTypeError", "RETRY", "Spine", "SpineError", "Stats", "TypeofError",
    "UnboundIndex", "UnboundName", "UnificationRequired", "Var", "VarT", "Violation",
    "alpha_eq", "append_stack", "check_invariants", "check_refcounts", "collecting",
    "copy_spine", "count_shape", "destroy", "evaluate", "get_ast", "need", "node_counts",
    "parse", "pretty", "print_term", "step", "stats", "typeof", "unwind", "whnf", "wind",
    "wind_term",
]
