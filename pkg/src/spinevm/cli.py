"""``spinevm`` command-line driver.

Exit status is 0 on success, 1 on a parse or evaluation error and 2 when
a structural invariant is violated during ``--check-every-step``.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import term as T
from .bench import PROGRAMS, bench, program_source, run_deep
from .errors import InvariantViolation, SpineError
from .eval import DEFAULT_MAX_STEPS, Machine
from .fold import destroy, get_ast
from .spine import Spine, Stats, collecting
from .wind import wind


def read_program(path):
    """Contents of ``path``; a missing file falls back to the bundled
    program of the same base name, so ``examples/tak.lam`` works anywhere."""
    if os.path.exists(path):
        with open(path) as f:
            return f.read()
    try:
        return program_source(os.path.basename(path))
    except FileNotFoundError:
        raise FileNotFoundError(f"{path}: no such file or bundled program") from None


def _eval(args, out):
    t = T.parse(read_program(args.file))
    st = Stats()
    with collecting(st):
        s = wind(Spine(None), t)
        m = Machine(args.max_steps, check_root=s if args.check_every_step else None)
        if args.check_every_step:
            m.check_now()
        m.need(s, args.deep)
        out.append(T.pretty(get_ast(s)))
        destroy(s)
    if args.stats:
        out.append(st.line())


def _ast(args, out):
    t = T.parse(read_program(args.file))
    with collecting():
        s = wind(Spine(None), t)
        out.append(T.pretty(get_ast(s)))
        destroy(s)


def _typeof(args, out):
    t = T.parse(read_program(args.file))
    with collecting():
        s = wind(Spine(None), t)
        m = Machine(args.max_steps)
        ty = m.typeof(s)
        out.append(T.pretty(get_ast(ty)))
        destroy(ty)
        destroy(s)


def _bench(args, out):
    for name in args.programs or ["tak"]:
        rep = bench(name, samples=not args.no_sample, max_steps=args.max_steps)
        out.extend(rep.lines())


def _corpus(args, out):
    from .corpus import run_corpus

    summary = run_corpus(args.count, seed=args.seed, budget=args.budget)
    out.extend(summary.lines())
    if summary.mismatches:
        raise SpineError(f"{len(summary.mismatches)} corpus terms disagree with the oracle")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS, metavar="N",
                        help="abort evaluation after N reduction steps")

    p = argparse.ArgumentParser(prog="spinevm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a program and print the result")
    e.add_argument("file")
    e.add_argument("--stats", action="store_true", help="print allocation statistics")
    e.add_argument("--check-every-step", action="store_true",
                   help="check all structural invariants after every step")
    e.add_argument("--deep", action="store_true",
                   help="also evaluate inside constructor payloads")
    e.set_defaults(run=_eval)

    a = sub.add_parser("ast", help="print the initial encoding without evaluating")
    a.add_argument("file")
    a.set_defaults(run=_ast)

    ty = sub.add_parser("typeof", parents=[common], help="print the type of a program")
    ty.add_argument("file")
    ty.set_defaults(run=_typeof)

    b = sub.add_parser("bench", parents=[common], help="run bundled benchmark programs")
    b.add_argument("programs", nargs="*", metavar="program",
                   help=f"bundled name or path (default tak); bundled: {', '.join(PROGRAMS)}")
    b.add_argument("--no-sample", action="store_true",
                   help="skip per-allocation sampling (for timing)")
    b.set_defaults(run=_bench)

    c = sub.add_parser("corpus", help="compare the evaluator with the oracle on random terms")
    c.add_argument("--seed", type=int, default=0, metavar="N", help="first generator seed")
    c.add_argument("--count", type=int, default=200, metavar="N", help="number of terms")
    c.add_argument("--budget", type=int, default=10 ** 6, metavar="N",
                   help="oracle reduction budget per term")
    c.set_defaults(run=_corpus)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = []
    try:
        run_deep(args.run, args, out)
    except InvariantViolation as e:
        print("\n".join(out))
        print(f"spinevm: invariant violation: {e}", file=sys.stderr)
        return 2
    except (SpineError, SyntaxError, OSError, RecursionError) as e:
        if out:
            print("\n".join(out))
        print(f"spinevm: error: {e}", file=sys.stderr)
        return 1
    print("\n".join(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
