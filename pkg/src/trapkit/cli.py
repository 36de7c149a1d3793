"""Command-line interface: ``trapkit <command> ...``.

Exit codes: 0 success, 1 a negative answer or other failure, 2 invalid
input, 3 a trace that is undefined even after completion, 4 arity or
index errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, canon, decorated as dg, graph as gr, trace
from .errors import ArityError, PartialityError, TrapkitError, ValidationError
from .free_eval import (
    GraphTrap,
    check_trap_axioms,
    default_tolerance,
    eval_free_trap,
)
from .perm import Permutation
from .textformat import emit_element, emit_graph, materialize, parse_bindings, parse_graph


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(spec: str):
    """``path`` or ``path:name``; returns a Graph or DecoratedGraph."""
    path, name = spec, None
    if spec != "-" and not os.path.exists(spec) and ":" in spec:
        path, name = spec.rsplit(":", 1)
    return parse_graph(_read(path), name)


def _plain(g):
    return g.graph if isinstance(g, dg.DecoratedGraph) else g


def _same_kind(template, graph):
    if isinstance(template, dg.DecoratedGraph):
        return template._same_kind(graph, template.decorations)
    return graph


def _perm(text: str, n: int) -> Permutation:
    if text is None:
        return Permutation.identity(n)
    return Permutation.parse(text)


# -- commands -------------------------------------------------------------------


def cmd_canon(args):
    g = _load(args.graph)
    G = _plain(g)
    labels = g.labels() if isinstance(g, dg.DecoratedGraph) else None
    form = canon.canonical_form(G, ports=args.ports, labels=labels)
    print(form.hex())
    if args.show:
        print(emit_graph(canon.canonical_graph(G, ports=args.ports, labels=labels), "canonical"))
    return 0


def cmd_iso(args):
    a, b = _load(args.a), _load(args.b)
    if isinstance(a, dg.DecoratedGraph) or isinstance(b, dg.DecoratedGraph):
        a, b = dg.as_decorated(a), dg.as_decorated(b)
        same = gr.is_isomorphic(a.graph, b.graph, ports=args.ports, labels_g=a.labels(), labels_h=b.labels())
    else:
        same = gr.is_isomorphic(a, b, ports=args.ports)
    print("isomorphic" if same else "not isomorphic")
    return 0 if same else 1


def cmd_hconcat(args):
    a, b = dg.as_decorated(_load(args.a)), dg.as_decorated(_load(args.b))
    print(emit_graph(dg.hconcat(a, b), "hconcat"))
    return 0


def cmd_vconcat(args):
    top, bottom = dg.as_decorated(_load(args.top)), dg.as_decorated(_load(args.bottom))
    print(emit_graph(dg.vconcat(top, bottom), "vconcat"))
    return 0


def cmd_act(args):
    g = dg.as_decorated(_load(args.graph))
    sigma = _perm(args.left, g.n_outputs)
    tau = _perm(args.right, g.n_inputs)
    print(emit_graph(dg.group_act(sigma, g, tau), "acted"))
    return 0


def cmd_trace(args):
    g = dg.as_decorated(_load(args.graph))
    print(emit_graph(dg.partial_trace(g, args.i, args.j), "traced"))
    return 0


def cmd_fulltrace(args):
    g = _load(args.graph)
    print(emit_graph(_same_kind(g, trace.full_trace(_plain(g))), "closed"))
    return 0


def cmd_decompose(args):
    g = _load(args.graph)
    d = analysis.minimal_decomposition(_plain(g))
    print(f"gamma {' '.join(map(str, d.gamma.word)) or '(empty)'}")
    print(f"pass_through {d.pass_through}")
    print(f"loops {d.loops}")
    for n, part in enumerate(d.parts, 1):
        print(emit_graph(part, f"part{n}"))
    print(emit_graph(d.remainder, "remainder"))
    return 0


def cmd_indecomposable(args):
    result = analysis.is_indecomposable(_plain(_load(args.graph)))
    print("indecomposable" if result else "decomposable")
    return 0


def cmd_cycles(args):
    G = _plain(_load(args.graph))
    print(f"has_cycle {'yes' if analysis.has_cycle(G) else 'no'}")
    print(f"loops {G.loops}")
    print(f"cycle_free {'yes' if analysis.is_cycle_free(G) else 'no'}")
    return 0


def _make_target(args):
    from .kernel_trap import KernelTrap
    from .tensor_trap import TensorTrap

    tol = args.tol if args.tol is not None else default_tolerance()
    if args.target == "tensor":
        return TensorTrap(args.dim, exact=not args.float, tol=tol)
    if args.target == "kernel":
        return KernelTrap(args.grid, tol=tol)
    if args.target == "graph":
        return GraphTrap(planar=True)
    raise ValidationError(f"unknown target {args.target!r}")


def cmd_eval(args):
    g = dg.as_decorated(_load(args.graph))
    target = _make_target(args)
    if args.target == "graph":
        value = eval_free_trap(g, target, None, strategy=args.strategy)
    else:
        if not args.bindings:
            raise ValidationError("--bindings is required for this target")
        bound = materialize(parse_bindings(_read(args.bindings)), target)
        value = eval_free_trap(g, target, bound, strategy=args.strategy)
    print(emit_element(value))
    return 0


def cmd_check_axioms(args):
    from .sampling import random_graph_of_arity

    target = _make_target(args)
    if args.target == "graph":
        def sampler(rng, k, l):
            return random_graph_of_arity(rng, k, l)
        report = check_trap_axioms(target, sampler, args.trials, args.seed, max_arity=3)
    elif args.target == "kernel":
        report = check_trap_axioms(target, target.random, args.trials, args.seed, max_arity=2, max_slots=4)
    else:
        report = check_trap_axioms(target, target.random, args.trials, args.seed, max_arity=3)
    print(report)
    print("all axioms hold" if report.ok else "axiom failures found")
    return 0 if report.ok else 1


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trapkit", description="Graphs with partial traces and their evaluation.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, fn, help_text, *positional):
        sp = sub.add_parser(name, help=help_text)
        for arg in positional or ("graph",):
            sp.add_argument(arg, help="graph file ('-' for stdin, 'path:name' picks a block)")
        sp.set_defaults(func=fn)
        return sp

    sp = graph_cmd("canon", cmd_canon, "print the canonical form")
    sp.add_argument("--ports", action="store_true", help="respect port orders")
    sp.add_argument("--show", action="store_true", help="also print the canonical representative")
    sp = graph_cmd("iso", cmd_iso, "decide isomorphism", "a", "b")
    sp.add_argument("--ports", action="store_true")
    graph_cmd("hconcat", cmd_hconcat, "horizontal concatenation A * B", "a", "b")
    graph_cmd("vconcat", cmd_vconcat, "vertical concatenation TOP o BOTTOM", "top", "bottom")
    sp = graph_cmd("act", cmd_act, "act by permutations on outputs (left) and inputs (right)")
    sp.add_argument("--left", help="permutation word on the outputs, e.g. '2 1 3'")
    sp.add_argument("--right", help="permutation word on the inputs")
    sp = graph_cmd("trace", cmd_trace, "glue output J back into input I")
    sp.add_argument("i", type=int)
    sp.add_argument("j", type=int)
    graph_cmd("fulltrace", cmd_fulltrace, "close every input against its output")
    graph_cmd("decompose", cmd_decompose, "minimal decomposition")
    graph_cmd("indecomposable", cmd_indecomposable, "test indecomposability")
    graph_cmd("cycles", cmd_cycles, "report cycles and loops")

    def target_options(sp):
        sp.add_argument("--target", choices=("tensor", "kernel", "graph"), default="tensor")
        sp.add_argument("--dim", type=int, default=2, help="dimension d of the tensor target")
        sp.add_argument("--grid", type=int, default=64, help="grid size N of the kernel target")
        sp.add_argument("--tol", type=float, default=None, help="relative tolerance for float comparisons")
        sp.add_argument("--float", action="store_true", help="use float tensors instead of exact rationals")

    sp = graph_cmd("eval", cmd_eval, "evaluate a decorated graph in a target")
    target_options(sp)
    sp.add_argument("--bindings", help="bindings file")
    sp.add_argument("--strategy", choices=("scheduled", "naive"), default="scheduled")

    sp = sub.add_parser("check-axioms", help="randomised check of the trace axioms")
    target_options(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check_axioms)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ArityError as exc:
        print(f"arity error: {exc}", file=sys.stderr)
        return 4
    except PartialityError as exc:
        print(f"undefined trace: {exc}", file=sys.stderr)
        return 3
    except IndexError as exc:
        print(f"index error: {exc}", file=sys.stderr)
        return 4
    except (ValidationError, ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except TrapkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
