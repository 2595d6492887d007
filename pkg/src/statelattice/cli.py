"""Command-line surface: generators, lattice operations, maps, suites and demos.

Exit codes: 0 success / property pass (or separable), 1 property failure
(or entangled), 2 undecided or inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import serialize
from .bipartite import BipartiteContext, is_separable, psi, tau
from .convex_geometry import (
    FacialReductionError,
    OracleInconclusiveError,
    UndecidedFeasibilityError,
    minimal_face,
)
from .harness import (
    SuiteConfig,
    improper_mixture_demo,
    random_density,
    random_element,
    run_suite,
    separable_volume,
    SUITES,
)
from .lattice import leq as lattice_leq
from .lattice import join as lattice_join
from .lattice import meet as lattice_meet
from .lattice import neg as lattice_neg
from .operators import DEFAULT_BUDGET, DEFAULT_TOL, SpaceShape
from .vn_lattice import face_embed
from .serialize import (
    density_from_json,
    dump_json,
    element_from_json,
    element_to_json,
    load_json,
    matrix_to_json,
    vn_from_json,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNDECIDED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--tol-psd", type=float, default=None,
                   help="override the PSD tolerance")
    p.add_argument("--out", type=str, default=None, help="write JSON result here")
    p.add_argument("--format", choices=("json", "text"), default="text")


def _tolerances(args):
    if getattr(args, "tol_psd", None) is None:
        return DEFAULT_TOL
    return dataclasses.replace(DEFAULT_TOL, psd=args.tol_psd)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="statelattice",
                     description="operations in the lattice of quantum states")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate random objects")
    gensub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    pd = gensub.add_parser("density")
    pd.add_argument("--dim", type=int, required=True)
    pd.add_argument("--rank", type=int, default=None)
    _common_flags(pd)
    pe = gensub.add_parser("element")
    pe.add_argument("--dim", type=int, required=True)
    pe.add_argument("--k", type=int, default=2, help="number of spanning densities")
    _common_flags(pe)

    p = sub.add_parser("op", help="lattice operations on elements")
    p.add_argument("operation", choices=("meet", "join", "neg", "leq"))
    p.add_argument("lhs", help="JSON file of the first element")
    p.add_argument("rhs", nargs="?", default=None, help="JSON file of the second element")
    p.add_argument("--emit-certificate", type=str, default=None,
                   help="write the face certificate of the result here")
    _common_flags(p)

    p = sub.add_parser("embed-face",
                       help="embed a projector as a lattice element")
    p.add_argument("projector", help="JSON file of the projector")
    _common_flags(p)

    p = sub.add_parser("psi", help="going-up map")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--shape", type=str, required=True, help="bipartite shape, e.g. 2x3")
    _common_flags(p)

    p = sub.add_parser("tau", help="going-down map")
    p.add_argument("element")
    p.add_argument("--keep", type=int, choices=(1, 2), required=True)
    _common_flags(p)

    p = sub.add_parser("sep", help="separability verdict")
    p.add_argument("state", help="JSON file of the density matrix")
    p.add_argument("--shape", type=str, required=True)
    p.add_argument("--no-decompose", action="store_true")
    _common_flags(p)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--shape", type=str, default=None)
    p.add_argument("--trials", type=int, default=50)
    _common_flags(p)

    p = sub.add_parser("demo")
    p.add_argument("which", choices=("improper-mixture",))
    p.add_argument("--shape", type=str, default="2x2")
    p.add_argument("--trials", type=int, default=3)
    _common_flags(p)

    p = sub.add_parser("volume",
                       help="separable-volume estimate")
    p.add_argument("--shape", type=str, default="2x2")
    p.add_argument("--samples", type=int, default=10000)
    _common_flags(p)

    return parser


def _emit(doc: dict, args) -> None:
    text = dump_json(doc, args.out)
    if not args.out:
        print(text)


def _cmd_gen(args) -> int:
    tol = _tolerances(args)
    if args.what == "density":
        rank = args.rank if args.rank is not None else args.dim
        rho = random_density(args.dim, rank, args.seed, tol)
        _emit(matrix_to_json(rho), args)
        return EXIT_PASS
    el = random_element(args.dim, args.k, args.seed, tol)
    _emit(element_to_json(el), args)
    return EXIT_PASS


def _cmd_op(args) -> int:
    tol = _tolerances(args)
    a = element_from_json(load_json(args.lhs), tol)
    if args.operation in ("meet", "join", "leq") and args.rhs is None:
        raise SystemExit(f"operation {args.operation} needs two operands")
    if args.operation == "leq":
        b = element_from_json(load_json(args.rhs), tol)
        result = lattice_leq(a, b, tol)
        _emit({"leq": bool(result)}, args)
        return EXIT_PASS
    if args.operation == "neg":
        out = lattice_neg(a, tol, args.budget)
    else:
        b = element_from_json(load_json(args.rhs), tol)
        fn = lattice_meet if args.operation == "meet" else lattice_join
        out = fn(a, b, tol, args.budget)
    _emit(element_to_json(out), args)
    if args.emit_certificate and out.dim > 0:
        cert = minimal_face(out.rep, tol, args.budget)
        dump_json(serialize.certificate_to_json(cert), args.emit_certificate)
    return EXIT_PASS


def _cmd_embed_face(args) -> int:
    tol = _tolerances(args)
    p = vn_from_json(load_json(args.projector), tol)
    el = face_embed(p, tol=tol)
    _emit(element_to_json(el), args)
    return EXIT_PASS


def _cmd_psi(args) -> int:
    tol = _tolerances(args)
    shape = SpaceShape.parse(args.shape)
    ctx = BipartiteContext(shape, tol, args.budget)
    a = element_from_json(load_json(args.lhs), tol)
    b = element_from_json(load_json(args.rhs), tol)
    _emit(element_to_json(psi(a, b, ctx)), args)
    return EXIT_PASS


def _cmd_tau(args) -> int:
    tol = _tolerances(args)
    el = element_from_json(load_json(args.element), tol)
    if not el.shape.is_bipartite:
        raise SystemExit("tau needs an element with a bipartite shape")
    ctx = BipartiteContext(el.shape, tol, args.budget)
    _emit(element_to_json(tau(el, args.keep, ctx)), args)
    return EXIT_PASS


def _cmd_sep(args) -> int:
    tol = _tolerances(args)
    shape = SpaceShape.parse(args.shape)
    ctx = BipartiteContext(shape, tol, args.budget)
    rho = density_from_json(load_json(args.state), tol)
    verdict = is_separable(rho, ctx, args.budget, decompose=not args.no_decompose,
                           seed=args.seed)
    _emit(serialize.verdict_to_json(verdict), args)
    if verdict.status == "separable":
        return EXIT_PASS
    if verdict.status == "entangled":
        return EXIT_FAIL
    return EXIT_UNDECIDED


def _suite_shape(args) -> SpaceShape:
    if args.shape is not None:
        return SpaceShape.parse(args.shape)
    if args.dim is not None:
        return SpaceShape.simple(args.dim)
    bipartite_only = {"psi-tau", "separability", "convex-tensor", "improper-demo", "volume"}
    if getattr(args, "suite", None) in bipartite_only:
        return SpaceShape((2, 2))
    return SpaceShape.simple(3)


def _cmd_check(args) -> int:
    tol = _tolerances(args)
    cfg = SuiteConfig(args.suite, _suite_shape(args), trials=args.trials,
                      seed=args.seed, tol=tol, budget=args.budget)
    rep = run_suite(cfg)
    if args.format == "json" or args.out:
        _emit(rep.to_dict(), args)
    if args.format == "text":
        print(rep.render_text())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _cmd_demo(args) -> int:
    tol = _tolerances(args)
    shape = SpaceShape.parse(args.shape)
    if not shape.is_bipartite:
        raise SystemExit("the demo needs a bipartite shape")
    rep = improper_mixture_demo(shape.factors[0], shape.factors[1], args.seed,
                                tol, args.budget, trials=args.trials)
    if args.format == "json" or args.out:
        _emit(rep.to_dict(), args)
    if args.format == "text":
        print(rep.render_text())
    return EXIT_PASS if rep.passed else EXIT_FAIL


def _cmd_volume(args) -> int:
    tol = _tolerances(args)
    est = separable_volume(SpaceShape.parse(args.shape), args.samples, args.seed, tol)
    _emit(est.to_dict(), args)
    return EXIT_PASS


_COMMANDS = {
    "gen": _cmd_gen,
    "op": _cmd_op,
    "embed-face": _cmd_embed_face,
    "psi": _cmd_psi,
    "tau": _cmd_tau,
    "sep": _cmd_sep,
    "check": _cmd_check,
    "demo": _cmd_demo,
    "volume": _cmd_volume,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UndecidedFeasibilityError, OracleInconclusiveError) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except FacialReductionError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (ValueError, OSError, SystemExit) as exc:
        if isinstance(exc, SystemExit):
            if exc.code in (None, 0):
                return EXIT_PASS
            if isinstance(exc.code, int):
                return exc.code
            print(str(exc.code), file=sys.stderr)
            return EXIT_USAGE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
