"""Command-line front end.

Results go to stdout (JSON by default); diagnostics go to stderr.  Exit
status is 0 on success, 1 when a verification fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .frame import build_frame, perturb_frame, verify_frame
from .intmat import DEFAULT_ORDER_CAP, NonInvertible, NotUnimodular, order, parse_matrix
from .product_theorem import InfiniteOrder, NotCoprime, certificate, decompose
from .search import SearchConfig, find_counterexamples
from .torus_bundle import MappingTorus, TorusAutomorphism, is_orientable, is_torus, pi1, rank

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (ValueError, NonInvertible, NotUnimodular, InfiniteOrder, NotCoprime, TypeError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _automorphism(text, cap):
    return TorusAutomorphism(parse_matrix(text), cap)


def _cmd_order(args):
    A = parse_matrix(args.A)
    return {"A": A.tolist(), "order": order(A, args.order_cap).to_json()}, True


def _cmd_pi1(args):
    M = MappingTorus(_automorphism(args.A, args.order_cap))
    return pi1(M).to_json(), True


def _cmd_rank(args):
    M = MappingTorus(_automorphism(args.A, args.order_cap))
    out = M.to_json()
    out.update(rank(M).to_json())
    out["is_torus"] = is_torus(M)
    out["orientable"] = is_orientable(M)
    return out, True


def _cmd_decompose(args):
    dec = decompose(_automorphism(args.A, args.order_cap), _automorphism(args.B, args.order_cap))
    checks = dec.checks()
    out = {
        "A": dec.A.matrix.tolist(),
        "B": dec.B.matrix.tolist(),
        "m": dec.m,
        "n": dec.n,
        "c": dec.bezout.c,
        "d": dec.bezout.d,
        "lambda": list(dec.basis.lam),
        "mu": list(dec.basis.mu),
        "H": dec.H.matrix.tolist(),
        "checks": checks,
    }
    return out, all(checks.values())


def _cmd_rank_gap(args):
    cert = certificate(_automorphism(args.A, args.order_cap), _automorphism(args.B, args.order_cap))
    return cert, all(cert["checks"].values())


def _frame_report(A, args):
    F = build_frame(A)
    if getattr(args, "perturb", None):
        F = perturb_frame(F, row=min(1, F.k - 1), amplitude=args.perturb)
    return verify_frame(F, grid_n=args.grid, tol=args.tol)


def _cmd_frame_verify(args):
    A = _automorphism(args.A, args.order_cap).matrix
    report = _frame_report(A, args)
    out = {"A": A.tolist()}
    out.update(report.to_json())
    return out, report.passed


def _cmd_search(args):
    cfg = SearchConfig(
        dim=args.dim,
        entry_bound=args.bound,
        order_cap=max(args.order_cap, 6),
        require_orientable=args.orientable,
        other_dim=args.other_dim,
        periods=tuple(args.periods) if args.periods else None,
    )
    certs = find_counterexamples(cfg, limit=args.limit)
    return [c.to_json() for c in certs], True


def _cmd_certify(args):
    A = _automorphism(args.A, args.order_cap)
    B = _automorphism(args.B, args.order_cap)
    cert = certificate(A, B)
    H = parse_matrix(cert["H"])
    frames = {name: _frame_report(X, args) for name, X in (("A", A.matrix), ("B", B.matrix), ("H", H))}
    cert["orientable_A"] = A.det == 1
    cert["orientable_B"] = B.det == 1
    cert["frames"] = {name: r.to_json() for name, r in frames.items()}
    cert["counterexample"] = cert["gap"] == 1
    ok = all(cert["checks"].values()) and all(r.passed for r in frames.values()) and cert["counterexample"]
    return cert, ok


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for key, val in obj.items():
            if isinstance(val, dict):
                lines.append(f"{pad}{key}:")
                lines.append(_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(val)}")
        return "\n".join(lines)
    if isinstance(obj, list) and obj and isinstance(obj[0], dict):
        return "\n\n".join(_text(item, indent) for item in obj)
    return pad + json.dumps(obj)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP, metavar="C")

    frame_opts = argparse.ArgumentParser(add_help=False)
    frame_opts.add_argument("--grid", type=int, default=4096, metavar="N")
    frame_opts.add_argument("--tol", type=float, default=1e-8, metavar="T")

    parser = _Parser(prog="torusrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, nmat in (
        ("order", _cmd_order, 1),
        ("pi1", _cmd_pi1, 1),
        ("rank", _cmd_rank, 1),
        ("decompose", _cmd_decompose, 2),
        ("rank-gap", _cmd_rank_gap, 2),
    ):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("A")
        if nmat == 2:
            p.add_argument("B")
        p.set_defaults(func=fn)

    p = sub.add_parser("frame-verify", parents=[common, frame_opts])
    p.add_argument("A")
    p.add_argument("--perturb", type=float, default=None, metavar="EPS",
                   help="bump row 2 of the frame by EPS (negative control)")
    p.set_defaults(func=_cmd_frame_verify)

    p = sub.add_parser("search", parents=[common])
    p.add_argument("--bound", type=int, default=3, metavar="B")
    p.add_argument("--orientable", action="store_true")
    p.add_argument("--limit", type=int, default=None, metavar="L")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--other-dim", type=int, default=None)
    p.add_argument("--periods", type=int, nargs=2, default=None, metavar=("M", "N"))
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("certify", parents=[common, frame_opts])
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=_cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, ok = args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "text":
        print(_text(result))
    else:
        print(json.dumps(result, sort_keys=True))
    if not ok:
        print("error: verification failed", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
