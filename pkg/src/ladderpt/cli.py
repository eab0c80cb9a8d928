"""Command-line interface.

Exit codes: 0 success, 2 parse/validation/input error, 3 degenerate
transition in strict mode, 4 residual or convergence failure.
"""
from __future__ import annotations

import argparse
import sys

from .engine import run as run_engine
from .diagrams import enumerate_diagrams, bracket_order
from .exceptions import (
    BasisMismatch, Degenerate, DegenerateTransition, ExponentialNotConverged, IndexOutOfRange,
    InvalidOrder, MissingGenerator, NotHermitian, NotOrthogonal, ParseError, ResidualTooLarge,
    ValidationError,
)
from .modelfile import parse_model
from .report import serialize_results

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_NUMERIC = 4

# checked in order: several of these subclass ValueError
_EXIT_CODES = (
    ((DegenerateTransition, Degenerate), EXIT_DEGENERATE),
    ((ResidualTooLarge, ExponentialNotConverged, NotOrthogonal, MissingGenerator, NotHermitian,
      ArithmeticError), EXIT_NUMERIC),
    ((ParseError, ValidationError, OSError, BasisMismatch, IndexOutOfRange, InvalidOrder,
      ValueError), EXIT_INPUT),
)


def exit_code_for(exc):
    for types, code in _EXIT_CODES:
        if isinstance(exc, types):
            return code
    raise exc


def run_command(path, order=None, dim=None, trust=None, mode=None, tol_deg=None, oracle=None, fmt="table"):
    """Run the model at ``path``; returns ``(exit_code, output_text)``.

    Nothing is produced on failure; the text is the error message instead.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            model = parse_model(fh.read())
        model = model.with_overrides(order=order, dim=dim, trust=trust, mode=mode, tol_deg=tol_deg,
                                     oracle=oracle or None)
        basis = model.basis()
        V = model.perturbation(basis)
        result = run_engine(basis, V, model.order, mode=model.mode, trust=model.resolved_trust())
        text = serialize_results(result, model.lambdas, fmt=fmt, oracle=model.oracle)
    except Exception as exc:  # noqa: BLE001 - mapped to documented exit codes
        return exit_code_for(exc), f"error: {exc}\n"
    return EXIT_OK, text


def diagrams_text(n):
    listed = bracket_order(enumerate_diagrams(n))
    return " ".join("(1)" if not d.left else str(d) for d in listed) + "\n"


def build_parser():
    parser = argparse.ArgumentParser(prog="ladderpt", description="Algebraic operator perturbation theory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="solve a model file")
    p.add_argument("model")
    p.add_argument("--order", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--trust", type=int)
    p.add_argument("--mode", choices=("auto", "strict", "kernel"))
    p.add_argument("--tol-deg", type=float)
    p.add_argument("--oracle", action="store_true", help="compare with exact diagonalization")
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--out", help="write output here instead of stdout")

    p = sub.add_parser("diagrams", help="list the bracket diagrams of one order")
    p.add_argument("n", type=int)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)

    if args.command == "diagrams":
        try:
            text = diagrams_text(args.n)
        except InvalidOrder as exc:
            stderr.write(f"error: {exc}\n")
            return EXIT_INPUT
        stdout.write(text)
        return EXIT_OK

    code, text = run_command(
        args.model, order=args.order, dim=args.dim, trust=args.trust, mode=args.mode,
        tol_deg=args.tol_deg, oracle=args.oracle, fmt=args.format,
    )
    if code != EXIT_OK:
        stderr.write(text)
        return code
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            stderr.write(f"error: {exc}\n")
            return EXIT_INPUT
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
