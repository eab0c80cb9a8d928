"""Result records and their text renderings."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .oracle import densify, exact_spectrum
from .superop import ProjectionMode

__all__ = ["ResultRecord", "RECORD_COLUMNS", "build_records", "serialize_results", "read_records"]

RECORD_COLUMNS = (
    "level", "order", "correction", "lambda", "energy",
    "oracle_exact", "oracle_abs_err", "trusted", "degenerate_block",
)
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class ResultRecord:
    level: int
    order: int
    correction: float
    lam: float
    energy: float
    oracle_exact: float | None
    oracle_abs_err: float | None
    trusted: bool
    degenerate_block: bool


def _check_real_corrections(result):
    for k, W in enumerate(result.W, start=1):
        d = W.band(0)
        worst = float(np.max(np.abs(d.imag))) if d.size else 0.0
        if worst > IMAG_TOL * max(1.0, float(np.max(np.abs(d)))):
            raise ArithmeticError(f"order {k} energy corrections have imaginary part {worst:.3e}")


def _block_energies(result, lam, upto, groups):
    """Eigenvalues of ``eps0 + sum_{j<=upto} lam**j W_j`` on each degenerate group."""
    basis = result.basis
    out = {}
    for group in groups:
        idx = np.array(group)
        block = np.diag(basis.eps0[idx]).astype(complex)
        for j in range(1, upto + 1):
            block += lam**j * result.W[j - 1].to_dense()[np.ix_(idx, idx)]
        for level, e in zip(group, exact_spectrum(block)):
            out[level] = float(e)
    return out


def build_records(result, lambdas, oracle=False):
    """One record per ``(lambda, level, order)``, in that nesting order."""
    _check_real_corrections(result)
    basis = result.basis
    groups = []
    if result.mode is ProjectionMode.KERNEL:
        groups = [g for g in basis.degenerate_groups() if len(g) > 1]
    in_block = {level for g in groups for level in g}
    rank = np.empty(basis.dim, dtype=int)
    rank[np.argsort(basis.eps0, kind="stable")] = np.arange(basis.dim)

    records = []
    for lam in lambdas:
        exact = exact_spectrum(densify(result.hamiltonian(lam))) if oracle else None
        partial = [basis.eps0 + sum(lam**j * result.energy_table[:, j - 1] for j in range(1, k + 1))
                   for k in range(1, result.order + 1)]
        blocks = [_block_energies(result, lam, k, groups) for k in range(1, result.order + 1)] if groups else None
        for n in range(basis.dim):
            ex = float(exact[rank[n]]) if oracle else None
            for k in range(1, result.order + 1):
                e = blocks[k - 1][n] if n in in_block else float(partial[k - 1][n])
                records.append(ResultRecord(
                    level=n,
                    order=k,
                    correction=float(result.energy_table[n, k - 1]),
                    lam=float(lam),
                    energy=e,
                    oracle_exact=ex,
                    oracle_abs_err=abs(e - ex) if oracle else None,
                    trusted=n < result.trust,
                    degenerate_block=n in in_block,
                ))
    return records


def _g17(x):
    return "" if x is None else format(x, ".17g")


def _records_text(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for r in records:
        writer.writerow([
            r.level, r.order, _g17(r.correction), _g17(r.lam), _g17(r.energy),
            _g17(r.oracle_exact), _g17(r.oracle_abs_err),
            "true" if r.trusted else "false", "true" if r.degenerate_block else "false",
        ])
    return buf.getvalue()


def _g9(x):
    return "-" if x is None else format(x, ".9g")


def _table_text(result, records, oracle):
    K = result.order
    lines = [f"# dim={result.basis.dim} trust={result.trust} order={K} mode={result.mode.value}"]
    lines.append("\t".join(["level", "trusted"] + [f"e{k}" for k in range(1, K + 1)]))
    for n in range(result.basis.dim):
        lines.append("\t".join(
            [str(n), "yes" if n < result.trust else "no"]
            + [_g9(result.energy_table[n, k]) for k in range(K)]
        ))
    lines.append("")
    head = ["lambda", "level", "energy"] + (["oracle_exact", "abs_err"] if oracle else []) + ["flags"]
    lines.append("\t".join(head))
    for r in records:
        if r.order != K:
            continue
        flags = ",".join(f for f, on in (("untrusted", not r.trusted), ("degenerate-block", r.degenerate_block)) if on)
        row = [_g9(r.lam), str(r.level), _g9(r.energy)]
        if oracle:
            row += [_g9(r.oracle_exact), _g9(r.oracle_abs_err)]
        lines.append("\t".join(row + [flags or "-"]))
    return "\n".join(lines) + "\n"


def serialize_results(result, lambdas, fmt="table", oracle=False):
    """Deterministic text rendering of a completed run.

    ``records`` is CSV with a fixed header and 17 significant digits;
    ``table`` is a human-readable summary rounded to 9 digits.
    """
    records = build_records(result, lambdas, oracle=oracle)
    if fmt == "records":
        return _records_text(records)
    if fmt == "table":
        return _table_text(result, records, oracle)
    raise ValueError(f"unknown format {fmt!r}")


def read_records(text):
    """Parse records CSV back into :class:`ResultRecord` objects."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != RECORD_COLUMNS:
        raise ValueError(f"unexpected records header {header}")

    def opt(tok):
        return None if tok == "" else float(tok)

    return [
        ResultRecord(
            level=int(row[0]), order=int(row[1]), correction=float(row[2]), lam=float(row[3]),
            energy=float(row[4]), oracle_exact=opt(row[5]), oracle_abs_err=opt(row[6]),
            trusted=row[7] == "true", degenerate_block=row[8] == "true",
        )
        for row in reader
    ]
