"""Line-oriented model files.

Example::

    [basis]
    dim = 64
    spectrum = harmonic omega=1
    ladder = boson scale=1

    [perturbation]
    term = -0.7071067811865476 1 0
    term = -0.7071067811865476 0 1

    [run]
    order = 4
    lambda = 0.1 0.05

``term`` lines read ``coeff_re [coeff_im] m n`` and stand for
``coeff * eta_+^m eta_-^n``.  ``#`` starts a comment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ParseError, ValidationError
from .engine import default_trust
from .operators import BasisSpec, LadderExpr, adjoint, compile_expr

__all__ = ["ModelFile", "parse_model", "serialize_model"]

SECTIONS = {
    "basis": {"dim", "trust", "spectrum", "ladder", "tol_deg"},
    "perturbation": {"term"},
    "run": {"order", "lambda", "mode", "oracle"},
}
SPECTRUM_PARAMS = {"harmonic": {"omega": 1.0}, "linear": {"a": 0.0, "b": 1.0}}
LADDER_PARAMS = {"boson": {"scale": 1.0}}
MODES = ("auto", "strict", "kernel")


@dataclass(frozen=True)
class ModelFile:
    dim: int
    spectrum: tuple
    ladder: tuple = ("boson", (("scale", 1.0),))
    trust: int | None = None
    tol_deg: float | None = None
    terms: tuple = ()
    order: int = 1
    lambdas: tuple = (0.1,)
    mode: str = "auto"
    oracle: bool = False

    def validate(self):
        if self.dim < 2:
            raise ValidationError(f"dim must be at least 2, got {self.dim}")
        if self.order < 1:
            raise ValidationError(f"order must be at least 1, got {self.order}")
        if self.trust is not None and not 1 <= self.trust <= self.dim:
            raise ValidationError(f"trust must lie in [1, {self.dim}], got {self.trust}")
        if self.tol_deg is not None and not (math.isfinite(self.tol_deg) and self.tol_deg >= 0):
            raise ValidationError("tol_deg must be finite and nonnegative")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {', '.join(MODES)}")
        for lam in self.lambdas:
            if not (math.isfinite(lam) and 0 <= lam <= 1):
                raise ValidationError(f"lambda values must lie in [0, 1], got {lam!r}")
        for coeff, m, n in self.terms:
            if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
                raise ValidationError("term coefficients must be finite")
        kind, values = self.spectrum
        if kind == "table" and len(values) != self.dim:
            raise ValidationError(f"spectrum table has {len(values)} values, dim is {self.dim}")
        kind, values = self.ladder
        if kind == "table" and len(values) not in (self.dim - 1, self.dim):
            raise ValidationError(f"ladder table has {len(values)} values, expected {self.dim - 1} or {self.dim}")
        if kind == "table" and len(values) == self.dim and values[-1] != 0:
            raise ValidationError("ladder table top coefficient must be 0")
        return self

    def resolved_trust(self):
        """Explicit ``trust``, else the engine default for this order and degree."""
        if self.trust is not None:
            return self.trust
        return default_trust(self.dim, self.order, self.expr().degree)

    def eps0(self):
        kind, values = self.spectrum
        n = np.arange(self.dim)
        if kind == "harmonic":
            return dict(values)["omega"] * (n + 0.5)
        if kind == "linear":
            p = dict(values)
            return p["a"] + p["b"] * n
        return np.array(values, dtype=float)

    def ladder_coefficients(self):
        kind, values = self.ladder
        if kind == "boson":
            return dict(values)["scale"] * np.sqrt(np.arange(1, self.dim, dtype=float))
        return np.array(values, dtype=complex)

    def basis(self):
        try:
            return BasisSpec(self.eps0(), self.ladder_coefficients(), trust=self.trust, tol_deg=self.tol_deg)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc

    def expr(self):
        return LadderExpr(self.terms)

    def perturbation(self, basis=None):
        """Compiled perturbation; must be Hermitian."""
        basis = basis or self.basis()
        V = compile_expr(basis, self.expr())
        if (V - adjoint(V)).max_abs() > 1e-12 * max(1.0, V.max_abs()):
            raise ValidationError("perturbation is not Hermitian on this basis")
        return V

    def with_overrides(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes).validate()


def _number(tok, lineno, what):
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(lineno, f"{what}: {tok!r} is not a number") from None
    if not math.isfinite(x):
        raise ParseError(lineno, f"{what} must be finite")
    return x


def _integer(tok, lineno, what):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what}: {tok!r} is not an integer") from None


def _parse_spec(value, lineno, table, what, complex_table=False):
    toks = value.split()
    if not toks:
        raise ParseError(lineno, f"empty {what} spec")
    kind, rest = toks[0], toks[1:]
    if kind == "table":
        if not rest:
            raise ParseError(lineno, f"{what} table needs values")
        if complex_table:
            try:
                vals = tuple(complex(t) for t in rest)
            except ValueError:
                raise ParseError(lineno, f"{what} table holds a non-number") from None
            if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
                raise ParseError(lineno, f"{what} table values must be finite")
            return kind, vals
        return kind, tuple(_number(t, lineno, what) for t in rest)
    if kind not in table:
        raise ParseError(lineno, f"unknown {what} kind {kind!r}")
    params = dict(table[kind])
    for tok in rest:
        key, sep, val = tok.partition("=")
        if not sep or key not in params:
            raise ParseError(lineno, f"bad {what} parameter {tok!r}")
        params[key] = _number(val, lineno, f"{what} {key}")
    return kind, tuple(sorted(params.items()))


def parse_model(text):
    """Parse model-file text into a validated :class:`ModelFile`.

    Raises
    ------
    ParseError
        Malformed line, unknown section or key, bad arity.
    ValidationError
        Well-formed file whose values violate the model invariants.
    """
    section = None
    seen = set()
    fields = {}
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(lineno, f"malformed section header {line!r}")
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ParseError(lineno, f"unknown section [{section}]")
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ParseError(lineno, "expected 'key = value'")
        if section is None:
            raise ParseError(lineno, f"key {key!r} outside any section")
        if key not in SECTIONS[section]:
            raise ParseError(lineno, f"unknown key {key!r} in [{section}]")
        if key != "term":
            if key in seen:
                raise ParseError(lineno, f"duplicate key {key!r}")
            seen.add(key)
        toks = value.split()

        if key == "term":
            if len(toks) not in (3, 4):
                raise ParseError(lineno, "term needs 'coeff_re [coeff_im] m n'")
            re_ = _number(toks[0], lineno, "coefficient")
            im = _number(toks[1], lineno, "coefficient") if len(toks) == 4 else 0.0
            m = _integer(toks[-2], lineno, "m")
            n = _integer(toks[-1], lineno, "n")
            if m < 0 or n < 0:
                raise ParseError(lineno, "term powers must be nonnegative")
            terms.append((complex(re_, im), m, n))
        elif key in ("dim", "trust", "order"):
            if len(toks) != 1:
                raise ParseError(lineno, f"{key} takes one integer")
            fields[key] = _integer(toks[0], lineno, key)
        elif key == "tol_deg":
            if len(toks) != 1:
                raise ParseError(lineno, "tol_deg takes one number")
            fields[key] = _number(toks[0], lineno, key)
        elif key == "spectrum":
            fields[key] = _parse_spec(value, lineno, SPECTRUM_PARAMS, "spectrum")
        elif key == "ladder":
            fields[key] = _parse_spec(value, lineno, LADDER_PARAMS, "ladder", complex_table=True)
        elif key == "lambda":
            fields["lambdas"] = tuple(_number(t, lineno, "lambda") for t in toks)
        elif key == "mode":
            if value not in MODES:
                raise ParseError(lineno, f"mode must be one of {', '.join(MODES)}")
            fields[key] = value
        elif key == "oracle":
            if value not in ("true", "false"):
                raise ParseError(lineno, "oracle must be 'true' or 'false'")
            fields[key] = value == "true"

    for required in ("dim", "spectrum"):
        if required not in fields:
            raise ParseError(0, f"missing required key {required!r} in [basis]")
    return ModelFile(terms=tuple(terms), **fields).validate()


def _fmt(x):
    return repr(float(x))


def _fmt_complex(z):
    z = complex(z)
    return _fmt(z.real) if z.imag == 0 else f"{z!r}".strip("()")


def _spec_text(spec, complex_table=False):
    kind, values = spec
    if kind == "table":
        fmt = _fmt_complex if complex_table else _fmt
        return "table " + " ".join(fmt(v) for v in values)
    return " ".join([kind] + [f"{k}={_fmt(v)}" for k, v in values])


def serialize_model(model):
    """Canonical text for ``model``; parsing it back yields an equal model."""
    lines = ["[basis]", f"dim = {model.dim}"]
    if model.trust is not None:
        lines.append(f"trust = {model.trust}")
    lines.append(f"spectrum = {_spec_text(model.spectrum)}")
    lines.append(f"ladder = {_spec_text(model.ladder, complex_table=True)}")
    if model.tol_deg is not None:
        lines.append(f"tol_deg = {_fmt(model.tol_deg)}")
    lines += ["", "[perturbation]"]
    for coeff, m, n in model.terms:
        if coeff.imag == 0:
            lines.append(f"term = {_fmt(coeff.real)} {m} {n}")
        else:
            lines.append(f"term = {_fmt(coeff.real)} {_fmt(coeff.imag)} {m} {n}")
    lines += [
        "",
        "[run]",
        f"order = {model.order}",
        "lambda = " + " ".join(_fmt(x) for x in model.lambdas),
        f"mode = {model.mode}",
        f"oracle = {'true' if model.oracle else 'false'}",
    ]
    return "\n".join(lines) + "\n"
