"""Truncated eigenbasis, abstract ladder operators and banded operator arithmetic.

An operator on the truncated basis ``|0>, ..., |N-1>`` is stored by its
shift-diagonals ("bands").  Band ``s`` holds the amplitudes
``d_s[k] = <k+s|A|k>`` for every column ``k`` where the row ``k+s`` exists,
so a normal-ordered monomial ``eta_+^m eta_-^n`` occupies exactly the band
``s = m - n``.  Internally band ``s`` is a compact array whose index ``i``
corresponds to column ``k = i + max(0, -s)``; equivalently ``i`` is
``min(row, col)``, which makes the adjoint a pure relabelling ``s -> -s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .exceptions import BasisMismatch, IndexOutOfRange

__all__ = [
    "BasisSpec",
    "BandOperator",
    "LadderExpr",
    "build_monomial",
    "compile_expr",
    "add",
    "scale",
    "subtract",
    "multiply",
    "commutator",
    "adjoint",
    "apply",
    "expectation",
    "split",
    "basis_ket",
]


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _col_range(s, dim):
    """Columns ``[lo, hi)`` for which band ``s`` has an entry."""
    return max(0, -s), min(dim, dim - s)


class BasisSpec:
    """Truncated eigenbasis of the unperturbed Hamiltonian.

    Parameters
    ----------
    eps0 : array_like of float, shape (N,)
        Zeroth-order energies.
    c : array_like of complex, shape (N,) or (N - 1,)
        Ladder coefficients; ``c[k]`` couples ``|k>`` to ``|k+1>``.  The top
        coefficient is the bounded-spectrum boundary and must be zero; it is
        appended when only ``N - 1`` values are given.
    trust : int, optional
        Number of low-lying levels regarded as free of truncation artifacts.
        ``None`` lets the engine choose from the order and perturbation degree.
    tol_deg : float, optional
        Two levels closer than this are treated as degenerate.  Defaults to
        ``1e-9`` times the spectral span.
    """

    def __init__(self, eps0, c, trust=None, tol_deg=None):
        eps0 = np.array(eps0, dtype=float)
        c = np.array(c, dtype=complex)
        if eps0.ndim != 1 or eps0.size < 1:
            raise ValueError("eps0 must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(eps0)):
            raise ValueError("eps0 entries must be finite")
        dim = eps0.size
        if c.shape == (dim - 1,):
            c = np.append(c, 0.0)
        if c.shape != (dim,):
            raise ValueError(f"expected {dim} or {dim - 1} ladder coefficients, got {c.size}")
        if c[-1] != 0:
            raise ValueError("top ladder coefficient must be exactly zero")
        if not np.all(np.isfinite(c)):
            raise ValueError("ladder coefficients must be finite")
        if trust is not None:
            trust = int(trust)
            if not 1 <= trust <= dim:
                raise ValueError(f"trust must lie in [1, {dim}], got {trust}")
        if tol_deg is None:
            tol_deg = 1e-9 * float(eps0.max() - eps0.min())
        tol_deg = float(tol_deg)
        if not (tol_deg >= 0 and np.isfinite(tol_deg)):
            raise ValueError("tol_deg must be a finite nonnegative number")
        eps0.setflags(write=False)
        c.setflags(write=False)
        self._eps0 = eps0
        self._c = c
        self._trust = trust
        self._tol_deg = tol_deg

    @classmethod
    def harmonic(cls, dim, omega=1.0, scale=1.0, trust=None, tol_deg=None):
        """Harmonic spectrum ``omega * (n + 1/2)`` with bosonic ladder ``scale * sqrt(n + 1)``."""
        n = np.arange(dim)
        return cls(omega * (n + 0.5), scale * np.sqrt(n[:-1] + 1.0), trust=trust, tol_deg=tol_deg)

    dim = property(lambda self: self._eps0.size)
    eps0 = property(lambda self: self._eps0)
    c = property(lambda self: self._c)
    trust = property(lambda self: self._trust)
    tol_deg = property(lambda self: self._tol_deg)

    @property
    def strictly_monotone(self):
        return bool(np.all(np.diff(self._eps0) > self._tol_deg))

    def transition_energies(self, s):
        """``eps0[k+s] - eps0[k]`` over the columns of band ``s``."""
        lo, hi = _col_range(s, self.dim)
        return self._eps0[lo + s:hi + s] - self._eps0[lo:hi]

    def degenerate_groups(self):
        """Runs of consecutive (sorted) levels closer than ``tol_deg``, as index lists."""
        order = np.argsort(self._eps0, kind="stable")
        groups = [[int(order[0])]]
        for prev, cur in zip(order[:-1], order[1:]):
            if self._eps0[cur] - self._eps0[prev] <= self._tol_deg:
                groups[-1].append(int(cur))
            else:
                groups.append([int(cur)])
        return [sorted(g) for g in groups]

    def hamiltonian(self):
        return BandOperator(self, {0: self._eps0})

    def identity(self):
        return BandOperator(self, {0: np.ones(self.dim)})

    def zero(self):
        return BandOperator(self, {})

    def with_trust(self, trust):
        return BasisSpec(self._eps0, self._c, trust=trust, tol_deg=self._tol_deg)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, BasisSpec):
            return NotImplemented
        return (
            np.array_equal(self._eps0, other._eps0)
            and np.array_equal(self._c, other._c)
            and self._trust == other._trust
            and self._tol_deg == other._tol_deg
        )

    __hash__ = None

    def __repr__(self):
        return f"BasisSpec(dim={self.dim}, trust={self._trust}, tol_deg={self._tol_deg:g})"


class BandOperator:
    """Operator on a truncated basis, stored by shift-diagonals.

    Parameters
    ----------
    basis : BasisSpec
    bands : mapping of int to array_like
        ``bands[s][i]`` is the entry at row ``i + max(0, s)``, column
        ``i + max(0, -s)``.  Bands that are exactly zero are dropped.

    Instances are immutable.  Arithmetic operators are overloaded:
    ``+``, ``-``, scalar ``*``, and ``@`` for the operator product.
    """

    __slots__ = ("_basis", "_bands")

    def __init__(self, basis, bands: Mapping[int, Iterable] | None = None):
        self._basis = basis
        dim = basis.dim
        clean = {}
        for s, d in (bands or {}).items():
            s = int(s)
            lo, hi = _col_range(s, dim)
            if hi <= lo:
                raise IndexOutOfRange(f"shift {s} does not fit a {dim}x{dim} operator")
            d = _readonly(d)
            if d.shape != (hi - lo,):
                raise ValueError(f"band {s} needs {hi - lo} entries, got {d.shape}")
            if np.any(d != 0):
                clean[s] = d
        self._bands = dict(sorted(clean.items()))

    @classmethod
    def from_dense(cls, basis, m):
        """Band form of a dense ``(N, N)`` matrix."""
        m = np.asarray(m, dtype=complex)
        dim = basis.dim
        if m.shape != (dim, dim):
            raise BasisMismatch(f"matrix has shape {m.shape}, basis has dimension {dim}")
        bands = {}
        for s in range(-(dim - 1), dim):
            lo, hi = _col_range(s, dim)
            cols = np.arange(lo, hi)
            bands[s] = m[cols + s, cols]
        return cls(basis, bands)

    @property
    def basis(self):
        return self._basis

    @property
    def bands(self):
        """Read-only view ``{shift: amplitudes}`` of the nonzero bands."""
        return dict(self._bands)

    @property
    def shifts(self):
        return tuple(self._bands)

    @property
    def bandwidth(self):
        return max((abs(s) for s in self._bands), default=0)

    def band(self, s):
        """Amplitudes of band ``s`` (zeros if absent)."""
        lo, hi = _col_range(s, self._basis.dim)
        if hi <= lo:
            raise IndexOutOfRange(f"shift {s} out of range")
        d = self._bands.get(s)
        return np.zeros(hi - lo, dtype=complex) if d is None else d

    def entry(self, row, col):
        dim = self._basis.dim
        if not (0 <= row < dim and 0 <= col < dim):
            raise IndexOutOfRange(f"entry ({row}, {col}) outside {dim}x{dim}")
        d = self._bands.get(row - col)
        return 0j if d is None else complex(d[min(row, col)])

    def is_zero(self):
        return not self._bands

    def max_abs(self):
        return max((float(np.max(np.abs(d))) for d in self._bands.values()), default=0.0)

    def norm(self):
        """Frobenius norm."""
        return float(np.sqrt(sum(np.vdot(d, d).real for d in self._bands.values())))

    def restrict(self, n):
        """Copy keeping only entries whose row and column are both below ``n``."""
        out = {}
        for s, d in self._bands.items():
            lo, hi = _col_range(s, self._basis.dim)
            cols = np.arange(lo, hi)
            keep = (cols < n) & (cols + s < n)
            out[s] = np.where(keep, d, 0)
        return BandOperator(self._basis, out)

    def to_dense(self):
        dim = self._basis.dim
        m = np.zeros((dim, dim), dtype=complex)
        for s, d in self._bands.items():
            lo, hi = _col_range(s, dim)
            cols = np.arange(lo, hi)
            m[cols + s, cols] = d
        return m

    def __eq__(self, other):
        if not isinstance(other, BandOperator):
            return NotImplemented
        if self._basis != other._basis or self._bands.keys() != other._bands.keys():
            return False
        return all(np.array_equal(d, other._bands[s]) for s, d in self._bands.items())

    __hash__ = None

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return subtract(self, other)

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, alpha):
        if isinstance(alpha, BandOperator):
            return NotImplemented
        return scale(alpha, self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"BandOperator(dim={self._basis.dim}, shifts={list(self._bands)})"


@dataclass(frozen=True)
class LadderExpr:
    """Sum of ``coeff * eta_+^m eta_-^n`` terms, already in normal order.

    ``terms`` is a sequence of ``(coeff, m, n)`` triples; repeated ``(m, n)``
    pairs are allowed and merged on compilation.
    """

    terms: tuple = field(default=())

    def __post_init__(self):
        clean = []
        for coeff, m, n in self.terms:
            if int(m) != m or int(n) != n or m < 0 or n < 0:
                raise ValueError(f"powers must be nonnegative integers, got ({m}, {n})")
            clean.append((complex(coeff), int(m), int(n)))
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def degree(self):
        return max((m + n for _, m, n in self.terms), default=0)

    def __add__(self, other):
        return LadderExpr(self.terms + other.terms)


def _check_same(a, b):
    if a.basis != b.basis:
        raise BasisMismatch("operands are defined on different bases")


def _ladder_chain(c, k, m, n):
    """Product of ladder factors picked up by ``eta_+^m eta_-^n`` acting on columns ``k``.

    ``k`` is an integer array.  Coefficients indexed outside ``[0, N)`` are
    the implicit zero boundary coefficients.
    """
    dim = c.size

    def coeff(idx):
        inside = (idx >= 0) & (idx < dim)
        return np.where(inside, c[np.clip(idx, 0, dim - 1)], 0)

    out = np.ones(k.shape, dtype=complex)
    # eta_- |j> = conj(c_{j-1}) |j-1>, applied n times starting at |k>
    for j in range(1, n + 1):
        out *= np.conj(coeff(k - j))
    # eta_+ |j> = c_j |j+1>, applied m times starting at |k-n>
    for i in range(m):
        out *= coeff(k - n + i)
    return out


def build_monomial(basis, m, n):
    """The normal-ordered monomial ``eta_+^m eta_-^n`` as a single-band operator."""
    if m < 0 or n < 0:
        raise ValueError("powers must be nonnegative")
    s = m - n
    dim = basis.dim
    lo, hi = _col_range(s, dim)
    if hi <= lo or n >= dim:
        return basis.zero()
    k = np.arange(lo, hi)
    return BandOperator(basis, {s: _ladder_chain(basis.c, k, m, n)})


def compile_expr(basis, expr):
    """Evaluate a :class:`LadderExpr` on ``basis``."""
    merged = {}
    for coeff, m, n in expr.terms:
        merged[(m, n)] = merged.get((m, n), 0) + coeff
    acc = {}
    for (m, n), coeff in merged.items():
        if coeff == 0:
            continue
        mono = build_monomial(basis, m, n)
        for s, d in mono._bands.items():
            acc[s] = acc[s] + coeff * d if s in acc else coeff * d
    return BandOperator(basis, acc)


def add(a, b):
    _check_same(a, b)
    out = dict(a._bands)
    for s, d in b._bands.items():
        out[s] = out[s] + d if s in out else d
    return BandOperator(a.basis, out)


def scale(alpha, a):
    alpha = complex(alpha)
    if alpha == 0:
        return a.basis.zero()
    return BandOperator(a.basis, {s: alpha * d for s, d in a._bands.items()})


def subtract(a, b):
    _check_same(a, b)
    out = dict(a._bands)
    for s, d in b._bands.items():
        out[s] = out[s] - d if s in out else -d
    return BandOperator(a.basis, out)


def multiply(a, b):
    """Operator product ``a @ b``."""
    _check_same(a, b)
    dim = a.basis.dim
    acc = {}
    for sb, db in b._bands.items():
        lob, hib = _col_range(sb, dim)
        for sa, da in a._bands.items():
            s = sa + sb
            lo, hi = _col_range(s, dim)
            if hi <= lo:
                continue
            loa, hia = _col_range(sa, dim)
            # column k of b feeds column k + sb of a
            klo = max(lob, loa - sb)
            khi = min(hib, hia - sb)
            if khi <= klo:
                continue
            prod = da[klo + sb - loa:khi + sb - loa] * db[klo - lob:khi - lob]
            if s not in acc:
                acc[s] = np.zeros(hi - lo, dtype=complex)
            acc[s][klo - lo:khi - lo] += prod
    return BandOperator(a.basis, acc)


def commutator(a, b):
    return subtract(multiply(a, b), multiply(b, a))


def adjoint(a):
    return BandOperator(a.basis, {-s: np.conj(d) for s, d in a._bands.items()})


def basis_ket(basis, n):
    if not 0 <= n < basis.dim:
        raise IndexOutOfRange(f"level {n} outside basis of dimension {basis.dim}")
    ket = np.zeros(basis.dim, dtype=complex)
    ket[n] = 1.0
    return ket


def apply(a, ket):
    """Action of ``a`` on a ket given as an amplitude vector."""
    ket = np.asarray(ket, dtype=complex)
    dim = a.basis.dim
    if ket.shape != (dim,):
        raise BasisMismatch(f"ket has shape {ket.shape}, basis has dimension {dim}")
    out = np.zeros(dim, dtype=complex)
    for s, d in a._bands.items():
        lo, hi = _col_range(s, dim)
        out[lo + s:hi + s] += d * ket[lo:hi]
    return out


def expectation(a, n):
    """Diagonal matrix element ``<n|a|n>``."""
    if not 0 <= n < a.basis.dim:
        raise IndexOutOfRange(f"level {n} outside basis of dimension {a.basis.dim}")
    d = a._bands.get(0)
    return 0j if d is None else complex(d[n])


def split(a):
    """Return ``(parallel, orthogonal)``: the diagonal band and everything else."""
    par = {0: a._bands[0]} if 0 in a._bands else {}
    perp = {s: d for s, d in a._bands.items() if s != 0}
    return BandOperator(a.basis, par), BandOperator(a.basis, perp)
