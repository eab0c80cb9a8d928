"""Parallel projection, derivation superoperator and its inverse.

All three act band-entrywise.  The derivation ``gamma(X) = [H0, X]``
multiplies entry ``(k+s, k)`` by the transition energy
``eps0[k+s] - eps0[k]``; its inverse divides by it, which is only defined on
operators with no component in the kernel.
"""
from __future__ import annotations

import enum

import numpy as np

from .exceptions import DegenerateTransition, NotOrthogonal
from .operators import BandOperator


class ProjectionMode(enum.Enum):
    """How the parallel projection treats degenerate transitions.

    ``STRICT`` keeps the diagonal band only.  ``KERNEL`` keeps every entry
    whose transition energy is within ``tol_deg`` of zero, i.e. it projects
    onto the kernel of the derivation.  Both coincide when the spectrum is
    strictly monotone.
    """

    STRICT = "strict"
    KERNEL = "kernel"

    @classmethod
    def coerce(cls, mode, basis=None):
        """Accept a mode, its string value, or ``None``/``"auto"``."""
        if isinstance(mode, cls):
            return mode
        if mode is None or mode == "auto":
            if basis is None:
                raise ValueError("automatic mode selection needs a basis")
            return cls.STRICT if basis.strictly_monotone else cls.KERNEL
        return cls(str(mode).lower())


def _kernel_mask(basis, s):
    return np.abs(basis.transition_energies(s)) <= basis.tol_deg


def pi(a, mode=ProjectionMode.STRICT):
    """Parallel projection of ``a`` relative to the unperturbed Hamiltonian."""
    mode = ProjectionMode.coerce(mode, a.basis)
    if mode is ProjectionMode.STRICT:
        return BandOperator(a.basis, {0: a.bands[0]} if 0 in a.shifts else {})
    return BandOperator(
        a.basis,
        {s: np.where(_kernel_mask(a.basis, s), d, 0) for s, d in a.bands.items()},
    )


def gamma(a):
    """``[H0, a]`` computed entrywise from the transition energies."""
    basis = a.basis
    return BandOperator(basis, {s: basis.transition_energies(s) * d for s, d in a.bands.items()})


def gamma_inv(b, mode=ProjectionMode.STRICT, tol_orth=None):
    """Solve ``[H0, X] = b`` for the orthogonal ``X``.

    Parameters
    ----------
    b : BandOperator
        Right-hand side; its parallel projection must vanish to ``tol_orth``.
    mode : ProjectionMode or str
    tol_orth : float, optional
        Absolute threshold below which kernel entries count as zero.
        Defaults to ``1e-10 * b.max_abs()``.

    Raises
    ------
    NotOrthogonal
        ``pi(b, mode)`` is not negligible.
    DegenerateTransition
        Strict mode only: an off-diagonal entry joins two degenerate levels.
    """
    basis = b.basis
    mode = ProjectionMode.coerce(mode, basis)
    if tol_orth is None:
        tol_orth = 1e-10 * b.max_abs()
    par = pi(b, mode).max_abs()
    if par > tol_orth:
        raise NotOrthogonal(f"parallel component of size {par:.3e} exceeds tolerance {tol_orth:.3e}")

    out = {}
    for s, d in b.bands.items():
        if s == 0:
            continue
        gaps = basis.transition_energies(s)
        kernel = np.abs(gaps) <= basis.tol_deg
        if kernel.any():
            worst = float(np.max(np.abs(d[kernel])))
            if worst > tol_orth:
                # kernel mode already rejected this through pi
                raise DegenerateTransition(
                    f"band {s} couples degenerate levels with amplitude {worst:.3e}; use kernel mode"
                )
        out[s] = np.where(kernel, 0, d / np.where(kernel, 1, gaps))
    return BandOperator(basis, out)
