"""Brute-force dense checks, deliberately independent of the band engine."""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .exceptions import Degenerate, NotHermitian

__all__ = ["densify", "dense_ladders", "exact_spectrum", "rspt2", "bch_reference"]


def densify(a):
    """Dense matrix with ``m[k+s, k] = d_s[k]``."""
    return a.to_dense()


def dense_ladders(basis):
    """Raising and lowering matrices built ket by ket from their defining action.

    ``eta_+ |k> = c_k |k+1>`` and ``eta_- |k> = conj(c_{k-1}) |k-1>``.
    """
    dim = basis.dim
    up = np.zeros((dim, dim), dtype=complex)
    down = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        if k + 1 < dim:
            up[k + 1, k] = basis.c[k]
        if k >= 1:
            down[k - 1, k] = np.conj(basis.c[k - 1])
    return up, down


def exact_spectrum(H, atol=1e-10, vectors=False):
    """Ascending eigenvalues of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``H`` deviates from its conjugate transpose by more than ``atol``
        relative to its largest entry.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    if H.size and np.max(np.abs(H - H.conj().T)) > atol * scale:
        raise NotHermitian("matrix is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (H + H.conj().T))
    return (w, v) if vectors else w


def rspt2(basis, V):
    """First- and second-order Rayleigh-Schroedinger corrections for each level.

    Returns
    -------
    e1, e2 : ndarray of float, shape (N,)
    """
    if not basis.strictly_monotone:
        raise Degenerate("Rayleigh-Schroedinger sums need a non-degenerate spectrum")
    v = densify(V)
    eps = basis.eps0
    e1 = np.real(np.diag(v)).copy()
    gaps = eps[None, :] - eps[:, None]  # gaps[k, n] = eps_n - eps_k
    np.fill_diagonal(gaps, np.inf)
    e2 = np.sum(np.abs(v) ** 2 / gaps, axis=0)
    return e1, e2


def bch_reference(H0, V, G, lam, terms=None):
    """Dense ``exp(G) (H0 + lam V) exp(-G) - H0``.

    With ``terms`` set, the nested-commutator series is summed to that many
    terms instead of using matrix exponentials.
    """
    H0 = np.asarray(H0, dtype=complex)
    H = H0 + lam * np.asarray(V, dtype=complex)
    G = np.asarray(G, dtype=complex)
    if terms is None:
        return scipy.linalg.expm(G) @ H @ scipy.linalg.expm(-G) - H0
    if terms < 1:
        raise ValueError("terms must be at least 1")
    total = H.copy()
    nested = H
    for j in range(1, terms):
        nested = (G @ nested - nested @ G) / j
        total = total + nested
    return total - H0
