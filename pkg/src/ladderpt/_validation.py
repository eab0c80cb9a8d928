"""Input checks shared by the estimator front end."""
import numbers

import numpy as np

from .exceptions import BasisMismatch
from .operators import BandOperator, BasisSpec, LadderExpr, compile_expr


def check_basis(basis):
    if not isinstance(basis, BasisSpec):
        raise TypeError(f"expected a BasisSpec, got {type(basis).__name__}")
    return basis


def check_perturbation(V, basis):
    """Coerce ``V`` to a :class:`BandOperator` on ``basis``.

    Accepts a band operator, a ladder expression, or a dense square array.
    Returns ``(operator, degree)`` where ``degree`` bounds the monomial order.
    """
    if isinstance(V, LadderExpr):
        return compile_expr(basis, V), V.degree
    if isinstance(V, BandOperator):
        if V.basis != basis:
            raise BasisMismatch("perturbation is defined on a different basis")
        return V, V.bandwidth
    V = BandOperator.from_dense(basis, V)
    return V, V.bandwidth


def check_lambda(lam):
    if not isinstance(lam, numbers.Real) or not np.isfinite(lam) or not 0 <= lam <= 1:
        raise ValueError(f"lam must be a real number in [0, 1], got {lam!r}")
    return float(lam)


def check_kets(X, dim):
    """2-d complex array of kets, one per row."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        raise ValueError("expected a 2-d array of kets (one per row); reshape a single ket with X[None, :]")
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"expected shape (n_kets, {dim}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("kets must be finite")
    return X


def check_levels(levels, trust):
    if levels is None:
        return np.arange(trust)
    levels = np.atleast_1d(np.asarray(levels))
    if levels.dtype.kind not in "iu":
        raise ValueError("levels must be integers")
    if levels.size and (levels.min() < 0 or levels.max() >= trust):
        raise IndexError(f"levels must lie in the trusted band [0, {trust})")
    return levels
