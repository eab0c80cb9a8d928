"""Estimator-style front end to the perturbation engine."""
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

import numpy as np

from ._validation import check_basis, check_kets, check_lambda, check_levels, check_perturbation
from .engine import apply_exp, default_trust, run


class OperatorPerturbation(TransformerMixin, BaseEstimator):
    """Order-by-order canonical perturbation theory for ``H0 + lam * V``.

    Parameters
    ----------
    order : int, default=2
        Highest order solved.
    lam : float, default=1.0
        Coupling used by :meth:`predict` and :meth:`transform`.
    mode : {"auto", "strict", "kernel"}, default="auto"
        Projection mode; ``"auto"`` picks strict on a strictly monotone
        spectrum and kernel otherwise.
    trust : int or None, default=None
        Trusted band; defaults to the basis setting, then to the engine rule.
    tol_orth : float or None, default=None
        Threshold for treating kernel entries of the inverse-derivation input as zero.
    terms : int, default=64
        Maximum number of Taylor terms when exponentiating the generator.

    Attributes
    ----------
    result_ : PerturbationResult
    W_, G_, A_ : list of BandOperator
        Per-order effective-Hamiltonian corrections, generators and sources.
    energy_table_ : ndarray of shape (n_levels, order)
    trust_ : int
    mode_ : ProjectionMode

    Examples
    --------
    >>> from ladderpt.models import stark_model
    >>> basis, V = stark_model(32)
    >>> est = OperatorPerturbation(order=2, lam=0.1).fit(basis, V)
    >>> round(float(est.predict([0])[0]), 12)
    0.495
    """

    def __init__(self, order=2, lam=1.0, mode="auto", trust=None, tol_orth=None, terms=64):
        self.order = order
        self.lam = lam
        self.mode = mode
        self.trust = trust
        self.tol_orth = tol_orth
        self.terms = terms

    def fit(self, basis, V):
        """Solve every order for perturbation ``V`` (band operator, ladder expression or dense array)."""
        basis = check_basis(basis)
        V, degree = check_perturbation(V, basis)
        trust = self.trust
        if trust is None:
            trust = basis.trust if basis.trust is not None else default_trust(basis.dim, self.order, degree)
        self.result_ = run(basis, V, self.order, mode=self.mode, trust=trust, tol_orth=self.tol_orth)
        self.A_ = self.result_.A
        self.W_ = self.result_.W
        self.G_ = self.result_.G
        self.energy_table_ = self.result_.energy_table
        self.trust_ = self.result_.trust
        self.mode_ = self.result_.mode
        self.n_features_in_ = basis.dim
        return self

    def predict(self, levels=None):
        """Series energies at ``lam`` for ``levels`` (default: the whole trusted band)."""
        check_is_fitted(self, "result_")
        lam = check_lambda(self.lam)
        levels = check_levels(levels, self.trust_)
        return self.result_.energies(lam)[levels]

    def transform(self, X):
        """Map zeroth-order kets (rows of ``X``) to perturbed kets ``exp(-G(lam)) x``."""
        check_is_fitted(self, "result_")
        lam = check_lambda(self.lam)
        X = check_kets(X, self.n_features_in_)
        minus_g = self.result_.generator(lam).restrict(self.trust_) * -1.0
        return np.array([apply_exp(minus_g, x, terms=self.terms) for x in X])

    def effective_hamiltonian(self):
        """``H0 + sum_k lam**k W_k`` as a band operator."""
        check_is_fitted(self, "result_")
        lam = check_lambda(self.lam)
        return self.result_.basis.hamiltonian() + self.result_.effective_W(lam)
