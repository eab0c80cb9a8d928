"""Order-by-order solution of the canonical-transformation equations.

At order ``n`` the source ``A_n`` is assembled from the diagrams, then

    W_n = pi(A_n)
    G_n = gamma_inv(A_n - W_n)

so that ``[H0, G_n] = A_n - W_n``.  The perturbed energies are
``eps0[n] + sum_k lam**k <n|W_k|n>`` and the perturbed kets are
``exp(-G(lam)) |n>`` with ``G(lam) = sum_k lam**k G_k``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .diagrams import DiagramContext, assemble_A
from .exceptions import ExponentialNotConverged, IndexOutOfRange, InvalidOrder, ResidualTooLarge
from .operators import BandOperator, LadderExpr, apply, basis_ket, commutator, compile_expr, expectation
from .superop import ProjectionMode, gamma_inv, pi

__all__ = ["PerturbationResult", "default_trust", "solve_order", "run", "energy", "apply_exp", "eigenket"]

log = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-9


def default_trust(dim, order, degree):
    """Levels left after discarding ``2 * order * degree`` from the top, at least 1."""
    return max(1, dim - 2 * order * max(1, degree))


@dataclass
class PerturbationResult:
    """Per-order operators and energy corrections of a completed run.

    Lists ``A``, ``W``, ``G`` and ``residuals`` are indexed by ``order - 1``.
    ``energy_table[n, k - 1]`` is the real part of ``<n|W_k|n>``.
    """

    basis: object
    V: BandOperator
    order: int
    mode: ProjectionMode
    trust: int
    A: list = field(default_factory=list)
    W: list = field(default_factory=list)
    G: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    energy_table: np.ndarray = None

    def _series(self, ops, lam):
        total = self.basis.zero()
        for k, op in enumerate(ops, start=1):
            total = total + op * lam**k
        return total

    def effective_W(self, lam):
        """``sum_k lam**k W_k``."""
        return self._series(self.W, lam)

    def generator(self, lam):
        """``sum_k lam**k G_k``."""
        return self._series(self.G, lam)

    def hamiltonian(self, lam):
        return self.basis.hamiltonian() + self.V * lam

    def energies(self, lam):
        """Series energies for every level (truncation-affected ones included)."""
        powers = lam ** np.arange(1, self.order + 1)
        return self.basis.eps0 + self.energy_table @ powers

    def energy(self, n, lam):
        return energy(self, n, lam)

    def eigenket(self, n, lam, terms=64):
        return eigenket(self, n, lam, terms)


def solve_order(n, ctx, mode, tol_orth=None, check_residual=True):
    """Solve order ``n`` given ``G_1 .. G_{n-1}`` in ``ctx.generators``.

    Returns ``(A_n, W_n, G_n, residual)`` where ``residual`` is the Frobenius
    norm of ``[H0, G_n] - (A_n - W_n)``.
    """
    A = assemble_A(n, ctx)
    W = pi(A, mode)
    B = A - W
    G = gamma_inv(B, mode, tol_orth=tol_orth)
    residual = (commutator(ctx.H0, G) - B).norm()
    # written so a NaN residual fails too
    if check_residual and not residual <= RESIDUAL_RTOL * A.norm():
        if not np.isfinite(residual):
            raise ResidualTooLarge(f"order {n}: non-finite residual; the perturbation overflows")
        raise ResidualTooLarge(
            f"order {n}: residual {residual:.3e} exceeds {RESIDUAL_RTOL:g} * |A_{n}| = "
            f"{RESIDUAL_RTOL * A.norm():.3e}; try a larger basis"
        )
    return A, W, G, residual


def run(basis, V, order, mode=None, trust=None, tol_orth=None, check_residual=True):
    """Solve orders ``1..order`` for the perturbation ``V`` on ``basis``.

    Parameters
    ----------
    basis : BasisSpec
    V : BandOperator or LadderExpr
    order : int
    mode : ProjectionMode, str or None
        ``None`` selects strict mode on a strictly monotone spectrum and
        kernel mode otherwise.
    trust : int, optional
        Overrides ``basis.trust`` and the default trust band.
    """
    if int(order) != order or order < 1:
        raise InvalidOrder(f"order must be a positive integer, got {order!r}")
    order = int(order)
    if isinstance(V, LadderExpr):
        degree = V.degree
        V = compile_expr(basis, V)
    else:
        degree = V.bandwidth
    mode = ProjectionMode.coerce(mode, basis)
    if trust is None:
        trust = basis.trust if basis.trust is not None else default_trust(basis.dim, order, degree)
    if not 1 <= trust <= basis.dim:
        raise ValueError(f"trust must lie in [1, {basis.dim}], got {trust}")

    ctx = DiagramContext(H0=basis.hamiltonian(), V=V)
    result = PerturbationResult(basis=basis, V=V, order=order, mode=mode, trust=int(trust))
    for n in range(1, order + 1):
        A, W, G, residual = solve_order(n, ctx, mode, tol_orth=tol_orth, check_residual=check_residual)
        log.debug("order %d: |A|=%.3e |W|=%.3e |G|=%.3e residual=%.1e", n, A.norm(), W.norm(), G.norm(), residual)
        ctx.generators[n] = G
        result.A.append(A)
        result.W.append(W)
        result.G.append(G)
        result.residuals.append(residual)
    result.energy_table = np.array(
        [[expectation(W, k).real for W in result.W] for k in range(basis.dim)]
    )
    return result


def _check_level(result, n):
    if not 0 <= n < result.trust:
        raise IndexOutOfRange(f"level {n} is outside the trusted band [0, {result.trust})")


def energy(result, n, lam):
    """Perturbed energy of level ``n`` at coupling ``lam``."""
    _check_level(result, n)
    return float(result.basis.eps0[n] + sum(lam**k * result.energy_table[n, k - 1]
                                             for k in range(1, result.order + 1)))


def apply_exp(op, ket, terms=64, atol=1e-14):
    """``exp(op) @ ket`` by its Taylor series, applied term by term to the ket.

    Raises
    ------
    ExponentialNotConverged
        No term fell below ``atol`` within ``terms`` terms.
    """
    total = np.array(ket, dtype=complex)
    term = total.copy()
    if op.is_zero():
        return total
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, terms + 1):
            term = apply(op, term) / j
            total += term
            size = np.linalg.norm(term)
            if not np.isfinite(size):
                break
            if size < atol:
                return total
    raise ExponentialNotConverged(f"exponential series not converged after {terms} terms")


def eigenket(result, n, lam, terms=64, atol=1e-14):
    """Perturbed ket ``exp(-G(lam)) |n>``.

    The generator is restricted to the trusted block so truncation-edge
    entries cannot feed the series.
    """
    _check_level(result, n)
    minus_g = result.generator(lam).restrict(result.trust) * -1.0
    try:
        return apply_exp(minus_g, basis_ket(result.basis, n), terms=terms, atol=atol)
    except ExponentialNotConverged:
        raise ExponentialNotConverged(
            f"exp(-G) series for level {n} at lambda={lam} not converged after {terms} terms"
        ) from None
