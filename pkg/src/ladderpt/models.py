"""Ready-made test models on a harmonic basis."""
import math

from .operators import BasisSpec, LadderExpr


def stark_perturbation():
    """``-(eta_+ + eta_-)/sqrt(2)``: a uniform field acting on an oscillator."""
    g = -1.0 / math.sqrt(2.0)
    return LadderExpr(((g, 1, 0), (g, 0, 1)))


def quartic_perturbation():
    """Normal-ordered bosonic expansion of ``(eta_+ + eta_-)**4``."""
    return LadderExpr((
        (1, 4, 0), (4, 3, 1), (6, 2, 2), (4, 1, 3), (1, 0, 4),
        (6, 2, 0), (12, 1, 1), (6, 0, 2),
        (3, 0, 0),
    ))


def stark_model(dim=64, omega=1.0, trust=None):
    return BasisSpec.harmonic(dim, omega=omega, trust=trust), stark_perturbation()


def quartic_model(dim=64, trust=None):
    return BasisSpec.harmonic(dim, trust=trust), quartic_perturbation()
