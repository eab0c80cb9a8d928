"""Representation-free operator perturbation theory on abstract ladder operators."""
from .diagrams import Diagram, assemble_A, enumerate_diagrams, evaluate_diagram
from .engine import PerturbationResult, eigenket, energy, run, solve_order
from .estimator import OperatorPerturbation
from .exceptions import *  # noqa: F401,F403
from .operators import (
    BandOperator, BasisSpec, LadderExpr, add, adjoint, apply, build_monomial, commutator,
    compile_expr, expectation, multiply, scale, split, subtract,
)
from .superop import ProjectionMode, gamma, gamma_inv, pi

__version__ = "0.1.0"
