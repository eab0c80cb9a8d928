"""Bracket diagrams that enumerate the nested commutators feeding each order.

A diagram ``(i1, ..., ik | r)`` stands for the weighted nested commutator

    (1/k!) [G_i1, [G_i2, ..., [G_ik, X]...]]

with ``X = V`` when ``r = 1`` and ``X = H0`` when ``r = 0``.  Its order is
``i1 + ... + ik + r``.  The order-``n`` source term ``A_n`` is the sum of all
order-``n`` diagrams except the single bracket ``(n|0)``, which is the
unknown ``[G_n, H0]`` side of the commutator equation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Mapping

from .exceptions import InvalidOrder, MissingGenerator
from .operators import BandOperator, commutator

__all__ = [
    "Diagram",
    "DiagramContext",
    "compositions",
    "enumerate_diagrams",
    "bracket_order",
    "evaluate_diagram",
    "assemble_A",
]


@dataclass(frozen=True, order=True)
class Diagram:
    left: tuple = ()
    right: int = 1

    def __post_init__(self):
        left = tuple(int(i) for i in self.left)
        object.__setattr__(self, "left", left)
        if any(i < 1 for i in left):
            raise ValueError("left entries must be positive integers")
        if self.right not in (0, 1):
            raise ValueError("right side must be 0 or 1")
        if self.order < 1:
            raise ValueError("diagram order must be at least 1")
        if self.right == 0 and len(left) < 2:
            raise ValueError("an H0 diagram needs at least two generators")

    @property
    def order(self):
        return sum(self.left) + self.right

    @property
    def weight(self):
        return 1.0 / factorial(len(self.left))

    def __str__(self):
        return "(" + ",".join(map(str, self.left)) + f"|{self.right})"


def compositions(total, min_parts=1):
    """Yield the compositions of ``total`` in lexicographic order.

    The empty composition is produced for ``total == 0``.
    """
    if total == 0:
        if min_parts <= 0:
            yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first, min_parts - 1):
            yield (first,) + rest


def enumerate_diagrams(n):
    """All order-``n`` diagrams contributing to ``A_n``.

    ``V`` diagrams come first, then ``H0`` diagrams, each group in
    lexicographic order of the left side.
    """
    if int(n) != n or n < 1:
        raise InvalidOrder(f"order must be a positive integer, got {n!r}")
    n = int(n)
    with_v = [Diagram(c, 1) for c in compositions(n - 1, min_parts=0)]
    with_h0 = [Diagram(c, 0) for c in compositions(n, min_parts=2)]
    return with_v + with_h0


def bracket_order(diagrams):
    """Display order of the ``diagrams`` command.

    Sorted by number of generators, then ``H0`` before ``V``, then by the
    largest generator index (descending), then lexicographically.
    """
    return sorted(diagrams, key=lambda d: (len(d.left), d.right, -max(d.left, default=0), d.left))


@dataclass
class DiagramContext:
    H0: BandOperator
    V: BandOperator
    generators: Mapping[int, BandOperator] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def nested(self, left, right):
        """Unweighted nested commutator, memoised on the suffix."""
        key = (tuple(left), right)
        if key in self._cache:
            return self._cache[key]
        if not left:
            out = self.V if right == 1 else self.H0
        else:
            g = self.generators.get(left[0])
            if g is None:
                raise MissingGenerator(f"generator G_{left[0]} has not been solved")
            out = commutator(g, self.nested(left[1:], right))
        self._cache[key] = out
        return out


def evaluate_diagram(d, ctx):
    """Weighted nested commutator represented by ``d``."""
    for i in d.left:
        if i not in ctx.generators:
            raise MissingGenerator(f"diagram {d} needs G_{i}, which has not been solved")
    inner = ctx.nested(d.left, d.right)
    return inner if not d.left else inner * d.weight


def assemble_A(n, ctx):
    """Source operator ``A_n`` as the sum of its diagrams."""
    total = ctx.V.basis.zero()
    for d in enumerate_diagrams(n):
        total = total + evaluate_diagram(d, ctx)
    return total
