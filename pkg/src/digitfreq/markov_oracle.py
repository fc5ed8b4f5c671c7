"""Markov partitions for bases whose expansion orbit of 1 is finite.

When the orbit of 1 under the base map terminates at 0, the unit interval
splits into finitely many subintervals, cut by the orbit points and by the
digit-branch boundaries j/base.  The base map sends each subinterval onto an
exact union of others, giving a finite transition graph whose simple cycles
carry rational digit frequencies.  The convex hull of those frequencies is a
completely independent route to the frequency polytope, used as an oracle
against the itinerary pipeline.

All orbit points are handled as polynomials in the base reduced modulo its
defining polynomial, so interval endpoints compare exactly; nothing in this
module trusts floating point.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .dfset import Polytope
from .errors import NotMarkovError
from .exact_arith import (
    AlgebraicNumber,
    IntegerPolynomial,
    Residue,
    format_rational,
    residue_from,
    residue_inverse,
    residue_mul,
    residue_scale,
    residue_sign,
    residue_sub_constant,
    without_zero_root,
)
from .symbolic import Base, FreqVector, Word, base_alphabet_size


class _BetaArithmetic:
    """Exact field arithmetic for polynomial expressions in one base value.

    A rational base uses a linear modulus, so residues collapse to rational
    constants; an algebraic base keeps its square-free defining polynomial
    (with any power of x divided out, so the base is invertible).
    """

    def __init__(self, beta: Base, bits: int | None = None):
        self.beta = beta
        self.bits = bits
        if isinstance(beta, AlgebraicNumber):
            self.modulus = without_zero_root(beta.poly)
            self.alpha = beta
        else:
            frac = Fraction(beta)
            self.modulus = IntegerPolynomial((-frac.numerator, frac.denominator))
            self.alpha = None

    def const(self, c) -> Residue:
        return residue_from((Fraction(c),), self.modulus)

    def times_beta(self, a: Residue) -> Residue:
        return residue_mul(a, residue_from((0, 1), self.modulus), self.modulus)

    def minus(self, a: Residue, c) -> Residue:
        return residue_sub_constant(a, Fraction(c))

    def inverse_beta_times(self, j: int) -> Residue:
        inv = residue_inverse(residue_from((0, 1), self.modulus), self.modulus)
        return residue_scale(inv, j)

    def sign(self, a: Residue) -> int:
        if self.alpha is None:
            vals = [c for c in a if c != 0]
            if not vals:
                return 0
            # degree-one modulus: the residue is a rational constant
            v = a[0]
            return (v > 0) - (v < 0)
        return residue_sign(a, self.alpha, bits=self.bits)

    def compare(self, a: Residue, b: Residue) -> int:
        la = len(a) if len(a) >= len(b) else len(b)
        diff = tuple(
            (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
            for i in range(la)
        )
        return self.sign(diff)

    def to_float(self, a: Residue) -> float:
        if self.alpha is None:
            return float(a[0]) if a else 0.0
        x = float(self.alpha)
        return float(sum(float(c) * x**i for i, c in enumerate(a)))


@dataclass(frozen=True, eq=False)
class MarkovPartition:
    """Ordered cut points of the unit interval and a digit label per piece.

    ``cut_points[i]`` < ``cut_points[i+1]`` exactly; interval ``i`` (numbered
    from 1, as in reports) spans the i-th consecutive pair and is labeled by
    the digit branch containing it.
    """

    beta: Base
    modulus: IntegerPolynomial
    cut_points: tuple[Residue, ...]
    labels: tuple[int, ...]
    _ring: _BetaArithmetic = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    def cut_floats(self) -> list[float]:
        return [self._ring.to_float(c) for c in self.cut_points]

    def to_json_dict(self) -> dict:
        return {
            "modulus": list(self.modulus.coeffs),
            "cut_points": [
                [format_rational(c) for c in cut] for cut in self.cut_points
            ],
            "cut_approx": self.cut_floats(),
            "labels": list(self.labels),
        }


@dataclass(frozen=True)
class TransitionGraph:
    """Covering relation between partition intervals, nodes numbered from 1."""

    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.labels)

    def successors(self, node: int) -> tuple[int, ...]:
        return self.adjacency[node - 1]

    def transition_matrix(self) -> list[list[int]]:
        return [
            [1 if j + 1 in row else 0 for j in range(self.size)]
            for row in self.adjacency
        ]

    def to_json_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "adjacency": {str(i + 1): list(row) for i, row in enumerate(self.adjacency)},
        }


def build_partition(
    beta: Base, kneading: Word, bits: int | None = None
) -> tuple[MarkovPartition, TransitionGraph]:
    """Certified Markov partition for a base with finite orbit of 1.

    ``kneading`` lists the digits of the maximal expansion of 1 up to the
    point where the orbit hits 0; every digit and the terminal zero are
    re-verified exactly, so wrong kneading data cannot produce a partition.
    Integer bases are excluded up front (their partition is trivial and the
    inverse-base cut points collapse).
    """
    if isinstance(beta, int):
        beta = Fraction(beta)
    if isinstance(beta, Fraction) and beta.denominator == 1:
        raise NotMarkovError("integer bases are excluded")
    k = base_alphabet_size(beta)
    digits = tuple(kneading)
    if not digits:
        raise NotMarkovError("kneading data is empty")
    ring = _BetaArithmetic(beta, bits=bits)
    one = ring.const(1)
    zero = ring.const(0)

    # replay the orbit of 1, certifying each claimed digit greedily
    orbit = [one]
    y = one
    for s, d in enumerate(digits):
        if not 0 <= d <= k - 1:
            raise NotMarkovError(f"digit {d} outside the alphabet")
        y = ring.minus(ring.times_beta(y), d)
        last = s == len(digits) - 1
        if ring.sign(y) < 0 or ring.compare(y, one) >= 0:
            raise NotMarkovError("not Markov at requested beta")
        if ring.sign(y) == 0:
            if not last:
                raise NotMarkovError("not Markov at requested beta")
        elif last:
            raise NotMarkovError("not Markov at requested beta")
        if not last:
            orbit.append(y)

    branch_cuts = [ring.inverse_beta_times(j) for j in range(1, k)]
    candidates = [zero] + orbit + branch_cuts
    cuts: list[Residue] = []
    for cand in candidates:
        if all(ring.compare(cand, c) != 0 for c in cuts):
            cuts.append(cand)
    cuts.sort(key=functools.cmp_to_key(ring.compare))

    labels = []
    for i in range(len(cuts) - 1):
        left = cuts[i]
        j = sum(1 for b in branch_cuts if ring.compare(b, left) <= 0)
        # certify the branch bracket: j/beta <= left and right <= (j+1)/beta
        if j < k - 1 and ring.compare(cuts[i + 1], branch_cuts[j]) > 0:
            raise NotMarkovError("not Markov at requested beta")
        labels.append(j)

    partition = MarkovPartition(
        beta=beta,
        modulus=ring.modulus,
        cut_points=tuple(cuts),
        labels=tuple(labels),
        _ring=ring,
    )

    def cut_index(point: Residue) -> int:
        for idx, c in enumerate(cuts):
            if ring.compare(point, c) == 0:
                return idx
        raise NotMarkovError("not Markov at requested beta")

    adjacency = []
    for i in range(len(labels)):
        d = labels[i]
        img_lo = cut_index(ring.minus(ring.times_beta(cuts[i]), d))
        img_hi = cut_index(ring.minus(ring.times_beta(cuts[i + 1]), d))
        if img_hi <= img_lo:
            raise NotMarkovError("not Markov at requested beta")
        adjacency.append(tuple(range(img_lo + 1, img_hi + 1)))
    graph = TransitionGraph(adjacency=tuple(adjacency), labels=tuple(labels))
    return partition, graph


def minimal_loops(g: TransitionGraph) -> list[tuple[int, ...]]:
    """All simple cycles of the graph, each rotated to start at its least node."""
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(1, g.size + 1))
    for i, row in enumerate(g.adjacency):
        for j in row:
            digraph.add_edge(i + 1, j)
    loops = []
    for cycle in nx.simple_cycles(digraph):
        rotations = [
            tuple(cycle[i:] + cycle[:i]) for i in range(len(cycle))
        ]
        loops.append(min(rotations))
    return sorted(loops)


def loop_frequency(loop: Sequence[int], labels: Sequence[int]) -> FreqVector:
    """Exact digit frequency along one loop; ``labels`` is indexed from node 1."""
    k = max(labels) + 1
    counts = [0] * k
    for node in loop:
        counts[labels[node - 1]] += 1
    return tuple(Fraction(c, len(loop)) for c in counts)


def oracle_hull(
    loops: Sequence[Sequence[int]], labels: Sequence[int]
) -> Polytope:
    """Convex hull of the loop digit frequencies, in canonical vertex order.

    The hull equals the frequency polytope of the base whenever the orbit of
    1 is finite, which is what makes this an oracle for the itinerary route.
    """
    k = max(labels) + 1
    candidates = [
        (loop_frequency(loop, labels), "loop:" + "".join(str(n) for n in loop))
        for loop in loops
    ]
    return Polytope.build(k, candidates)


def loops_report(
    loops: Sequence[Sequence[int]], labels: Sequence[int]
) -> list[dict]:
    """JSON-ready table of loops with their exact digit frequencies."""
    return [
        {
            "nodes": list(loop),
            "frequency": [format_rational(c) for c in loop_frequency(loop, labels)],
        }
        for loop in loops
    ]
