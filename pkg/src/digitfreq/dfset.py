"""Digit frequency sets of beta expansions, as exact rational polytopes.

For an itinerary that is rational type (reaches the all-zero tail) the
frequency set is a polytope with an explicit finite vertex list: the trivial
face vertices, one candidate per admissible branch depth, and the pullback of
the last simplex corner through the whole inverse branch chain.  Finite-type
itineraries reduce to the rational type one step further along, so they share
the machinery.  Everything else is approximated by a certified sandwich of
two such polytopes whose Hausdorff gap is computed exactly.

The same vertex data drives parameter-side reports: each admissible prefix
owns a closed interval of bases with a constant frequency set, whose
endpoints are roots of explicit integer polynomials, and a sequence of
corner-angle certificates that measures how the vertex triangle degenerates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cfk import (
    INF,
    DEFAULT_DEPTH_BUDGET,
    FiniteItinerary,
    Itinerary,
    PeriodicItinerary,
    RationalItinerary,
    TruncatedItinerary,
    cf_inverse_chain,
    compare_itineraries,
    infimax,
    itinerary_from_kneading,
    itinerary_of,
    simplex_images,
)
from .errors import InsufficientDigits, RootIsolationError
from .exact_arith import (
    AlgebraicNumber,
    IntegerPolynomial,
    compare_values,
    count_roots,
    format_rational,
    isolate_root,
    poly_from_kneading,
    squarefree_part,
)
from .geometry import canonical_cycle_k3, contains_point, extreme_indices, hausdorff_gap2
from .symbolic import (
    Base,
    FreqVector,
    Order,
    Undecided,
    base_alphabet_size,
    validate_freq,
    w_beta,
)

TAG_TRIVIAL = "trivial"
TAG_PHI_INVERSE = "phi-inverse"


def _unit(k: int, i: int) -> FreqVector:
    return tuple(Fraction(1 if j == i else 0) for j in range(k))


@dataclass(frozen=True)
class Polytope:
    """Convex subset of the frequency simplex with an exact vertex list.

    Vertices are stored in canonical order: for k=3 counterclockwise around
    the boundary starting from the lexicographically smallest vertex, other-
    wise sorted lexicographically.  ``tags`` records where each vertex came
    from (``trivial``, ``fe:<depth>``, ``phi-inverse``, or a caller-supplied
    label), aligned with ``vertices``.
    """

    k: int
    vertices: tuple[FreqVector, ...]
    tags: tuple[str, ...]
    exact: bool = True

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.tags):
            raise ValueError("one tag per vertex required")

    @classmethod
    def build(
        cls,
        k: int,
        candidates: Iterable[tuple[Sequence[Fraction], str]],
        exact: bool = True,
    ) -> "Polytope":
        """Deduplicate, drop non-extreme candidates, and order canonically."""
        pts: list[FreqVector] = []
        tags: list[str] = []
        seen: set[FreqVector] = set()
        for point, tag in candidates:
            vec = validate_freq(point, k)
            if vec in seen:
                continue
            seen.add(vec)
            pts.append(vec)
            tags.append(tag)
        extreme = set(extreme_indices(pts))
        order = [i for i in range(len(pts)) if i in extreme or tags[i] == TAG_TRIVIAL]
        pts = [pts[i] for i in order]
        tags = [tags[i] for i in order]
        if k == 3 and len(pts) >= 3:
            cycle = canonical_cycle_k3(pts)
        else:
            cycle = sorted(range(len(pts)), key=lambda i: pts[i])
        return cls(
            k=k,
            vertices=tuple(pts[i] for i in cycle),
            tags=tuple(tags[i] for i in cycle),
            exact=exact,
        )

    def contains(self, alpha: Sequence[Fraction]) -> bool:
        vec = validate_freq(alpha, self.k)
        return contains_point(self.vertices, vec)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "exact": self.exact,
            "vertices": [
                {"coords": [format_rational(c) for c in v], "tag": t}
                for v, t in zip(self.vertices, self.tags)
            ],
        }


def df_polytope(n: Itinerary, k: int) -> Polytope:
    """Exact digit frequency polytope of a rational- or finite-type itinerary.

    Candidate vertices are the face corners, one inverse-chain image of the
    last face corner per depth whose continuation allows an extreme point,
    and the inverse-chain image of the final simplex corner; non-extreme
    candidates are then discarded by the exact test.  Finite type reduces to
    rational type with the last entry bumped.  Periodic and truncated
    itineraries have no exact finite description here: use
    :func:`df_sandwich`.
    """
    if k < 2:
        raise ValueError("alphabet size must be at least 2")
    if isinstance(n, FiniteItinerary):
        if not n.entries:
            return Polytope.build(
                k, [(_unit(k, i), TAG_TRIVIAL) for i in range(k - 1)]
            )
        bumped = n.entries[:-1] + (n.entries[-1] + 1,)
        return df_polytope(RationalItinerary(bumped), k)
    if not isinstance(n, RationalItinerary):
        raise ValueError(
            "exact polytope needs a rational- or finite-type itinerary; "
            "use df_sandwich for the other types"
        )
    candidates: list[tuple[Sequence[Fraction], str]] = [
        (_unit(k, i), TAG_TRIVIAL) for i in range(k - 1)
    ]
    entries = n.entries
    if not entries:
        candidates.append((_unit(k, k - 1), TAG_PHI_INVERSE))
        return Polytope.build(k, candidates)
    r = len(entries) - 1
    for s in range(r):
        if any(n.entry(s + t) != 0 for t in range(1, k - 1)):
            point = cf_inverse_chain(entries[: s + 1], _unit(k, k - 2))
            candidates.append((point, f"fe:{s}"))
    candidates.append((cf_inverse_chain(entries, _unit(k, k - 1)), TAG_PHI_INVERSE))
    return Polytope.build(k, candidates)


@dataclass(frozen=True)
class DFSandwich:
    """Certified two-sided polytope approximation of a frequency set.

    ``inner`` is contained in the true set, the true set is contained in
    ``outer``, and ``gap_squared`` is the exact squared Hausdorff distance
    between the two bounds.
    """

    inner: Polytope
    outer: Polytope
    depth: int
    gap_squared: Fraction

    @property
    def gap(self) -> float:
        return math.sqrt(self.gap_squared)

    def to_json_dict(self) -> dict:
        return {
            "k": self.outer.k,
            "exact": False,
            "depth": self.depth,
            "gap": self.gap,
            "gap_squared": format_rational(self.gap_squared),
            "inner": self.inner.to_json_dict(),
            "outer": self.outer.to_json_dict(),
        }


def df_sandwich(n: Itinerary, r: int, k: int) -> DFSandwich:
    """Bracket the frequency set of ``n`` between two exact polytopes.

    The outer bound truncates the itinerary after entry ``r``; the inner
    bound bumps that last entry, which is the smallest rational-type
    itinerary above every continuation of the truncated prefix.  Both bounds
    are exact polytopes, and the frequency set is monotone in the itinerary
    order, so the true set sits between them.
    """
    if r < 0:
        raise ValueError("depth must be nonnegative")
    entries: list[int] = []
    for i in range(r + 1):
        try:
            e = n.entry(i)
        except InsufficientDigits as exc:
            raise InsufficientDigits(
                f"insufficient certified depth for a sandwich at depth {r}"
            ) from exc
        if e == INF:
            raise ValueError(
                "itinerary terminates before the requested depth; "
                "its frequency set is already exact via df_polytope"
            )
        entries.append(int(e))
    inner = df_polytope(
        RationalItinerary(tuple(entries[:-1]) + (entries[-1] + 1,)), k
    )
    outer = df_polytope(RationalItinerary(tuple(entries)), k)
    for v in inner.vertices:
        if not contains_point(outer.vertices, v):
            raise AssertionError("sandwich bounds out of order")
    gap2 = hausdorff_gap2(outer.vertices, inner.vertices, k)
    return DFSandwich(inner=inner, outer=outer, depth=r, gap_squared=gap2)


def membership(alpha: Sequence[Fraction], n: Itinerary) -> bool | Undecided:
    """Does the frequency vector ``alpha`` belong to the set of ``n``?

    Decided by comparing the itinerary of ``alpha`` with ``n`` in the
    itinerary order; a truncated ``n`` may leave the comparison undecided.
    """
    phi = itinerary_of(alpha)
    cmp = compare_itineraries(phi, n)
    if isinstance(cmp, Undecided):
        return cmp
    return cmp in (Order.LT, Order.EQ)


class Forcing(enum.Enum):
    """Outcome of comparing two frequency vectors by their itineraries."""

    LE = "LE"
    GE = "GE"
    EQUIVALENT = "EQUIVALENT"


def forcing_compare(alpha: Sequence[Fraction], alpha2: Sequence[Fraction]) -> Forcing:
    """Order the constraints two frequency vectors impose.

    ``LE`` means every set containing ``alpha`` contains ``alpha2`` as well
    (the first vector is the stronger constraint), ``GE`` the reverse, and
    ``EQUIVALENT`` that each forces the other.
    """
    cmp = compare_itineraries(itinerary_of(alpha), itinerary_of(alpha2))
    if cmp is Order.EQ:
        return Forcing.EQUIVALENT
    return Forcing.LE if cmp is Order.LT else Forcing.GE


# ---------------------------------------------------------------------------
# parameter-side reports


def _decimal_str(a: AlgebraicNumber, digits: int = 12) -> str:
    a.refine_to(Fraction(1, 10 ** (digits + 2)))
    scaled = round(a.midpoint() * 10**digits)
    whole, frac = divmod(scaled, 10**digits)
    return f"{whole}.{frac:0{digits}d}"


def _isolate_all(sq: IntegerPolynomial, lo: Fraction, hi: Fraction) -> list[AlgebraicNumber]:
    """All roots of a square-free polynomial in (lo, hi), as isolated numbers."""

    def clean(x: Fraction, other: Fraction) -> Fraction:
        # move an endpoint off a root without skipping past any other root
        step = (other - x) / 4
        while sq(x + step) == 0 or count_roots(sq, min(x, x + step), max(x, x + step)) != 0:
            step /= 2
        return x + step

    if sq(lo) == 0:
        lo = clean(lo, hi)
    if sq(hi) == 0:
        hi = clean(hi, lo)
    out: list[AlgebraicNumber] = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        count = count_roots(sq, a, b)
        if count == 0:
            continue
        if count == 1:
            out.append(AlgebraicNumber(sq, a, b))
            continue
        mid = (a + b) / 2
        j = 3
        while sq(mid) == 0:
            mid = a + (b - a) / j
            j += 1
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda r: r.lo)
    return out


def _isolate_kneading_root(
    poly: IntegerPolynomial, word, k: int, bits: int | None = None
) -> AlgebraicNumber:
    """The root of a kneading polynomial in (k-1, k) whose expansion matches.

    When the polynomial has a single root there, that root is certified by
    the Sturm count alone.  With several roots, candidates are eliminated by
    comparing their actual digit sequences against ``word`` to increasing
    depth; distinct bases disagree at some finite depth, so this terminates
    on every real input.
    """
    lo, hi = Fraction(k - 1), Fraction(k)
    try:
        return isolate_root(poly, lo, hi, bits)
    except RootIsolationError as exc:
        if "multiple" not in str(exc):
            raise
    survivors = _isolate_all(squarefree_part(poly), lo, hi)
    depth = 32
    while len(survivors) > 1 and depth <= 4096:
        expected = tuple(word.digit(i) for i in range(depth))
        kept = []
        for cand in survivors:
            seq = w_beta(cand, budget=depth + 8)
            if tuple(seq.digit(i) for i in range(depth)) == expected:
                kept.append(cand)
        survivors = kept
        depth *= 2
    if len(survivors) != 1:
        raise RootIsolationError("could not identify the kneading root")
    return survivors[0]


@dataclass(frozen=True)
class LockInterval:
    """Closed base interval on which the frequency set is constant.

    The endpoints are algebraic: ``lo`` is the base whose maximal expansion
    repeats the block of the bumped prefix forever, ``hi`` the one whose
    expansion settles into the prefix's own repeating tail.  ``polytope`` is
    the constant frequency set taken on the interval's interior.
    """

    prefix: tuple[int, ...]
    k: int
    lo_poly: IntegerPolynomial
    hi_poly: IntegerPolynomial
    lo: AlgebraicNumber
    hi: AlgebraicNumber
    polytope: Polytope

    def to_json_dict(self, digits: int = 12) -> dict:
        return {
            "prefix": list(self.prefix),
            "k": self.k,
            "lo": {"poly": list(self.lo_poly.coeffs), "value": _decimal_str(self.lo, digits)},
            "hi": {"poly": list(self.hi_poly.coeffs), "value": _decimal_str(self.hi, digits)},
            "polytope": self.polytope.to_json_dict(),
        }


def lock_interval(
    prefix: Sequence[int], k: int, bits: int | None = None
) -> LockInterval:
    """Certified base interval realizing the itinerary prefix exactly.

    Bases in the interval share the itinerary ``prefix`` and hence the same
    exact frequency polytope.  Both endpoint polynomials come from the
    maximal expansions of the bracketing itineraries, and the certificate
    includes a strict ``lo < hi`` comparison.
    """
    prefix = tuple(int(e) for e in prefix)
    if not prefix:
        raise ValueError("prefix must be nonempty")
    if any(e < 0 for e in prefix):
        raise ValueError("itinerary entries are nonnegative")
    bumped = RationalItinerary(prefix[:-1] + (prefix[-1] + 1,))
    w_lo = infimax(bumped, k)
    w_hi = infimax(FiniteItinerary(prefix), k)
    lo_poly = poly_from_kneading(w_lo.pre, w_lo.period)
    hi_poly = poly_from_kneading(w_hi.pre, w_hi.period)
    lo = _isolate_kneading_root(lo_poly, w_lo, k, bits)
    hi = _isolate_kneading_root(hi_poly, w_hi, k, bits)
    if compare_values(lo, hi, bits) >= 0:
        raise RootIsolationError("lock interval endpoints out of order")
    return LockInterval(
        prefix=prefix,
        k=k,
        lo_poly=lo_poly,
        hi_poly=hi_poly,
        lo=lo,
        hi=hi,
        polytope=df_polytope(bumped, k),
    )


def df_of_beta(
    beta: Base,
    *,
    digit_budget: int = 2048,
    depth_budget: int = DEFAULT_DEPTH_BUDGET,
    sandwich_depth: int = 32,
) -> Polytope | DFSandwich:
    """Frequency set of the expansions in base ``beta``: exact if decidable.

    The maximal digit sequence of the base is folded into an itinerary;
    rational- and finite-type outcomes give the exact polytope, everything
    else a certified sandwich at the deepest available depth (capped by
    ``sandwich_depth``).
    """
    k = base_alphabet_size(beta)
    w = w_beta(beta, budget=digit_budget)
    n = itinerary_from_kneading(w, depth_budget=depth_budget)
    if isinstance(n, (RationalItinerary, FiniteItinerary)):
        return df_polytope(n, k)
    if isinstance(n, PeriodicItinerary):
        return df_sandwich(n, sandwich_depth, k)
    certified = n.certified
    if certified <= 0:
        raise InsufficientDigits(
            "no certified itinerary entries at this digit budget"
        )
    return df_sandwich(n, min(certified - 1, sandwich_depth), k)


# ---------------------------------------------------------------------------
# corner-angle certificates (three-letter alphabet only)


@dataclass(frozen=True)
class AngleCertificate:
    """Exact witness for the vertex angle at the apex of a depth-r triangle.

    ``dot`` is the inner product of the two edge vectors leaving the apex
    and ``mag2`` the product of their squared lengths, both exact; the
    floating-point angle is derived from them on demand.  Comparing two
    certificates through :func:`compare_angles` never touches floats.
    """

    depth: int
    dot: Fraction
    mag2: Fraction

    @property
    def cos(self) -> float:
        return float(self.dot) / math.sqrt(self.mag2)

    @property
    def theta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.cos)))


def compare_angles(a: AngleCertificate, b: AngleCertificate) -> Order:
    """Exact three-way comparison of the angles two certificates witness."""
    sa = (a.dot > 0) - (a.dot < 0)
    sb = (b.dot > 0) - (b.dot < 0)
    if sa != sb:
        # the larger cosine sign gives the larger cosine, hence smaller angle
        return Order.LT if sa > sb else Order.GT
    if sa == 0:
        return Order.EQ
    lhs = a.dot * a.dot * b.mag2
    rhs = b.dot * b.dot * a.mag2
    if lhs == rhs:
        return Order.EQ
    bigger_cos_a = (lhs > rhs) if sa > 0 else (lhs < rhs)
    return Order.LT if bigger_cos_a else Order.GT


def theta_sequence(
    prefix: Sequence[int], r_max: int | None = None, k: int = 3
) -> list[AngleCertificate]:
    """Angles at the image of the last simplex corner, one per prefix depth.

    Only the three-letter alphabet has a planar vertex triangle, so other
    values of ``k`` are rejected.  The angles are nondecreasing along the
    prefix, with equality exactly over zero entries; callers check this via
    :func:`compare_angles`.
    """
    if k != 3:
        raise ValueError("angle certificates are defined for k = 3 only")
    prefix = tuple(int(e) for e in prefix)
    if r_max is None:
        r_max = len(prefix) - 1
    if not 0 <= r_max < len(prefix):
        raise ValueError("r_max out of range for the prefix")
    out = []
    for r in range(r_max + 1):
        tri = simplex_images(prefix[: r + 1], k)["A_vertices"]
        apex = tri[2]
        u = tuple(x - y for x, y in zip(tri[0], apex))
        v = tuple(x - y for x, y in zip(tri[1], apex))
        dot = sum(x * y for x, y in zip(u, v))
        mag2 = sum(x * x for x in u) * sum(x * x for x in v)
        if mag2 == 0 or dot * dot == mag2:
            raise ValueError("degenerate (collinear) triangle")
        out.append(AngleCertificate(depth=r, dot=dot, mag2=mag2))
    return out
