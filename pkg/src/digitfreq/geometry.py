"""Exact convex geometry over the rationals, specialized to simplex subsets.

Frequency vectors live on the affine hyperplane where coordinates sum to 1,
so a k-component vector has k-1 degrees of freedom.  For k=3 everything is
done with 2D orientation predicates in the (first, last) coordinate chart;
for k=2 the simplex is a segment; for larger k membership and extremality
fall back to exact linear-programming feasibility.  Distances are Euclidean
in the ambient coordinates and are handled as exact squared values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Point = tuple[Fraction, ...]


def dedupe_points(points: Sequence[Point]) -> list[int]:
    """Indices of the first occurrence of each distinct point, in order."""
    seen: set[Point] = set()
    keep = []
    for i, p in enumerate(points):
        if p not in seen:
            seen.add(p)
            keep.append(i)
    return keep


def project_k3(p: Point) -> tuple[Fraction, Fraction]:
    """Chart used throughout for k=3: drop the middle coordinate."""
    return (p[0], p[2])


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_cycle_2d(pts: Sequence[tuple[Fraction, Fraction]]) -> list[int]:
    """Indices of the strict convex hull of distinct points, counterclockwise.

    Collinear in-between points are dropped, so the result lists exactly the
    extreme points.  Degenerate inputs (one point, or all collinear) come out
    as a single index or the two endpoints.
    """
    idx = sorted(range(len(pts)), key=lambda i: pts[i])
    if len(idx) <= 1:
        return idx

    def build(order):
        chain: list[int] = []
        for i in order:
            while len(chain) >= 2 and _cross(pts[chain[-2]], pts[chain[-1]], pts[i]) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = build(idx)
    upper = build(reversed(idx))
    return lower[:-1] + upper[:-1]


def feasible_combination(points: Sequence[Point], target: Point) -> bool:
    """Does target lie in the convex hull of points?  Exact phase-one simplex.

    Constraints: nonnegative weights, matching every coordinate, summing to
    one.  Bland's rule guarantees termination; all pivots are in Fractions.
    """
    m = len(points)
    if m == 0:
        return False
    k = len(target)
    rows = k + 1
    tab = [[Fraction(points[j][i]) for j in range(m)] + [Fraction(target[i])] for i in range(k)]
    tab.append([Fraction(1)] * m + [Fraction(1)])
    basis = [m + i for i in range(rows)]  # indices >= m are artificial
    while True:
        entering = -1
        for j in range(m):
            reduced = sum(tab[i][j] for i in range(rows) if basis[i] >= m)
            if reduced > 0:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best = None
        for i in range(rows):
            if tab[i][entering] > 0:
                ratio = tab[i][m] / tab[i][entering]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            break
        pivot = tab[leaving][entering]
        tab[leaving] = [v / pivot for v in tab[leaving]]
        for i in range(rows):
            if i != leaving and tab[i][entering] != 0:
                factor = tab[i][entering]
                tab[i] = [v - factor * w for v, w in zip(tab[i], tab[leaving])]
        basis[leaving] = entering
    residual = sum(tab[i][m] for i in range(rows) if basis[i] >= m)
    return residual == 0


def extreme_indices(points: Sequence[Point]) -> list[int]:
    """Indices of the points not expressible as convex combinations of the rest.

    Duplicates are collapsed first (only the first copy can be reported).
    """
    keep = dedupe_points(points)
    if len(keep) <= 1:
        return keep
    k = len(points[0])
    if k == 2:
        lo = min(keep, key=lambda i: points[i][0])
        hi = max(keep, key=lambda i: points[i][0])
        return sorted({lo, hi})
    if k == 3:
        flat = [project_k3(points[i]) for i in keep]
        return sorted(keep[j] for j in hull_cycle_2d(flat))
    out = []
    for i in keep:
        others = [points[j] for j in keep if j != i]
        if not feasible_combination(others, points[i]):
            out.append(i)
    return out


def canonical_cycle_k3(points: Sequence[Point]) -> list[int]:
    """Counterclockwise boundary order of extreme k=3 points.

    Starts at the lexicographically smallest point (full coordinates).  The
    input must already be extreme and distinct; with fewer than three points
    the order is simply lexicographic.
    """
    if len(points) < 3:
        return sorted(range(len(points)), key=lambda i: points[i])
    cycle = hull_cycle_2d([project_k3(p) for p in points])
    if len(cycle) != len(points):
        raise ValueError("canonical cycle requires extreme, distinct points")
    start = min(range(len(cycle)), key=lambda j: points[cycle[j]])
    return cycle[start:] + cycle[:start]


def contains_point(vertices: Sequence[Point], p: Point) -> bool:
    """Closed convex-hull membership, exact."""
    keep = dedupe_points(vertices)
    pts = [vertices[i] for i in keep]
    if not pts:
        return False
    k = len(p)
    if k == 2:
        xs = [q[0] for q in pts]
        return min(xs) <= p[0] <= max(xs)
    if k == 3:
        cycle = hull_cycle_2d([project_k3(q) for q in pts])
        if len(cycle) >= 3:
            flat = project_k3(p)
            ring = [project_k3(pts[i]) for i in cycle]
            return all(
                _cross(ring[i], ring[(i + 1) % len(ring)], flat) >= 0
                for i in range(len(ring))
            )
        if len(cycle) == 2:
            return segment_distance2(p, pts[cycle[0]], pts[cycle[1]]) == 0
        return p == pts[cycle[0]]
    return feasible_combination(pts, p)


def squared_distance(p: Point, q: Point) -> Fraction:
    return sum((a - b) * (a - b) for a, b in zip(p, q))


def segment_distance2(p: Point, a: Point, b: Point) -> Fraction:
    """Exact squared distance from p to the segment [a, b]."""
    d = tuple(y - x for x, y in zip(a, b))
    dd = sum(v * v for v in d)
    if dd == 0:
        return squared_distance(p, a)
    t = sum((pc - ac) * dc for pc, ac, dc in zip(p, a, d)) / dd
    if t <= 0:
        return squared_distance(p, a)
    if t >= 1:
        return squared_distance(p, b)
    foot = tuple(ac + t * dc for ac, dc in zip(a, d))
    return squared_distance(p, foot)


def _distance2_to_hull(p: Point, vertices: Sequence[Point]) -> Fraction:
    """Exact squared distance from p to a convex hull, for k <= 3 vertices."""
    k = len(p)
    if contains_point(vertices, p):
        return Fraction(0)
    keep = dedupe_points(vertices)
    pts = [vertices[i] for i in keep]
    if k == 2:
        xs = sorted(q[0] for q in pts)
        gap = max(xs[0] - p[0], p[0] - xs[-1])
        # both coordinates move by the same amount along the simplex line
        return 2 * gap * gap
    cycle = hull_cycle_2d([project_k3(q) for q in pts])
    ring = [pts[i] for i in cycle]
    if len(ring) == 1:
        return squared_distance(p, ring[0])
    return min(
        segment_distance2(p, ring[i], ring[(i + 1) % len(ring)])
        for i in range(len(ring))
    )


def hausdorff_gap2(
    outer: Sequence[Point], inner: Sequence[Point], k: int
) -> Fraction:
    """Squared Hausdorff distance between nested hulls (inner inside outer).

    Exact for k = 2 and k = 3.  For k >= 4 the inner-boundary distance is
    replaced by the distance to the nearest inner vertex, giving an upper
    bound on the true value.
    """
    worst = Fraction(0)
    for v in outer:
        if k <= 3:
            d2 = _distance2_to_hull(v, inner)
        elif contains_point(inner, v):
            d2 = Fraction(0)
        else:
            d2 = min(squared_distance(v, w) for w in inner)
        if d2 > worst:
            worst = d2
    return worst
