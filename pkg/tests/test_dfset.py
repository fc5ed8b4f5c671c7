import json
import math
import random
from fractions import Fraction as F

import pytest

from digitfreq.cfk import (
    FiniteItinerary,
    PeriodicItinerary,
    RationalItinerary,
    TruncatedItinerary,
    compare_itineraries,
    itinerary_of,
    simplex_images,
)
from digitfreq.dfset import (
    AngleCertificate,
    DFSandwich,
    Forcing,
    LockInterval,
    Polytope,
    compare_angles,
    df_of_beta,
    df_polytope,
    df_sandwich,
    forcing_compare,
    lock_interval,
    membership,
    theta_sequence,
)
from digitfreq.errors import InsufficientDigits
from digitfreq.exact_arith import IntegerPolynomial, compare_values, isolate_root
from digitfreq.geometry import contains_point, extreme_indices, feasible_combination
from digitfreq.symbolic import Order, Undecided


def vset(p):
    return set(p.vertices)


PENTAGON_2101 = {
    (F(1), F(0), F(0)),
    (F(0), F(1), F(0)),
    (F(3, 4), F(0), F(1, 4)),
    (F(5, 8), F(1, 8), F(1, 4)),
    (F(4, 9), F(1, 3), F(2, 9)),
}

PENTAGON_011 = {
    (F(1), F(0), F(0)),
    (F(0), F(1), F(0)),
    (F(1, 2), F(0), F(1, 2)),
    (F(0), F(2, 3), F(1, 3)),
    (F(1, 4), F(1, 4), F(1, 2)),
}

HEPTAGON_2101 = {
    (F(1), F(0), F(0), F(0)),
    (F(0), F(1), F(0), F(0)),
    (F(0), F(0), F(1), F(0)),
    (F(3, 4), F(0), F(0), F(1, 4)),
    (F(2, 5), F(2, 5), F(0), F(1, 5)),
    (F(2, 5), F(1, 5), F(1, 5), F(1, 5)),
    (F(5, 8), F(1, 8), F(0), F(1, 4)),
}


def random_rational(rng, max_len=5, max_entry=3):
    length = rng.randrange(1, max_len + 1)
    entries = [rng.randrange(0, max_entry + 1) for _ in range(length)]
    entries[-1] = rng.randrange(1, max_entry + 1)
    return RationalItinerary(tuple(entries))


def random_alpha(rng, k, max_num=9):
    while True:
        parts = [rng.randrange(0, max_num + 1) for _ in range(k)]
        total = sum(parts)
        if total:
            return tuple(F(p, total) for p in parts)


class TestDfPolytope:
    def test_pentagon(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        assert vset(p) == PENTAGON_2101
        assert len(p.vertices) == 5
        assert p.exact

    def test_pentagon_tags(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        by_tag = dict(zip(p.tags, p.vertices))
        assert by_tag["fe:0"] == (F(3, 4), F(0), F(1, 4))
        assert by_tag["fe:2"] == (F(5, 8), F(1, 8), F(1, 4))
        assert by_tag["phi-inverse"] == (F(4, 9), F(1, 3), F(2, 9))
        assert "fe:1" not in p.tags  # blocked by the zero entry that follows

    def test_pentagon_canonical_order(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        assert p.tags == ("trivial", "trivial", "fe:0", "fe:2", "phi-inverse")
        assert p.vertices[0] == (F(0), F(1), F(0))  # lex-smallest start

    def test_second_pentagon(self):
        p = df_polytope(RationalItinerary((0, 1, 1)), 3)
        assert vset(p) == PENTAGON_011

    def test_heptagon_k4(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 4)
        assert vset(p) == HEPTAGON_2101
        assert len(p.vertices) == 7
        # the depth-1 candidate survives in k=4 because a later entry is nonzero
        assert dict(zip(p.tags, p.vertices))["fe:1"] == (F(2, 5), F(2, 5), F(0), F(1, 5))

    def test_interior_point_is_member_not_vertex(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        q = (F(2, 5), F(2, 5), F(1, 5))
        assert p.contains(q)
        assert q not in vset(p)

    def test_finite_reduces_to_bumped_rational(self):
        a = df_polytope(FiniteItinerary((2, 1, 0, 0)), 3)
        b = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        assert a == b

    def test_empty_rational_is_full_simplex(self):
        p = df_polytope(RationalItinerary(()), 3)
        assert vset(p) == {
            (F(1), F(0), F(0)),
            (F(0), F(1), F(0)),
            (F(0), F(0), F(1)),
        }
        assert dict(zip(p.tags, p.vertices))["phi-inverse"] == (F(0), F(0), F(1))

    def test_empty_finite_is_face(self):
        p = df_polytope(FiniteItinerary(()), 3)
        assert vset(p) == {(F(1), F(0), F(0)), (F(0), F(1), F(0))}

    def test_two_letter_segment(self):
        p = df_polytope(RationalItinerary((1,)), 2)
        assert vset(p) == {(F(1), F(0)), (F(1, 2), F(1, 2))}

    def test_periodic_rejected(self):
        with pytest.raises(ValueError):
            df_polytope(PeriodicItinerary((1,), (1, 0)), 3)

    def test_truncated_rejected(self):
        with pytest.raises(ValueError):
            df_polytope(TruncatedItinerary((1, 2)), 3)

    def test_vertices_are_extreme(self):
        # hull closure: recomputing extreme points changes nothing
        for n, k in [
            (RationalItinerary((2, 1, 0, 1)), 3),
            (RationalItinerary((2, 1, 0, 1)), 4),
            (RationalItinerary((0, 1, 1)), 3),
            (RationalItinerary((3,)), 2),
        ]:
            p = df_polytope(n, k)
            assert extreme_indices(p.vertices) == list(range(len(p.vertices)))

    def test_monotone_in_itinerary(self):
        rng = random.Random(11)
        checked = 0
        while checked < 200:
            k = rng.choice((2, 3, 4))
            m = random_rational(rng)
            n = random_rational(rng)
            cmp = compare_itineraries(m, n)
            if cmp is Order.EQ:
                continue
            if cmp is Order.GT:
                m, n = n, m
            small = df_polytope(m, k)
            big = df_polytope(n, k)
            for v in small.vertices:
                assert big.contains(v)
                assert membership(v, n) is True
            checked += 1

    def test_truncation_grows_the_set(self):
        rng = random.Random(12)
        for _ in range(100):
            k = rng.choice((2, 3))
            n = random_rational(rng, max_len=6)
            if len(n.entries) < 2:
                continue
            cut = rng.randrange(1, len(n.entries))
            outer = df_polytope(RationalItinerary(n.entries[:cut]), k)
            inner = df_polytope(n, k)
            for v in inner.vertices:
                assert outer.contains(v)

    def test_json_shape(self):
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        d = p.to_json_dict()
        assert d["k"] == 3 and d["exact"] is True
        assert [v["tag"] for v in d["vertices"]] == list(p.tags)
        assert d["vertices"][2]["coords"] == ["3/4", "0", "1/4"]
        # serialization is stable
        assert json.dumps(d, sort_keys=True) == json.dumps(
            p.to_json_dict(), sort_keys=True
        )

    def test_extremality_certificate(self):
        # independent of the hull route: the linear-feasibility solver must
        # reject each vertex as a combination of the others, and accept the
        # known interior point as a combination of all of them
        for n, k in [
            (RationalItinerary((2, 1, 0, 1)), 3),
            (RationalItinerary((0, 1, 1)), 3),
            (RationalItinerary((2, 1, 0, 1)), 4),
        ]:
            p = df_polytope(n, k)
            for i, v in enumerate(p.vertices):
                others = [w for j, w in enumerate(p.vertices) if j != i]
                assert not feasible_combination(others, v)
        p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
        assert feasible_combination(p.vertices, (F(2, 5), F(2, 5), F(1, 5)))

    def test_boundary_chain_order(self):
        # walking the k=3 boundary from (1,0,0): even-depth branch vertices
        # in increasing depth, then the full-chain pullback, then odd depths
        # in decreasing depth, arriving at (0,1,0)
        rng = random.Random(23)
        cases = [RationalItinerary((2, 1, 0, 1)), RationalItinerary((0, 1, 1))]
        cases += [random_rational(rng, max_len=6) for _ in range(20)]
        for n in cases:
            p = df_polytope(n, 3)
            if len(p.vertices) < 3:
                continue
            cycle = list(zip(p.tags, p.vertices))
            start = cycle.index(("trivial", (F(1), F(0), F(0))))
            cycle = cycle[start:] + cycle[:start]
            tags = [t for t, _ in cycle]
            assert tags[-1] == "trivial" and cycle[-1][1] == (F(0), F(1), F(0))
            middle = tags[1:-1]
            phi_at = middle.index("phi-inverse")
            evens = [int(t.split(":")[1]) for t in middle[:phi_at]]
            odds = [int(t.split(":")[1]) for t in middle[phi_at + 1 :]]
            assert all(s % 2 == 0 for s in evens)
            assert evens == sorted(evens)
            assert all(s % 2 == 1 for s in odds)
            assert odds == sorted(odds, reverse=True)


class TestMembership:
    def test_agrees_with_geometry(self):
        # membership goes through itineraries, contains through exact hulls;
        # the frequency set is exactly the lower set of the itinerary order,
        # so the two routes must agree on every rational point
        rng = random.Random(13)
        targets = [
            (RationalItinerary((2, 1, 0, 1)), 3),
            (RationalItinerary((0, 1, 1)), 3),
            (RationalItinerary((2, 1, 0, 1)), 4),
            (RationalItinerary((1,)), 2),
        ]
        for n, k in targets:
            p = df_polytope(n, k)
            for _ in range(100):
                alpha = random_alpha(rng, k)
                assert membership(alpha, n) == p.contains(alpha)

    def test_face_points_always_members(self):
        n = RationalItinerary((2, 1, 0, 1))
        assert membership((F(1), F(0), F(0)), n) is True
        assert membership((F(1, 3), F(2, 3), F(0)), n) is True

    def test_last_corner_only_in_full_simplex(self):
        e2 = (F(0), F(0), F(1))
        assert membership(e2, RationalItinerary(())) is True
        assert membership(e2, RationalItinerary((2, 1, 0, 1))) is False

    def test_vertex_itineraries(self):
        assert itinerary_of((F(3, 4), F(0), F(1, 4))) == RationalItinerary((3,))
        assert itinerary_of((F(4, 9), F(1, 3), F(2, 9))) == RationalItinerary(
            (2, 1, 0, 1)
        )

    def test_undecided_against_truncated(self):
        got = membership((F(3, 4), F(0), F(1, 4)), TruncatedItinerary((3,)))
        assert isinstance(got, Undecided)

    def test_forcing_compare(self):
        a = (F(3, 4), F(0), F(1, 4))
        b = (F(4, 9), F(1, 3), F(2, 9))
        assert forcing_compare(a, b) is Forcing.LE
        assert forcing_compare(b, a) is Forcing.GE
        assert forcing_compare(a, (F(3, 4), F(0), F(1, 4))) is Forcing.EQUIVALENT


class TestDfSandwich:
    def test_brackets_shrink(self):
        n = PeriodicItinerary((1, 1), (1, 0))
        gaps = []
        for r in (3, 8, 16, 24):
            s = df_sandwich(n, r, 3)
            assert s.depth == r
            gaps.append(s.gap_squared)
            for v in s.inner.vertices:
                assert s.outer.contains(v)
        assert gaps == sorted(gaps, reverse=True)
        assert gaps[-1] < F(1, 10**12)

    def test_contains_target_vertex_from_depth_three(self):
        n = PeriodicItinerary((1, 1), (1, 0))
        point = (F(2, 3), F(0), F(1, 3))
        for r in range(3, 12):
            s = df_sandwich(n, r, 3)
            assert s.inner.contains(point)
            assert s.outer.contains(point)

    def test_rational_input(self):
        s = df_sandwich(RationalItinerary((2, 1)), 5, 3)
        assert s.outer == df_polytope(RationalItinerary((2, 1)), 3)
        assert s.inner == df_polytope(RationalItinerary((2, 1, 0, 0, 0, 1)), 3)

    def test_convergence_corpus(self):
        cases = [
            (PeriodicItinerary((1, 1), (1, 0)), 3),
            (PeriodicItinerary((2,), (1, 2)), 3),
            (PeriodicItinerary((), (3, 0, 1)), 3),
            (PeriodicItinerary((2, 1, 0, 1), (2, 2)), 4),
            (PeriodicItinerary((1,), (2, 1)), 2),
        ]
        for n, k in cases:
            depth = 4
            while depth <= 200:
                s = df_sandwich(n, depth, k)
                if s.gap_squared < F(1, 10**12):
                    break
                depth += 8
            assert s.gap_squared < F(1, 10**12), (n, k)

    def test_truncated_depth_limit(self):
        n = TruncatedItinerary((2, 1, 0))
        s = df_sandwich(n, 2, 3)
        assert s.depth == 2
        with pytest.raises(InsufficientDigits):
            df_sandwich(n, 3, 3)

    def test_finite_tail_rejected(self):
        with pytest.raises(ValueError):
            df_sandwich(FiniteItinerary((2, 1)), 4, 3)

    def test_json_shape(self):
        s = df_sandwich(PeriodicItinerary((1, 1), (1, 0)), 4, 3)
        d = s.to_json_dict()
        assert d["exact"] is False and d["depth"] == 4
        assert set(d) == {"k", "exact", "depth", "gap", "gap_squared", "inner", "outer"}


class TestLockInterval:
    def test_three_letter_interval(self):
        li = lock_interval((2, 1, 0, 0), 3)
        assert list(li.lo_poly.coeffs) == [-2, -1, 0, 0, -2, -1, 0, 0, -2, 1]
        assert list(li.hi_poly.coeffs) == [1, 0, 0, 0, -2, 0, 0, -2, -1, 0, 0, -2, 1]
        assert float(li.lo) == pytest.approx(2.190055, abs=1e-5)
        assert float(li.hi) == pytest.approx(2.19019, abs=1e-5)

    def test_two_letter_interval(self):
        li = lock_interval((0,), 2)
        assert list(li.lo_poly.coeffs) == [-1, -1, 1]
        assert list(li.hi_poly.coeffs) == [1, -2, -1, 1]
        assert float(li.lo) == pytest.approx(1.618034, abs=1e-5)
        assert float(li.hi) == pytest.approx(1.801938, abs=1e-5)

    def test_four_letter_interval(self):
        li = lock_interval((2, 1, 0, 0), 4)
        assert list(li.lo_poly.coeffs) == [-1, 0, 0, -3, -1, 0, 0, -3, 1]
        assert list(li.hi_poly.coeffs) == [-1, 0, 3, -4, -1, 0, 0, -3, 1]
        assert float(li.lo) == pytest.approx(3.06882, abs=1e-4)
        assert float(li.hi) == pytest.approx(3.06905, abs=1e-4)

    def test_polytope_is_bumped_rational(self):
        li = lock_interval((2, 1, 0, 0), 3)
        assert li.polytope == df_polytope(RationalItinerary((2, 1, 0, 1)), 3)

    def test_known_base_sits_inside(self):
        li = lock_interval((2, 1, 0, 0), 3)
        beta = F(21901, 10000)
        assert compare_values(li.lo, beta) < 0 < compare_values(li.hi, beta)
        # and the frequency set there is the interval's constant polytope
        assert df_of_beta(beta) == li.polytope

    def test_intervals_are_ordered_and_disjoint(self):
        # the plateau for a prefix spans itineraries from the bumped
        # rational up to the finite type, so plateaux of distinct prefixes
        # are pairwise disjoint and ordered like their itineraries
        a = lock_interval((2, 1), 3)
        b = lock_interval((2, 1, 0, 1), 3)
        c = lock_interval((2, 1, 0, 0), 3)
        assert compare_values(a.hi, b.lo) < 0
        assert compare_values(b.hi, c.lo) < 0

    def test_empty_prefix_rejected(self):
        with pytest.raises(ValueError):
            lock_interval((), 3)

    def test_json_shape(self):
        li = lock_interval((0,), 2)
        d = li.to_json_dict(digits=8)
        assert d["prefix"] == [0] and d["k"] == 2
        assert d["lo"]["poly"] == [-1, -1, 1]
        assert d["lo"]["value"].startswith("1.618033")
        assert d["hi"]["value"].startswith("1.801937")


class TestDfOfBeta:
    def test_rational_base_exact(self):
        p = df_of_beta(F(21901, 10000))
        assert isinstance(p, Polytope)
        assert vset(p) == PENTAGON_2101

    def test_markov_quartic_base(self):
        root = isolate_root(IntegerPolynomial((-1, -2, -1, -2, 1)), 2, 3)
        p = df_of_beta(root)
        assert vset(p) == PENTAGON_011

    def test_golden_segment(self):
        root = isolate_root(IntegerPolynomial((-1, -1, 1)), 1, 2)
        p = df_of_beta(root)
        assert p.vertices == ((F(1, 2), F(1, 2)), (F(1), F(0)))

    def test_integer_base_full_simplex(self):
        p = df_of_beta(F(3))
        assert vset(p) == {
            (F(1), F(0), F(0)),
            (F(0), F(1), F(0)),
            (F(0), F(0), F(1)),
        }

    def test_small_budget_gives_sandwich(self):
        s = df_of_beta(F(21901, 10000), digit_budget=40, depth_budget=2)
        assert isinstance(s, DFSandwich)
        exact = df_of_beta(F(21901, 10000))
        for v in exact.vertices:
            assert s.outer.contains(v)
        for v in s.inner.vertices:
            assert exact.contains(v)

    def test_no_certified_entries(self):
        with pytest.raises(InsufficientDigits):
            df_of_beta(F(21901, 10000), digit_budget=3)


class TestThetaSequence:
    def test_depth_one_triangle(self):
        tri = simplex_images((1, 1), 3)["A_vertices"]
        assert tri == [
            (F(2, 3), F(0), F(1, 3)),
            (F(1, 4), F(1, 2), F(1, 4)),
            (F(1, 3), F(1, 3), F(1, 3)),
        ]

    def test_frozen_certificates(self):
        certs = theta_sequence((1, 1))
        assert certs[0].dot == 0
        assert certs[1].dot == F(-1, 12)
        assert certs[1].mag2 == F(1, 108)
        assert compare_angles(certs[1], certs[0]) is Order.GT

    def test_angle_floats(self):
        certs = theta_sequence((1, 1))
        assert certs[0].theta == pytest.approx(1.5707963, abs=1e-6)
        assert certs[1].theta == pytest.approx(2.6179939, abs=1e-6)

    def test_monotone_equality_iff_zero_entry(self):
        rng = random.Random(17)
        for _ in range(60):
            length = rng.randrange(2, 7)
            prefix = tuple(rng.randrange(0, 3) for _ in range(length))
            certs = theta_sequence(prefix)
            for r in range(len(certs) - 1):
                cmp = compare_angles(certs[r + 1], certs[r])
                if prefix[r + 1] == 0:
                    assert cmp is Order.EQ
                else:
                    assert cmp is Order.GT

    def test_square_rule_strictly_increasing(self):
        prefix = tuple(r * r for r in range(31))
        certs = theta_sequence(prefix, r_max=30)
        slack = [math.pi - c.theta for c in certs]
        for r in range(1, len(certs) - 1):
            assert compare_angles(certs[r + 1], certs[r]) is Order.GT
            # the float report wobbles at 1e-8 scale near pi; only the
            # certificate comparison above is exact
            assert slack[r + 1] <= slack[r] + 1e-7
        assert slack[-1] < 1e-6  # flattening toward a straight angle

    def test_recursion_identity(self):
        # depth r+1 vertices are projective mixtures of depth r data; this
        # reproves the direct inverse-chain computation along random prefixes
        rng = random.Random(19)
        for _ in range(40):
            length = rng.randrange(2, 6)
            prefix = tuple(rng.randrange(0, 3) for _ in range(length))
            for r in range(length - 1):
                sim = simplex_images(prefix[: r + 1], 3)
                v, lengths = sim["A_vertices"], sim["lengths"]
                n = prefix[r + 1]
                l0, l2 = lengths[0], lengths[2]
                def mix(c0, c2):
                    scale = c0 * l0 + c2 * l2
                    return tuple(
                        (c0 * l0 * a + c2 * l2 * b) / scale
                        for a, b in zip(v[0], v[2])
                    )
                expected = [v[1], mix(n + 1, 1), mix(n, 1)]
                got = simplex_images(prefix[: r + 2], 3)["A_vertices"]
                assert got == expected

    def test_triangles_nest(self):
        prefix = (2, 1, 0, 1, 2)
        for r in range(len(prefix) - 1):
            outer = simplex_images(prefix[: r + 1], 3)["A_vertices"]
            inner = simplex_images(prefix[: r + 2], 3)["A_vertices"]
            for v in inner:
                assert contains_point(outer, v)

    def test_only_three_letters(self):
        with pytest.raises(ValueError):
            theta_sequence((1, 1), k=4)

    def test_r_max_bounds(self):
        certs = theta_sequence((1, 1, 1), r_max=1)
        assert [c.depth for c in certs] == [0, 1]
        with pytest.raises(ValueError):
            theta_sequence((1, 1), r_max=5)
