"""End-to-end acceptance gate.

Nine checks covering the headline guarantees of the package, one test
each, so ``pytest -v tests/test_acceptance.py`` reports one pass/fail
line per guarantee.  Vertex sets and digit words are compared exactly;
the only tolerances are the stated decimal windows for algebraic roots
and the sandwich gap target.
"""

import random
from fractions import Fraction as F

from digitfreq.cfk import (
    FiniteItinerary,
    PeriodicItinerary,
    RationalItinerary,
    cf_inverse,
    cf_step,
    branch_index,
    compare_itineraries,
    infimax,
    itinerary_from_kneading,
    itinerary_of,
    substitute,
    unsubstitute,
)
from digitfreq.cli import main
from digitfreq.dfset import (
    Polytope,
    compare_angles,
    df_of_beta,
    df_polytope,
    df_sandwich,
    lock_interval,
    theta_sequence,
)
from digitfreq.exact_arith import IntegerPolynomial, isolate_root
from digitfreq.geometry import contains_point, feasible_combination
from digitfreq.markov_oracle import build_partition, minimal_loops, oracle_hull
from digitfreq.symbolic import (
    EventuallyPeriodic,
    Order,
    Word,
    compare_seqs,
    compare_words,
    digit_freq,
    is_maximal,
    w_beta,
)

GAP_TARGET_SQUARED = F(1, 10**12)  # squared form of the 1e-6 gap target


def test_pentagon_vertices_exact_k3():
    p = df_polytope(RationalItinerary((2, 1, 0, 1)), 3)
    assert len(p.vertices) == 5
    assert set(p.vertices) == {
        (F(1), F(0), F(0)),
        (F(0), F(1), F(0)),
        (F(3, 4), F(0), F(1, 4)),
        (F(5, 8), F(1, 8), F(2, 8)),
        (F(4, 9), F(3, 9), F(2, 9)),
    }


def test_heptagon_vertices_exact_k4():
    p = df_polytope(RationalItinerary((2, 1, 0, 1)), 4)
    assert len(p.vertices) == 7
    assert set(p.vertices) == {
        (F(1), F(0), F(0), F(0)),
        (F(0), F(1), F(0), F(0)),
        (F(0), F(0), F(1), F(0)),
        (F(3, 4), F(0), F(0), F(1, 4)),
        (F(2, 5), F(2, 5), F(0), F(1, 5)),
        (F(2, 5), F(1, 5), F(1, 5), F(1, 5)),
        (F(5, 8), F(1, 8), F(0), F(1, 4)),
    }
    assert (F(2, 5), F(2, 5), F(0), F(1, 5)) in set(p.vertices)


def test_itinerary_extraction_from_stream():
    # base 2.1901: the unsubstitution cascade must reproduce the worked
    # intermediate words exactly, then stop with the rational itinerary
    w = w_beta(F(21901, 10000))
    assert "".join(str(w.digit(i)) for i in range(13)) == "2001200120000"
    u1 = unsubstitute(2, w)
    assert tuple(u1.digit(i) for i in range(10)) == (2, 0, 2, 0, 1, 0, 0, 0, 0, 0)
    u2 = unsubstitute(1, u1)
    assert tuple(u2.digit(i) for i in range(8)) == (2, 2, 0, 0, 0, 0, 0, 0)
    u3 = unsubstitute(0, u2)
    assert tuple(u3.digit(i) for i in range(8)) == (2, 1, 0, 0, 0, 0, 0, 0)
    assert itinerary_from_kneading(w) == RationalItinerary((2, 1, 0, 1))


def test_finite_orbit_loops_match_itinerary_route():
    beta = isolate_root(IntegerPolynomial((-1, -2, -1, -2, 1)), 2, 3)
    _, graph = build_partition(beta, Word((2, 1, 2, 1), 3))
    loops = minimal_loops(graph)
    assert ["".join(str(i) for i in loop) for loop in loops] == [
        "1", "12", "124", "1352", "13524", "14", "152", "1524", "2", "235",
    ]
    hull = oracle_hull(loops, graph.labels)
    exact = df_of_beta(beta)
    assert isinstance(exact, Polytope)
    assert hull.vertices == exact.vertices  # vertex-for-vertex, same order
    assert set(hull.vertices) == {
        (F(1), F(0), F(0)),
        (F(0), F(1), F(0)),
        (F(1, 2), F(0), F(1, 2)),
        (F(1, 4), F(1, 4), F(1, 2)),
        (F(0), F(2, 3), F(1, 3)),
    }


def test_lock_interval_endpoints():
    li = lock_interval((2, 1, 0, 0), 3)
    assert li.lo_poly.coeffs == (-2, -1, 0, 0, -2, -1, 0, 0, -2, 1)
    assert li.hi_poly.coeffs == (1, 0, 0, 0, -2, 0, 0, -2, -1, 0, 0, -2, 1)
    assert abs(float(li.lo) - 2.190055) < 1e-5
    assert abs(float(li.hi) - 2.19019) < 1e-5

    li4 = lock_interval((2, 1, 0, 0), 4)
    assert abs(float(li4.lo) - 3.0688) < 1e-4
    assert abs(float(li4.hi) - 3.0690) < 1e-4

    li2 = lock_interval((0,), 2)
    assert abs(float(li2.lo) - 1.618) < 1e-3
    assert abs(float(li2.hi) - 1.802) < 1e-3


def test_infimax_of_sixteenths_vector():
    alpha = (F(7, 16), F(5, 16), F(4, 16))
    w = infimax(itinerary_of(alpha), 3)
    block = (2, 0, 1, 1, 1, 1, 1, 2, 0, 0, 2, 0, 0, 2, 0, 0)
    assert w == EventuallyPeriodic((), block, 3)
    assert is_maximal(w)
    assert digit_freq(w) == alpha


def test_sandwich_convergence():
    n = PeriodicItinerary((1, 1), (1, 0))
    vertex = (F(2, 3), F(0), F(1, 3))
    crossed = None
    for depth in range(3, 61):
        s = df_sandwich(n, depth, 3)
        assert contains_point(s.inner.vertices, vertex)
        if s.gap_squared < GAP_TARGET_SQUARED:
            crossed = depth
            break
    assert crossed is not None and crossed <= 60


def test_randomized_property_suites():
    # substitution preserves word order strictly
    rng = random.Random(101)
    for _ in range(1000):
        k = rng.choice((2, 3, 4))
        n = rng.randrange(4)
        v = Word(tuple(rng.randrange(k) for _ in range(rng.randrange(1, 8))), k)
        w = Word(tuple(rng.randrange(k) for _ in range(rng.randrange(1, 8))), k)
        assert compare_words(substitute(n, v), substitute(n, w)) is compare_words(v, w)

    # unsubstitution undoes substitution on exact sequences
    rng = random.Random(103)
    for _ in range(1000):
        k = rng.choice((2, 3, 4))
        n = rng.randrange(5)
        pre = tuple(rng.randrange(k) for _ in range(rng.randrange(0, 4)))
        per = tuple(rng.randrange(k) for _ in range(rng.randrange(1, 5)))
        w = EventuallyPeriodic(pre, per, k)
        assert unsubstitute(n, substitute(n, w)) == w

    # the infimax map preserves the itinerary order
    rng = random.Random(107)
    for _ in range(1000):
        k = rng.choice((2, 3))
        pair = []
        for _ in range(2):
            entries = tuple(rng.randrange(4) for _ in range(rng.randrange(0, 5)))
            pair.append(
                RationalItinerary(entries)
                if rng.random() < 0.6
                else FiniteItinerary(entries)
            )
        order = compare_itineraries(pair[0], pair[1])
        assert compare_seqs(infimax(pair[0], k), infimax(pair[1], k)) is order

    # one forward step undoes each inverse branch on interior points
    rng = random.Random(109)
    for _ in range(1000):
        k = rng.choice((2, 3, 4))
        parts = [rng.randrange(1, 20) for _ in range(k)]
        a = tuple(F(p, sum(parts)) for p in parts)
        n = rng.randrange(6)
        img = cf_inverse(n, a)
        assert branch_index(img) == n
        assert cf_step(img) == a

    # frequency sets shrink as the itinerary grows
    rng = random.Random(113)
    checked = 0
    while checked < 1000:
        k = rng.choice((2, 3, 4))
        pair = []
        for _ in range(2):
            entries = [rng.randrange(0, 4) for _ in range(rng.randrange(1, 5))]
            entries[-1] = rng.randrange(1, 4)
            pair.append(RationalItinerary(tuple(entries)))
        cmp = compare_itineraries(pair[0], pair[1])
        if cmp is Order.EQ:
            continue
        small, big = pair if cmp is Order.LT else pair[::-1]
        for v in df_polytope(small, k).vertices:
            assert contains_point(df_polytope(big, k).vertices, v)
        checked += 1

    # every reported vertex is certified extreme by the feasibility solver
    rng = random.Random(127)
    certified = 0
    while certified < 1000:
        k = rng.choice((2, 3, 4))
        entries = [rng.randrange(0, 4) for _ in range(rng.randrange(1, 5))]
        entries[-1] = rng.randrange(1, 4)
        p = df_polytope(RationalItinerary(tuple(entries)), k)
        for i, v in enumerate(p.vertices):
            others = [u for j, u in enumerate(p.vertices) if j != i]
            if len(others) >= 1:
                assert not feasible_combination(others, v)
                certified += 1

    # apex angles grow along a prefix, stalling exactly on zero entries
    rng = random.Random(131)
    for _ in range(50):
        length = rng.randrange(2, 7)
        prefix = tuple(rng.randrange(0, 3) for _ in range(length))
        certs = theta_sequence(prefix)
        for r in range(len(certs) - 1):
            cmp = compare_angles(certs[r + 1], certs[r])
            assert cmp is (Order.EQ if prefix[r + 1] == 0 else Order.GT)


def _fe_rows(capsys, rule, depth):
    code = main(["plot-data", "--rule", rule, "--depth", str(depth)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = [line.split(",") for line in lines[1:]]
    return {int(r[0]): r for r in rows if r[1].startswith("fe:")}


def test_plot_data_rule_tables(capsys):
    for rule in ("cubes", "squares"):
        full = _fe_rows(capsys, rule, 25)
        assert len(full) == 25
        assert sorted(full) == list(range(25))
        # truncating the rule must not move any row it still covers
        for cut in (5, 12, 18):
            partial = _fe_rows(capsys, rule, cut)
            for s, row in partial.items():
                if s <= cut - 2:
                    assert full[s] == row
