"""Itineraries of the simplex continued-fraction map, and their kneading words.

A point alpha of the standard simplex (a digit-frequency vector) is driven by
a piecewise projective map; recording which branch is applied at each step
yields the itinerary of alpha, a sequence of naturals possibly ending with a
terminal symbol.  Four shapes arise and each gets its own class:

* :class:`RationalItinerary`  -- entries then an infinite tail of zeros;
* :class:`FiniteItinerary`    -- entries then the terminal symbol (infinity);
* :class:`PeriodicItinerary`  -- eventually periodic, period not all zero;
* :class:`TruncatedItinerary` -- only a certified prefix is known.

Itineraries are ordered *reverse*-lexicographically: at the first index where
two differ, the larger entry (or the terminal symbol) marks the *smaller*
itinerary.  The all-zeros itinerary is the maximum.

The bridge to digit sequences is the substitution Lambda_n and its one-sided
inverse; composing substitutions along an itinerary produces the infimax
word, and the inverse recursion recovers the itinerary of a kneading word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Sequence, Union

from .errors import FaceError, InsufficientDigits, NotMaximalInput
from .symbolic import (
    DigitSeq,
    EventuallyPeriodic,
    FreqVector,
    Order,
    Stream,
    Undecided,
    Word,
    compare_seqs,
    validate_freq,
)

INF = float("inf")

#: Default cap on the number of itinerary entries extracted from a word.
DEFAULT_DEPTH_BUDGET = 64


def _check_entries(entries) -> tuple[int, ...]:
    out = tuple(int(n) for n in entries)
    if any(n < 0 for n in out):
        raise ValueError("itinerary entries must be nonnegative")
    return out


@dataclass(frozen=True)
class RationalItinerary:
    """Entries followed by zeros forever; canonical form has no trailing zeros."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        es = _check_entries(self.entries)
        while es and es[-1] == 0:
            es = es[:-1]
        object.__setattr__(self, "entries", es)

    def entry(self, i: int):
        return self.entries[i] if i < len(self.entries) else 0


@dataclass(frozen=True)
class FiniteItinerary:
    """Entries followed by the terminal symbol; the itinerary stops there."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _check_entries(self.entries))

    def entry(self, i: int):
        return self.entries[i] if i < len(self.entries) else INF


@dataclass(frozen=True)
class PeriodicItinerary:
    """Eventually periodic itinerary, canonical, with a not-all-zero period."""

    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        pre = _check_entries(self.pre)
        per = _check_entries(self.period)
        if not per:
            raise ValueError("period must be nonempty")
        if all(n == 0 for n in per):
            raise ValueError("all-zero period denotes a rational itinerary")
        q = len(per)
        for d in range(1, q + 1):
            if q % d == 0 and per == per[:d] * (q // d):
                per = per[:d]
                break
        while pre and pre[-1] == per[-1]:
            per = (per[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", per)

    def entry(self, i: int):
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]


@dataclass(frozen=True)
class TruncatedItinerary:
    """Certified prefix of an itinerary whose continuation is unknown.

    ``candidate_finite`` flags the case where the evidence was consistent
    with the sequence terminating right after the last entry, but the source
    ran out of digits before that could be certified.
    """

    entries: tuple[int, ...]
    candidate_finite: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _check_entries(self.entries))

    @property
    def certified(self) -> int:
        return len(self.entries)

    def entry(self, i: int):
        if i < len(self.entries):
            return self.entries[i]
        raise InsufficientDigits(f"itinerary certified only to depth {self.certified}")


Itinerary = Union[RationalItinerary, FiniteItinerary, PeriodicItinerary, TruncatedItinerary]


def _tail_length(n: Itinerary) -> tuple[int, int]:
    """(preperiod length, period length) for comparison bounds."""
    if isinstance(n, PeriodicItinerary):
        return len(n.pre), len(n.period)
    if isinstance(n, TruncatedItinerary):
        return len(n.entries), 1
    return len(n.entries), 1


def compare_itineraries(m: Itinerary, n: Itinerary) -> Order | Undecided:
    """Reverse-lexicographic comparison; Undecided when a truncation is reached."""
    pm, qm = _tail_length(m)
    pn, qn = _tail_length(n)
    bound = max(pm, pn) + lcm(qm, qn) + 1
    i = 0
    while True:
        try:
            a, b = m.entry(i), n.entry(i)
        except InsufficientDigits:
            return Undecided(i)
        if a != b:
            # the larger entry starts the smaller itinerary
            if a == INF or (b != INF and a > b):
                return Order.LT
            return Order.GT
        if a == INF:
            return Order.EQ
        i += 1
        if i >= bound and not (
            isinstance(m, TruncatedItinerary) or isinstance(n, TruncatedItinerary)
        ):
            return Order.EQ


def itinerary_metric(m: Itinerary, n: Itinerary) -> Fraction:
    """2^-X where X weights both the disagreement index and the entries before it."""
    if isinstance(m, TruncatedItinerary) or isinstance(n, TruncatedItinerary):
        raise ValueError("metric undefined for truncated itineraries")
    if compare_itineraries(m, n) is Order.EQ:
        return Fraction(0)
    r = 0
    while m.entry(r) == n.entry(r):
        r += 1
    sums = []
    for seq in (m, n):
        total = 0
        for s in range(r + 1):
            e = seq.entry(s)
            if e == INF:
                total = None
                break
            total += e
        sums.append(total)
    finite = [t for t in sums if t is not None]
    x = r + min(finite)
    return Fraction(1, 2**x)


# ---------------------------------------------------------------------------
# the simplex map and its inverse branches


def branch_index(alpha: Sequence[Fraction]) -> int:
    """Index n of the domain piece containing alpha; the face is excluded."""
    a = validate_freq(alpha)
    if a[-1] == 0:
        raise FaceError("point lies on the face: last coordinate is zero")
    return int((a[0] / a[-1]).__floor__())


def cf_step(alpha: Sequence[Fraction]) -> FreqVector:
    """One application of the continued-fraction map."""
    a = validate_freq(alpha)
    n = branch_index(a)
    k = len(a)
    d = 1 - a[0]
    out = tuple(a[i] / d for i in range(1, k - 1)) + (
        (a[0] - n * a[-1]) / d,
        ((n + 1) * a[-1] - a[0]) / d,
    )
    return validate_freq(out, k)


def cf_inverse(n: int, alpha: Sequence[Fraction]) -> FreqVector:
    """The inverse branch with index n; a homeomorphism onto its image."""
    if n < 0:
        raise ValueError("branch index must be nonnegative")
    a = validate_freq(alpha)
    k = len(a)
    d = (n + 1) * a[k - 2] + n * a[k - 1] + 1
    out = (
        (((n + 1) * a[k - 2] + n * a[k - 1]) / d,)
        + tuple(a[i] / d for i in range(k - 2))
        + ((a[k - 2] + a[k - 1]) / d,)
    )
    return validate_freq(out, k)


def cf_inverse_chain(prefix: Sequence[int], alpha: Sequence[Fraction]) -> FreqVector:
    """Compose inverse branches along a prefix (rightmost entry applied first)."""
    a = validate_freq(alpha)
    for n in reversed(tuple(prefix)):
        a = cf_inverse(n, a)
    return a


def itinerary_of(alpha: Sequence[Fraction]) -> Itinerary:
    """Exact itinerary of a rational frequency vector.

    Runs on an integer representative of alpha; the total mass strictly
    drops whenever the leading coordinate is positive, so the orbit reaches
    the fixed point (0, ..., 0, 1) or the face after finitely many steps.
    """
    a = validate_freq(alpha)
    k = len(a)
    if k < 2:
        raise ValueError("need at least two digits")
    denom = 1
    for c in a:
        denom = lcm(denom, c.denominator)
    p = [int(c * denom) for c in a]
    entries: list[int] = []
    guard = k * (sum(p) + 1)
    for _ in range(guard):
        if p[-1] == 0:
            return FiniteItinerary(tuple(entries))
        if all(c == 0 for c in p[:-1]):
            return RationalItinerary(tuple(entries))
        n = p[0] // p[-1]
        entries.append(n)
        p = p[1:-1] + [p[0] - n * p[-1], (n + 1) * p[-1] - p[0]]
    raise AssertionError("itinerary failed to terminate; mass argument violated")


# ---------------------------------------------------------------------------
# substitutions


def _digit_image(n: int, d: int, k: int) -> tuple[int, ...]:
    if d <= k - 3:
        return (d + 1,)
    if d == k - 2:
        return (k - 1,) + (0,) * (n + 1)
    return (k - 1,) + (0,) * n


def substitute(n: int, target: Word | EventuallyPeriodic):
    """Apply the substitution with parameter n digit by digit."""
    if n < 0:
        raise ValueError("substitution parameter must be nonnegative")
    if isinstance(target, Word):
        out: list[int] = []
        for d in target.digits:
            out.extend(_digit_image(n, d, target.k))
        return Word(tuple(out), target.k)
    if isinstance(target, EventuallyPeriodic):
        pre: list[int] = []
        for d in target.pre:
            pre.extend(_digit_image(n, d, target.k))
        per: list[int] = []
        for d in target.period:
            per.extend(_digit_image(n, d, target.k))
        return EventuallyPeriodic(tuple(pre), tuple(per), target.k)
    raise TypeError("substitution applies to words and exact sequences")


def abelianization(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Matrix A with A[i][j] = number of occurrences of digit i in the image of j."""
    cols = [_digit_image(n, j, k) for j in range(k)]
    return tuple(
        tuple(sum(1 for d in cols[j] if d == i) for j in range(k)) for i in range(k)
    )


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n))
        for i in range(n)
    )


def simplex_images(prefix: Sequence[int], k: int, r: int | None = None) -> dict:
    """Vertex images and word lengths for the depth-r composed substitution.

    Returns the images of the k simplex vertices (``A_vertices``), the first
    k-1 of which span the image of the face (``F_vertices``), together with
    the lengths of the composed substitution applied to each digit.
    """
    if r is not None and not 0 <= r < len(prefix):
        raise ValueError("depth index must satisfy 0 <= r < len(prefix)")
    chain = tuple(prefix if r is None else prefix[: r + 1])
    unit = tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    prod = unit
    for n in chain:
        prod = _mat_mul(prod, abelianization(n, k))
    lengths = tuple(sum(prod[i][j] for i in range(k)) for j in range(k))
    basis = [
        tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)
    ]
    a_vertices = [cf_inverse_chain(chain, e) for e in basis]
    return {
        "A_vertices": a_vertices,
        "F_vertices": a_vertices[: k - 1],
        "lengths": lengths,
    }


def hilbert_diameter(matrix: Sequence[Sequence[int]]) -> Fraction | None:
    """Projective diameter d(A) of a nonnegative matrix; None when infinite.

    d(A) is the largest value of (a_il * a_jm) / (a_im * a_jl); it is finite
    exactly when every entry is positive, and equals 1 for rank-one matrices.
    The Birkhoff contraction factor of the projective action is
    (sqrt(d)-1)/(sqrt(d)+1).
    """
    rows = [tuple(row) for row in matrix]
    if any(e < 0 for row in rows for e in row):
        raise ValueError("matrix must be nonnegative")
    if any(e == 0 for row in rows for e in row):
        return None
    m = len(rows)
    cols = len(rows[0])
    best = Fraction(1)
    for i in range(m):
        for j in range(m):
            for l in range(cols):
                for t in range(cols):
                    v = Fraction(rows[i][l] * rows[j][t], rows[i][t] * rows[j][l])
                    if v > best:
                        best = v
    return best


# ---------------------------------------------------------------------------
# infimax words


def infimax(n: Itinerary, k: int, prefix_budget: int = 10000) -> DigitSeq:
    """The largest maximal word whose itinerary is <= n; exact when n is.

    Rational and finite itineraries give eventually periodic words.  For
    periodic or truncated itineraries the result is a stream of certified
    digits: every emitted digit belongs to the true word.
    """
    if k < 2:
        raise ValueError("alphabet needs k >= 2")
    if isinstance(n, RationalItinerary):
        w = Word((k - 1,), k)
        for entry in reversed(n.entries):
            w = substitute(entry, w)
        return EventuallyPeriodic((), w.digits, k)
    if isinstance(n, FiniteItinerary):
        seq = EventuallyPeriodic((k - 1,), (0,), k)
        for entry in reversed(n.entries):
            seq = substitute(entry, seq)
        return seq

    if isinstance(n, PeriodicItinerary):
        def entries_iter() -> Iterator[int]:
            yield from n.pre
            while True:
                yield from n.period
    elif isinstance(n, TruncatedItinerary):
        def entries_iter() -> Iterator[int]:
            yield from n.entries
    else:
        raise TypeError(f"not an itinerary: {n!r}")

    def digits() -> Iterator[int]:
        # images of each digit under the substitutions composed so far
        images: list[tuple[int, ...]] = [(d,) for d in range(k)]
        emitted = 0
        for entry in entries_iter():
            nxt = []
            for d in range(k):
                img: list[int] = []
                for t in _digit_image(entry, d, k):
                    img.extend(images[t])
                nxt.append(tuple(img))
            images = nxt
            prefix = images[k - 1]
            yield from prefix[emitted:]
            emitted = len(prefix)

    return Stream(k, source=digits(), budget=prefix_budget)


# ---------------------------------------------------------------------------
# the inverse recursion: from kneading word back to itinerary


def unsubstitute(n: int, w: DigitSeq) -> DigitSeq:
    """Left inverse of the substitution with parameter n, applied greedily.

    Exact (eventually periodic) output whenever the input is exact or the
    scan reaches one of the two absorbing cases; raises
    :class:`InsufficientDigits` if a stream ends in the middle of a chunk.
    """
    if n < 0:
        raise ValueError("substitution parameter must be nonnegative")
    k = w.k
    out: list[int] = []
    pos = 0
    # For exact input, scanning positions in the preperiod/period structure
    # repeat; the emitted digits between repeats form the period.
    seen: dict[object, int] = {}
    while True:
        if isinstance(w, EventuallyPeriodic):
            key = (
                ("pre", pos)
                if pos < len(w.pre)
                else ("cyc", (pos - len(w.pre)) % len(w.period))
            )
            if key in seen:
                s = seen[key]
                return EventuallyPeriodic(tuple(out[:s]), tuple(out[s:]), k)
            seen[key] = len(out)
        try:
            d0 = w.digit(pos)
        except InsufficientDigits:
            return Stream.from_digits(out, k)
        if d0 == 0:
            return EventuallyPeriodic(tuple(out), (0,), k)
        if d0 <= k - 2:
            out.append(d0 - 1)
            pos += 1
            continue
        # top digit: count following zeros, up to n+1 of them
        zeros = 0
        while zeros < n + 1:
            try:
                nxt = w.digit(pos + 1 + zeros)
            except InsufficientDigits as exc:
                raise InsufficientDigits(
                    f"stream ended inside a chunk at position {pos}"
                ) from exc
            if nxt != 0:
                break
            zeros += 1
        if zeros == n + 1:
            out.append(k - 2)
            pos += n + 2
        elif zeros == n:
            out.append(k - 1)
            pos += n + 1
        else:
            # a nonzero digit among the first n continuation slots: the word
            # exceeds every image of the substitution from here on
            return EventuallyPeriodic(tuple(out), (k - 1,), k)


def itinerary_from_kneading(
    w: DigitSeq, depth_budget: int = DEFAULT_DEPTH_BUDGET
) -> Itinerary:
    """Itinerary of a maximal digit sequence, by the inverse recursion.

    At each level the leading block ``(k-1) 0^z`` fixes the candidate entry
    z; comparison with the terminal word of z decides between recursing,
    stopping with a finite itinerary, or stopping with the rational
    predecessor.  Cycle detection on exact intermediate words resolves
    eventually periodic itineraries; streams that run out of digits yield a
    truncated itinerary, never an error.
    """
    k = w.k
    try:
        first = w.digit(0)
    except InsufficientDigits:
        return TruncatedItinerary(())
    if first != k - 1:
        raise NotMaximalInput("not maximal-form input: must start with the top digit")

    top_zero = EventuallyPeriodic((k - 1,), (0,), k)
    entries: list[int] = []
    current = w
    seen: dict[EventuallyPeriodic, int] = {}
    while len(entries) < depth_budget:
        if isinstance(current, EventuallyPeriodic):
            if current == top_zero:
                return FiniteItinerary(tuple(entries))
            if current in seen:
                s = seen[current]
                cycle = entries[s:]
                if all(e == 0 for e in cycle):
                    return RationalItinerary(tuple(entries[:s]))
                return PeriodicItinerary(tuple(entries[:s]), tuple(cycle))
            seen[current] = len(entries)
        try:
            if current.digit(0) != k - 1:
                raise NotMaximalInput("not maximal-form input: must start with the top digit")
            z = 0
            while current.digit(1 + z) == 0:
                z += 1
        except InsufficientDigits:
            return TruncatedItinerary(tuple(entries))
        terminal = infimax(FiniteItinerary((z,)), k)
        cmp = compare_seqs(current, terminal)
        if isinstance(cmp, Undecided):
            return TruncatedItinerary(tuple(entries) + (z,), candidate_finite=True)
        if cmp is Order.EQ:
            return FiniteItinerary(tuple(entries) + (z,))
        if cmp is Order.LT:
            return RationalItinerary(tuple(entries) + (z + 1,))
        entries.append(z)
        try:
            current = unsubstitute(z, current)
        except InsufficientDigits:
            return TruncatedItinerary(tuple(entries))
    return TruncatedItinerary(tuple(entries))


# ---------------------------------------------------------------------------
# text form


def format_itinerary(n: Itinerary) -> str:
    if isinstance(n, RationalItinerary):
        return " ".join([str(e) for e in n.entries] + ["*0"])
    if isinstance(n, FiniteItinerary):
        return " ".join([str(e) for e in n.entries] + ["inf"])
    if isinstance(n, PeriodicItinerary):
        head = " ".join(str(e) for e in n.pre)
        body = " ".join(str(e) for e in n.period)
        return f"{head} ({body})" if head else f"({body})"
    if isinstance(n, TruncatedItinerary):
        return " ".join([str(e) for e in n.entries] + ["…"])
    raise TypeError(f"not an itinerary: {n!r}")


def parse_itinerary(text: str) -> Itinerary:
    """Inverse of :func:`format_itinerary`; the tail marker is required."""
    text = text.strip()
    if not text:
        raise ValueError("empty itinerary")
    if "(" in text:
        head, _, rest = text.partition("(")
        body, _, tail = rest.partition(")")
        if tail.strip():
            raise ValueError(f"trailing characters after period: {tail!r}")
        return PeriodicItinerary(
            tuple(int(t) for t in head.split()), tuple(int(t) for t in body.split())
        )
    tokens = text.split()
    tail = tokens[-1]
    entries = tuple(int(t) for t in tokens[:-1])
    if tail == "*0":
        return RationalItinerary(entries)
    if tail == "inf":
        return FiniteItinerary(entries)
    if tail in ("…", "..."):
        return TruncatedItinerary(entries)
    raise ValueError(
        "itinerary text must end with '*0', 'inf', '…', or carry a (period)"
    )
