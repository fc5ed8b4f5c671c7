"""Digit words, digit sequences, and greedy expansions.

Digits live in the alphabet ``{0, ..., k-1}`` with ``k = ceil(beta)``.  A
point x in [0,1] has digit j when it lies in the interval I_j, which is
``[j/beta, (j+1)/beta)`` for j < k-1 and ``[(k-1)/beta, 1]`` for j = k-1; in
particular the right endpoint 1 carries the top digit, and a point exactly at
``j/beta`` carries digit j.

Infinite digit sequences come in two flavours.  :class:`EventuallyPeriodic`
is exact and always kept in canonical form (shortest period, then shortest
preperiod), so equal values have equal representations.  :class:`Stream`
produces digits on demand from a generator, up to a hard budget; consuming
past the budget raises :class:`InsufficientDigits` rather than guessing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence, Union

from .errors import InsufficientDigits
from .exact_arith import (
    AlgebraicNumber,
    Residue,
    compare_values,
    eval_interval,
    residue_from,
    residue_is_zero,
    residue_mul,
    residue_sub_constant,
    residue_floor,
)

#: Default cap on digits drawn from a stream.
DEFAULT_DIGIT_BUDGET = 10000

FreqVector = tuple[Fraction, ...]


class Order(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1

    @staticmethod
    def from_sign(s: int) -> "Order":
        return Order.LT if s < 0 else Order.GT if s > 0 else Order.EQ


@dataclass(frozen=True)
class Undecided:
    """Comparison outcome that could not be certified by the given depth."""

    depth: int


# ---------------------------------------------------------------------------
# finite words


@dataclass(frozen=True)
class Word:
    """Finite digit word over {0, ..., k-1}."""

    digits: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if self.k < 2:
            raise ValueError("alphabet needs k >= 2")
        for d in self.digits:
            if not 0 <= d < self.k:
                raise ValueError(f"digit {d} outside 0..{self.k - 1}")

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __add__(self, other: "Word") -> "Word":
        if other.k != self.k:
            raise ValueError("alphabet mismatch")
        return Word(self.digits + other.digits, self.k)


def compare_words(v: Word, w: Word) -> Order:
    """Total order on finite words: lexicographic, except that a proper
    initial subword is *greater* than any of its extensions."""
    for a, b in zip(v.digits, w.digits):
        if a != b:
            return Order.from_sign(a - b)
    if len(v) == len(w):
        return Order.EQ
    return Order.GT if len(v) < len(w) else Order.LT


# ---------------------------------------------------------------------------
# infinite digit sequences


@dataclass(frozen=True)
class EventuallyPeriodic:
    """Exact digit sequence ``pre (period repeating)`` in canonical form."""

    pre: tuple[int, ...]
    period: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        pre = tuple(int(d) for d in self.pre)
        per = tuple(int(d) for d in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        for d in pre + per:
            if not 0 <= d < self.k:
                raise ValueError(f"digit {d} outside 0..{self.k - 1}")
        # canonical: shortest period ...
        q = len(per)
        for d in range(1, q + 1):
            if q % d == 0 and per == per[:d] * (q // d):
                per = per[:d]
                break
        # ... then shortest preperiod
        while pre and pre[-1] == per[-1]:
            per = (per[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", per)

    def digit(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def prefix(self, n: int) -> Word:
        return Word(tuple(self.digit(i) for i in range(n)), self.k)

    def shift(self, r: int = 1) -> "EventuallyPeriodic":
        if r <= len(self.pre):
            return EventuallyPeriodic(self.pre[r:], self.period, self.k)
        s = (r - len(self.pre)) % len(self.period)
        return EventuallyPeriodic((), self.period[s:] + self.period[:s], self.k)


class Stream:
    """Digit sequence drawn lazily from a generator, capped by a budget.

    Digits already drawn are cached, so ``digit`` is cheap to re-ask.  The
    stream never invents digits: past the budget, or past the end of a finite
    source, it raises :class:`InsufficientDigits`.
    """

    def __init__(
        self,
        k: int,
        source: Iterator[int] | None = None,
        budget: int = DEFAULT_DIGIT_BUDGET,
        preload: Sequence[int] = (),
    ) -> None:
        self.k = k
        self.budget = budget
        self._cache: list[int] = list(preload)
        self._source = source

    @classmethod
    def from_digits(cls, digits: Sequence[int], k: int, budget: int | None = None) -> "Stream":
        return cls(k, source=None, budget=budget if budget is not None else len(digits), preload=digits)

    @property
    def generated(self) -> int:
        """Number of digits produced so far; all of them are exact."""
        return len(self._cache)

    def digit(self, i: int) -> int:
        while len(self._cache) <= i:
            if i >= self.budget or self._source is None:
                raise InsufficientDigits(
                    f"stream ended after {len(self._cache)} digits (asked for index {i})"
                )
            try:
                self._cache.append(next(self._source))
            except StopIteration:
                self._source = None
        return self._cache[i]

    def prefix(self, n: int) -> Word:
        return Word(tuple(self.digit(i) for i in range(n)), self.k)


DigitSeq = Union[EventuallyPeriodic, Stream]


def compare_seqs(v: DigitSeq, w: DigitSeq) -> Order | Undecided:
    """Lexicographic comparison of digit sequences.

    Exact for a pair of eventually periodic sequences.  When a stream is
    involved and no disagreement is found before it runs dry, the result is
    :class:`Undecided` carrying the depth up to which the sequences agree.
    """
    if isinstance(v, EventuallyPeriodic) and isinstance(w, EventuallyPeriodic):
        bound = max(len(v.pre), len(w.pre)) + lcm(len(v.period), len(w.period))
        for i in range(bound):
            a, b = v.digit(i), w.digit(i)
            if a != b:
                return Order.from_sign(a - b)
        return Order.EQ
    i = 0
    while True:
        try:
            a, b = v.digit(i), w.digit(i)
        except InsufficientDigits:
            return Undecided(i)
        if a != b:
            return Order.from_sign(a - b)
        i += 1


def is_maximal(w: EventuallyPeriodic) -> bool:
    """True when every shift of ``w`` is lexicographically <= ``w``."""
    if not isinstance(w, EventuallyPeriodic):
        raise TypeError("maximality is decided for exact sequences only")
    for r in range(1, len(w.pre) + len(w.period) + 1):
        if compare_seqs(w.shift(r), w) is Order.GT:
            return False
    return True


# ---------------------------------------------------------------------------
# greedy expansions

Base = Union[Fraction, AlgebraicNumber]


def _ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def base_alphabet_size(beta: Base) -> int:
    """k = ceil(beta) for fractional beta; for an integer base k = beta."""
    if isinstance(beta, Fraction):
        if beta <= 1:
            raise ValueError("base must exceed 1")
        return _ceil_fraction(beta)
    if compare_values(beta, Fraction(1)) <= 0:
        raise ValueError("base must exceed 1")
    while True:
        # smallest integer strictly above lo, largest candidate at hi
        clo = beta.lo.numerator // beta.lo.denominator + 1
        chi = _ceil_fraction(beta.hi)
        if clo == chi:
            return clo
        for m in range(clo, chi + 1):
            # comparing also refines the interval past m when they differ
            if compare_values(beta, Fraction(m)) == 0:
                return m
        beta._bisect_once()


class _GreedyState:
    """Shared greedy-orbit stepper over exact rational or algebraic bases."""

    def __init__(self, beta: Base, x: Fraction) -> None:
        self.k = base_alphabet_size(beta)
        self.beta = beta
        if isinstance(beta, AlgebraicNumber):
            self.modulus = beta.poly
            self.y: Residue | Fraction = residue_from([Fraction(x)], self.modulus)
            self._beta_res = residue_from((0, 1), self.modulus)
        else:
            self.y = Fraction(x)

    def step(self) -> int:
        """Emit the next digit and advance the orbit point."""
        if isinstance(self.beta, Fraction):
            z = self.beta * self.y
            d = min(int(z.__floor__()), self.k - 1)
            self.y = z - d
            return d
        z = residue_mul(self.y, self._beta_res, self.modulus)
        d = residue_floor(z, self.beta, self.k - 1)
        self.y = residue_sub_constant(z, d)
        return d

    def at_zero(self) -> bool:
        if isinstance(self.y, Fraction):
            return self.y == 0
        if all(c == 0 for c in self.y):
            return True
        # cheap interval rejection before paying for an exact sign
        vlo, vhi = eval_interval(self.y, self.beta.lo, self.beta.hi)
        if vlo > 0 or vhi < 0:
            return False
        return residue_is_zero(self.y, self.beta)

    def state_key(self) -> Fraction | None:
        """Hashable exact orbit value, for cycle detection (rational bases only)."""
        return self.y if isinstance(self.y, Fraction) else None


def greedy_digits(beta: Base, x: Fraction, count: int) -> Word:
    """First ``count`` greedy digits of ``x`` in base ``beta``, exactly."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    st = _GreedyState(beta, x)
    return Word(tuple(st.step() for _ in range(count)), st.k)


def kneading_digits(beta: Base, budget: int = DEFAULT_DIGIT_BUDGET) -> DigitSeq:
    """The digit sequence of 1, resolved exactly when the orbit closes up.

    If the orbit of 1 hits 0 the tail of zeros is certain; for a rational
    base an exact repeat of the orbit point is also detected.  General
    eventual periodicity over an algebraic base is not searched for: when
    known, it should be handed to the consumer explicitly.
    """
    st = _GreedyState(beta, Fraction(1))
    if isinstance(beta, Fraction) and beta.denominator > 1:
        # A fractional rational base can never close up: in lowest terms the
        # orbit point after r steps has denominator exactly q^r, so it is
        # neither zero nor a repeat.  Serve digits lazily.
        def _digits() -> Iterator[int]:
            while True:
                yield st.step()

        return Stream(st.k, source=_digits(), budget=budget)
    digits: list[int] = []
    seen: dict[Fraction, int] = {}
    for _ in range(budget):
        key = st.state_key()
        if key is not None:
            if key in seen:
                s = seen[key]
                return EventuallyPeriodic(tuple(digits[:s]), tuple(digits[s:]), st.k)
            seen[key] = len(digits)
        if st.at_zero():
            return EventuallyPeriodic(tuple(digits), (0,), st.k)
        digits.append(st.step())
    return Stream.from_digits(digits, st.k, budget=budget)


def w_beta(beta: Base, budget: int = DEFAULT_DIGIT_BUDGET) -> DigitSeq:
    """The infimum, over x < 1, of the limiting digit sequences at x.

    Equal to the kneading sequence of 1 except when the orbit of 1 hits 0
    after digits d_1 ... d_r: in that case the word with final digit
    decremented repeats forever.
    """
    seq = kneading_digits(beta, budget=budget)
    if isinstance(seq, EventuallyPeriodic) and seq.period == (0,):
        head = list(seq.pre)
        if not head:  # base exactly 1 is excluded, so this is unreachable
            raise ValueError("empty kneading sequence")
        head[-1] -= 1
        return EventuallyPeriodic((), tuple(head), seq.k)
    return seq


# ---------------------------------------------------------------------------
# digit frequencies


def digit_freq(w: Word | EventuallyPeriodic) -> FreqVector:
    """Limiting digit frequency: of the whole word, or of the period block."""
    if isinstance(w, EventuallyPeriodic):
        block, k = w.period, w.k
    else:
        block, k = w.digits, w.k
    if not block:
        raise ValueError("empty word has no digit frequency")
    n = len(block)
    return tuple(Fraction(sum(1 for d in block if d == j), n) for j in range(k))


def prefix_freq_trajectory(
    w: DigitSeq | Word, strides: Iterable[int]
) -> list[tuple[int, FreqVector]]:
    """Digit frequencies of the length-s prefixes of ``w``, for each stride s."""
    out = []
    for s in strides:
        if s <= 0:
            raise ValueError("strides must be positive")
        if isinstance(w, Word):
            if s > len(w):
                raise InsufficientDigits(f"word has only {len(w)} digits")
            prefix = Word(w.digits[:s], w.k)
        else:
            prefix = w.prefix(s)
        out.append((s, digit_freq(prefix)))
    return out


def validate_freq(alpha: Sequence[Fraction], k: int | None = None) -> FreqVector:
    vec = tuple(Fraction(a) for a in alpha)
    if k is not None and len(vec) != k:
        raise ValueError(f"expected {k} components, got {len(vec)}")
    if any(a < 0 for a in vec):
        raise ValueError("frequency components must be nonnegative")
    if sum(vec) != 1:
        raise ValueError("frequency components must sum to 1")
    return vec


def parse_freq(text: str) -> FreqVector:
    return validate_freq([Fraction(part.strip()) for part in text.split(",")])


def format_freq(alpha: FreqVector) -> str:
    return ",".join(str(a) for a in alpha)


# ---------------------------------------------------------------------------
# text form of words and sequences


def format_word(w: Word) -> str:
    sep = "" if w.k <= 10 else " "
    return sep.join(str(d) for d in w.digits)


def format_seq(seq: DigitSeq | Word, max_digits: int = 60) -> str:
    """``pre(period)`` for exact sequences, digit prefix plus ``…`` for streams."""
    if isinstance(seq, Word):
        return format_word(seq)
    sep = "" if seq.k <= 10 else " "
    if isinstance(seq, EventuallyPeriodic):
        pre = sep.join(str(d) for d in seq.pre)
        per = sep.join(str(d) for d in seq.period)
        return f"{pre}({per})"
    shown: list[int] = []
    for i in range(max_digits):
        try:
            shown.append(seq.digit(i))
        except InsufficientDigits:
            break
    return sep.join(str(d) for d in shown) + "…"


def parse_seq(text: str, k: int) -> DigitSeq | Word:
    """Inverse of :func:`format_seq` for single-character digit alphabets."""
    text = text.strip()
    truncated = text.endswith("…") or text.endswith("...")
    if truncated:
        text = text[:-1] if text.endswith("…") else text[:-3]

    def digits_of(chunk: str) -> tuple[int, ...]:
        chunk = chunk.strip()
        if " " in chunk:
            return tuple(int(t) for t in chunk.split())
        return tuple(int(c) for c in chunk)

    if "(" in text:
        if truncated:
            raise ValueError("a sequence cannot be both periodic and truncated")
        head, _, rest = text.partition("(")
        body, _, tail = rest.partition(")")
        if tail.strip():
            raise ValueError(f"trailing characters after period: {tail!r}")
        return EventuallyPeriodic(digits_of(head), digits_of(body), k)
    ds = digits_of(text)
    if truncated:
        return Stream.from_digits(ds, k)
    return Word(ds, k)
