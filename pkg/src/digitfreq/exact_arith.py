"""Exact rational and real-algebraic arithmetic.

Everything downstream (digit sequences, simplex maps, polytopes, the Markov
cross-check) is built on three primitives from this module:

* arbitrary-precision rationals, which are just :class:`fractions.Fraction`;
* integer polynomials with coefficients stored low degree first;
* real algebraic numbers given by a square-free defining polynomial together
  with an isolating interval with rational, non-root endpoints.

Signs of polynomial expressions at algebraic points are decided exactly: a
gcd test detects the zero case, and otherwise the isolating interval is
bisected until the sign is certified by root counting.  Refinement is capped
by a bit budget (default 4096) so a buggy caller fails loudly instead of
looping forever.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd as _int_gcd
from typing import Iterable, Sequence, Union

from .errors import PrecisionExhausted, RootIsolationError

#: Cap, in bits of interval width, on isolating-interval refinement.
DEFAULT_BITS = 4096

Rational = Fraction
RationalLike = Union[Fraction, int]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or an exact decimal such as ``"2.1901"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(value: RationalLike) -> str:
    return str(Fraction(value))


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer polynomial, coefficients low degree first, high zeros stripped.

    ``coeffs == ()`` is the zero polynomial.  Use :meth:`normalized` when the
    polynomial only matters up to a positive rational factor (defining
    polynomials, kneading polynomials): it removes the content and makes the
    leading coefficient positive.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        cs = tuple(int(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def normalized(cls, coeffs: Iterable[int]) -> "IntegerPolynomial":
        p = cls(tuple(coeffs))
        if not p.coeffs:
            return p
        content = 0
        for c in p.coeffs:
            content = _int_gcd(content, abs(c))
        if p.coeffs[-1] < 0:
            content = -content
        return cls(tuple(c // content for c in p.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: RationalLike) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntegerPolynomial":
        return IntegerPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


def poly_from_kneading(
    preperiod: Sequence[int], period: Sequence[int]
) -> IntegerPolynomial:
    """Polynomial killing the base of an eventually periodic kneading sequence.

    For digits ``d = P (Q repeating)`` with ``p = len(P)`` and ``q = len(Q)``
    in canonical form (shortest period, shortest preperiod), the expansion
    identity ``1 = sum d_i beta^-(i+1)`` clears to

        beta^(p+q) - beta^p
            - (beta^q - 1) * sum_{r<p} P_r beta^(p-r-1)
            - sum_{i<q} Q_i beta^(q-i-1)  =  0.

    The caller is responsible for canonical form; a padded period yields a
    polynomial with spurious cyclotomic factors.
    """
    p, q = len(preperiod), len(period)
    if q == 0:
        raise ValueError("period must be nonempty")
    cs = [0] * (p + q + 1)
    cs[p + q] += 1
    cs[p] -= 1
    for r, d in enumerate(preperiod):
        cs[p + q - r - 1] -= d
        cs[p - r - 1] += d
    for i, d in enumerate(period):
        cs[q - i - 1] -= d
    return IntegerPolynomial.normalized(cs)


# ---------------------------------------------------------------------------
# rational-coefficient helpers (internal representation: list of Fractions,
# low degree first, no trailing-zero guarantee)


def _trim(cs: list[Fraction]) -> list[Fraction]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _eval(cs: Sequence[Fraction], x: RationalLike) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _divmod_poly(
    num: Sequence[Fraction], den: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    _trim(rem)
    quo = [Fraction(0)] * max(len(rem) - len(den) + 1, 0)
    dlead = den[-1]
    while len(rem) >= len(den):
        shift = len(rem) - len(den)
        factor = rem[-1] / dlead
        quo[shift] = factor
        for i, dc in enumerate(den):
            rem[shift + i] -= factor * dc
        rem.pop()
        _trim(rem)
    return quo, rem


def _gcd_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd over the rationals (nonzero constant for coprime input)."""
    x, y = _trim(list(a)), _trim(list(b))
    while y:
        x, y = y, _divmod_poly(x, y)[1]
    if x:
        lead = x[-1]
        x = [c / lead for c in x]
    return x


def _to_integer_poly(cs: Sequence[Fraction]) -> IntegerPolynomial:
    denom = 1
    for c in cs:
        f = Fraction(c)
        denom = denom * f.denominator // _int_gcd(denom, f.denominator)
    return IntegerPolynomial(tuple(int(c * denom) for c in cs))


@lru_cache(maxsize=512)
def squarefree_part(p: IntegerPolynomial) -> IntegerPolynomial:
    """``p`` divided by ``gcd(p, p')``, normalized; same real roots, all simple."""
    if p.degree <= 0:
        return IntegerPolynomial.normalized(p.coeffs)
    fracs = [Fraction(c) for c in p.coeffs]
    g = _gcd_poly(fracs, [Fraction(c) for c in p.derivative().coeffs])
    quo, _ = _divmod_poly(fracs, g)
    return IntegerPolynomial.normalized(_to_integer_poly(quo).coeffs)


def without_zero_root(p: IntegerPolynomial) -> IntegerPolynomial:
    """Divide out any power of x; used when a defining polynomial has 0 as a root."""
    cs = p.coeffs
    i = 0
    while i < len(cs) and cs[i] == 0:
        i += 1
    return IntegerPolynomial.normalized(cs[i:])


# ---------------------------------------------------------------------------
# Sturm sequences and root counting


@lru_cache(maxsize=512)
def _sturm_chain(p: IntegerPolynomial) -> tuple[tuple[Fraction, ...], ...]:
    p0 = _trim([Fraction(c) for c in p.coeffs])
    chain = [p0]
    p1 = _trim([Fraction(c) for c in p.derivative().coeffs])
    if p1:
        chain.append(p1)
        while len(chain[-1]) > 1:
            rem = _divmod_poly(chain[-2], chain[-1])[1]
            if not rem:
                break
            chain.append([-c for c in rem])
    return tuple(tuple(cs) for cs in chain)


def _sign_variations(chain: Sequence[Sequence[Fraction]], x: RationalLike) -> int:
    signs = []
    for cs in chain:
        v = _eval(cs, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(p: IntegerPolynomial, lo: RationalLike, hi: RationalLike) -> int:
    """Number of distinct real roots of ``p`` in the open interval (lo, hi)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        return 0
    sq = squarefree_part(p)
    if sq.degree <= 0:
        return 0
    chain = _sturm_chain(sq)
    n = _sign_variations(chain, lo) - _sign_variations(chain, hi)
    if sq(hi) == 0:  # Sturm counts (lo, hi]; the interval here is open
        n -= 1
    return n


# ---------------------------------------------------------------------------
# algebraic numbers


@dataclass(eq=False)
class AlgebraicNumber:
    """Real algebraic number: square-free ``poly`` with its unique root in (lo, hi).

    Invariants: ``poly(lo) != 0 != poly(hi)`` and the open interval contains
    exactly one real root.  ``lo``/``hi`` shrink in place as the number is
    refined; the value represented never changes.
    """

    poly: IntegerPolynomial
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def _bisect_once(self) -> None:
        mid = self.midpoint()
        v = self.poly(mid)
        if v == 0:
            # The root is the rational midpoint; keep a clean open interval
            # around it.  The defining polynomial is square free, so nearby
            # points are eventually free of other roots.
            delta = self.width / 8
            while (
                self.poly(mid - delta) == 0
                or self.poly(mid + delta) == 0
                or count_roots(self.poly, mid - delta, mid + delta) != 1
            ):
                delta /= 2
            self.lo, self.hi = mid - delta, mid + delta
            return
        if self.poly(self.lo) * v < 0:
            self.hi = mid
        else:
            self.lo = mid

    def refine_to(self, eps: RationalLike, bits: int | None = None) -> None:
        limit = Fraction(1, 2 ** (bits if bits is not None else DEFAULT_BITS))
        eps = Fraction(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        while self.width > eps:
            if self.width <= limit:
                raise PrecisionExhausted("precision exhausted")
            self._bisect_once()

    def approx(self, eps: RationalLike = Fraction(1, 10**12)) -> Fraction:
        self.refine_to(eps)
        return self.midpoint()

    def __float__(self) -> float:
        return float(self.approx(Fraction(1, 2**80)))

    # value-based comparisons; mutation only tightens intervals
    def _cmp(self, other: object) -> int:
        if isinstance(other, AlgebraicNumber):
            return compare_values(self, other)
        if isinstance(other, (int, Fraction)):
            return compare_values(self, Fraction(other))
        raise TypeError(f"cannot compare AlgebraicNumber with {type(other)!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (AlgebraicNumber, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    __hash__ = None  # type: ignore[assignment]


def isolate_root(
    p: IntegerPolynomial,
    lo: RationalLike,
    hi: RationalLike,
    bits: int | None = None,
) -> AlgebraicNumber:
    """Certify and return the unique root of ``p`` in the open interval (lo, hi).

    Raises :class:`RootIsolationError` with message ``"no root in interval"``
    or ``"multiple roots in interval"`` when the Sturm count differs from 1.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    sq = squarefree_part(p)
    n = count_roots(sq, lo, hi)
    if n == 0:
        raise RootIsolationError("no root in interval")
    if n > 1:
        raise RootIsolationError("multiple roots in interval")
    # Nudge endpoints off roots of sq.  The interior root is unique, so any
    # small enough inward step preserves it; halving escapes the finitely
    # many bad step sizes.
    if sq(lo) == 0:
        step = (hi - lo) / 4
        while sq(lo + step) == 0 or count_roots(sq, lo + step, hi) != 1:
            step /= 2
        lo = lo + step
    if sq(hi) == 0:
        step = (hi - lo) / 4
        while sq(hi - step) == 0 or count_roots(sq, lo, hi - step) != 1:
            step /= 2
        hi = hi - step
    return AlgebraicNumber(sq, lo, hi)


def refine(a: AlgebraicNumber, eps: RationalLike, bits: int | None = None) -> AlgebraicNumber:
    """Shrink ``a``'s isolating interval to width <= eps (in place) and return it."""
    a.refine_to(eps, bits=bits)
    return a


def sign_at(
    p: IntegerPolynomial,
    x: Union[AlgebraicNumber, Fraction, int],
    bits: int | None = None,
) -> int:
    """Exact sign (-1, 0, 1) of ``p`` at a rational or algebraic point."""
    if isinstance(x, (int, Fraction)):
        v = p(x)
        return (v > 0) - (v < 0)
    if p.is_zero():
        return 0
    if p.degree == 0:
        return 1 if p.coeffs[0] > 0 else -1
    g = _gcd_poly([Fraction(c) for c in p.coeffs], [Fraction(c) for c in x.poly.coeffs])
    if len(g) > 1 and count_roots(_to_integer_poly(g), x.lo, x.hi) >= 1:
        return 0
    sq = squarefree_part(p)
    limit = Fraction(1, 2 ** (bits if bits is not None else DEFAULT_BITS))
    while count_roots(sq, x.lo, x.hi) > 0:
        if x.width <= limit:
            raise PrecisionExhausted("precision exhausted")
        x._bisect_once()
    v = p(x.midpoint())
    return (v > 0) - (v < 0)


def compare_values(
    a: Union[AlgebraicNumber, Fraction, int],
    b: Union[AlgebraicNumber, Fraction, int],
    bits: int | None = None,
) -> int:
    """Exact three-way comparison of rational / algebraic values."""
    limit = Fraction(1, 2 ** (bits if bits is not None else DEFAULT_BITS))
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        a, b = Fraction(a), Fraction(b)
        return (a > b) - (a < b)
    if isinstance(a, (int, Fraction)):
        return -compare_values(b, a, bits=bits)
    if isinstance(b, (int, Fraction)):
        q = Fraction(b)
        if a.lo < q < a.hi and a.poly(q) == 0:
            return 0
        while a.lo < q < a.hi:
            if a.width <= limit:
                raise PrecisionExhausted("precision exhausted")
            a._bisect_once()
        return 1 if q <= a.lo else -1
    # both algebraic: zero test via common factor in the interval overlap
    olo, ohi = max(a.lo, b.lo), min(a.hi, b.hi)
    if olo < ohi:
        g = _gcd_poly(
            [Fraction(c) for c in a.poly.coeffs],
            [Fraction(c) for c in b.poly.coeffs],
        )
        if len(g) > 1 and count_roots(_to_integer_poly(g), olo, ohi) >= 1:
            return 0
    while a.lo < b.hi and b.lo < a.hi:
        target = a if a.width >= b.width else b
        if target.width <= limit:
            raise PrecisionExhausted("precision exhausted")
        target._bisect_once()
    return 1 if a.lo >= b.hi else -1


# ---------------------------------------------------------------------------
# arithmetic in Q[x] modulo a defining polynomial
#
# Values q(alpha) for rational q are carried as coefficient tuples reduced
# modulo the defining polynomial of alpha.  Reduction preserves the value
# because the modulus annihilates alpha; it need not be irreducible, so value
# equality must go through residue_sign rather than coefficient equality.

Residue = tuple[Fraction, ...]


def residue_from(coeffs: Iterable[RationalLike], modulus: IntegerPolynomial) -> Residue:
    cs = [Fraction(c) for c in coeffs]
    _, rem = _divmod_poly(cs, [Fraction(c) for c in modulus.coeffs])
    rem += [Fraction(0)] * (modulus.degree - len(rem))
    return tuple(rem)


def residue_add(a: Residue, b: Residue) -> Residue:
    return tuple(x + y for x, y in zip(a, b))


def residue_scale(a: Residue, s: RationalLike) -> Residue:
    return tuple(x * s for x in a)


def residue_sub_constant(a: Residue, c: RationalLike) -> Residue:
    return (a[0] - c,) + tuple(a[1:])


def residue_mul(a: Residue, b: Residue, modulus: IntegerPolynomial) -> Residue:
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            prod[i + j] += x * y
    return residue_from(prod, modulus)


def residue_inverse(a: Residue, modulus: IntegerPolynomial) -> Residue:
    """Inverse of ``a`` modulo the defining polynomial, by extended Euclid.

    Valid whenever gcd(a, modulus) is constant, which holds for every value
    we invert here (powers of beta with beta nonzero and the modulus free of
    the factor x).
    """
    mod = [Fraction(c) for c in modulus.coeffs]
    r0, r1 = mod, _trim(list(a))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while r1:
        quo, rem = _divmod_poly(r0, r1)
        # s_{i+1} = s_{i-1} - quo * s_i
        prod = [Fraction(0)] * (len(quo) + len(s1) - 1) if quo and s1 else []
        for i, x in enumerate(quo):
            for j, y in enumerate(s1):
                prod[i + j] += x * y
        nxt = [Fraction(0)] * max(len(s0), len(prod))
        for i, c in enumerate(s0):
            nxt[i] += c
        for i, c in enumerate(prod):
            nxt[i] -= c
        r0, r1 = r1, rem
        s0, s1 = s1, _trim(nxt)
    if len(r0) != 1:
        raise ValueError("element is not invertible modulo the defining polynomial")
    inv = [c / r0[0] for c in s0]
    return residue_from(inv, modulus)


def residue_sign(a: Residue, alpha: AlgebraicNumber, bits: int | None = None) -> int:
    """Sign of sum a_i * alpha^i, decided exactly."""
    return sign_at(_to_integer_poly(a), alpha, bits=bits)


def residue_is_zero(a: Residue, alpha: AlgebraicNumber) -> bool:
    if all(c == 0 for c in a):
        return True
    return residue_sign(a, alpha) == 0


def eval_interval(
    cs: Sequence[Fraction], lo: Fraction, hi: Fraction
) -> tuple[Fraction, Fraction]:
    """Conservative bounds for a polynomial over [lo, hi], by interval Horner."""
    alo = ahi = Fraction(0)
    for c in reversed(cs):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi


def residue_floor(
    a: Residue,
    alpha: AlgebraicNumber,
    max_value: int,
    bits: int | None = None,
) -> int:
    """Exact floor of ``a`` evaluated at ``alpha``, known to lie in [0, max_value].

    The interval evaluation narrows the candidate range cheaply; each
    remaining boundary is then certified with an exact sign.
    """
    limit = Fraction(1, 2 ** (bits if bits is not None else DEFAULT_BITS))
    while True:
        vlo, vhi = eval_interval(a, alpha.lo, alpha.hi)
        if vhi - vlo < 1:
            break
        if alpha.width <= limit:
            raise PrecisionExhausted("precision exhausted")
        alpha._bisect_once()
    d_lo = max(0, int(vlo.__floor__()))
    d_hi = min(max_value, int(vhi.__floor__()))
    d = d_lo
    while d < d_hi:
        # value >= d+1 ?
        if residue_sign(residue_sub_constant(a, d + 1), alpha, bits=bits) >= 0:
            d += 1
        else:
            break
    return d
