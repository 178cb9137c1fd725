"""Exact rationals with infinities, cuts in ordered abelian groups, and
rank-1 value group descriptions.

All arithmetic is exact: finite values are arbitrary-precision reduced
fractions, and the two infinities compare correctly against everything.
Cuts are represented by a rational-or-infinite bound together with an
``attained`` flag; ``attained=True`` means the lower set is ``{q <= bound}``
and ``attained=False`` means ``{q < bound}``.  Comparison of cuts is by
inclusion of lower sets, which makes the order total.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union


RatLike = Union[int, Fraction, "ExtRat"]


class InfinityArithmeticError(ArithmeticError):
    """Raised on undefined expressions such as (+inf) + (-inf)."""


@dataclass(frozen=True, order=False)
class ExtRat:
    """An exact rational number or one of the symbols -inf / +inf.

    ``sign`` is 0 for finite values (stored in ``num``), +1 for +inf and
    -1 for -inf.  Finite arithmetic never rounds; mixing the two
    infinities raises :class:`InfinityArithmeticError`.
    """

    num: Optional[Fraction]
    sign: int = 0

    def __post_init__(self):
        if self.sign == 0:
            if not isinstance(self.num, Fraction):
                raise TypeError("finite ExtRat requires a Fraction")
        else:
            if self.sign not in (-1, 1) or self.num is not None:
                raise ValueError("infinite ExtRat carries no fraction")

    @staticmethod
    def of(x: RatLike) -> "ExtRat":
        if isinstance(x, ExtRat):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a rational")
        if isinstance(x, int):
            return ExtRat(Fraction(x))
        if isinstance(x, Fraction):
            return ExtRat(x)
        raise TypeError(f"cannot build ExtRat from {type(x)!r}")

    @property
    def is_finite(self) -> bool:
        return self.sign == 0

    @property
    def fraction(self) -> Fraction:
        if self.sign != 0:
            raise InfinityArithmeticError("infinite value has no fraction")
        assert self.num is not None
        return self.num

    def __neg__(self) -> "ExtRat":
        if self.sign != 0:
            return MINUS_INF if self.sign > 0 else PLUS_INF
        return ExtRat(-self.num)

    def __add__(self, other: RatLike) -> "ExtRat":
        other = ExtRat.of(other)
        if self.sign != 0 and other.sign != 0:
            if self.sign != other.sign:
                raise InfinityArithmeticError("inf - inf is undefined")
            return self
        if self.sign != 0:
            return self
        if other.sign != 0:
            return other
        return ExtRat(self.num + other.num)

    __radd__ = __add__

    def __sub__(self, other: RatLike) -> "ExtRat":
        return self + (-ExtRat.of(other))

    def __rsub__(self, other: RatLike) -> "ExtRat":
        return ExtRat.of(other) + (-self)

    def __mul__(self, other: RatLike) -> "ExtRat":
        other = ExtRat.of(other)
        if self.sign == 0 and other.sign == 0:
            return ExtRat(self.num * other.num)
        a, b = self, other
        if a.sign == 0:
            a, b = b, a
        # a is infinite
        if b.sign == 0:
            if b.num == 0:
                raise InfinityArithmeticError("0 * inf is undefined")
            return a if b.num > 0 else -a
        return a if b.sign > 0 else -a

    __rmul__ = __mul__

    def _key(self):
        if self.sign < 0:
            return (-1, Fraction(0))
        if self.sign > 0:
            return (1, Fraction(0))
        return (0, self.num)

    def __lt__(self, other: RatLike) -> bool:
        return self._key() < ExtRat.of(other)._key()

    def __le__(self, other: RatLike) -> bool:
        return self._key() <= ExtRat.of(other)._key()

    def __gt__(self, other: RatLike) -> bool:
        return self._key() > ExtRat.of(other)._key()

    def __ge__(self, other: RatLike) -> bool:
        return self._key() >= ExtRat.of(other)._key()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExtRat.of(other)
        if not isinstance(other, ExtRat):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __str__(self) -> str:
        if self.sign > 0:
            return "+inf"
        if self.sign < 0:
            return "-inf"
        return f"{self.num.numerator}/{self.num.denominator}"

    def __repr__(self) -> str:
        return f"ExtRat({self})"

    def to_json(self) -> str:
        return str(self)

    @staticmethod
    def parse(s: str) -> "ExtRat":
        s = s.strip()
        if s == "+inf":
            return PLUS_INF
        if s == "-inf":
            return MINUS_INF
        return ExtRat(Fraction(s))


PLUS_INF = ExtRat(None, 1)
MINUS_INF = ExtRat(None, -1)


def rat(num, den: int = 1) -> Fraction:
    """Shorthand for building reduced fractions in client code and tests."""
    return Fraction(num, den)


@dataclass(frozen=True)
class Cut:
    """A cut in the divisible hull of a rank-1 value group.

    ``attained=True``: lower set {q <= bound}; ``attained=False``:
    lower set {q < bound}.  Infinite bounds force ``attained=False`` (the
    lower set is then everything or nothing).
    """

    bound: ExtRat
    attained: bool

    def __post_init__(self):
        if not isinstance(self.bound, ExtRat):
            object.__setattr__(self, "bound", ExtRat.of(self.bound))
        if not self.bound.is_finite and self.attained:
            raise ValueError("infinite cut bounds are never attained")

    def _key(self):
        return (self.bound._key(), self.attained)

    def __lt__(self, other: "Cut") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Cut") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Cut") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Cut") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        mark = "+" if self.attained else "-"
        return f"{self.bound}{mark}"

    def to_json(self) -> dict:
        return {"bound": self.bound.to_json(), "attained": self.attained}

    @staticmethod
    def from_json(obj: dict) -> "Cut":
        return Cut(ExtRat.parse(obj["bound"]), bool(obj["attained"]))


def cut_compare(x: Cut, y: Cut) -> str:
    """Total order on cuts by inclusion of lower sets.

    Returns one of ``"less"``, ``"equal"``, ``"greater"``.  At equal
    bounds, the non-attained cut (strict lower set) is the smaller one.
    """
    kx, ky = x._key(), y._key()
    if kx < ky:
        return "less"
    if kx > ky:
        return "greater"
    return "equal"


def segment_affine(s: Cut, n: int, alpha: RatLike) -> Cut:
    """Image of an initial segment under T -> nT + alpha.

    The lower set {q (<|<=) b} maps to {q (<|<=) n*b + alpha}; the
    attained flag is preserved.  ``alpha`` must be finite and ``n``
    a positive integer.
    """
    if not isinstance(n, int) or n <= 0:
        raise ValueError("n must be a positive integer")
    alpha = ExtRat.of(alpha)
    if not alpha.is_finite:
        raise InfinityArithmeticError("affine shift must be finite")
    return Cut(alpha + self_mul(s.bound, n), s.attained)


def self_mul(x: ExtRat, n: int) -> ExtRat:
    if not x.is_finite:
        return x
    return ExtRat(x.fraction * n)


def cut_of_sample(values: Iterable[RatLike], side: str) -> Cut:
    """Least upper cut ``S^+`` or greatest disjoint lower cut ``S^-``.

    ``side="plus"`` returns (max(S), attained); ``side="minus"`` returns
    (min(S), not attained).  The sample must be nonempty and finite.
    """
    vals = [ExtRat.of(v) for v in values]
    if not vals:
        raise ValueError("empty sample has no cut")
    if any(not v.is_finite for v in vals):
        raise ValueError("sample values must be finite")
    if side == "plus":
        return Cut(max(vals), True)
    if side == "minus":
        return Cut(min(vals), False)
    raise ValueError(f"unknown side {side!r}")


@dataclass(frozen=True)
class DistRelation:
    """How a distance cut sits relative to a finite threshold alpha.

    ``lt_alpha``: every value below the cut is < alpha (cut <= alpha^-).
    ``lt_strict_gap``: additionally bounded away from alpha by some
    rational beta < alpha (cut < alpha^-).
    """

    lt_alpha: bool
    lt_strict_gap: bool


def dist_translate(d: Cut, alpha: RatLike) -> DistRelation:
    alpha = ExtRat.of(alpha)
    if not alpha.is_finite:
        raise InfinityArithmeticError("threshold must be finite")
    threshold = Cut(alpha, False)
    return DistRelation(lt_alpha=d <= threshold, lt_strict_gap=d < threshold)


@dataclass(frozen=True)
class CutEnclosure:
    """Certified bracket [lo, hi] around a cut that may not be computed
    exactly within budget."""

    lo: Cut
    hi: Cut

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("enclosure requires lo <= hi")

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self) -> dict:
        return {"lo": self.lo.to_json(), "hi": self.hi.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "CutEnclosure":
        return CutEnclosure(Cut.from_json(obj["lo"]), Cut.from_json(obj["hi"]))


@dataclass(frozen=True)
class ValueGroupDesc:
    """A finitely described subgroup of the rationals (rank 1).

    The group is generated by ``generators``; with ``p_divisible_closure``
    set it is additionally closed under division by ``p``.  Membership is
    decidable: the base group is cyclic, generated by the gcd of the
    generators.
    """

    generators: tuple
    p_divisible_closure: bool = False
    p: Optional[int] = None

    def __post_init__(self):
        gens = tuple(Fraction(g) for g in self.generators)
        if not gens or any(g <= 0 for g in gens):
            raise ValueError("generators must be positive rationals")
        object.__setattr__(self, "generators", gens)
        if self.p_divisible_closure and (self.p is None or self.p < 2):
            raise ValueError("p-divisible closure needs the prime p")

    def base_generator(self) -> Fraction:
        # gcd of fractions: gcd of numerators over a common denominator
        from math import gcd, lcm

        l = 1
        for g in self.generators:
            l = lcm(l, g.denominator)
        n = 0
        for g in self.generators:
            n = gcd(n, g.numerator * (l // g.denominator))
        return Fraction(n, l)

    def contains(self, q) -> bool:
        q = Fraction(q)
        if q == 0:
            return True
        g0 = self.base_generator()
        r = q / g0
        if not self.p_divisible_closure:
            return r.denominator == 1
        # allow denominator to be a power of p
        d = r.denominator
        p = self.p
        while d % p == 0:
            d //= p
        return d == 1

    def is_p_divisible(self, p: int) -> bool:
        """Whether the described group equals its own p-divisions."""
        if self.p_divisible_closure and self.p == p:
            return True
        # cyclic group g0*Z: g0/p is never a member for p >= 2
        return False

    def divisibility_witness(self, p: int) -> Optional[Fraction]:
        """A member g with g/p outside the group, when one exists."""
        if self.is_p_divisible(p):
            return None
        return self.base_generator()

    def to_json(self) -> dict:
        out = {
            "generators": [f"{g.numerator}/{g.denominator}" for g in self.generators],
            "p_divisible_closure": self.p_divisible_closure,
        }
        if self.p is not None:
            out["p"] = self.p
        return out

    @staticmethod
    def from_json(obj: dict) -> "ValueGroupDesc":
        return ValueGroupDesc(
            tuple(Fraction(g) for g in obj["generators"]),
            bool(obj["p_divisible_closure"]),
            obj.get("p"),
        )
