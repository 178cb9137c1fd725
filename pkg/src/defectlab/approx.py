"""Certified samples of v(a - K), distances, completion membership, and
the numerical conditions for semitame / deeply ramified base fields.

Soundness policy (one-sided): a realized value is only reported when an
explicit witness c in K achieves it; an upper bound on v(a - K) is only
reported when a support argument certifies it (an exponent of a outside
the support lattice of K, or unbounded exponent denominators against a
leveled union).  Nothing heuristic is ever labelled proved.

Elements that truncate an exact object with an infinite tail (roots
produced by the solvers, laboratory witnesses) carry a TailSchema: the
exact object is the stored series plus a tail whose exponents lie in
[low, sup), accumulate at sup, and have unbounded denominators when the
flag says so.  Differences v(a - c) are certified only below ``low``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .cuts import Cut, CutEnclosure, ExtRat, PLUS_INF, cut_of_sample
from .fields import FieldDesc, enumerate_elements, member_witness
from .series import EQUAL, Series, pth_root

PROVED = "proved"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class TailSchema:
    """Certificate describing the un-materialized tail of an exact object.

    The exact element equals the stored truncation plus a tail supported
    in [low, sup); nothing below ``low`` is missing, so valuations of
    differences are exact whenever they land below ``low``.
    """

    sup: Fraction
    low: Fraction
    cofinal_at_sup: bool
    denominators_unbounded: bool
    partials_in_field: bool
    note: str = ""

    def __post_init__(self):
        if self.low > self.sup:
            raise ValueError("tail region [low, sup) is empty")

    def shift(self, delta: Fraction) -> "TailSchema":
        return TailSchema(
            self.sup + delta,
            self.low + delta,
            self.cofinal_at_sup,
            self.denominators_unbounded,
            self.partials_in_field,
            self.note,
        )

    def to_json(self) -> dict:
        return {
            "sup": f"{self.sup.numerator}/{self.sup.denominator}",
            "low": f"{self.low.numerator}/{self.low.denominator}",
            "cofinal_at_sup": self.cofinal_at_sup,
            "denominators_unbounded": self.denominators_unbounded,
            "partials_in_field": self.partials_in_field,
            "note": self.note,
        }

    @staticmethod
    def from_json(obj: dict) -> "TailSchema":
        return TailSchema(
            Fraction(obj["sup"]),
            Fraction(obj["low"]),
            bool(obj["cofinal_at_sup"]),
            bool(obj["denominators_unbounded"]),
            bool(obj["partials_in_field"]),
            obj.get("note", ""),
        )


@dataclass(frozen=True)
class InitialSegmentSample:
    """A finite certified sample of v(a - K): witnessed values, a
    certified upper cut, and a no-maximum verdict."""

    realized: Tuple[Tuple[ExtRat, Series], ...]
    upper: Cut
    no_max: str
    budget: int

    def values(self) -> Tuple[ExtRat, ...]:
        return tuple(v for v, _ in self.realized)

    def finite_values(self) -> Tuple[Fraction, ...]:
        return tuple(v.fraction for v, _ in self.realized if v.is_finite)

    def witness_of(self, value) -> Optional[Series]:
        value = ExtRat.of(value)
        for v, w in self.realized:
            if v == value:
                return w
        return None

    def max_realized(self) -> Optional[ExtRat]:
        return self.realized[-1][0] if self.realized else None


def _difference_horizon(a: Series, tail: Optional[TailSchema]) -> ExtRat:
    if tail is None:
        return a.precision
    return min(a.precision, ExtRat.of(tail.low))


def value_set(
    a: Series,
    K: FieldDesc,
    budget: int,
    tail: Optional[TailSchema] = None,
) -> InitialSegmentSample:
    """Sample v(a - K) with explicit witnesses up to an enumeration budget.

    Realized values come from two certified sources: truncations of a at
    its own support exponents (when those truncations are members of K),
    and the deterministic element enumeration at height ``budget``.  The
    upper cut comes from support-lattice reasoning only.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    horizon = _difference_horizon(a, tail)
    found: Dict[ExtRat, Series] = {}

    # partial-sum witnesses at the element's own support exponents
    partial_values: List[ExtRat] = []
    prefix: Dict[Fraction, int] = {}
    for e, c in a.terms:
        if ExtRat.of(e) < horizon:
            partial = Series.make(a.ctx, dict(prefix), a.precision)
            if member_witness(K, partial):
                found.setdefault(ExtRat.of(e), partial)
                partial_values.append(ExtRat.of(e))
        prefix[e] = c

    # enumeration witnesses
    for c in enumerate_elements(K, budget):
        d = a - c
        if d.is_zero:
            if not d.precision.is_finite:
                found.setdefault(PLUS_INF, c)
            continue
        v = d.valuation()
        if v < horizon:
            found.setdefault(v, c)

    realized = tuple(sorted(found.items(), key=lambda kv: kv[0]._key()))

    # certified upper bound; with a tail present, only stored exponents in
    # the certified region below tail.low may be used for the support
    # argument, since stored terms inside the tail region may be corrected
    # by the un-materialized tail
    candidates: List[Cut] = []
    if K.support_lattice is not None:
        outside = [
            e
            for e in a.support()
            if not K.support_lattice.contains(e)
            and (tail is None or e < tail.low)
        ]
        if outside:
            candidates.append(Cut(ExtRat.of(min(outside)), True))
    if tail is not None and tail.denominators_unbounded and K.leveled:
        candidates.append(Cut(ExtRat.of(tail.sup), False))
    upper = min(candidates) if candidates else Cut(PLUS_INF, False)

    # realized values must respect the certified upper cut
    for v, _ in realized:
        if not v.is_finite:
            if upper.bound.is_finite:
                raise AssertionError(
                    "a witnessed exact member contradicts the finite upper bound"
                )
            continue
        if v > upper.bound or (v == upper.bound and not upper.attained):
            raise AssertionError(
                f"realized value {v} escapes the certified upper cut {upper}"
            )

    # no-maximum verdict: proved only from accepted truncation witnesses
    # over a leveled union, where the schema guarantees strictly better
    # truncations cofinally below sup
    no_max = UNKNOWN
    if any(not v.is_finite for v, _ in realized):
        no_max = REFUTED
    elif realized and upper.attained and realized[-1][0] == upper.bound:
        no_max = REFUTED
    elif (
        tail is not None
        and tail.cofinal_at_sup
        and tail.partials_in_field
        and K.leveled
        and any(v.is_finite and v.fraction < tail.sup for v in partial_values)
    ):
        no_max = PROVED

    return InitialSegmentSample(realized, upper, no_max, budget)


def translate_sample(
    sample: InitialSegmentSample,
    a_new: Series,
    shift: Fraction,
    witness_map,
    horizon: Optional[ExtRat] = None,
) -> InitialSegmentSample:
    """Re-witness a sample for a_new = (transform of a), checking each
    translated witness exactly: v(a_new - map(c)) must equal v + shift."""
    out = []
    for v, w in sample.realized:
        if not v.is_finite:
            continue
        w2 = witness_map(w)
        target = ExtRat.of(v.fraction + shift)
        if horizon is not None and not (target < horizon):
            continue
        d = a_new - w2
        if d.is_zero or d.valuation() != target:
            raise ValueError(
                f"translated witness fails: expected value {target}, "
                f"got {'zero' if d.is_zero else d.valuation()}"
            )
        out.append((target, w2))
    ub = sample.upper
    new_upper = Cut(ub.bound + shift, ub.attained) if ub.bound.is_finite else ub
    return InitialSegmentSample(tuple(out), new_upper, sample.no_max, sample.budget)


def distance(
    a: Series,
    K: FieldDesc,
    budget: int,
    tail: Optional[TailSchema] = None,
    sample: Optional[InitialSegmentSample] = None,
) -> CutEnclosure:
    """Certified enclosure of dist(a, K), collapsing to an exact cut when
    the sample is provably cofinal in it."""
    if sample is None:
        sample = value_set(a, K, budget, tail)
    if any(not v.is_finite for v, _ in sample.realized):
        top = Cut(PLUS_INF, False)
        return CutEnclosure(top, top)
    if not sample.realized:
        raise ValueError("no realized values at this budget; cannot bracket the distance")
    lo = cut_of_sample(sample.finite_values(), "plus")
    hi = sample.upper
    if (
        sample.no_max == PROVED
        and tail is not None
        and tail.cofinal_at_sup
        and hi.bound.is_finite
        and hi == Cut(ExtRat.of(tail.sup), False)
    ):
        return CutEnclosure(hi, hi)
    return CutEnclosure(lo, hi)


def in_completion(
    a: Series,
    K: FieldDesc,
    budget: int,
    tail: Optional[TailSchema] = None,
) -> str:
    """yes / no / unknown membership in the completion of K.

    ``no`` requires a certified finite upper bound on v(a - K); ``yes``
    requires an exact witness (the difference vanishes identically).
    """
    sample = value_set(a, K, budget, tail)
    if any(not v.is_finite for v, _ in sample.realized):
        return "yes"
    if sample.upper.bound.is_finite:
        return "no"
    return UNKNOWN


# --------------------------------------------------------------------------
# semitame / deeply ramified condition checks


@dataclass(frozen=True)
class ConditionVerdict:
    status: str  # proved | refuted | unknown
    witness: Optional[Series] = None
    note: str = ""


CONDITION_NAMES = {
    "drst": "value group p-divisible",
    "residue_perfect": "residue field perfect",
    "a": "semitame",
    "b": "deeply ramified",
    "c": "Frobenius surjective on the completion's valuation ring mod p",
    "d": "completion perfect",
    "e": "dense in the perfect hull",
    "f": "p-th powers dense",
}


def semitame_report(K: FieldDesc, budget: int) -> Dict[str, ConditionVerdict]:
    """Per-condition verdicts for the semitame / deeply ramified circle.

    Refutations carry explicit witnesses found by enumeration plus a
    support-lattice argument (an element whose p-th root, or itself,
    cannot be approximated because its exponent sits outside the
    relevant lattice).  Proofs are structural, from the shape flags of
    the description (a perfect directed union stays perfect in the
    completion).  Everything else is unknown-at-budget.
    """
    if K.ctx.mode != EQUAL:
        raise ValueError("the condition circle is checked in equal characteristic")
    p = K.ctx.p
    out: Dict[str, ConditionVerdict] = {}

    wit = K.value_group.divisibility_witness(p)
    if wit is None:
        out["drst"] = ConditionVerdict(PROVED, None, "closure flag certifies p-divisibility")
    else:
        out["drst"] = ConditionVerdict(
            REFUTED,
            Series.monomial(K.ctx, wit),
            f"group element {wit} with {wit}/{p} outside the group",
        )

    out["residue_perfect"] = ConditionVerdict(PROVED, None, "finite fields are perfect")

    if K.perfect:
        note = "shape is closed under p-th roots"
        for key in ("c", "d", "e", "f"):
            out[key] = ConditionVerdict(PROVED, None, note)
    else:
        hull_wit = _imperfection_search(K, budget)
        if hull_wit is None:
            for key in ("c", "d", "e", "f"):
                out[key] = ConditionVerdict(UNKNOWN, None, "no witness at this budget")
        else:
            a0, root = hull_wit
            lattice_note = (
                "the p-th root's exponent lies outside the support lattice, so "
                "v(root - K) is bounded and the root misses the completion"
            )
            out["e"] = ConditionVerdict(REFUTED, root, lattice_note)
            out["d"] = ConditionVerdict(REFUTED, root, lattice_note)
            power_note = (
                "p-th powers are supported on the scaled lattice, so this element "
                "is boundedly far from all of them"
            )
            out["f"] = ConditionVerdict(REFUTED, a0, power_note)
            out["c"] = ConditionVerdict(REFUTED, a0, power_note)

    pieces = [out["drst"], out["c"]]
    if any(v.status == REFUTED for v in pieces):
        bad = next(v for v in pieces if v.status == REFUTED)
        out["a"] = ConditionVerdict(REFUTED, bad.witness, "a failing sub-condition refutes semitameness")
    elif all(v.status == PROVED for v in pieces):
        out["a"] = ConditionVerdict(PROVED, None, "both sub-conditions proved")
    else:
        out["a"] = ConditionVerdict(UNKNOWN, None, "sub-conditions unresolved")
    out["b"] = ConditionVerdict(out["a"].status, out["a"].witness,
                                "equivalent to semitameness in positive characteristic")
    return out


def _imperfection_search(K: FieldDesc, budget: int) -> Optional[Tuple[Series, Series]]:
    """First enumerated element whose p-th root provably escapes K: its
    root has an exponent outside the support lattice of K."""
    assert K.support_lattice is not None
    for c in enumerate_elements(K, budget):
        if c.is_zero:
            continue
        root = pth_root(c)
        if any(not K.support_lattice.contains(e) for e in root.support()):
            return c, root
    return None


def defect_of(degree: int, ram_index: int, res_degree: int, p: int) -> int:
    """The defect p^nu from degree = p^nu * ram_index * res_degree.

    Raises ValueError when the quotient is not a nonnegative power of p,
    which signals inconsistent certificate invariants.
    """
    if min(degree, ram_index, res_degree) < 1:
        raise ValueError("all invariants must be >= 1")
    q, r = divmod(degree, ram_index * res_degree)
    if r != 0:
        raise ValueError(
            f"degree {degree} is not divisible by e*f = {ram_index * res_degree}"
        )
    d = q
    while d % p == 0:
        d //= p
    if d != 1:
        raise ValueError(f"defect candidate {q} is not a power of p = {p}")
    return q
