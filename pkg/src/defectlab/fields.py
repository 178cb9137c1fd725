"""Finitely described base fields inside the ambient series field.

A FieldDesc pins down a base field K by shape: rational functions F_q(t),
truncated Laurent series F_q((t)), a fixed root tower F_q(t^(1/p^n)), the
directed union F_q(t)(t^(1/p^i) : i >= 1), the p-adic base field, or the
p-adic analogue of the directed union.  The description carries the value
group, a certified support lattice (every element's expansion is
supported there), and structural flags used by one-sided certificates:
``leveled`` means each single element lives at some finite denominator
level even though the union is deep, ``perfect`` and ``complete`` record
facts provable from the shape.

Elements are enumerated deterministically and monotonically in a height
parameter; witnesses found this way are stored in certificates and can be
re-checked without repeating the search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

from .cuts import ExtRat, ValueGroupDesc
from .series import (
    EQUAL,
    Series,
    SeriesContext,
    invert,
    make_equal_context,
    make_mixed_context,
)

RATIONAL_FUNCTION = "rational_function"
LAURENT = "laurent"
TOWER = "tower"
DIRECTED_UNION = "directed_union"
PADIC_BASE = "padic_base"
PADIC_TOWER = "padic_tower"

PRESET_NAMES = ("fp_t", "laurent", "pdiv_tower", "qp", "qp_pdiv_tower")


@dataclass(frozen=True)
class FieldDesc:
    kind: str
    name: str
    ctx: SeriesContext
    value_group: ValueGroupDesc
    support_lattice: Optional[ValueGroupDesc]
    leveled: bool
    perfect: bool
    complete: bool
    level: int = 0  # fixed root depth for kind == tower

    @property
    def residue_q(self) -> int:
        return self.ctx.q

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "ctx": self.ctx.to_json(),
            "value_group": self.value_group.to_json(),
            "support_lattice": self.support_lattice.to_json() if self.support_lattice else None,
            "leveled": self.leveled,
            "perfect": self.perfect,
            "complete": self.complete,
            "level": self.level,
        }


def preset_field(name: str, p: int, m: int = 1, D: Optional[int] = None) -> FieldDesc:
    """One of the built-in laboratory fields, by preset name."""
    if name == "fp_t":
        ctx = make_equal_context(p, m, D)
        z = ValueGroupDesc((Fraction(1),))
        return FieldDesc(RATIONAL_FUNCTION, name, ctx, z, z, False, False, False)
    if name == "laurent":
        ctx = make_equal_context(p, m, D)
        z = ValueGroupDesc((Fraction(1),))
        return FieldDesc(LAURENT, name, ctx, z, z, False, False, True)
    if name == "pdiv_tower":
        ctx = make_equal_context(p, m, D)
        g = ValueGroupDesc((Fraction(1),), True, p)
        return FieldDesc(DIRECTED_UNION, name, ctx, g, g, True, True, False)
    if name == "qp":
        ctx = make_mixed_context(p, m, D)
        z = ValueGroupDesc((Fraction(1),))
        return FieldDesc(PADIC_BASE, name, ctx, z, z, False, False, True)
    if name == "qp_pdiv_tower":
        ctx = make_mixed_context(p, m, D)
        g = ValueGroupDesc((Fraction(1),), True, p)
        return FieldDesc(PADIC_TOWER, name, ctx, g, g, True, False, False)
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")


def tower_field(p: int, level: int, m: int = 1, D: Optional[int] = None) -> FieldDesc:
    """The fixed finite tower F_q(t^(1/p^level))."""
    ctx = make_equal_context(p, m, D)
    g = ValueGroupDesc((Fraction(1, p ** level),))
    return FieldDesc(TOWER, f"tower{level}", ctx, g, g, False, False, False, level)


def field_from_json(obj: dict) -> FieldDesc:
    ctx_obj = obj["ctx"]
    if ctx_obj["mode"] == EQUAL:
        ctx = make_equal_context(ctx_obj["p"], ctx_obj["m"], ctx_obj["D"])
    else:
        ctx = make_mixed_context(ctx_obj["p"], ctx_obj["m"], ctx_obj["D"])
    return FieldDesc(
        obj["kind"],
        obj["name"],
        ctx,
        ValueGroupDesc.from_json(obj["value_group"]),
        ValueGroupDesc.from_json(obj["support_lattice"]) if obj["support_lattice"] else None,
        bool(obj["leveled"]),
        bool(obj["perfect"]),
        bool(obj["complete"]),
        int(obj.get("level", 0)),
    )


# --------------------------------------------------------------------------
# enumeration


def _poly_series(ctx: SeriesContext, code: int, height: int, scale: Fraction) -> Series:
    """Decode a base-q integer into sum coeff_i * t^(i*scale)."""
    q = ctx.q
    terms = {}
    for i in range(height + 1):
        d = code % q
        code //= q
        if d:
            terms[i * scale] = d
    return Series.make(ctx, terms)


def _ratfunc_elements(ctx: SeriesContext, height: int, scale: Fraction, precision: ExtRat) -> Iterator[Series]:
    q = ctx.q
    n_polys = q ** (height + 1)
    for den_code in range(1, n_polys):
        den = _poly_series(ctx, den_code, height, scale)
        if den.is_zero:
            continue
        is_one = den.terms == ((Fraction(0), 1),)
        den_inv = None
        if not is_one:
            vden = den.valuation().fraction
            den_inv = invert(den, ExtRat.of(precision.fraction + 2 * vden + 1))
        for num_code in range(n_polys):
            num = _poly_series(ctx, num_code, height, scale)
            if num.is_zero or is_one:
                yield num
                continue
            yield num * den_inv


_ENUM_CACHE: dict = {}


def enumerate_elements(K: FieldDesc, height: int, precision: Optional[ExtRat] = None) -> List[Series]:
    """Deterministic, monotone-in-height element enumeration.

    Rational-function shapes list ratios of polynomials of degree up to
    ``height`` (in the deepest generator available at that height);
    Laurent shapes list Laurent polynomials with exponents in
    [-height, height]; p-adic shapes list small rationals and digit
    monomials per tower level.  Duplicates are allowed and zero is
    always included.
    """
    if height < 0:
        raise ValueError("height must be >= 0")
    key = (K, height, precision)
    cached = _ENUM_CACHE.get(key)
    if cached is not None:
        return cached
    out = _enumerate_uncached(K, height, precision)
    _ENUM_CACHE[key] = out
    return out


def _enumerate_uncached(K: FieldDesc, height: int, precision: Optional[ExtRat]) -> List[Series]:
    ctx = K.ctx
    if precision is None:
        precision = ExtRat.of(Fraction(height + 4))
    out: List[Series] = []
    if K.kind == RATIONAL_FUNCTION:
        out.extend(_ratfunc_elements(ctx, height, Fraction(1), precision))
    elif K.kind == LAURENT:
        q = ctx.q
        width = 2 * height + 1
        # digit positions ordered 0, 1, -1, 2, -2, ... so that small
        # polynomial elements come first in the enumeration
        exps = [Fraction(0)]
        for k in range(1, height + 1):
            exps.append(Fraction(k))
            exps.append(Fraction(-k))
        for code in range(q ** width):
            terms = {}
            c = code
            for i in range(width):
                d = c % q
                c //= q
                if d:
                    terms[exps[i]] = d
            out.append(Series.make(ctx, terms))
    elif K.kind == TOWER:
        scale = Fraction(1, ctx.p ** K.level)
        ctx.check_exponent(scale)
        out.extend(_ratfunc_elements(ctx, height, scale, precision))
    elif K.kind == DIRECTED_UNION:
        for lvl in range(height + 1):
            scale = Fraction(1, ctx.p ** lvl)
            ctx.check_exponent(scale)
            out.extend(_ratfunc_elements(ctx, height, scale, precision))
    elif K.kind == PADIC_BASE:
        out.extend(_padic_rationals(ctx, height, precision))
    elif K.kind == PADIC_TOWER:
        out.extend(_padic_rationals(ctx, height, precision))
        for lvl in range(height + 1):
            scale = Fraction(1, ctx.p ** lvl)
            ctx.check_exponent(scale)
            for j in range(-height, height + 1):
                if j == 0:
                    continue
                for c in range(1, ctx.q):
                    out.append(Series.monomial(ctx, j * scale, c))
    else:
        raise ValueError(f"unknown field kind {K.kind!r}")
    return out


def _padic_rationals(ctx: SeriesContext, height: int, precision: ExtRat) -> Iterator[Series]:
    bound = height + 1
    for den in range(1, bound + 1):
        for num in range(-bound, bound + 1):
            yield Series.from_rational(ctx, Fraction(num, den), precision)


def member_witness(K: FieldDesc, s: Series) -> bool:
    """Sound membership certificate for a finite truncated series.

    True means the finite sum of the stored terms is literally an element
    of K: its support must lie in the support lattice, at a single finite
    level for leveled unions.  (For all preset shapes every finite
    lattice-supported sum is a member: Laurent polynomials lie in F_q(t),
    level-n root polynomials lie in the level-n tower field, and finite
    digit sums are rationals.)  False only means this certificate does
    not apply.
    """
    if K.support_lattice is None:
        return False
    return all(K.support_lattice.contains(e) for e in s.support())


def element_level(K: FieldDesc, s: Series) -> Optional[int]:
    """Least tower level whose lattice supports s, for leveled unions."""
    if not K.leveled:
        return None
    p = K.ctx.p
    lvl = 0
    for e in s.support():
        d = e.denominator
        k = 0
        while d % p == 0:
            d //= p
            k += 1
        if d != 1:
            return None
        lvl = max(lvl, k)
    return lvl
