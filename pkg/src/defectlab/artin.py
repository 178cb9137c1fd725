"""Degree-p extension certificates in equal characteristic: the
Artin-Schreier root solver, generator changes, the inseparable-to-
separable transformation, certified families, and defect criteria.

The solver writes a root of X^p - X - b as

    sum_{i>=1} (b_-)^(1/p^i)  -  sum_{i>=0} (b_+)^(p^i)  +  rho

where b_- / b_0 / b_+ split b by the sign of the exponent and rho solves
the residue equation x^p - x = b_0 in F_q.  Both sums telescope under
x -> x^p - x; truncating the first after I steps leaves the exact
residual -(b_-)^(1/p^I), which is recorded as a certified floor, and the
dropped tail is described by a TailSchema so that downstream value-set
sampling stays sound.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Tuple

from .approx import (
    InitialSegmentSample,
    PROVED,
    REFUTED,
    TailSchema,
    UNKNOWN,
    defect_of,
    distance,
    translate_sample,
    value_set,
)
from .cuts import Cut, CutEnclosure, ExtRat, PLUS_INF
from .fields import FieldDesc, enumerate_elements, member_witness
from .series import (
    EQUAL,
    DenominatorBoundError,
    Polynomial,
    Series,
    invert,
    pth_root,
    zeta_p,
)

ARTIN_SCHREIER = "artin_schreier"
KUMMER = "kummer"
PURELY_INSEPARABLE = "purely_inseparable"


def _short_hash(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(str(p).encode())
    return h.hexdigest()[:10]


@dataclass(frozen=True)
class Claims:
    unique_extension: str = UNKNOWN
    unique_rule: str = "none"
    immediate: str = UNKNOWN
    immediate_rule: str = "none"
    defect: Optional[int] = None
    defect_rule: str = "none"
    classification: str = UNKNOWN
    classification_rule: str = "none"
    bounds: Tuple[Tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        return {
            "unique_extension": [self.unique_extension, self.unique_rule],
            "immediate": [self.immediate, self.immediate_rule],
            "defect": [self.defect, self.defect_rule],
            "classification": [self.classification, self.classification_rule],
            "bounds": [[n, v] for n, v in self.bounds],
        }

    @staticmethod
    def from_json(obj: dict) -> "Claims":
        return Claims(
            obj["unique_extension"][0],
            obj["unique_extension"][1],
            obj["immediate"][0],
            obj["immediate"][1],
            obj["defect"][0],
            obj["defect"][1],
            obj["classification"][0],
            obj["classification"][1],
            tuple((n, v) for n, v in obj["bounds"]),
        )


@dataclass(frozen=True)
class ExtensionCert:
    """A persisted degree-p extension record: generator, minimal
    polynomial, certified value-set sample, distance enclosure, and the
    claims together with the rules that produced them."""

    kind: str
    base: FieldDesc
    generator: Series
    generator_tail: Optional[TailSchema]
    min_poly: Polynomial
    residual_floor: ExtRat
    sample: InitialSegmentSample
    dist: CutEnclosure
    claims: Claims
    provenance: Tuple[str, ...]

    @property
    def degree(self) -> int:
        return self.min_poly.degree


@dataclass(frozen=True)
class ASRoot:
    theta: Series
    tail: Optional[TailSchema]
    residual_floor: ExtRat
    residue_root: int


def as_root(b: Series, precision=None) -> ASRoot:
    """A root of X^p - X - b in the ambient field, by telescoping sums.

    The fractional (negative-exponent) sum is truncated when the session
    denominator bound D is reached; the positive sum is truncated at
    ``precision`` (default: b's own horizon, else exponent 12).  The
    returned residual floor certifies v(theta^p - theta - b), and the
    tail schema describes the dropped fractional terms.

    Raises ValueError when the residue equation x^p - x = b_0 has no
    root in F_q (a residue extension would be needed).
    """
    ctx = b.ctx
    if ctx.mode != EQUAL:
        raise ValueError("Artin-Schreier roots are an equal-characteristic construction")
    p = ctx.p
    if precision is None:
        precision = b.precision if b.precision.is_finite else ExtRat.of(Fraction(12))
    else:
        precision = ExtRat.of(precision)
        if b.precision.is_finite:
            precision = min(precision, b.precision)

    neg_terms = {e: c for e, c in b.terms if e < 0}
    r0 = b.coeff_at(0)
    pos_terms = {e: c for e, c in b.terms if e > 0}

    roots = ctx.field.artin_schreier_roots(r0)
    if not roots:
        raise ValueError(
            f"residue equation x^{p} - x = {ctx.field.repr_code(r0)} has no root in "
            f"F_{ctx.q}; extend the residue field"
        )
    rho = roots[0]

    # the stored negative terms are exact regardless of b's horizon
    b_neg = Series.make(ctx, neg_terms, PLUS_INF)
    b_pos = Series.make(ctx, pos_terms, b.precision)

    acc = {Fraction(0): rho} if rho else {}
    theta = Series.make(ctx, acc, precision)

    tail: Optional[TailSchema] = None
    floor = PLUS_INF
    if not b_neg.is_zero:
        parts: List[Series] = []
        x = b_neg
        while True:
            try:
                x = pth_root(x)
            except DenominatorBoundError:
                break
            parts.append(x)
        if not parts:
            raise DenominatorBoundError(
                "the session bound D admits no fractional refinement of the exponents"
            )
        for part in parts:
            theta = theta + part
        last = parts[-1]
        floor = last.valuation()
        first_dropped = Fraction(floor.fraction, p)
        tail = TailSchema(
            Fraction(0),
            first_dropped,
            True,
            True,
            True,
            "fractional telescoping tail of an Artin-Schreier root",
        )

    if not b_pos.is_zero:
        neg_one = ctx.field.neg(1)
        y = b_pos
        while y.vlow() < precision:
            theta = theta + y.truncate(precision).scale(neg_one)
            y = y.frobenius()

    theta = theta.truncate(precision)
    return ASRoot(theta, tail, floor, rho)


def as_root_residual(res: ASRoot, b: Series) -> Series:
    """theta^p - theta - b, for checking the certified floor."""
    theta = res.theta
    return theta.pow_int(theta.ctx.p) - theta - b


def check_as_root_identity(res: ASRoot, b: Series) -> bool:
    """Whether theta^p - theta - b vanishes on all certified terms.

    The only admissible exceptions are the recorded fractional residual
    -(b_-)^(1/p^I), supported in [residual_floor, 0).  Terms beyond the
    computed residual's own precision are not certified either way.
    """
    resid = as_root_residual(res, b)
    floor = res.residual_floor
    for e, _ in resid.terms:
        if not (floor.is_finite and floor.fraction <= e < 0):
            return False
    return True


def as_generator_transform(theta: Series, i_code: int, c: Series) -> Series:
    """The generator change theta -> i*theta + c, i in the prime field.

    Any two generators of the same extension are related this way, so
    value-set invariants must agree across the orbit.
    """
    fld = theta.ctx.field
    if i_code == 0:
        raise ValueError("i must be a nonzero element of the prime field")
    if not fld.in_prime_field(i_code):
        raise ValueError("i must lie in the prime field")
    return theta.scale(i_code) + c


def artin_schreier_poly(b: Series) -> Polynomial:
    """X^p - X - b."""
    ctx = b.ctx
    p = ctx.p
    neg_one = Series.monomial(ctx, 0, ctx.field.neg(1))
    coeffs = [b.scale(ctx.field.neg(1)), neg_one]
    coeffs += [Series.zero(ctx) for _ in range(p - 2)]
    coeffs.append(Series.one(ctx))
    return Polynomial.make(tuple(coeffs))


@dataclass(frozen=True)
class InsepTransform:
    separable_poly: Polynomial  # Y^p - d^(p-1) Y - eta^p
    as_poly: Polynomial  # X^p - X - eta^p / d^p
    theta_tilde: Series
    theta: Series
    theta_tail: Optional[TailSchema]
    cert: ExtensionCert
    checks: Tuple[Tuple[str, str], ...]


def transform_inseparable(
    eta: Series,
    K: FieldDesc,
    d: Series,
    budget: int,
    eta_tail: Optional[TailSchema] = None,
    insep_witness_immediate: bool = False,
) -> InsepTransform:
    """Turn the inseparable relation eta^p in K into an Artin-Schreier
    extension whose value set is the translate of v(eta - K).

    Requires v(eta - K) certifiably bounded and the twist condition
    (p-1) v(d) > p sup v(eta - K) - v(eta), checked on the certified
    upper cut.  Verifies and records the full chain of equalities:
    v(d theta) = v(eta), v(eta - d theta) = ((p-1)v(d) + v(eta))/p above
    the sample, v(d theta - c) = v(eta - c) witness by witness, and
    v(theta - c/d) = v(eta - c) - v(d) witness by witness.
    """
    ctx = eta.ctx
    if ctx.mode != EQUAL:
        raise ValueError("this transformation runs in equal characteristic")
    p = ctx.p
    b_eta = eta.pow_int(p)
    if not member_witness(K, b_eta):
        raise ValueError("eta^p is not certified to lie in K (support check failed)")
    if not member_witness(K, d):
        raise ValueError("d must be an element of K")
    if d.is_zero:
        raise ZeroDivisionError("d must be nonzero")

    sample_eta = value_set(eta, K, budget, eta_tail)
    upper = sample_eta.upper
    if not upper.bound.is_finite:
        raise ValueError("v(eta - K) has no certified finite upper bound")
    veta = eta.valuation().fraction
    vd = d.valuation().fraction
    threshold = Fraction((p - 1) * vd + veta, p)
    if not upper <= Cut(ExtRat.of(threshold), False):
        raise ValueError(
            f"twist condition fails: need (p-1)v(d) > p v(eta-K) - v(eta), "
            f"but the certified upper cut {upper} is not below {threshold}"
        )

    work = ExtRat.of(Fraction(budget + 6) + 2 * abs(vd) + abs(veta))
    d_inv = invert(d, work)
    ratio = eta * d_inv
    b = ratio.pow_int(p)
    root = as_root(b, work)
    theta = root.theta
    theta_tail = root.tail
    theta_tilde = theta * d
    tilde_tail = theta_tail.shift(vd) if theta_tail is not None else None

    checks: List[Tuple[str, str]] = []

    v_tilde = theta_tilde.valuation().fraction
    if v_tilde != veta:
        raise AssertionError(f"v(d theta) = {v_tilde} differs from v(eta) = {veta}")
    checks.append(("v_theta_tilde", str(v_tilde)))

    gap = (eta - theta_tilde).valuation().fraction
    if gap != threshold:
        raise AssertionError(
            f"v(eta - d theta) = {gap}, expected ((p-1)v(d)+v(eta))/p = {threshold}"
        )
    checks.append(("v_eta_minus_theta_tilde", str(gap)))

    # witness-by-witness equality of the two value sets
    tilde_horizon = ExtRat.of(tilde_tail.low) if tilde_tail else theta_tilde.precision
    sample_tilde = translate_sample(sample_eta, theta_tilde, Fraction(0), lambda w: w, tilde_horizon)
    checks.append(("value_set_tilde_matches", f"{len(sample_tilde.realized)} witnesses"))

    theta_horizon = ExtRat.of(theta_tail.low) if theta_tail else theta.precision
    sample_theta_tr = translate_sample(
        sample_eta, theta, -vd, lambda w: w * d_inv, theta_horizon
    )
    checks.append(("value_set_theta_translated", f"{len(sample_theta_tr.realized)} witnesses"))

    fresh = value_set(theta, K, budget, theta_tail)
    if fresh.upper != sample_theta_tr.upper:
        raise AssertionError(
            f"upper cuts disagree: fresh {fresh.upper} vs translated {sample_theta_tr.upper}"
        )
    merged = _merge_samples(fresh, sample_theta_tr)
    dist_enc = distance(theta, K, budget, theta_tail, merged)

    # uniqueness of the extension of v via the purely inseparable comparison:
    # eta/d is purely inseparable over K and sits strictly closer to theta
    # than K does
    ratio_gap = (ratio - theta).valuation().fraction
    if not Cut(ExtRat.of(ratio_gap), True) > merged.upper:
        raise AssertionError("comparison element is not strictly closer than K")
    checks.append(("v_ratio_minus_theta", str(ratio_gap)))

    claims = Claims(
        unique_extension=PROVED,
        unique_rule="ve_th",
        bounds=(
            ("upper_eta", str(upper)),
            ("threshold", str(threshold)),
            ("v_eta_minus_theta_tilde", str(gap)),
        ),
    )
    if insep_witness_immediate and sample_eta.no_max == PROVED:
        claims = replace(
            claims,
            classification="dependent",
            classification_rule="insep_provenance",
        )

    sep_poly = _separable_poly(eta, d, b_eta)
    as_poly = artin_schreier_poly(b)
    cert = ExtensionCert(
        ARTIN_SCHREIER,
        K,
        theta,
        theta_tail,
        as_poly,
        root.residual_floor,
        merged,
        dist_enc,
        claims,
        (
            f"transform_inseparable eta={_short_hash(eta)} d={_short_hash(d)} "
            f"budget={budget}",
        ),
    )
    return InsepTransform(sep_poly, as_poly, theta_tilde, theta, theta_tail, cert, tuple(checks))


def _separable_poly(eta: Series, d: Series, b_eta: Series) -> Polynomial:
    ctx = eta.ctx
    p = ctx.p
    neg = ctx.field.neg(1)
    dp1 = d.pow_int(p - 1)
    coeffs = [b_eta.scale(neg), dp1.scale(neg)]
    coeffs += [Series.zero(ctx) for _ in range(p - 2)]
    coeffs.append(Series.one(ctx))
    return Polynomial.make(tuple(coeffs))


def _merge_samples(a: InitialSegmentSample, b: InitialSegmentSample) -> InitialSegmentSample:
    found = {v: w for v, w in a.realized}
    for v, w in b.realized:
        found.setdefault(v, w)
    realized = tuple(sorted(found.items(), key=lambda kv: kv[0]._key()))
    no_max = a.no_max if a.no_max != UNKNOWN else b.no_max
    return InitialSegmentSample(realized, min(a.upper, b.upper), no_max, max(a.budget, b.budget))


def as_family(
    eta: Series,
    K: FieldDesc,
    d: Series,
    n_members: int,
    budget: int,
    eta_tail: Optional[TailSchema] = None,
    insep_witness_immediate: bool = False,
) -> List[ExtensionCert]:
    """Certificates for the extensions generated by roots of
    X^p - X - eta^p/d^(np), n = 1..n_members, with exact pairwise
    distinctness of the translated value-set samples."""
    if n_members < 1:
        raise ValueError("need at least one family member")
    sample_eta = value_set(eta, K, budget, eta_tail)
    if not sample_eta.upper.bound.is_finite:
        raise ValueError("v(eta - K) has no certified finite upper bound")
    vd = d.valuation().fraction
    finite_vals = sample_eta.finite_values()
    if not finite_vals:
        raise ValueError("no realized values at this budget")
    alpha = max(finite_vals)
    if not sample_eta.upper <= Cut(ExtRat.of(alpha + vd), False):
        raise ValueError(
            "family hypothesis fails: no realized alpha with alpha + v(d) above the sample"
        )

    certs: List[ExtensionCert] = []
    for n in range(1, n_members + 1):
        dn = d.pow_int(n)
        result = transform_inseparable(
            eta, K, dn, budget, eta_tail, insep_witness_immediate
        )
        certs.append(defect_criteria(result.cert))

    value_sets = [frozenset(c.sample.finite_values()) for c in certs]
    for i in range(len(certs)):
        for j in range(i + 1, len(certs)):
            if value_sets[i] == value_sets[j]:
                raise AssertionError(f"members {i + 1} and {j + 1} have equal samples")
            if certs[i].min_poly.coeffs[0].terms == certs[j].min_poly.coeffs[0].terms:
                raise AssertionError(f"members {i + 1} and {j + 1} share a minimal polynomial")
    return certs


def imperfection_witness(K: FieldDesc, budget: int) -> Optional[Series]:
    """First enumerated eta with eta^p in K and v(eta - K) certifiably
    bounded (hence eta outside the completion); None when the field is
    certified perfect or the budget finds nothing.

    The enumerated candidates have eta^p in K on the nose, so the
    replacement step (trading a near-miss for an exact p-th power) is
    built into the search.
    """
    if K.perfect:
        return None
    assert K.support_lattice is not None
    for c in enumerate_elements(K, budget):
        if c.is_zero:
            continue
        root = pth_root(c)
        if any(not K.support_lattice.contains(e) for e in root.support()):
            return root
    return None


@dataclass(frozen=True)
class SigmaSample:
    """Sampled values v((sigma f - f)/f) for the Galois generator sigma,
    with the f witnesses retained."""

    values: Tuple[Tuple[ExtRat, Series], ...]
    verdict: str  # independent_consistent | dependent_evidence | unknown

    def value_set(self) -> Tuple[ExtRat, ...]:
        return tuple(v for v, _ in self.values)


def sigma_sample(cert: ExtensionCert, budget: int) -> SigmaSample:
    """Sample the Galois-twist values of the extension.

    sigma acts by theta -> theta + 1 on Artin-Schreier generators and by
    eta -> zeta eta on Kummer generators; f ranges over the witness
    differences theta - c and the monomials c theta^j.  In rank 1 an
    independent defect forces the values to fill {alpha > 0}, so
    accumulation at 0+ is consistent with independence while a certified
    positive gap below the values is evidence of dependence.
    """
    theta = cert.generator
    ctx = theta.ctx
    p = ctx.p
    found = {}

    if cert.kind == ARTIN_SCHREIER:
        for v, w in cert.sample.realized:
            if not v.is_finite:
                continue
            f = theta - w
            found.setdefault(-v, f)
        one = Series.one(ctx)
        for c in enumerate_elements(cert.base, min(budget, 1)):
            if c.is_zero:
                continue
            for j in range(1, p):
                f = c * theta.pow_int(j)
                sf = c * (theta + one).pow_int(j)
                num = sf - f
                if num.is_zero:
                    continue
                val = num.valuation() - f.valuation()
                found.setdefault(val, f)
    elif cert.kind == KUMMER:
        zeta = zeta_p(ctx, ExtRat.of(Fraction(budget + 6)))
        zm1 = zeta - Series.one(ctx)
        vz = zm1.valuation()
        for v, w in cert.sample.realized:
            if not v.is_finite:
                continue
            f = theta - w
            # (zeta eta - eta)/(eta - c) has value v(zeta-1) + v(eta) - v(eta-c)
            found.setdefault(vz + theta.valuation() - v, f)
        for j in range(1, p):
            zj = zeta.pow_int(j) - Series.one(ctx)
            found.setdefault(zj.valuation(), theta.pow_int(j))
    else:
        raise ValueError(f"sigma is not defined for kind {cert.kind!r}")

    values = tuple(sorted(found.items(), key=lambda kv: kv[0]._key()))
    verdict = UNKNOWN
    positive = all(v > ExtRat.of(0) for v, _ in values)
    if cert.kind == ARTIN_SCHREIER:
        accumulates_at_zero = (
            cert.sample.no_max == PROVED and cert.dist.hi == Cut(ExtRat.of(0), False)
        )
        gap_below = cert.dist.hi < Cut(ExtRat.of(0), False)
    else:
        thr = Fraction(1, p - 1)
        accumulates_at_zero = (
            cert.sample.no_max == PROVED and cert.dist.hi == Cut(ExtRat.of(thr), False)
        )
        gap_below = cert.dist.hi < Cut(ExtRat.of(thr), False)
    if positive and accumulates_at_zero:
        verdict = "independent_consistent"
    elif positive and gap_below and cert.sample.no_max == PROVED:
        verdict = "dependent_evidence"
    return SigmaSample(values, verdict)


def defect_criteria(cert: ExtensionCert) -> ExtensionCert:
    """Apply the decidable rank-1 defect rules to a certificate.

    Bounded value set with proved no-maximum gives a unique valuation
    extension, immediacy, and defect p (recorded under the distance-below-
    zero rule when it applies); an already-proved unique extension plus
    proved no-maximum gives the same conclusion; a realized value outside
    the base value group certifies ramification and defect 1.
    """
    claims = cert.claims
    s = cert.sample
    p = cert.base.ctx.p
    bounded = s.upper.bound.is_finite

    if s.no_max == PROVED and bounded:
        rule = "uniqextv" if cert.dist.hi <= Cut(ExtRat.of(0), False) else "c2"
        assert defect_of(p, 1, 1, p) == p
        claims = replace(
            claims,
            unique_extension=PROVED,
            unique_rule=rule if claims.unique_extension != PROVED else claims.unique_rule,
            immediate=PROVED,
            immediate_rule=rule,
            defect=p,
            defect_rule=rule,
        )
    elif claims.unique_extension == PROVED and s.no_max == PROVED:
        claims = replace(
            claims, immediate=PROVED, immediate_rule="ueGp1", defect=p, defect_rule="ueGp1"
        )
    else:
        outside = [
            v.fraction
            for v, _ in s.realized
            if v.is_finite and not cert.base.value_group.contains(v.fraction)
        ]
        if outside:
            alpha = outside[0]
            if not cert.base.value_group.contains(p * alpha):
                raise AssertionError(
                    f"realized value {alpha} does not generate a degree-{p} group extension"
                )
            defect = defect_of(p, p, 1, p)
            claims = replace(
                claims,
                immediate=REFUTED,
                immediate_rule="ramified",
                defect=defect,
                defect_rule="ramified",
            )
    return replace(cert, claims=claims)


def as_extension(b: Series, K: FieldDesc, budget: int) -> ExtensionCert:
    """Certificate for the extension generated by a root of X^p - X - b."""
    root = as_root(b, ExtRat.of(Fraction(budget + 6)))
    sample = value_set(root.theta, K, budget, root.tail)
    dist_enc = distance(root.theta, K, budget, root.tail, sample)
    cert = ExtensionCert(
        ARTIN_SCHREIER,
        K,
        root.theta,
        root.tail,
        artin_schreier_poly(b),
        root.residual_floor,
        sample,
        dist_enc,
        Claims(),
        (f"as_extension b={_short_hash(b)} budget={budget}",),
    )
    return defect_criteria(cert)
