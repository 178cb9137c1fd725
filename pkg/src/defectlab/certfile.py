"""Certificate files: canonical JSON serialization, atomic writes, and
search-free re-verification.

Certificates carry their witnesses, so verification re-derives every
recorded claim from stored data alone: witness valuations are recomputed,
minimal-polynomial residuals are re-evaluated against the recorded floor,
cuts and defect arithmetic are recomputed, and the claim rules are
re-applied.  A verified file reproduces the stored verdicts bit for bit;
any divergence is reported as a structured diff.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Tuple

from .approx import InitialSegmentSample, TailSchema, distance
from .artin import Claims, ExtensionCert, KUMMER, defect_criteria
from .cuts import Cut, CutEnclosure, ExtRat
from .fields import FieldDesc, field_from_json
from .kummer import classify_kummer_defect
from .series import Polynomial, Series, SeriesContext

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SessionConfig:
    """Session parameters snapshotted into every certificate file."""

    mode: str
    p: int
    m: int
    D: int
    precision: Fraction
    budget: int

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "p": self.p,
            "m": self.m,
            "D": self.D,
            "precision": f"{self.precision.numerator}/{self.precision.denominator}",
            "budget": self.budget,
        }

    @staticmethod
    def from_json(obj: dict) -> "SessionConfig":
        return SessionConfig(
            obj["mode"], obj["p"], obj["m"], obj["D"], Fraction(obj["precision"]), obj["budget"]
        )

    @staticmethod
    def for_field(K: FieldDesc, budget: int, precision: Fraction = Fraction(8)) -> "SessionConfig":
        return SessionConfig(K.ctx.mode, K.ctx.p, K.ctx.m, K.ctx.D, precision, budget)


def series_to_json(s: Series) -> dict:
    return {
        "mode": s.ctx.mode,
        "terms": [
            {"exp": f"{e.numerator}/{e.denominator}", "coeff": s.ctx.field.repr_code(c)}
            for e, c in s.terms
        ],
        "precision": s.precision.to_json(),
    }


def series_from_json(obj: dict, ctx: SeriesContext) -> Series:
    if obj["mode"] != ctx.mode:
        raise ValueError(f"series mode {obj['mode']!r} does not match the session")
    terms = {
        Fraction(t["exp"]): ctx.field.parse_code(t["coeff"]) for t in obj["terms"]
    }
    return Series.make(ctx, terms, ExtRat.parse(obj["precision"]))


def poly_to_json(f: Polynomial) -> list:
    return [series_to_json(c) for c in f.coeffs]


def poly_from_json(obj: list, ctx: SeriesContext) -> Polynomial:
    return Polynomial.make(tuple(series_from_json(c, ctx) for c in obj))


def sample_to_json(s: InitialSegmentSample) -> dict:
    return {
        "realized": [
            {"value": v.to_json(), "witness": series_to_json(w)} for v, w in s.realized
        ],
        "upper": s.upper.to_json(),
        "no_max": s.no_max,
        "budget": s.budget,
    }


def sample_from_json(obj: dict, ctx: SeriesContext) -> InitialSegmentSample:
    realized = tuple(
        (ExtRat.parse(r["value"]), series_from_json(r["witness"], ctx))
        for r in obj["realized"]
    )
    return InitialSegmentSample(
        realized, Cut.from_json(obj["upper"]), obj["no_max"], obj["budget"]
    )


def cert_to_json(cert: ExtensionCert) -> dict:
    return {
        "kind": cert.kind,
        "base": cert.base.to_json(),
        "generator": series_to_json(cert.generator),
        "generator_tail": cert.generator_tail.to_json() if cert.generator_tail else None,
        "min_poly": poly_to_json(cert.min_poly),
        "residual_floor": cert.residual_floor.to_json(),
        "sample": sample_to_json(cert.sample),
        "dist": cert.dist.to_json(),
        "claims": cert.claims.to_json(),
        "provenance": list(cert.provenance),
    }


def cert_from_json(obj: dict) -> ExtensionCert:
    base = field_from_json(obj["base"])
    ctx = base.ctx
    return ExtensionCert(
        obj["kind"],
        base,
        series_from_json(obj["generator"], ctx),
        TailSchema.from_json(obj["generator_tail"]) if obj["generator_tail"] else None,
        poly_from_json(obj["min_poly"], ctx),
        ExtRat.parse(obj["residual_floor"]),
        sample_from_json(obj["sample"], ctx),
        CutEnclosure.from_json(obj["dist"]),
        Claims.from_json(obj["claims"]),
        tuple(obj["provenance"]),
    )


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class CertificateFile:
    version: int
    config: SessionConfig
    field: dict
    certs: Tuple[ExtensionCert, ...]
    log: Tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "config": self.config.to_json(),
            "field": self.field,
            "certs": [cert_to_json(c) for c in self.certs],
            "log": list(self.log),
        }


def make_certificate_file(
    K: FieldDesc, config: SessionConfig, certs, log=()
) -> CertificateFile:
    return CertificateFile(SCHEMA_VERSION, config, K.to_json(), tuple(certs), tuple(log))


def write_certificate_file(path: str, cf: CertificateFile) -> None:
    payload = json.dumps(cf.to_json(), sort_keys=True, indent=1)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cert-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_certificate_file(path: str) -> CertificateFile:
    with open(path) as fh:
        obj = json.load(fh)
    if obj["version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {obj['version']}")
    config = SessionConfig.from_json(obj["config"])
    certs = tuple(cert_from_json(c) for c in obj["certs"])
    return CertificateFile(obj["version"], config, obj["field"], certs, tuple(obj["log"]))


@dataclass
class VerifyReport:
    ok: bool
    diffs: List[str]

    def add(self, msg: str):
        self.ok = False
        self.diffs.append(msg)


def verify_certificate(cf: CertificateFile) -> VerifyReport:
    """Re-derive every recorded claim from stored witnesses alone.

    No searches are repeated: realized values come from recomputing the
    stored witness differences, the upper cut from the recorded support
    and tail data, the residual from re-evaluating the stored minimal
    polynomial, and the claims from re-running the (pure) rule functions
    on the reconstructed sample.
    """
    report = VerifyReport(True, [])
    for idx, cert in enumerate(cf.certs):
        tag = f"cert[{idx}]"
        ctx = cert.base.ctx
        if (ctx.mode, ctx.p, ctx.m, ctx.D) != (
            cf.config.mode,
            cf.config.p,
            cf.config.m,
            cf.config.D,
        ):
            report.add(f"{tag}: config-mismatch between the field and the session snapshot")
            continue
        try:
            _verify_one(cert, report, tag)
        except Exception as exc:  # a broken certificate must not crash the run
            report.add(f"{tag}: verification error: {exc}")
    return report


def _verify_one(cert: ExtensionCert, report: VerifyReport, tag: str):
    ctx = cert.base.ctx
    gen = cert.generator
    tail = cert.generator_tail

    # exponent denominators must respect the session bound (tamper check)
    for e in gen.support():
        if ctx.D % e.denominator != 0:
            report.add(f"{tag}: config-mismatch: generator exponent {e} exceeds D={ctx.D}")
            return

    # 1. witness re-evaluation
    horizon = min(gen.precision, ExtRat.of(tail.low)) if tail else gen.precision
    for v, w in cert.sample.realized:
        d = gen - w
        if not v.is_finite:
            if not (d.is_zero and not d.precision.is_finite):
                report.add(f"{tag}: witness for +inf does not reproduce an exact zero")
            continue
        if d.is_zero:
            report.add(f"{tag}: witness for {v} gives a zero difference")
            continue
        got = d.valuation()
        if got != v or not got < horizon:
            report.add(f"{tag}: witness re-evaluation gives {got}, stored {v}")

    # 2. upper cut from the stored support and tail flags
    candidates = []
    lattice = cert.base.support_lattice
    if lattice is not None:
        outside = [
            e
            for e in gen.support()
            if not lattice.contains(e) and (tail is None or e < tail.low)
        ]
        if outside:
            candidates.append(Cut(ExtRat.of(min(outside)), True))
    if tail is not None and tail.denominators_unbounded and cert.base.leveled:
        candidates.append(Cut(ExtRat.of(tail.sup), False))
    from .cuts import PLUS_INF

    upper = min(candidates) if candidates else Cut(PLUS_INF, False)
    if upper != cert.sample.upper:
        report.add(f"{tag}: upper cut re-derivation gives {upper}, stored {cert.sample.upper}")

    # 3. minimal polynomial residual within the recorded exception window:
    # a negative floor allows terms in [floor, 0) only (the telescoping
    # tail); otherwise the residual must vanish below the floor
    resid = cert.min_poly.evaluate(gen)
    floor = cert.residual_floor
    if floor.is_finite and floor.fraction < 0:
        bad = [e for e, _ in resid.terms if not (floor.fraction <= e < 0)]
    else:
        bad = [e for e, _ in resid.terms if ExtRat.of(e) < floor]
    if bad:
        report.add(f"{tag}: residual terms at {bad} violate the recorded floor {floor}")

    # 4. distance enclosure re-derivation
    try:
        dist = distance(gen, cert.base, cert.sample.budget, tail, cert.sample)
        if dist != cert.dist:
            report.add(f"{tag}: distance enclosure differs: {dist.to_json()} vs stored")
    except ValueError as exc:
        report.add(f"{tag}: distance re-derivation failed: {exc}")

    # 5. claims from the pure rule functions
    blank = replace(cert, claims=replace(cert.claims,
                                         immediate="unknown", immediate_rule="none",
                                         defect=None, defect_rule="none"))
    rederived = defect_criteria(blank)
    if cert.kind == KUMMER and cert.claims.classification != "unknown":
        rederived = classify_kummer_defect(rederived)
    got, want = rederived.claims, cert.claims
    for fieldname in ("immediate", "defect", "defect_rule", "classification"):
        if getattr(got, fieldname) != getattr(want, fieldname):
            report.add(
                f"{tag}: claim {fieldname} re-derives to {getattr(got, fieldname)!r}, "
                f"stored {getattr(want, fieldname)!r}"
            )
