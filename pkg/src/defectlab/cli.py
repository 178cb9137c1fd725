"""Command-line surface: build laboratory fields, sample distances,
survey the semitame conditions, generate certified extension families,
and re-verify certificate files.

Exit codes: 0 when every claim checked out, 2 when a claim was refuted
(with the counterexample stored or printed), 3 when the run was
inconclusive at the given budget, 64 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from .approx import distance, semitame_report, value_set
from .artin import as_extension, as_family, imperfection_witness, sigma_sample
from .certfile import (
    SessionConfig,
    make_certificate_file,
    read_certificate_file,
    verify_certificate,
    write_certificate_file,
)
from .cuts import ExtRat
from .fields import PRESET_NAMES, FieldDesc, preset_field
from .kummer import kummer_family, lab_superdependent_unit
from .series import ConvergenceError, PrecisionError, Series

EX_OK = 0
EX_REFUTED = 2
EX_INCONCLUSIVE = 3
EX_USAGE = 64


def _build_field(args) -> FieldDesc:
    D = args.D if getattr(args, "D", None) else None
    if args.base == "qp_pdiv_tower" and D is None:
        # deep root refinement needs a finer exponent grid
        D = args.p ** 16
    return preset_field(args.base, args.p, args.q_power, D)


def _canonical_element(K: FieldDesc, budget: int):
    """The preset's standard demonstration element with its tail data."""
    if K.ctx.mode == "equal":
        if K.perfect:
            from .artin import as_root

            b = Series.monomial(K.ctx, -1)
            root = as_root(b, ExtRat.of(Fraction(budget + 6)))
            return root.theta, root.tail, "root of X^p - X - t^(-1)"
        w = imperfection_witness(K, budget)
        return w, None, "p-th root of the first imperfect element"
    if K.name == "qp":
        return Series.monomial(K.ctx, Fraction(1, K.ctx.p)), None, "p^(1/p)"
    eta, tail = lab_superdependent_unit(K)
    return eta, tail, "laboratory 1-unit"


def cmd_field(args) -> int:
    K = _build_field(args)
    print(f"preset {K.name}: kind={K.kind}, residue field F_{K.residue_q}, "
          f"mode={K.ctx.mode}, D={K.ctx.D}")
    print(f"  value group: generated by {[str(g) for g in K.value_group.generators]}"
          f"{' (p-divisible closure)' if K.value_group.p_divisible_closure else ''}")
    print(f"  flags: leveled={K.leveled} perfect={K.perfect} complete={K.complete}")
    from .fields import enumerate_elements

    els = enumerate_elements(K, 1)
    shown = ", ".join(str(e) for e in els[:6])
    print(f"  first elements at height 1: {shown}")
    return EX_OK


def _session(K: FieldDesc, args) -> SessionConfig:
    return SessionConfig.for_field(K, args.budget, Fraction(args.precision))


def cmd_distance(args) -> int:
    K = _build_field(args)
    a, tail, desc = _canonical_element(K, args.budget)
    if a is None:
        print("no canonical element available (field is perfect); nothing to measure")
        return EX_INCONCLUSIVE
    sample = value_set(a, K, args.budget, tail)
    enc = distance(a, K, args.budget, tail, sample)
    print(f"element: {desc}")
    vals = ", ".join(str(v) for v in sample.values())
    print(f"realized values ({len(sample.realized)}): {vals}")
    print(f"upper cut: {sample.upper}, no_max: {sample.no_max}")
    print(f"distance enclosure: [{enc.lo}, {enc.hi}]"
          + ("  (exact)" if enc.is_exact else ""))
    if args.out:
        cf = make_certificate_file(K, _session(K, args), [],
                                   log=[f"distance {desc}: [{enc.lo}, {enc.hi}]"])
        write_certificate_file(args.out, cf)
        print(f"wrote {args.out}")
    return EX_OK if enc.is_exact or sample.upper.bound.is_finite else EX_INCONCLUSIVE


def cmd_semitame(args) -> int:
    K = _build_field(args)
    report = semitame_report(K, args.budget)
    order = ["drst", "residue_perfect", "a", "b", "c", "d", "e", "f"]
    from .approx import CONDITION_NAMES

    refuted = False
    unknown = False
    for key in order:
        v = report[key]
        refuted |= v.status == "refuted"
        unknown |= v.status == "unknown"
        witness = f"  witness: {v.witness}" if v.witness is not None else ""
        print(f"({key}) {CONDITION_NAMES[key]}: {v.status}{witness}")
        if v.note:
            print(f"      {v.note}")
    if args.out:
        log = [f"({k}) {report[k].status}" for k in order]
        cf = make_certificate_file(K, _session(K, args), [], log=log)
        write_certificate_file(args.out, cf)
        print(f"wrote {args.out}")
    if refuted:
        return EX_REFUTED
    if unknown:
        return EX_INCONCLUSIVE
    return EX_OK


def _print_cert_table(certs) -> None:
    print(f"{'#':>2} {'kind':<14} {'v-set max':>10} {'upper':>12} {'no_max':>8} "
          f"{'defect':>6} {'rule':>10} {'class':>15}")
    for i, cert in enumerate(certs, start=1):
        mx = cert.sample.max_realized()
        print(
            f"{i:>2} {cert.kind:<14} {str(mx):>10} {str(cert.sample.upper):>12} "
            f"{cert.sample.no_max:>8} {str(cert.claims.defect):>6} "
            f"{cert.claims.defect_rule:>10} {cert.claims.classification:>15}"
        )


def cmd_asfamily(args) -> int:
    K = _build_field(args)
    if K.ctx.mode != "equal":
        print("asfamily runs in equal characteristic", file=sys.stderr)
        return EX_USAGE
    eta = imperfection_witness(K, args.budget)
    if eta is None:
        if K.perfect:
            print("imperfection witness: none (field certified perfect); "
                  "no Artin-Schreier family from this route")
            return EX_OK
        print("no imperfection witness at this budget")
        return EX_INCONCLUSIVE
    print(f"imperfection witness: {eta}")
    # the first enumerated element of K with large enough value
    veta = eta.valuation().fraction
    sample = value_set(eta, K, args.budget)
    upper = sample.upper.bound.fraction
    p = K.ctx.p
    need = (p * upper - veta) / (p - 1)
    d = Series.monomial(K.ctx, _first_admissible_value(need))
    print(f"twist element d with v(d) = {d.valuation()}")
    certs = as_family(eta, K, d, args.n, args.budget)
    _print_cert_table(certs)
    if args.out:
        cf = make_certificate_file(K, _session(K, args), certs)
        write_certificate_file(args.out, cf)
        print(f"wrote {args.out}")
    return EX_OK


def _first_admissible_value(strict_above: Fraction) -> Fraction:
    v = Fraction(max(1, int(strict_above) + 1))
    while not v > strict_above:
        v += 1
    return v


def cmd_kummerfamily(args) -> int:
    K = _build_field(args)
    if K.ctx.mode != "mixed" or not K.leveled:
        print("kummerfamily runs over the deep p-adic tower preset", file=sys.stderr)
        return EX_USAGE
    eta, tail = lab_superdependent_unit(K)
    print(f"laboratory 1-unit: {eta}")
    certs = kummer_family(eta, K, args.n, args.budget, tail)
    _print_cert_table(certs)
    for cert in certs:
        for name, val in cert.claims.bounds:
            if name == "super_dependent_bound":
                print(f"  recorded bound v(eta_td - K) < {val}")
    if args.out:
        cf = make_certificate_file(K, _session(K, args), certs)
        write_certificate_file(args.out, cf)
        print(f"wrote {args.out}")
    return EX_OK


def cmd_sigma(args) -> int:
    K = _build_field(args)
    if K.ctx.mode != "equal":
        print("the sigma survey here runs on the classical equal-characteristic "
              "extension; use kummerfamily for the mixed side", file=sys.stderr)
        return EX_USAGE
    b = Series.monomial(K.ctx, -1)
    cert = as_extension(b, K, args.budget)
    sig = sigma_sample(cert, args.budget)
    vals = ", ".join(str(v) for v, _ in sig.values)
    print(f"extension: X^{K.ctx.p} - X - t^(-1) over {K.name}")
    print(f"sigma values: {vals}")
    print(f"verdict: {sig.verdict}")
    if args.out:
        cf = make_certificate_file(K, _session(K, args), [cert],
                                   log=[f"sigma verdict: {sig.verdict}"])
        write_certificate_file(args.out, cf)
        print(f"wrote {args.out}")
    if sig.verdict == "unknown":
        return EX_INCONCLUSIVE
    return EX_OK if sig.verdict == "independent_consistent" else EX_REFUTED


def cmd_verify(args) -> int:
    try:
        cf = read_certificate_file(args.file)
    except Exception as exc:
        print(f"cannot load certificate file: {exc}", file=sys.stderr)
        return EX_REFUTED
    report = verify_certificate(cf)
    if report.ok:
        print(f"verified: {len(cf.certs)} certificate(s), all claims reproduced")
        return EX_OK
    print("verification FAILED:")
    for d in report.diffs:
        print(f"  {d}")
    return EX_REFUTED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="defectlab",
        description="exact-arithmetic laboratory for valued-field extension certificates",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, default=2, dest="p")
        sp.add_argument("--q", type=int, default=None,
                        help="residue field size p^m (default p)")
        sp.add_argument("--mode", choices=["equal", "mixed"], default=None,
                        help="informational; the preset fixes the mode")
        sp.add_argument("--base", choices=PRESET_NAMES, default="fp_t")
        sp.add_argument("--precision", type=str, default="8")
        sp.add_argument("--height", type=int, default=None,
                        help="enumeration height (defaults to budget)")
        sp.add_argument("--budget", type=int, default=3)
        sp.add_argument("--n", type=int, default=5)
        sp.add_argument("--D", type=int, default=None,
                        help="exponent denominator bound")
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property surveys")

    for name, fn in [
        ("field", cmd_field),
        ("distance", cmd_distance),
        ("semitame", cmd_semitame),
        ("asfamily", cmd_asfamily),
        ("kummerfamily", cmd_kummerfamily),
        ("sigma", cmd_sigma),
    ]:
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)

    vp = sub.add_parser("verify")
    vp.add_argument("file")
    vp.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EX_USAGE if exc.code not in (0, None) else 0
    if hasattr(args, "q") and args.q is not None:
        p, q, m = args.p, args.q, 0
        while q > 1 and q % p == 0:
            q //= p
            m += 1
        if q != 1 or m < 1:
            print(f"--q must be a power of --p", file=sys.stderr)
            return EX_USAGE
        args.q_power = m
    elif hasattr(args, "p"):
        args.q_power = 1
    if hasattr(args, "height") and args.height is not None:
        args.budget = args.height
    try:
        return args.func(args)
    except (ConvergenceError, PrecisionError) as exc:
        print(f"inconclusive at this budget: {exc}", file=sys.stderr)
        return EX_INCONCLUSIVE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except AssertionError as exc:
        print(f"claim check failed: {exc}", file=sys.stderr)
        return EX_REFUTED


if __name__ == "__main__":
    sys.exit(main())
