#!/usr/bin/env python3
"""Survey the equal-characteristic pipeline across the laboratory presets.

For each preset the script reports the semitame condition verdicts, the
imperfection witness (when one exists), and a family of certified
Artin-Schreier extensions built from it.  A perfect base field correctly
yields no witness and no family.
"""

import argparse
from fractions import Fraction

from defectlab.approx import semitame_report, value_set
from defectlab.artin import as_family, imperfection_witness
from defectlab.fields import preset_field
from defectlab.series import Series


def survey(preset: str, p: int, n: int, budget: int) -> None:
    K = preset_field(preset, p)
    print(f"\n=== {preset} (p = {p}) ===")
    rep = semitame_report(K, budget)
    line = ", ".join(f"({k}) {rep[k].status}" for k in ("a", "c", "d", "e", "f"))
    print(f"conditions: {line}")

    eta = imperfection_witness(K, budget)
    if eta is None:
        print("imperfection witness: none" + (" (perfect)" if K.perfect else ""))
        return
    print(f"imperfection witness: {eta}")
    sample = value_set(eta, K, budget)
    upper = sample.upper.bound.fraction
    need = (p * upper - eta.valuation().fraction) / (p - 1)
    vd = Fraction(max(1, int(need) + 1))
    while not vd > need:
        vd += 1
    d = Series.monomial(K.ctx, vd)
    certs = as_family(eta, K, d, n, budget)
    for i, cert in enumerate(certs, start=1):
        print(f"  member {i}: upper {cert.sample.upper}, defect {cert.claims.defect} "
              f"({cert.claims.defect_rule})")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--budget", type=int, default=3)
    args = ap.parse_args()
    for preset in ("fp_t", "laurent", "pdiv_tower"):
        survey(preset, args.p, args.n, args.budget)


if __name__ == "__main__":
    main()
