import random
from fractions import Fraction

import pytest

from defectlab.artin import sigma_sample
from defectlab.cuts import Cut, CutEnclosure, ExtRat
from defectlab.fields import preset_field
from defectlab.kummer import (
    classify_kummer_defect,
    is_one_unit,
    kummer_family,
    lab_superdependent_unit,
    normalize_to_1unit,
    pth_power_difference_check,
    transform_mixed,
)
from defectlab.series import Series


def q(n, d=1):
    return Fraction(n, d)


QP2 = preset_field("qp", 2)
QT2 = preset_field("qp_pdiv_tower", 2, D=2 ** 16)


class TestPthPowerCheck:
    def test_half_exponent_example(self):
        ctx = QP2.ctx
        eta = Series.make(ctx, {q(0): 1, q(1, 2): 1}, ExtRat.of(q(8)))
        a = Series.one(ctx, ExtRat.of(q(8)))
        rep = pth_power_difference_check(eta, a)
        assert rep.precondition_holds
        assert rep.rhs == ExtRat.of(q(1))
        assert rep.lhs == ExtRat.of(q(1))
        assert rep.equation_holds

    def test_boundary_pair_nine_minus_one(self):
        ctx = QP2.ctx
        eta = Series.from_int(ctx, 3)
        a = Series.from_int(ctx, 1)
        rep = pth_power_difference_check(eta, a)
        assert not rep.precondition_holds
        assert rep.lhs == ExtRat.of(q(3))  # v(8)
        assert rep.rhs == ExtRat.of(q(2))  # 2 v(2)
        assert rep.equation_holds is False

    def test_degenerate(self):
        ctx = QP2.ctx
        eta = Series.from_int(ctx, 3)
        rep = pth_power_difference_check(eta, eta)
        assert not rep.precondition_holds and rep.equation_holds is None

    def test_random_admissible_pairs(self):
        rng = random.Random(31)
        ctx = QP2.ctx
        p = 2
        for _ in range(60):
            prec = ExtRat.of(q(12))
            base = {q(0): 1}
            for _ in range(rng.randint(0, 2)):
                base[Fraction(rng.randint(1, 8), rng.choice([1, 2, 4]))] = 1
            eta = Series.make(ctx, base, prec)
            vdelta = Fraction(rng.randint(1, 7), rng.choice([1, 2, 4, 8]))
            if vdelta >= 1:
                vdelta = Fraction(rng.randint(1, 7), 8)
            delta = Series.monomial(ctx, vdelta, 1, prec)
            a = eta - delta
            rep = pth_power_difference_check(eta, a)
            assert rep.precondition_holds
            assert rep.equation_holds, (eta, a, rep)


class TestNormalize:
    def test_already_unit(self):
        ctx = QT2.ctx
        eta = Series.make(ctx, {q(0): 1, q(1, 4): 1}, ExtRat.of(q(8)))
        res = normalize_to_1unit(eta, QT2, 3)
        assert res.unit == eta

    def test_value_match(self):
        ctx = QT2.ctx
        eta = Series.make(ctx, {q(1, 2): 1, q(3, 4): 1}, ExtRat.of(q(8)))
        res = normalize_to_1unit(eta, QT2, 3)
        assert is_one_unit(res.unit)
        assert res.c.valuation() == ExtRat.of(q(-1, 2))

    def test_residue_inversion_p3(self):
        K = preset_field("qp", 3)
        ctx = K.ctx
        eta = Series.make(ctx, {q(0): 2, q(1, 3): 1}, ExtRat.of(q(8)))
        res = normalize_to_1unit(eta, K, 3)
        assert is_one_unit(res.unit)
        assert res.d.leading_coeff() == 2  # 2^(-1) = 2 in F_3

    def test_unmatched_value_errors(self):
        ctx = QP2.ctx
        eta = Series.monomial(ctx, q(1, 2), 1, ExtRat.of(q(8)))
        with pytest.raises(ValueError):
            normalize_to_1unit(eta, QP2, 2)


class TestLabWitness:
    def test_shape(self):
        eta, tail = lab_superdependent_unit(QT2)
        assert is_one_unit(eta)
        assert tail.sup == q(1, 8)
        assert eta.terms[0] == (q(0), 1)
        assert eta.terms[1][0] == q(1, 16)

    def test_value_set(self):
        from defectlab.approx import value_set

        eta, tail = lab_superdependent_unit(QT2)
        s = value_set(eta, QT2, 4, tail)
        assert s.no_max == "proved"
        assert s.upper == Cut(ExtRat.of(q(1, 8)), False)
        vals = set(s.finite_values())
        assert q(1, 16) in vals and q(3, 32) in vals


class TestTransformMixed:
    def test_depth_guard(self):
        ctx = QT2.ctx
        # a lab unit with value set reaching up to 1/2 cannot pass vd = -1/4
        eta, tail = lab_superdependent_unit(QT2, sup=q(1, 2))
        d = Series.monomial(ctx, q(-1, 4), 1)
        with pytest.raises(ValueError):
            transform_mixed(eta, QT2, d, 4, tail)

    def test_transform_runs(self):
        ctx = QT2.ctx
        eta, tail = lab_superdependent_unit(QT2)
        d = Series.monomial(ctx, q(-1, 16), 1)
        tm = transform_mixed(eta, QT2, d, 4, tail)
        assert tm.theta_tilde.valuation() == ExtRat.of(0)
        gap = (tm.theta_tilde - eta).valuation()
        # the root correction enters at (v(p) + v(d))/p = 15/32
        assert gap == ExtRat.of(q(15, 32))
        assert len(tm.sample.realized) >= 2

    def test_quarter_depth_instance(self):
        # upper bound 1/8 sits below (v(p) + v(d))/p = 3/8 for v(d) = -1/4,
        # and the linear coefficient 2d has value 3/4 > 2 * (1/8)
        ctx = QT2.ctx
        eta, tail = lab_superdependent_unit(QT2)
        d = Series.monomial(ctx, q(-1, 4), 1)
        tm = transform_mixed(eta, QT2, d, 4, tail)
        checks = dict(tm.checks)
        assert checks["v_h_coeff_1"] == "3/4"
        assert (tm.theta_tilde - eta).valuation() == ExtRat.of(q(3, 8))


class TestKummerFamily:
    def test_five_members(self):
        eta, tail = lab_superdependent_unit(QT2)
        certs = kummer_family(eta, QT2, 5, 5, tail)
        assert len(certs) == 5
        sets = [frozenset(c.sample.finite_values()) for c in certs]
        assert len(set(sets)) == 5
        for cert in certs:
            assert cert.claims.classification == "super_dependent"
            assert cert.claims.defect == 2
            assert cert.claims.immediate == "proved"
            gen_minus_one = cert.generator - Series.one(QT2.ctx)
            assert gen_minus_one.valuation() > ExtRat.of(0)
            assert cert.dist.is_exact

    def test_sigma_on_kummer(self):
        eta, tail = lab_superdependent_unit(QT2)
        certs = kummer_family(eta, QT2, 1, 5, tail)
        sig = sigma_sample(certs[0], 2)
        assert all(v > ExtRat.of(0) for v, _ in sig.values)
        assert sig.verdict == "dependent_evidence"

    def test_family_of_ten(self):
        # the family size is limited only by the budget
        eta, tail = lab_superdependent_unit(QT2)
        certs = kummer_family(eta, QT2, 10, 7, tail)
        assert len(certs) == 10
        sets = [frozenset(c.sample.finite_values()) for c in certs]
        assert len(set(sets)) == 10
        assert all(c.claims.classification == "super_dependent" for c in certs)

    def test_translated_bounds_at_sup_one_thirtysecond(self):
        # with the value set bounded by 1/32, deep elements of values
        # -1/8 and -1/16 give members bounded by 1/32 + 1/8 and 1/32 + 1/16
        eta, tail = lab_superdependent_unit(QT2, sup=q(1, 32))
        certs = kummer_family(eta, QT2, 2, 4, tail)
        uppers = sorted(c.sample.upper.bound.fraction for c in certs)
        assert q(1, 32) + q(1, 16) in uppers
        offsets = {u - q(1, 32) for u in uppers}
        assert offsets <= {q(1, 16), q(1, 8), q(3, 32), q(1, 4), q(1, 32)}
        for c in certs:
            assert not c.sample.upper.attained


class TestClassify:
    def test_boundary_is_unknown(self):
        eta, tail = lab_superdependent_unit(QT2)
        certs = kummer_family(eta, QT2, 1, 5, tail)
        cert = certs[0]
        boundary = CutEnclosure(Cut(ExtRat.of(q(1, 100)), True), Cut(ExtRat.of(q(1)), False))
        from dataclasses import replace

        probe = replace(cert, dist=boundary)
        assert classify_kummer_defect(probe).claims.classification == "unknown"

    def test_bad_enclosure_rejected(self):
        eta, tail = lab_superdependent_unit(QT2)
        certs = kummer_family(eta, QT2, 1, 5, tail)
        from dataclasses import replace
        from defectlab.cuts import PLUS_INF

        bad = CutEnclosure(Cut(ExtRat.of(0), True), Cut(PLUS_INF, False))
        probe = replace(certs[0], dist=bad)
        with pytest.raises(ValueError):
            classify_kummer_defect(probe)
