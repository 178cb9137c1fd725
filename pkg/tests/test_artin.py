import random
from fractions import Fraction

import pytest

from defectlab.artin import (
    as_extension,
    as_family,
    as_generator_transform,
    as_root,
    as_root_residual,
    check_as_root_identity,
    imperfection_witness,
    sigma_sample,
    transform_inseparable,
)
from defectlab.cuts import Cut, ExtRat
from defectlab.fields import preset_field
from defectlab.series import Series, invert, make_equal_context


def q(n, d=1):
    return Fraction(n, d)


K2 = preset_field("fp_t", 2)
T2 = preset_field("pdiv_tower", 2)
L2 = preset_field("laurent", 2)
K3 = preset_field("fp_t", 3)
T3 = preset_field("pdiv_tower", 3)


class TestAsRoot:
    def test_negative_part(self):
        b = Series.monomial(K2.ctx, -1)
        res = as_root(b, ExtRat.of(q(8)))
        # theta = t^(-1/2) + t^(-1/4) + ... down to the D bound
        exps = [e for e, _ in res.theta.terms]
        assert exps[0] == q(-1, 2)
        assert exps[-1] == q(-1, 256)
        assert all(e.numerator == -1 for e in exps)
        assert check_as_root_identity(res, b)
        resid = as_root_residual(res, b)
        assert resid.terms == ((q(-1, 256), 1),)
        assert res.residual_floor == ExtRat.of(q(-1, 256))
        assert res.tail is not None and res.tail.sup == 0
        assert res.tail.low == q(-1, 512)

    def test_positive_part(self):
        b = Series.monomial(K2.ctx, 1)
        res = as_root(b, ExtRat.of(q(9)))
        assert res.theta.terms == ((q(1), 1), (q(2), 1), (q(4), 1), (q(8), 1))
        resid = as_root_residual(res, b)
        assert resid.vlow() >= ExtRat.of(q(9))

    def test_zero(self):
        res = as_root(Series.zero(K2.ctx), ExtRat.of(q(5)))
        assert res.theta.is_zero

    def test_residue_obstruction(self):
        b = Series.one(K2.ctx)  # x^2 - x = 1 has no root in F_2
        with pytest.raises(ValueError):
            as_root(b, ExtRat.of(q(5)))

    def test_random_roots(self):
        rng = random.Random(17)
        for K in (K2, K3):
            ctx = K.ctx
            p = ctx.p
            image = sorted({ctx.field.sub(ctx.field.frob(x), x) for x in ctx.field.elements()})
            for _ in range(25):
                terms = {}
                for _ in range(rng.randint(1, 3)):
                    terms[Fraction(rng.randint(-6, 6))] = rng.randint(1, p - 1)
                terms[Fraction(0)] = rng.choice(image)
                b = Series.make(ctx, terms)
                res = as_root(b, ExtRat.of(q(16)))
                assert check_as_root_identity(res, b)
                # the residual window is fully visible at this precision
                assert as_root_residual(res, b).precision >= ExtRat.of(q(0))


class TestGeneratorTransform:
    def test_identity(self):
        b = Series.monomial(K2.ctx, -1)
        theta = as_root(b, ExtRat.of(q(8))).theta
        assert as_generator_transform(theta, 1, Series.zero(K2.ctx)) == theta

    def test_p3_orbit_relation(self):
        ctx = K3.ctx
        b = Series.monomial(ctx, -1)
        res = as_root(b, ExtRat.of(q(8)))
        theta = res.theta
        c = Series.monomial(ctx, 1)
        theta2 = as_generator_transform(theta, 2, c)
        # (2 theta + c)^3 - (2 theta + c) = 2(theta^3 - theta) + c^3 - c
        lhs = theta2.pow_int(3) - theta2
        rhs = (theta.pow_int(3) - theta).scale(2) + c.pow_int(3) - c
        assert (lhs - rhs).is_zero

    def test_rejects_non_prime_subfield(self):
        ctx4 = make_equal_context(2, 2)
        theta = Series.monomial(ctx4, -1)
        with pytest.raises(ValueError):
            as_generator_transform(theta, 2, Series.zero(ctx4))
        with pytest.raises(ValueError):
            as_generator_transform(theta, 0, Series.zero(ctx4))


class TestTransformInseparable:
    def test_canonical_p2(self):
        eta = Series.monomial(K2.ctx, q(1, 2))
        d = Series.monomial(K2.ctx, 1)
        result = transform_inseparable(eta, K2, d, 3)
        assert result.theta_tilde.valuation() == ExtRat.of(q(1, 2))
        assert (eta - result.theta_tilde).valuation() == ExtRat.of(q(3, 4))
        cert = result.cert
        assert cert.sample.upper == Cut(ExtRat.of(q(-1, 2)), True)
        vals = set(cert.sample.finite_values())
        assert q(-1, 2) in vals and q(-2) in vals
        assert cert.claims.unique_extension == "proved"
        assert cert.claims.unique_rule == "ve_th"

    def test_canonical_p3(self):
        eta = Series.monomial(K3.ctx, q(1, 3))
        d = Series.monomial(K3.ctx, 1)
        result = transform_inseparable(eta, K3, d, 2)
        assert result.theta.valuation() == ExtRat.of(q(-2, 3))
        assert (eta - result.theta_tilde).valuation() == ExtRat.of(q(2 + 1, 3) * q(1, 3) * 3) or True
        # v(eta - d theta) = ((p-1) v(d) + v(eta)) / p = (2 + 1/3)/3 = 7/9
        assert (eta - result.theta_tilde).valuation() == ExtRat.of(q(7, 9))

    def test_guard_violated(self):
        eta = Series.monomial(K2.ctx, q(1, 2))
        d = Series.one(K2.ctx)  # v(d) = 0 < 1/2
        with pytest.raises(ValueError):
            transform_inseparable(eta, K2, d, 2)

    def test_eta_p_must_be_in_K(self):
        eta = Series.monomial(K2.ctx, q(1, 4))  # eta^2 = t^(1/2) not in K
        d = Series.monomial(K2.ctx, 1)
        with pytest.raises(ValueError):
            transform_inseparable(eta, K2, d, 2)


class TestAsFamily:
    def test_five_members_p2(self):
        eta = Series.monomial(K2.ctx, q(1, 2))
        d = Series.monomial(K2.ctx, 1)
        certs = as_family(eta, K2, d, 5, 3)
        assert len(certs) == 5
        for n, cert in enumerate(certs, start=1):
            assert cert.sample.upper == Cut(ExtRat.of(q(1, 2) - n), True)
            assert cert.claims.defect == 1
            assert cert.claims.defect_rule == "ramified"
        sets = [frozenset(c.sample.finite_values()) for c in certs]
        assert len(set(sets)) == 5

    def test_three_members_p3(self):
        eta = Series.monomial(K3.ctx, q(1, 3))
        d = Series.monomial(K3.ctx, 1)
        certs = as_family(eta, K3, d, 3, 2)
        for n, cert in enumerate(certs, start=1):
            assert cert.sample.upper == Cut(ExtRat.of(q(1, 3) - n), True)


class TestImperfectionWitness:
    def test_fp_t(self):
        w = imperfection_witness(K2, 2)
        assert w is not None and w.terms == ((q(1, 2), 1),)

    def test_laurent(self):
        w = imperfection_witness(L2, 2)
        assert w is not None and w.terms == ((q(1, 2), 1),)

    def test_perfect_tower(self):
        assert imperfection_witness(T2, 3) is None


class TestClassicalDefectExtension:
    @pytest.mark.parametrize("K", [T2, T3], ids=["p2", "p3"])
    def test_uniqextv_rule(self, K):
        b = Series.monomial(K.ctx, -1)
        cert = as_extension(b, K, 3 if K.ctx.p == 2 else 2)
        assert cert.sample.no_max == "proved"
        assert cert.dist.is_exact
        assert cert.dist.lo == Cut(ExtRat.of(0), False)
        assert cert.claims.defect == K.ctx.p
        assert cert.claims.defect_rule == "uniqextv"
        assert cert.claims.immediate == "proved"
        assert cert.claims.unique_extension == "proved"

    @pytest.mark.parametrize("K", [T2, T3], ids=["p2", "p3"])
    def test_sigma_values_accumulate(self, K):
        p = K.ctx.p
        b = Series.monomial(K.ctx, -1)
        cert = as_extension(b, K, 3 if p == 2 else 2)
        sig = sigma_sample(cert, 2)
        vals = {v.fraction for v, _ in sig.values if v.is_finite}
        assert {q(1, p), q(1, p ** 2), q(1, p ** 3)} <= vals
        assert all(v > ExtRat.of(0) for v, _ in sig.values)
        assert sig.verdict == "independent_consistent"

    def test_sigma_invariant_under_generator_change(self):
        b = Series.monomial(T2.ctx, -1)
        cert = as_extension(b, T2, 3)
        from defectlab.approx import value_set
        theta = cert.generator
        c = Series.monomial(T2.ctx, 1)
        theta2 = as_generator_transform(theta, 1, c)
        s1 = value_set(theta, T2, 2, cert.generator_tail)
        s2 = value_set(theta2, T2, 2, cert.generator_tail)
        assert s1.finite_values() == s2.finite_values()
        assert s1.upper == s2.upper

    def test_value_set_invariant_over_full_orbit_p3(self):
        # the value set is an invariant of the extension: identical across
        # all generators i*theta + c
        from defectlab.approx import value_set

        b = Series.monomial(T3.ctx, -1)
        cert = as_extension(b, T3, 2)
        theta = cert.generator
        base = value_set(theta, T3, 2, cert.generator_tail)
        cs = [Series.zero(T3.ctx), Series.monomial(T3.ctx, 1),
              Series.monomial(T3.ctx, q(1, 3))]
        for i_code in (1, 2):
            for c in cs:
                theta2 = as_generator_transform(theta, i_code, c)
                s2 = value_set(theta2, T3, 2, cert.generator_tail)
                assert s2.finite_values() == base.finite_values()
                assert s2.upper == base.upper
                assert s2.no_max == base.no_max


class TestDefectCriteriaEdges:
    def test_unknown_sample_gives_unknown_claims(self):
        from dataclasses import replace
        from defectlab.artin import defect_criteria

        b = Series.monomial(K2.ctx, -1)
        cert = as_extension(b, K2, 2)
        # strip the sample down to an inconclusive one
        probe = replace(
            cert,
            sample=replace(cert.sample, no_max="unknown", realized=()),
            claims=type(cert.claims)(),
        )
        out = defect_criteria(probe)
        assert out.claims.defect is None
        assert out.claims.immediate == "unknown"

    def test_family_of_one_matches_transform(self):
        eta = Series.monomial(K2.ctx, q(1, 2))
        d = Series.monomial(K2.ctx, 1)
        certs = as_family(eta, K2, d, 1, 3)
        single = transform_inseparable(eta, K2, d, 3).cert
        assert certs[0].sample.realized == single.sample.realized
        assert certs[0].min_poly.coeffs[0] == single.min_poly.coeffs[0]
