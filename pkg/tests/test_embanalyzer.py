"""Embedding verdicts against hand-computed exponent arithmetic."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
import hypothesis.strategies as st

from gsembed import (
    Band,
    EmbeddingProblem,
    INF,
    Target,
    compact_not_nuclear_band,
    compactness,
    criterion_sequence,
    decompose,
    delta_gap,
    dual_star,
    ellr_membership,
    en_A,
    entropy_rate,
    ext,
    geometric,
    log_power,
    membership_partial_sums,
    nuclearity,
    parse,
    recip,
    tong,
)

from conftest import banach_exponents

HALF = Fraction(1, 2)


class TestExponentArithmetic:
    def test_ext_parses_strings(self):
        assert ext("inf") == INF
        assert ext("3/2") == Fraction(3, 2)
        assert ext(2) == Fraction(2)
        assert ext(0.5) == HALF
        with pytest.raises(TypeError):
            ext(object())

    def test_recip_endpoints(self):
        assert recip(INF) == 0
        assert recip(Fraction(0)) == INF
        assert recip(Fraction(2, 3)) == Fraction(3, 2)

    def test_dual_star_values(self):
        assert dual_star(2, 3) == INF
        assert dual_star(3, 2) == 6
        assert dual_star("inf", 1) == 1
        assert dual_star(1, "inf") == INF
        assert dual_star(2, 2) == INF

    def test_tong_values(self):
        assert tong(1, "inf") == INF
        assert tong("inf", 1) == 1
        assert tong(2, 2) == 1
        assert tong(4, 2) == 1
        assert tong(2, 4) == Fraction(4, 3)

    def test_tong_rejects_quasi_banach(self):
        with pytest.raises(ValueError):
            tong(HALF, 2)

    @given(banach_exponents, banach_exponents)
    def test_tong_below_dual_star(self, r1, r2):
        # on reciprocals: 1/tong >= 1/dual_star, equality only at {1, inf}
        t, s = tong(r1, r2), dual_star(r1, r2)
        assert recip(t) >= recip(s)
        if {ext(r1), ext(r2)} == {Fraction(1), INF}:
            assert recip(t) == recip(s)
        else:
            assert recip(t) > recip(s)

    def test_delta_gap(self):
        assert delta_gap(2, 1, 0, "inf", 1) == 1
        assert delta_gap(1, 2, 1, 2, 3) == 0


class TestProblems:
    def test_string_weights_are_parsed(self):
        pr = EmbeddingProblem("2^(j)", "1", 1, 1, "inf", "inf", 1)
        assert decompose(pr.sigma).rate == 1
        assert pr.p2 == INF

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            EmbeddingProblem(geometric(1), geometric(0), 0, 1, 1, 1, 1)
        with pytest.raises(ValueError):
            EmbeddingProblem(geometric(1), geometric(0), 1, 1, 1, 1, 0)
        with pytest.raises(ValueError):
            EmbeddingProblem(geometric(1), geometric(0), 1, 1, 1, 1, 1, scale="X")

    def test_is_banach(self):
        assert EmbeddingProblem("1", "1", 1, "inf", 2, 2, 1).is_banach()
        assert not EmbeddingProblem("1", "1", HALF, 1, 2, 2, 1).is_banach()

    def test_target_validation(self):
        with pytest.raises(ValueError):
            Target("ball")
        with pytest.raises(ValueError):
            Target("ell")
        assert str(Target("ell", INF)) == "ell_inf"
        assert str(Target("c0")) == "c0"


class TestCriterionSequence:
    def test_compact_rate_and_target(self):
        pr = EmbeddingProblem("2^(j)", "1", 1, 2, 2, 1, 1)
        expr, target = criterion_sequence(pr, "compact")
        # -1 from the weights, +1/2 conjugation, dual_star(1,2)=inf adds 0
        assert decompose(expr).rate == -HALF
        assert target == Target("ell", Fraction(2))

    def test_nuclear_rate_and_target(self):
        pr = EmbeddingProblem("2^(j)", "1", 1, 2, 2, 1, 1)
        expr, target = criterion_sequence(pr, "nuclear")
        # tong(1,2)=2 contributes 1/2 on top of the compact rate,
        # and tong(2,1)=1 closes the fine target down to ell_1
        assert decompose(expr).rate == 0
        assert target == Target("ell", Fraction(1))

    def test_c0_target_when_fine_gap_closed(self):
        pr = EmbeddingProblem("2^(j)", "1", 2, 1, 2, 1, 1)
        _, target = criterion_sequence(pr, "compact")
        assert target == Target("c0")

    def test_kind_checked(self):
        pr = EmbeddingProblem("1", "1", 1, 1, 1, 1, 1)
        with pytest.raises(ValueError):
            criterion_sequence(pr, "trace")


class TestMembership:
    def test_geometric_decay(self):
        v = ellr_membership(geometric(-1), Target("ell", Fraction(2)))
        assert v.status == "holds"

    def test_log_boundary_is_exact(self):
        inside = ellr_membership(log_power(-1), Target("ell", Fraction(2)))
        boundary = ellr_membership(log_power(-HALF), Target("ell", Fraction(2)))
        assert inside.status == "holds"
        assert boundary.status == "fails"

    def test_c0_and_ell_inf_split_at_constant(self):
        assert ellr_membership(log_power(0), Target("c0")).status == "fails"
        assert ellr_membership(log_power(0), Target("ell", INF)).status == "holds"
        assert ellr_membership(log_power(-1), Target("c0")).status == "holds"
        assert ellr_membership(log_power(1), Target("ell", INF)).status == "fails"

    def test_growth_fails_everything(self):
        for t in (Target("ell", Fraction(1)), Target("c0"), Target("ell", INF)):
            assert ellr_membership(geometric(HALF), t).status == "fails"

    @given(st.data())
    def test_nonzero_rate_decides(self, data):
        from conftest import canonical_exprs

        e, r, _ = data.draw(canonical_exprs())
        assume(r != 0)
        v = ellr_membership(e, Target("ell", Fraction(2)))
        assert v.status == ("holds" if r < 0 else "fails")

    def test_partial_sums_track_convergence(self):
        out = membership_partial_sums(geometric(-1), Target("ell", Fraction(1)))
        sums = out["partial_sums"]
        totals = [t for _, t in sums]
        assert totals == sorted(totals)
        assert totals[-1] == pytest.approx(2.0, abs=1e-3)

    def test_partial_sums_saturate_on_growth(self):
        out = membership_partial_sums(geometric(2), Target("ell", Fraction(1)))
        assert out["partial_sums"][-1][1] == INF

    def test_sup_samples_for_c0(self):
        out = membership_partial_sums(log_power(-1), Target("c0"))
        vals = [v for _, v in out["samples"]]
        assert vals == sorted(vals, reverse=True)
        assert vals[-1] < 0.01


class TestCompactness:
    def test_classical_threshold(self):
        holds = EmbeddingProblem("2^(2*j)", "1", 1, 1, "inf", "inf", 1)
        boundary = EmbeddingProblem("2^(j)", "1", 1, 1, "inf", "inf", 1)
        assert compactness(holds).status == "holds"
        assert compactness(boundary).status == "fails"

    def test_quasi_banach_allowed(self):
        pr = EmbeddingProblem("2^(j)", "1", HALF, HALF, 1, 1, 1)
        # gap 1 vs d(1/p1-1/p2)+ = 1: boundary, so not compact
        assert compactness(pr).status == "fails"

    def test_evidence_carries_criterion(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, 1, "inf", "inf", 1)
        v = compactness(pr)
        assert "criterion" in v.evidence
        assert v.tag == "sequence-compactness-criterion"

    def test_f_scale_sandwich_agrees_when_clear(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 2, 1, 3, 4, 1, scale="F")
        v = compactness(pr)
        assert v.status == "holds"
        assert v.tag == "via-B-sandwich"

    def test_f_scale_boundary_is_inconclusive(self):
        # fine-index boundary: criterion (1+j)^(-1/2) lands between the
        # sandwich targets ell_1 (fails) and c0 (holds)
        pr = EmbeddingProblem("(1+j)^1/2", "1", 2, "inf", 2, 1, 1, scale="F")
        v = compactness(pr)
        assert v.status == "inconclusive"
        assert v.evidence["sufficient_status"] == "fails"
        assert v.evidence["necessary_status"] == "holds"


class TestNuclearity:
    def test_classical_threshold(self):
        # for p1=inf, p2=1 the nuclearity threshold sits at gap zero
        holds = EmbeddingProblem("2^(2*j)", "1", "inf", "inf", 1, 1, 1)
        boundary = EmbeddingProblem("1", "1", "inf", "inf", 1, 1, 1)
        assert nuclearity(holds).status == "holds"
        assert nuclearity(boundary).status == "fails"

    def test_quasi_banach_rejected(self):
        pr = EmbeddingProblem("2^(4*j)", "1", HALF, 1, 2, 2, 1)
        with pytest.raises(ValueError):
            nuclearity(pr)

    def test_f_scale_boyd_route(self):
        pr = EmbeddingProblem("2^(3*j)", "1", 2, 1, 3, 4, 2, scale="F")
        v = nuclearity(pr)
        assert v.status == "holds"
        assert v.tag == "boyd-sandwich-f-scale"
        assert v.evidence["boyd_exact"]

    def test_f_scale_zero_rate_is_inconclusive(self):
        pr = EmbeddingProblem("2^(j)", "1", 1, 1, "inf", "inf", 1, scale="F")
        v = nuclearity(pr)
        assert v.status == "inconclusive"


class TestBand:
    def test_generic_band(self):
        band = compact_not_nuclear_band(2, 3, 1)
        assert band.lower == 0
        assert band.upper == Fraction(5, 6)
        assert not band.empty

    def test_extreme_pairs_collapse(self):
        assert compact_not_nuclear_band(1, "inf", 3).empty
        b = compact_not_nuclear_band("inf", 1, 2)
        assert b.lower == b.upper == 2
        assert b.empty

    @given(banach_exponents, banach_exponents, st.integers(1, 4))
    def test_band_is_ordered(self, p1, p2, d):
        band = compact_not_nuclear_band(p1, p2, d)
        assert band.upper >= band.lower >= 0

    def test_interior_point_separates_verdicts(self):
        # delta = 2/3 sits inside (0, 5/6]
        pr = EmbeddingProblem("2^(2/3*j)", "1", 2, 1, 3, 1, 1)
        assert compactness(pr).status == "holds"
        assert nuclearity(pr).status == "fails"


class TestEntropyRate:
    def test_non_limiting_ratio_law(self):
        pr = EmbeddingProblem("2^(2*j)*(1+j)", "(1+j)^3", 2, 2, 2, 2, 2)
        r = entropy_rate(pr)
        assert r.kind == "non-limiting"
        assert r.k_exponent == 1
        assert r.log_exponent == -2
        assert r.residual is None

    def test_non_limiting_carries_sv_residual(self):
        pr = EmbeddingProblem("2^(j)*exp(1/2*log(1+j)^1/2)", "1",
                              2, 2, 2, 2, 1)
        r = entropy_rate(pr)
        assert r.kind == "non-limiting"
        assert r.k_exponent == 1
        assert "exp(" in r.residual

    def test_limiting_log(self):
        pr = EmbeddingProblem("2^(j)*(1+j)", "2^(j)", 1, 1, 1, 1, 1)
        r = entropy_rate(pr)
        assert r.kind == "limiting-log"
        assert (r.k_exponent, r.log_exponent) == (0, 1)

    def test_coupled_log_branches(self):
        mk = lambda s: EmbeddingProblem(s, "2^(1/2*j)", 1, "inf", 2, 2, 1)
        above = entropy_rate(mk("2^(j)*(1+j)^2"))
        at = entropy_rate(mk("2^(j)*(1+j)^3/2"))
        below = entropy_rate(mk("2^(j)*(1+j)"))
        assert (above.k_exponent, above.log_exponent) == (HALF, HALF)
        assert (at.k_exponent, at.log_exponent) == (HALF, -1)
        assert (below.k_exponent, below.log_exponent) == (Fraction(3, 4), 0)
        assert {above.kind, at.kind, below.kind} == {"limiting-coupled-log"}

    def test_sv_integral_residual(self):
        pr = EmbeddingProblem("2^(j)*(1+j)*exp(1/2*log(1+j)^1/2)", "2^(j)",
                              2, 2, 2, 1, 1)
        r = entropy_rate(pr)
        assert r.kind == "limiting-sv-integral"
        assert "integral" in r.residual

    def test_not_compact(self):
        pr = EmbeddingProblem("1", "2^(j)", 2, 2, 2, 2, 1)
        assert entropy_rate(pr).kind == "not-compact"

    def test_scale_f_unsupported(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, 1, "inf", "inf", 1, scale="F")
        assert entropy_rate(pr).kind == "inconclusive"


class TestEnvelopeFunctional:
    def test_decaying_ratio_is_certified(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, 2, 2, "inf", 1)
        res = en_A(pr, k=4)
        assert res.alpha == HALF
        assert res.certified and not res.truncated
        assert 0 < res.value < INF

    def test_monotone_in_k(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, 2, 2, "inf", 1)
        vals = [en_A(pr, k).value for k in (1, 4, 16)]
        assert vals == sorted(vals, reverse=True)

    def test_argument_validation(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, 2, 2, "inf", 1)
        with pytest.raises(ValueError):
            en_A(pr, 0)
        flat = EmbeddingProblem("2^(2*j)", "1", 2, 2, 2, 2, 1)
        with pytest.raises(ValueError):
            en_A(flat, 1)

    def test_fine_index_hypothesis_reported(self):
        pr = EmbeddingProblem("2^(2*j)", "1", 1, "inf", 2, 1, 1)
        res = en_A(pr, 2)
        assert not res.hypothesis_ok
        assert res.notes
