import math
from fractions import Fraction

import pytest
from hypothesis import given

from gsembed import (
    ModulusRejected,
    StandardizeError,
    boyd_indices,
    boyd_indices_numeric,
    certify_admissible,
    const,
    equivalent,
    geometric,
    is_almost_strongly_increasing,
    iter_log,
    log_power,
    parse,
    power,
    product,
    pw2,
    sequence_from_modulus,
    standardize,
    strip_tables,
    table,
)

from conftest import canonical_exprs, oscillating_exprs


class TestAdmissibility:
    def test_geometric_exact(self):
        cert = certify_admissible(geometric(Fraction(3, 2)))
        assert cert.exact
        assert cert.log2_d0 == cert.log2_d1 == Fraction(3, 2)
        assert cert.strongly_increasing()

    def test_log_factor_widens_above(self):
        # ratio of 2^j (1+j): largest at j=0 (factor 4), tending to 2
        cert = certify_admissible(parse("2^(j)*(1+j)"))
        assert cert.exact
        assert cert.log2_d0 == 1
        assert cert.log2_d1 == 2

    def test_decreasing_log(self):
        # (1+j)^-1 has increasing ratios approaching 1 from below
        cert = certify_admissible(parse("(1+j)^-1"))
        assert cert.exact
        assert cert.log2_d1 == 0
        assert cert.log2_d0 == -1
        assert not cert.strongly_increasing()

    def test_pw2_range(self):
        cert = certify_admissible(pw2(0, 1))
        assert cert.exact
        assert cert.log2_d0 == 0 and cert.log2_d1 == 1

    def test_table_spike_seen(self):
        e = table([1, 100, 1], geometric(1))
        cert = certify_admissible(e)
        assert cert.d1 == pytest.approx(100.0)
        assert cert.d0 == pytest.approx(1.0 / 100.0)

    def test_window_floor(self):
        with pytest.raises(ValueError):
            certify_admissible(geometric(1), window=2)

    @given(canonical_exprs())
    def test_certificate_bounds_observed_ratios(self, triple):
        e, _, _ = triple
        cert = certify_admissible(e)
        import gsembed

        prev = gsembed.log2_value(e, 0)
        for j in range(1, 24):
            cur = gsembed.log2_value(e, j)
            r = float(cur) - float(prev)
            assert float(cert.log2_d0) - 1e-9 <= r <= float(cert.log2_d1) + 1e-9
            prev = cur


class TestBoyd:
    def test_geometric_fixture(self):
        for s in (Fraction(1), Fraction(-2), Fraction(5, 3)):
            b = boyd_indices(geometric(s))
            assert b.exact and b.lower == b.upper == s

    def test_oscillating_fixture(self):
        b = boyd_indices(pw2(0, 1))
        assert b.exact
        assert b.lower == 0 and b.upper == 1

        b2 = boyd_indices(product(pw2(Fraction(1, 2), 2), geometric(-1)))
        assert b2.exact
        assert b2.lower == Fraction(-1, 2) and b2.upper == 1

    def test_log_factors_are_invisible(self):
        b = boyd_indices(parse("(1+j)^4*(1+log(1+j))^-2"))
        assert b.exact and b.lower == b.upper == 0

    @given(canonical_exprs())
    def test_numeric_bracket_contains_exact(self, triple):
        e, r, _ = triple
        nb = boyd_indices_numeric(e, depth=256)
        assert nb.lower_bracket[0] <= float(r) <= nb.lower_bracket[1]
        assert nb.upper_bracket[0] <= float(r) <= nb.upper_bracket[1]

    @given(oscillating_exprs())
    def test_numeric_bracket_oscillating(self, quad):
        # dyadic oscillation only carries a containment promise for the
        # ratio envelope; the point estimates stay inside it and ordered
        e, s0, s1, r = quad
        nb = boyd_indices_numeric(e, depth=256)
        cert = certify_admissible(e)
        assert float(cert.log2_d0) - 1e-9 <= nb.lower_bracket[0]
        assert nb.upper_bracket[1] <= float(cert.log2_d1) + 1e-9
        assert nb.lower_bracket[0] <= nb.upper_bracket[1]


class TestEquivalence:
    def test_constant_factors(self):
        e = parse("2^(j)*(1+j)^-1")
        r = equivalent(product(const(Fraction(7, 3)), e), e)
        assert r.status == "yes"
        assert r.c_lower <= 7 / 3 <= r.c_upper

    def test_log_divergence(self):
        r = equivalent(parse("2^(j)"), parse("2^(j)*(1+j)"))
        assert r.status == "no"
        assert r.witness is not None

    def test_iterated_log_divergence(self):
        r = equivalent(iter_log(2), const(1))
        assert r.status == "no"

    def test_table_prefix_ignored(self):
        e = parse("2^(j)")
        r = equivalent(table([5, 1, 9], e), e)
        assert r.status == "yes"


class TestStandardize:
    def test_dyadic_growth_is_identity_like(self):
        sigma = parse("2^(3/2*j)*(1+j)")
        out = standardize(sigma, parse("2^(j)"), kappa0=1)
        assert equivalent(out, sigma).status == "yes"

    def test_quartic_growth_halves_rate(self):
        out = standardize(parse("2^(j)"), parse("4^(j)"), kappa0=1)
        # k(j) = max(0, ceil((j-3)/2)) gives the frozen prefix
        assert strip_tables(out) != out
        vals = [float(out.prefix[j]) for j in range(8)]
        assert vals == [1, 1, 1, 1, 2, 2, 4, 4]
        assert equivalent(out, parse("2^(1/2*j)")).status == "yes"

    @given(canonical_exprs())
    def test_equivalence_property(self, triple):
        sigma, _, _ = triple
        out = standardize(sigma, geometric(1), kappa0=1)
        assert equivalent(out, sigma).status == "yes"

    def test_rejects_flat_growth(self):
        with pytest.raises(StandardizeError):
            standardize(parse("2^(j)"), log_power(1))

    def test_rejects_small_kappa0(self):
        with pytest.raises(StandardizeError):
            standardize(parse("2^(j)"), parse("2^(1/4*j)"), kappa0=1)
        out = standardize(parse("2^(j)"), parse("2^(1/4*j)"), kappa0=4)
        assert equivalent(out, parse("2^(4*j)")).status == "yes"

    def test_rejects_oscillating_sigma(self):
        with pytest.raises(StandardizeError):
            standardize(pw2(0, 1), parse("2^(j)"))


class TestModulus:
    def test_round_trip(self):
        sigma = parse("2^(2/3*j)*(1+j)^-1")
        conv = sequence_from_modulus(power(sigma, Fraction(-1)))
        assert equivalent(conv.sequence, sigma).status == "yes"
        assert conv.level < 2

    def test_rejects_steep_modulus(self):
        with pytest.raises(ModulusRejected) as ei:
            sequence_from_modulus(geometric(-100))
        assert ei.value.witness is not None
        t1, t2 = ei.value.witness
        assert 0 < t1 < t2 <= 1


class TestAsi:
    def test_exact_cases(self):
        assert is_almost_strongly_increasing(parse("2^(j)")).status == "yes"
        assert is_almost_strongly_increasing(parse("2^(-1/2*j)")).status == "no"
        assert is_almost_strongly_increasing(log_power(3)).status == "no"
        assert is_almost_strongly_increasing(pw2(0, 1)).status == "no"
        assert is_almost_strongly_increasing(product(pw2(0, 1), geometric(1))).status == "yes"

    def test_numeric_certifies_yes(self):
        e = table([1, 2], parse("2^(j)"))
        res = is_almost_strongly_increasing(e)
        assert res.status in ("yes", "undecided")
