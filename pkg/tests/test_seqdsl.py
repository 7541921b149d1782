import math
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from gsembed import (
    Const,
    EvalOverflow,
    ParseError,
    PositivityError,
    SequenceError,
    canonicalize,
    decompose,
    evaluate,
    exp_log_pow,
    function_log2,
    function_value,
    geometric,
    iter_log,
    log2_value,
    log_power,
    parse,
    power,
    product,
    pw2,
    render,
    strip_tables,
    table,
)

from conftest import canonical_exprs, oscillating_exprs


class TestParsing:
    def test_geometric(self):
        assert parse("2^(j)") == geometric(1)
        assert parse("2^(1/2*j)") == geometric(Fraction(1, 2))
        assert parse("2^(j*3)") == geometric(3)
        assert parse("2^(-2*j)") == geometric(-2)

    def test_power_of_two_bases(self):
        # 4^(j/2) = 2^j and 8^(j/3) = 2^j; 1/2 base flips the sign
        assert parse("4^(1/2*j)") == geometric(1)
        assert parse("8^(1/3*j)") == geometric(1)
        assert parse("1/2^(j)") == geometric(-1)
        with pytest.raises(ParseError):
            parse("3^(j)")

    def test_log_atoms(self):
        assert parse("(1+j)^2") == log_power(2)
        assert parse("(1+j)") == log_power(1)
        assert parse("(1+log(1+j))^-1") == iter_log(-1)
        assert parse("exp(1/2*log(1+j)^1/2)") == exp_log_pow(Fraction(1, 2), Fraction(1, 2))

    def test_exp_kappa_range(self):
        with pytest.raises(ParseError):
            parse("exp(1*log(1+j)^1)")
        with pytest.raises(ParseError):
            parse("exp(1*log(1+j)^3/2)")

    def test_table(self):
        e = parse("table[1,2,4] then 2^(j)")
        assert strip_tables(e) == geometric(1)
        assert evaluate(e, 0) == 1.0
        assert evaluate(e, 2) == 4.0
        assert evaluate(e, 3) == 8.0  # continuation takes over at its own index

    def test_positivity(self):
        with pytest.raises(PositivityError):
            parse("-2")
        with pytest.raises(SequenceError):
            table([1, 0, 1], geometric(1))

    def test_pw2_constraint(self):
        with pytest.raises(SequenceError):
            pw2(1, 1)
        with pytest.raises(SequenceError):
            pw2(-1, 1)

    def test_unbound_name(self):
        with pytest.raises(ParseError):
            parse("sigma")

    @given(canonical_exprs())
    def test_render_round_trip(self, triple):
        e, _, _ = triple
        assert parse(render(e)) == e

    @given(oscillating_exprs())
    def test_render_round_trip_pw(self, quad):
        e, _, _, _ = quad
        assert parse(render(e)) == e


class TestEvaluation:
    def test_frozen_values(self):
        # hand-computed entries
        assert evaluate(parse("2^(1/2*j)"), 4) == 4.0
        assert evaluate(parse("(1+j)^2"), 3) == 16.0
        assert evaluate(parse("(1+log(1+j))"), 1) == 2.0
        assert evaluate(parse("(1+log(1+j))"), 3) == 3.0
        # exp(c (log2(1+j))^kappa): j=1 gives exp(c)
        v = evaluate(parse("exp(1/2*log(1+j)^1/2)"), 1)
        assert abs(v - math.exp(0.5)) < 1e-12
        assert evaluate(parse("exp(1/2*log(1+j)^1/2)"), 0) == 1.0

    def test_log2_value_exactness(self):
        assert log2_value(parse("2^(2/3*j)"), 5) == Fraction(10, 3)
        assert log2_value(parse("(1+j)^3"), 7) == 9  # (1+7) = 2^3
        assert isinstance(log2_value(parse("(1+j)^3"), 6), float)

    @given(canonical_exprs(), st.integers(min_value=0, max_value=40))
    def test_log2_matches_value(self, triple, j):
        e, _, _ = triple
        lg = log2_value(e, j)
        try:
            v = evaluate(e, j)
        except EvalOverflow:
            assert abs(float(lg)) > 900
            return
        assert v > 0
        assert abs(math.log2(v) - float(lg)) < 1e-9 * max(1.0, abs(float(lg)))

    def test_overflow(self):
        with pytest.raises(EvalOverflow):
            evaluate(geometric(4), 100000)
        with pytest.raises(EvalOverflow):
            evaluate(geometric(-4), 100000)
        assert isinstance(log2_value(geometric(4), 100000), Fraction)

    def test_function_agrees_on_dyadic(self):
        e = parse("2^(1/2*j)*(1+j)^2")
        for j in (0, 1, 3, 8):
            assert abs(function_log2(e, 2.0 ** j) - float(log2_value(e, j))) < 1e-9

    def test_function_value_between(self):
        e = parse("2^(j)")
        assert abs(function_value(e, 3.0) - 3.0) < 1e-12


class TestDecomposition:
    @given(canonical_exprs())
    def test_rate_and_log(self, triple):
        e, r, b = triple
        d = decompose(e)
        assert d.classified
        assert d.rate == r
        assert d.log_exp == b

    def test_power_distributes(self):
        e = power(parse("2^(j)*(1+j)^2"), Fraction(-1, 2))
        d = decompose(e)
        assert d.rate == Fraction(-1, 2)
        assert d.log_exp == -1

    def test_canonicalize_flags(self):
        p = canonicalize(parse("2^(j)*(1+j)^-3"))
        assert p.canonical and p.classified
        assert p.rate == 1 and p.log_exponent == -3
        assert p.boyd_lower == p.boyd_upper == 1

        posc = canonicalize(pw2(0, 1))
        assert posc.classified and not posc.canonical
        assert posc.boyd_lower == 0 and posc.boyd_upper == 1

    def test_table_blocks_classification(self):
        p = canonicalize(parse("table[1,2] then 2^(j)"))
        assert not p.canonical
        assert p.rate is None
