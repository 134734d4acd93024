"""Tests for multiplicative independence and power approximation."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cobhamkit.approx import (
    ApproxPair,
    approx_powers,
    dependence_exponents,
    factorize,
    format_fraction,
    multiplicatively_independent,
    parse_fraction,
)
from cobhamkit.errors import InvalidArgumentError, ResourceLimitError


def test_factorize():
    assert factorize(1) == {}
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(97) == {97: 1}


def test_dependence_exponents():
    assert dependence_exponents(4, 8) == (3, 2)
    assert dependence_exponents(2, 2) == (1, 1)
    assert dependence_exponents(27, 9) == (2, 3)
    assert dependence_exponents(2, 3) is None
    assert dependence_exponents(6, 12) is None


def test_independence_rejects_small_bases():
    with pytest.raises(InvalidArgumentError):
        multiplicatively_independent(1, 3)


def test_independence_matches_brute_force():
    for a in range(2, 65):
        powers_of_a = {a ** m for m in range(1, 33)}
        for b in range(2, 65):
            dependent = any(b ** n in powers_of_a for n in range(1, 33))
            assert multiplicatively_independent(a, b) == (not dependent), (a, b)


def test_parse_fraction():
    assert parse_fraction("1/12") == Fraction(1, 12)
    assert parse_fraction(" 3 ") == Fraction(3)
    assert format_fraction(Fraction(2, 4)) == "1/2"
    for bad in ["0", "-1/2", "0.5", "1e-3", "abc", "1/0"]:
        with pytest.raises(InvalidArgumentError):
            parse_fraction(bad)


def test_approx_two_three_twelfth():
    pair = approx_powers(2, 3, Fraction(1, 12))
    assert pair.m >= 1 and pair.n >= 1
    assert abs(2 ** pair.m - 3 ** pair.n) * 12 <= 3 ** pair.n
    assert pair.verify()


def test_known_pair_exists():
    pair = ApproxPair(m=19, n=12, a=2, b=3, eps=Fraction(1, 12))
    assert pair.difference == 7153
    assert pair.verify()


def test_approx_accepts_string_tolerance():
    pair = approx_powers(2, 3, "1/2")
    assert abs(pair.difference) * 2 <= 3 ** pair.n


def test_verify_rejects_bad_pair():
    assert not ApproxPair(m=1, n=1, a=2, b=3, eps=Fraction(1, 12)).verify()
    assert not ApproxPair(m=0, n=0, a=2, b=3, eps=Fraction(1, 2)).verify()


def test_approx_iteration_cap():
    with pytest.raises(ResourceLimitError):
        approx_powers(2, 3, Fraction(1, 1000), max_iterations=1)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=2, max_value=60),
)
def test_approx_always_verifies(a, b, denominator):
    assume(multiplicatively_independent(a, b))
    pair = approx_powers(a, b, Fraction(1, denominator))
    assert (pair.a, pair.b) == (a, b)
    assert abs(a ** pair.m - b ** pair.n) * denominator <= b ** pair.n


@pytest.mark.parametrize("a,b,expected", [
    (4, 2, (1, 2)),
    (2, 4, (2, 1)),
    (8, 4, (2, 3)),
    (9, 27, (6, 4)),
])
def test_dependent_bases_give_exact_hit(a, b, expected):
    pair = approx_powers(a, b, Fraction(1, 12))
    assert pair.difference == 0
    assert (pair.m, pair.n) == expected


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([(2, 3), (2, 5), (3, 5), (3, 2), (5, 7)]),
    st.integers(min_value=2, max_value=40),
    st.integers(min_value=1, max_value=40),
)
def test_finer_tolerance_satisfies_coarser(bases, denominator, extra):
    a, b = bases
    coarse, fine = Fraction(1, denominator), Fraction(1, denominator + extra)
    pair = approx_powers(a, b, fine)
    assert ApproxPair(m=pair.m, n=pair.n, a=a, b=b, eps=coarse).verify()
