import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_henon.padics import (
    NonSquareError,
    PadicRational,
    Point,
    TruncatedPadic,
    is_square,
    make_rational,
    norm_exponent,
    padic_valuation,
    sample_with_norm,
    sqrt,
    validate_odd_prime,
)


def pr(num, den=1, p=5):
    return PadicRational(num, den, p)


# --- construction and validation -------------------------------------------


def test_make_rational_reduces():
    x = make_rational(10, 4, 5)
    assert (x.numerator, x.denominator) == (5, 2)


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        make_rational(1, 0, 5)


@pytest.mark.parametrize("p", [2, 4, 9, 15, 1, -3, 21])
def test_non_odd_prime_rejected(p):
    with pytest.raises(ValueError):
        make_rational(1, 1, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 101, 104729])
def test_odd_primes_accepted(p):
    assert validate_odd_prime(p) == p


def test_negative_denominator_normalized():
    x = make_rational(3, -6, 5)
    assert (x.numerator, x.denominator) == (-1, 2)


# --- valuations and norms ---------------------------------------------------


def test_padic_valuation_chunked_matches_naive():
    rng = random.Random(1)
    for _ in range(200):
        p = rng.choice([3, 5, 7])
        v = rng.randrange(0, 40)
        u = rng.randrange(1, 10**6)
        while u % p == 0:
            u += 1
        assert padic_valuation(u * p**v, p) == v


def test_unit_norm():
    assert norm_exponent(pr(1, 1)) == 0


def test_p_norm():
    assert norm_exponent(pr(5, 1)) == -1


def test_one_over_p_norm():
    assert norm_exponent(pr(1, 5)) == 1


def test_norm_of_zero_is_marker():
    assert norm_exponent(pr(0, 1)) is None
    assert pr(0).valuation is None


def test_norm_exponent_mixed_example():
    # x = p + 2p^3 at p = 5 has |x| = p^-1.
    p = 5
    assert norm_exponent(pr(p + 2 * p**3)) == -1


def test_norm_exponent_fraction_example():
    # (p - 1)/p^3 has norm p^3.
    p = 5
    assert norm_exponent(pr(p - 1, p**3)) == 3


# --- field arithmetic and the ultrametric -----------------------------------


def test_subtraction_cancels_to_higher_valuation():
    p = 5
    x = pr(p + 2 * p**3) - pr(p)
    assert x == pr(2 * p**3)
    assert norm_exponent(x) == -3


def test_additive_identity():
    x = pr(37, 12)
    assert x + pr(0) == x


def test_division_norm_example():
    p = 5
    x = (pr(1) - pr(1, p)) / pr(p**2)
    assert norm_exponent(x) == 3


def test_prime_mismatch_rejected():
    with pytest.raises(ValueError):
        pr(1, 1, 5) + pr(1, 1, 7)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        pr(1) / pr(0)


rationals = st.builds(
    lambda n, d: Fraction(n, d),
    st.integers(min_value=-(10**6), max_value=10**6),
    st.integers(min_value=1, max_value=10**6),
)


@settings(max_examples=200, deadline=None)
@given(a=rationals, b=rationals, p=st.sampled_from([3, 5, 7]))
def test_norm_is_multiplicative(a, b, p):
    x, y = PadicRational(a, 1, p), PadicRational(b, 1, p)
    prod = x * y
    if x.is_zero or y.is_zero:
        assert prod.norm_exponent is None
    else:
        assert prod.norm_exponent == x.norm_exponent + y.norm_exponent


@settings(max_examples=200, deadline=None)
@given(a=rationals, b=rationals, p=st.sampled_from([3, 5, 7]))
def test_ultrametric_inequality(a, b, p):
    x, y = PadicRational(a, 1, p), PadicRational(b, 1, p)
    s = x + y
    exps = [e for e in (x.norm_exponent, y.norm_exponent) if e is not None]
    if s.is_zero or not exps:
        return
    assert s.norm_exponent <= max(exps)
    if x.norm_exponent != y.norm_exponent:
        assert s.norm_exponent == max(exps)


# --- squares and square roots ------------------------------------------------


def test_is_square_constructed_square():
    p = 5
    c = pr(p - p * p)
    disc = 1 - 4 * c  # equals (1 - 2p)^2
    assert disc == pr((1 - 2 * p) ** 2)
    assert is_square(disc)


def test_is_square_odd_valuation():
    assert not is_square(pr(5))


def test_is_square_random_squares():
    rng = random.Random(7)
    for _ in range(50):
        n = Fraction(rng.randrange(1, 10**4), rng.randrange(1, 10**4))
        assert is_square(PadicRational(n * n, 1, 7))


def test_is_square_zero_degenerate():
    assert is_square(pr(0))


def test_sqrt_of_exact_square_matches_digitwise():
    p = 5
    x = pr((1 - 2 * p) ** 2)
    q = sqrt(x, 10)
    assert q.square() == TruncatedPadic.from_rational(x, 10)
    # One of the two roots agrees digitwise with the exact rational root.
    exact = TruncatedPadic.from_rational(pr(1 - 2 * p), 10)
    assert q == exact or (-q) == exact


def test_sqrt_of_one():
    q = sqrt(pr(1), 8)
    assert q == TruncatedPadic.from_rational(pr(1), 8)


def test_sqrt_of_four():
    q = sqrt(pr(4), 8)
    two = TruncatedPadic.from_rational(pr(2), 8)
    assert q == two or (-q) == two


def test_sqrt_sign_convention():
    for val in (4, 9, 16, 36, 49):
        q = sqrt(pr(val, 1, 7), 6)
        assert 1 <= q.digits[0] <= 3


def test_sqrt_obstruction_reasons():
    with pytest.raises(NonSquareError) as err:
        sqrt(pr(5), 8)
    assert err.value.reason == "odd-valuation"
    # 2 is a non-residue mod 5.
    with pytest.raises(NonSquareError) as err:
        sqrt(pr(2), 8)
    assert err.value.reason == "non-residue"


def test_sqrt_square_roundtrip_random():
    rng = random.Random(3)
    for p in (3, 5, 7):
        for _ in range(25):
            u = rng.randrange(1, p**6)
            x = PadicRational(u * u, 1, p)
            q = sqrt(x, 12)
            assert q.square() == TruncatedPadic.from_rational(x, 12)


# --- truncated expansions ----------------------------------------------------


def test_expand_digits_of_p():
    t = pr(5).expand(4)
    assert t.valuation == 1 and t.digits == (1, 0, 0, 0)


def test_truncation_equality_on_overlap():
    a = TruncatedPadic(5, 0, (1, 2, 3))
    b = TruncatedPadic(5, 0, (1, 2, 3, 4, 0))
    c = TruncatedPadic(5, 0, (1, 2, 4))
    assert a == b
    assert a != c
    assert a != TruncatedPadic(5, 1, (1, 2, 3))


def test_truncation_zero_marker():
    z = TruncatedPadic.zero(5)
    assert z.is_zero and z.digits == ()
    assert pr(0).expand(6).is_zero


def test_truncation_leading_digit_nonzero():
    with pytest.raises(ValueError):
        TruncatedPadic(5, 0, (0, 1))


def test_truncation_rational_arithmetic():
    p = 5
    t = pr(7).expand(8)  # unit
    u = t.add_rational(pr(3))
    assert u == pr(10).expand(7)  # valuation rose by 1: one digit of accuracy spent
    v = t.mul_rational(pr(1, 2))
    assert v == pr(7, 2).expand(8)


def test_truncation_serialization_roundtrip():
    t = pr(45, 7).expand(6)
    assert TruncatedPadic.from_json(t.to_json()) == t


def test_rational_serialization_roundtrip():
    x = pr(-22, 7)
    assert PadicRational.from_json(x.to_json()) == x
    assert x.to_json() == {"num": "-22", "den": "7", "p": 5}


# --- points ------------------------------------------------------------------


def test_point_prime_mismatch():
    with pytest.raises(ValueError):
        Point(pr(1, 1, 5), pr(1, 1, 7))


def test_point_profile():
    pt = Point(pr(25), pr(1, 5))
    assert pt.profile() == (-2, 1)


# --- the seeded sampler ------------------------------------------------------


@pytest.mark.parametrize("a", [0, -2, 3])
def test_sample_with_norm_exact(a):
    rng = random.Random(11)
    for _ in range(200):
        x = sample_with_norm(a, 6, rng, 5)
        assert x.norm_exponent == a


def test_sample_with_norm_no_drift_bulk():
    rng = random.Random(5)
    for _ in range(10_000):
        a = rng.randrange(-12, 13)
        assert sample_with_norm(a, 4, rng, 3).norm_exponent == a


def test_sampler_deterministic():
    seq1 = [sample_with_norm(-1, 6, random.Random(99), 7) for _ in range(1)]
    rng1, rng2 = random.Random(42), random.Random(42)
    s1 = [sample_with_norm(2, 5, rng1, 7) for _ in range(20)]
    s2 = [sample_with_norm(2, 5, rng2, 7) for _ in range(20)]
    assert s1 == s2
    assert seq1 == [sample_with_norm(-1, 6, random.Random(99), 7)]
