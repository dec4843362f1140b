import math

import sympy
import pytest

from okdens.errors import BadBound, BadExponent, BadShape
from okdens.splitting import split_prime
from okdens.zeta import euler_factor, predicted_density


def test_euler_factor_rational(field_q):
    for p in (2, 3, 97):
        for s in (2, 3, 5):
            assert math.isclose(euler_factor(field_q, p, s), 1.0 - p**-s,
                                rel_tol=1e-15)


def test_euler_factor_uses_residue_degrees(field_sqrt2, field_quintic):
    # inert prime: single factor 1 - p^(-2s)
    assert math.isclose(euler_factor(field_sqrt2, 5, 2), 1.0 - 5.0**-4,
                        rel_tol=1e-15)
    # ramified prime 2 = p^2: one degree-1 ideal, counted once
    assert math.isclose(euler_factor(field_sqrt2, 2, 2), 1.0 - 0.25,
                        rel_tol=1e-15)
    # cross-check an arbitrary prime against the splitting data
    for p in (2, 3, 7, 11, 13):
        split = split_prime(field_quintic, p)
        want = 1.0
        for d in split.residue_degrees():
            want *= 1.0 - float(p)**(-2 * d)
        assert math.isclose(euler_factor(field_quintic, p, 2), want,
                            rel_tol=1e-14)


def test_euler_factor_rejects_small_exponent(field_q):
    with pytest.raises(BadExponent):
        euler_factor(field_q, 2, 1)


def test_predicted_density_validation(field_q):
    with pytest.raises(BadShape):
        predicted_density(field_q, 2, 2, 100)
    with pytest.raises(BadShape):
        predicted_density(field_q, 0, 3, 100)
    with pytest.raises(BadBound):
        predicted_density(field_q, 1, 2, 1)


def test_analytic_cross_check_integers(field_q):
    # n=1, m=2: product over primes of (1 - p^-2) -> 1/zeta(2) = 6/pi^2
    r = predicted_density(field_q, 1, 2, 10**6)
    assert abs(r.value - 6.0 / math.pi**2) < r.tail_bound
    # n=1, m=3 -> 1/zeta(3)
    r3 = predicted_density(field_q, 1, 3, 10**6)
    assert abs(r3.value - 1.0 / float(sympy.zeta(3))) < r3.tail_bound
    # n=2, m=3 -> 1/(zeta(2) zeta(3))
    r23 = predicted_density(field_q, 2, 3, 10**6)
    want = 6.0 / math.pi**2 / float(sympy.zeta(3))
    assert abs(r23.value - want) < r23.tail_bound


def test_truncation_monotone_and_within_tail(all_fields):
    for field in all_fields.values():
        coarse = predicted_density(field, 2, 4, 500)
        fine = predicted_density(field, 2, 4, 50000)
        # each omitted factor is < 1, so refining can only shrink the value
        assert fine.value < coarse.value
        assert coarse.value - fine.value < coarse.tail_bound
        assert fine.tail_bound < coarse.tail_bound


def test_tail_bound_formula(field_cubic):
    # 2 k n P^(1-s_min) / (s_min - 1) with s_min = m - n + 1
    r = predicted_density(field_cubic, 2, 4, 1000)
    s_min = 4 - 2 + 1
    want = 2.0 * 3 * 2 * 1000.0 ** (1 - s_min) / (s_min - 1)
    assert math.isclose(r.tail_bound, want, rel_tol=1e-12)


def test_reference_spot_anchors(all_fields):
    anchors = [
        ("Q", 1, 2, 0.60792),
        ("Q(sqrt2)", 2, 3, 0.60491),
        ("x^3+x+1", 1, 2, 0.83941),
        ("x^5-13x-7", 1, 2, 0.84149),
    ]
    for fname, n, m, want in anchors:
        r = predicted_density(all_fields[fname], n, m, 10**6)
        assert abs(r.value - want) < 1e-4


def test_result_payload(field_sqrt2):
    r = predicted_density(field_sqrt2, 1, 2, 10**4)
    d = r.to_json_dict()
    assert d["n"] == 1 and d["m"] == 2 and d["prime_bound"] == 10**4
    assert math.isclose(d["value"], r.value, rel_tol=1e-15)
    assert d["tail_bound"] == r.tail_bound
    # the decimal rendering agrees with the double-double value
    assert abs(float(r.decimal()) - r.value) < 1e-15
    assert float(d["value_decimal"]) == pytest.approx(r.value, rel=1e-15)


def test_value_has_extended_precision(field_q):
    # hi + lo should carry more than double precision: reconstruct 1/zeta(2)
    # truncated at 10^4 with exact rationals and compare at ~1e-25
    from fractions import Fraction
    from okdens.primes import sieve_primes
    exact = Fraction(1)
    for p in sieve_primes(10**4):
        exact *= Fraction(int(p)**2 - 1, int(p)**2)
    r = predicted_density(field_q, 1, 2, 10**4)
    got = Fraction(r.value_hi) + Fraction(r.value_lo)
    assert abs(got - exact) < Fraction(1, 10**25)
