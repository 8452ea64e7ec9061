"""Exact series arithmetic, checked against independently coded oracles:
a partition-counting DP for eta powers, pentagonal numbers for eta
itself, and binomial-series convolution for the product forms.
"""

import json
import math
import random

import pytest
from fractions import Fraction

from framednet.qseries import (
    DEN,
    GridError,
    QSeries,
    eta_power,
    product_form,
    scale_exponents,
    to_num,
)


def partition_counts(n_max):
    """p(n) by the classic DP over part sizes."""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            p[n] += p[n - part]
    return p


def pentagonal_coeffs(n_max):
    """Coefficients of prod (1 - q^n) by Euler's pentagonal theorem."""
    out = {0: 1}
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n_max and g2 > n_max:
            break
        sign = -1 if k % 2 else 1
        if g1 <= n_max:
            out[g1] = sign
        if g2 <= n_max:
            out[g2] = sign
        k += 1
    return out


def gen_binom(power, k):
    """Generalized binomial coefficient C(power, k) for any integer power."""
    num = 1
    for i in range(k):
        num *= power - i
    return num // math.factorial(k)


def binomial_product_coeffs(sign, power, exps, n2_max):
    """Coefficients of prod (1 + sign*q^e)^power over the given exponents
    (doubled to stay integral), each factor expanded by the generalized
    binomial series and convolved with plain dict arithmetic."""
    acc = {0: 1}
    for e2 in exps:
        factor = {}
        k = 0
        while k * e2 <= n2_max and (power < 0 or k <= power):
            factor[k * e2] = gen_binom(power, k) * sign ** k
            k += 1
        nxt = {}
        for a, ca in acc.items():
            for b, cb in factor.items():
                if a + b <= n2_max:
                    nxt[a + b] = nxt.get(a + b, 0) + ca * cb
        acc = nxt
    return acc


class TestConstructors:
    def test_zero_and_one(self):
        assert QSeries.zero(10).is_zero()
        assert QSeries.one(10).coeff(0) == 1

    def test_monomial(self):
        m = QSeries.monomial(Fraction(1, 2), 3, 100)
        assert m.coeff(Fraction(1, 2)) == 3

    def test_off_grid_exponent_rejected(self):
        with pytest.raises(GridError):
            QSeries.monomial(Fraction(1, 7), 1, 100)

    def test_zero_coefficients_dropped(self):
        s = QSeries({0: 0, 48: 2}, 100)
        assert 0 not in s.terms and s.coeff(1) == 2


class TestArithmetic:
    def test_add_cancellation(self):
        a = QSeries.one(100)
        assert (a + a.scale(-1)).is_zero()

    def test_add_order_propagation(self):
        a = QSeries.one(5 * DEN)
        b = QSeries.one(3 * DEN)
        assert (a + b).order == 3 * DEN

    def test_add_mixed_lowest_terms(self):
        a = QSeries({-DEN: 1, 0: 24}, 4 * DEN)
        b = QSeries({DEN: 196884}, 4 * DEN)
        c = a + b
        assert [c.coeff(k) for k in (-1, 0, 1)] == [1, 24, 196884]

    def test_mul_identity(self):
        a = QSeries({0: 2, 48: 5}, 200)
        assert (a * QSeries.one(200)).terms == a.terms

    def test_mul_geometric_inverse(self):
        one_minus_q = QSeries({0: 1, DEN: -1}, 10 * DEN)
        geo = QSeries({k * DEN: 1 for k in range(10)}, 10 * DEN)
        prod = one_minus_q * geo
        assert prod.terms == {0: 1}

    def test_mul_order_uses_lowest_exponents(self):
        a = QSeries({-DEN: 1}, 2 * DEN)   # known below q^2, lowest q^-1
        b = QSeries({-DEN: 1}, 2 * DEN)
        assert (a * b).order == DEN       # only exact below q^1

    def test_mul_commutative_associative_random(self):
        rng = random.Random(7)
        for _ in range(20):
            def rand_series():
                terms = {
                    rng.randrange(-2 * DEN, 4 * DEN): rng.randrange(-9, 10)
                    for _ in range(6)
                }
                return QSeries(terms, rng.randrange(2 * DEN, 6 * DEN))

            a, b, c = rand_series(), rand_series(), rand_series()
            assert (a * b).agrees_with(b * a)
            assert ((a * b) * c).agrees_with(a * (b * c))

    def test_half_requires_even(self):
        assert QSeries({0: 4}, 10).half().coeff(0) == 2
        with pytest.raises(ValueError):
            QSeries({0: 3}, 10).half()

    def test_pow_zero_is_exact_one(self):
        a = QSeries({-DEN: 1, 0: 5}, 2 * DEN)
        p = a ** 0
        assert p.coeff(0) == 1 and (p * a).agrees_with(a)

    def test_coeff_beyond_order_raises(self):
        with pytest.raises(ValueError):
            QSeries.one(DEN).coeff(2)

    def test_truncate_cannot_extend(self):
        with pytest.raises(ValueError):
            QSeries.one(10).truncate(20)


class TestEta:
    def test_eta_zero_power(self):
        assert eta_power(0, 5).coeff(0) == 1

    def test_eta_pentagonal(self):
        e = eta_power(1, Fraction(301, 24))
        expected = pentagonal_coeffs(12)
        got = {
            (n - DEN // 24) // DEN: c
            for n, c in e.terms.items()
        }
        assert got == expected

    def test_eta_inverse_partitions(self):
        e = eta_power(-1, Fraction(287, 24))
        p = partition_counts(11)
        for n, expected in enumerate(p):
            assert e.coeff(Fraction(-1, 24) + n) == expected

    def test_eta_times_inverse_is_one(self):
        for k in range(-24, 25):
            prod = eta_power(k, 4) * eta_power(-k, 4)
            assert prod.terms == {0: 1}, f"k={k}"


class TestProductForm:
    def test_power_zero(self):
        assert product_form("1+q^n", 0, 6).terms == {0: 1}

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            product_form("1+q^{2n}", 1, 6)

    def test_negative_power_integer_kind(self):
        got = product_form("1+q^n", -24, 6)
        oracle = binomial_product_coeffs(1, -24, [2 * n for n in range(1, 7)], 10)
        for n2, c in oracle.items():
            assert got.coeff(Fraction(n2, 2)) == c
        assert [got.coeff(k) for k in range(4)] == [1, -24, 276, -2048]

    def test_negative_power_half_kind(self):
        got = product_form("1-q^{n-1/2}", -24, 4)
        oracle = binomial_product_coeffs(-1, -24, [2 * n - 1 for n in range(1, 5)], 7)
        for n2, c in oracle.items():
            assert got.coeff(Fraction(n2, 2)) == c
        for e, c in [(Fraction(1, 2), 24), (1, 300), (Fraction(3, 2), 2624)]:
            assert got.coeff(e) == c

    def test_power_additivity_random(self):
        rng = random.Random(3)
        for _ in range(8):
            kind = rng.choice(("1-q^n", "1+q^n", "1-q^{n-1/2}", "1+q^{n-1/2}"))
            p1, p2 = rng.randrange(-5, 6), rng.randrange(-5, 6)
            a = product_form(kind, p1, 4)
            b = product_form(kind, p2, 4)
            both = product_form(kind, p1 + p2, 4)
            assert (a * b).agrees_with(both), (kind, p1, p2)


class TestScaleExponents:
    def test_identity_on_one(self):
        assert scale_exponents(QSeries.one(100), 2).coeff(0) == 1

    def test_exponent_doubling(self):
        m = QSeries.monomial(Fraction(1, 24), 1, 100)
        assert scale_exponents(m, 2).coeff(Fraction(1, 12)) == 1

    def test_off_grid_rejected(self):
        m = QSeries.monomial(Fraction(1, 48), 1, 100)
        with pytest.raises(GridError):
            scale_exponents(m, Fraction(1, 2))

    def test_product_doubling_identity(self):
        # prod (1+q^n) * prod (1-q^n) = prod (1-q^{2n})
        lhs = product_form("1+q^n", 1, 10) * product_form("1-q^n", 1, 10)
        rhs = scale_exponents(product_form("1-q^n", 1, 5), 2)
        assert lhs.agrees_with(rhs)


class TestSerialization:
    def test_round_trip(self):
        s = QSeries({-48: 1, 0: 24, 48: 196884}, 4 * DEN)
        doc = s.to_json_dict()
        assert doc["den"] == DEN
        assert all(isinstance(c, str) for _, c in doc["terms"])
        back = QSeries.from_json(s.to_json())
        assert back == s

    def test_terms_sorted(self):
        s = QSeries({96: 1, -48: 2}, 200)
        assert s.to_json_dict()["terms"] == [[-48, "2"], [96, "1"]]

    def test_bad_denominator_rejected(self):
        with pytest.raises(ValueError):
            QSeries.from_json(json.dumps({"den": 24, "terms": [], "order_num": 1}))
