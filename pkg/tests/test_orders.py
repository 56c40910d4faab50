"""Power-of-two multiplicative orders and the composite-case bound."""

import math

import pytest

from fermatlab import oracle, primality
from fermatlab.arith import fermat_value, mod_square_chain, reduce_fold
from fermatlab.errors import BaseNotCoprimeError
from fermatlab.orders import (
    euler_phi_prime_power,
    order_alpha,
    order_in_prime_power,
)


@pytest.fixture(autouse=True)
def fresh_prime_cache():
    primality.reset_prime_cache()
    yield
    primality.reset_prime_cache()


class TestOrderAlpha:
    def test_base_two_on_f5(self):
        r = order_alpha(5, 2)
        assert r.alpha == 6
        assert r.order == 64
        assert not r.not_totally_even
        assert r.bound_satisfied is True  # 6 <= 30, F_5 composite
        assert r.squarings_used == 6

    def test_identity_element(self):
        r = order_alpha(2, 1)
        assert r.alpha == 0
        assert r.order == 1

    def test_base_three_on_f5_has_odd_order_part(self):
        r = order_alpha(5, 3)
        assert r.alpha is None
        assert r.not_totally_even
        assert r.order is None
        assert r.bound_satisfied is None
        assert r.squarings_used == 32
        # the marker must agree with the failed Fermat congruence
        assert primality.fermat_congruence(5, 3) is False

    def test_generator_mod_f2(self):
        r = order_alpha(2, 3)
        assert r.alpha == 4
        assert r.order == oracle.naive_order(3, 17)
        # prime modulus: the composite-case bound does not apply
        assert r.bound_satisfied is None

    def test_non_coprime(self):
        with pytest.raises(BaseNotCoprimeError):
            order_alpha(5, 641)

    def test_agrees_with_naive_order_small_indices(self):
        for n in range(0, 5):
            m = fermat_value(n)
            for base in range(1, 50):
                if base % m == 0:
                    continue
                got = order_alpha(n, base)
                want = oracle.naive_order(base, m)
                assert got.order == want, (n, base)

    def test_minimality_witness(self):
        for n in range(2, 5):
            for base in range(2, 30):
                if math.gcd(base, fermat_value(n)) != 1:
                    continue
                r = order_alpha(n, base)
                assert r.alpha is not None  # prime modulus: group is 2-power
                if r.alpha > 0:
                    below = mod_square_chain(reduce_fold(base, n),
                                             r.alpha - 1)
                    assert not below.is_one

    def test_order_of_two_is_forced(self):
        # 2^(2^n) = -1 makes ord(2) exactly 2^(n+1)
        for n in range(1, 13):
            r = order_alpha(n, 2)
            assert r.alpha == n + 1
            if n >= 5:
                assert r.bound_satisfied is True

    def test_bound_reported_for_composite_congruent_bases(self):
        report = []
        for base in (2, 4, 16):
            r = order_alpha(5, base)
            assert r.bound_satisfied is True
            report.append(r.alpha)
        assert all(a <= 30 for a in report)


class TestEulerPhi:
    def test_fixtures(self):
        assert euler_phi_prime_power(3, 1) == 2
        assert euler_phi_prime_power(641, 1) == 640
        assert euler_phi_prime_power(3, 2) == 6
        assert euler_phi_prime_power(6700417, 1) == 6700416

    def test_rejections(self):
        with pytest.raises(ValueError):
            euler_phi_prime_power(2, 1)  # even
        with pytest.raises(ValueError):
            euler_phi_prime_power(1, 1)  # unit
        with pytest.raises(ValueError):
            euler_phi_prime_power(9, 1)  # odd composite, caught exactly
        with pytest.raises(ValueError):
            euler_phi_prime_power(3, 0)


class TestPrimePowerOrders:
    def test_known_orders(self):
        assert order_in_prime_power(2, 641, 1) == 64
        assert order_in_prime_power(3, 17, 1) == 16
        assert order_in_prime_power(2, 3, 2) == 6

    def test_divides_phi(self):
        for base in (2, 3, 5, 7):
            order = order_in_prime_power(base, 641, 1)
            assert 640 % order == 0
            assert pow(base, order, 641) == 1

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            order_in_prime_power(3, 3, 2)
