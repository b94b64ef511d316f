import math

import pytest
from hypothesis import given, strategies as st

from triquad.arith import (PrimePair, is_perfect_square, is_prime,
                           legendre_symbol, primes_in_range)
from triquad.errors import TriquadError

from oracles import legendre_by_enumeration


def test_perfect_square_examples():
    assert is_perfect_square(1225) == 35
    assert is_perfect_square(0) == 0
    assert is_perfect_square(121) == 11
    assert is_perfect_square(2) is None
    assert is_perfect_square(1224) is None


def test_perfect_square_rejects_negative():
    with pytest.raises(ValueError):
        is_perfect_square(-4)


def test_perfect_square_exhaustive_to_1e6():
    for n in range(10 ** 6 + 1):
        r = math.isqrt(n)
        expected = r if r * r == n else None
        assert is_perfect_square(n) == expected


@given(st.integers(min_value=0, max_value=10 ** 40))
def test_perfect_square_of_square(r):
    assert is_perfect_square(r * r) == r


def test_legendre_examples():
    assert legendre_symbol(17, 7) == -1
    assert legendre_symbol(113, 7) == 1
    assert legendre_symbol(14, 7) == 0


def test_legendre_rejects_bad_modulus():
    for p in (4, 9, 15, 2):
        with pytest.raises(ValueError):
            legendre_symbol(3, p)


def test_legendre_matches_enumeration_small_primes():
    for p in primes_in_range(100, 1, 2):
        if p == 2:
            continue
        for a in range(2 * p):
            assert legendre_symbol(a, p) == legendre_by_enumeration(a, p)


@given(st.integers(min_value=-10 ** 12, max_value=10 ** 12),
       st.integers(min_value=-10 ** 12, max_value=10 ** 12),
       st.sampled_from(primes_in_range(500, 1, 2)[1:]))
def test_legendre_multiplicative(a, b, p):
    assert legendre_symbol(a * b, p) == legendre_symbol(a, p) * legendre_symbol(b, p)


def test_is_prime_examples():
    assert is_prime(7)
    assert not is_prime(1)
    assert not is_prime(561)  # Carmichael number


def test_is_prime_against_trial_division():
    def trial(n):
        if n < 2:
            return False
        return all(n % k for k in range(2, math.isqrt(n) + 1))

    for n in range(5000):
        assert is_prime(n) == trial(n)


def test_is_prime_large_witness_cases():
    assert is_prime(2 ** 61 - 1)
    assert not is_prime(2 ** 61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


def test_prime_pair_validation():
    PrimePair(17, 7)
    PrimePair(41, 23)
    with pytest.raises(TriquadError):
        PrimePair(7, 17)       # p = 7 is 7 mod 8
    with pytest.raises(TriquadError):
        PrimePair(17, 3)       # q = 3 is 3 mod 8
    with pytest.raises(TriquadError):
        PrimePair(15, 7)       # composite p
    with pytest.raises(TriquadError):
        PrimePair(17, 17)


def test_prime_pair_radicands():
    pair = PrimePair(17, 7)
    assert pair.radicands == (2, 17, 7, 34, 14, 119, 238)
    assert pair.legendre_pq == -1
