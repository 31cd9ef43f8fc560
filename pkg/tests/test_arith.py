import math

import pytest
from hypothesis import given, strategies as st

from alq.arith import (
    divisors,
    factorize,
    is_squarefree,
    kronecker,
    mu,
    odd_part,
    omega,
    omega_odd,
    phi,
    squarefree_level,
)
from alq.errors import InvalidInput


def _sieve(limit):
    """Smallest-prime-factor sieve; independent of factorize."""
    spf = list(range(limit + 1))
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == i:
            for j in range(i * i, limit + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _legendre_by_enumeration(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


PRIMES_TO_97 = [p for p in range(3, 98) if all(p % q for q in range(2, p))]


@pytest.mark.parametrize("n,primes", [(1, ()), (35, (5, 7)), (390, (2, 3, 5, 13)), (2**61 - 1, (2**61 - 1,))])
def test_factorize_examples(n, primes):
    assert factorize(n).primes == primes


def test_factorize_large_semiprime():
    p, q = 1_000_003, 2_147_483_647
    f = factorize(p * q)
    assert f.primes == (p, q) and f.is_squarefree


def test_factorize_rejects_zero():
    with pytest.raises(InvalidInput):
        factorize(0)


@given(st.integers(min_value=1, max_value=10**12))
def test_factorization_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert list(f.primes) == sorted(set(f.primes))


def test_small_functions():
    assert (omega(35), phi(35), mu(35)) == (2, 24, 1)
    assert omega_odd(10) == 1 and odd_part(10) == 5
    assert mu(11) == -1 and mu(12) == 0


@pytest.mark.parametrize("n,expected", [(1, [1]), (10, [1, 2, 5, 10]), (35, [1, 5, 7, 35])])
def test_divisors(n, expected):
    assert divisors(n) == expected


def test_multiplicative_functions_against_sieve():
    limit = 10**5
    spf = _sieve(limit)
    for n in range(1, limit + 1):
        ps, m, sqfree = [], n, True
        while m > 1:
            p = spf[m]
            m //= p
            if ps and ps[-1] == p:
                sqfree = False
            else:
                ps.append(p)
        expect_phi = n
        for p in ps:
            expect_phi = expect_phi // p * (p - 1)
        assert omega(n) == len(ps)
        assert phi(n) == expect_phi
        assert mu(n) == ((-1) ** len(ps) if sqfree else 0)


def test_kronecker_examples():
    assert kronecker(-4, 13) == 1
    assert kronecker(-8, 3) == 1 and kronecker(-20, 3) == 1
    assert kronecker(-20, 13) == -1 == _legendre_by_enumeration(-20, 13)
    assert kronecker(-40, 13) == 1
    assert all(kronecker(D, 1) == 1 for D in range(-50, 50))


def test_kronecker_negative_and_zero_moduli():
    assert kronecker(-5, -1) == -1 and kronecker(5, -1) == 1
    assert kronecker(1, 0) == 1 and kronecker(2, 0) == 0


@pytest.mark.parametrize("p", PRIMES_TO_97)
def test_kronecker_matches_legendre_enumeration(p):
    for D in range(-200, 201):
        assert kronecker(D, p) == _legendre_by_enumeration(D, p)


def test_kronecker_multiplicative_in_modulus():
    for D in range(-200, 201):
        row = [kronecker(D, n) for n in range(101)]
        for m in range(1, 101):
            for n in range(1, 101):
                if m * n <= 100:
                    assert row[m * n] == row[m] * row[n]
                else:
                    assert kronecker(D, m * n) == row[m] * row[n]


def test_kronecker_at_two():
    # (D/2) is determined by D mod 8
    for D in range(-100, 100):
        assert kronecker(D, 2) == {1: 1, 7: 1, 3: -1, 5: -1}.get(D % 8, 0)


def test_squarefree_level_validation():
    assert squarefree_level(390).primes == (2, 3, 5, 13)
    for bad in (1, 0, -6, 12, 50):
        with pytest.raises(InvalidInput):
            squarefree_level(bad)
    assert not is_squarefree(12)
