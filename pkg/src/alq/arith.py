"""Elementary multiplicative number theory.

Factorization, the usual multiplicative functions, divisor enumeration and
the Kronecker symbol.  Everything is exact integer arithmetic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidInput

TRIAL_BOUND = 10**6
MAX_N = 2**63

# (2/n) for odd n, indexed by n mod 8
_TAB2 = (0, 1, 0, -1, 0, -1, 0, 1)


@dataclass(frozen=True)
class Factorization:
    n: int
    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for e in self.exponents)

    def items(self):
        return zip(self.primes, self.exponents)

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the composite odd n (Brent's variant)."""
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if _is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> Factorization:
    """Prime factorization of 1 <= n < 2**63.

    Trial division up to ``TRIAL_BOUND``; any cofactor left over is split
    with Pollard rho.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"cannot factor {n!r}: need a positive integer")
    if n >= MAX_N:
        raise InvalidInput(f"{n} is outside the supported range n < 2**63")
    found: dict[int, int] = {}
    m = n
    for p in (2, 3):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    p, step = 5, 2
    while p <= TRIAL_BOUND and p * p <= m:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += step
        step = 6 - step
    if m > 1:
        if p * p > m:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    primes = tuple(sorted(found))
    return Factorization(n, primes, tuple(found[q] for q in primes))


def is_squarefree(n: int) -> bool:
    return factorize(n).is_squarefree


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n).primes == (n,)


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n).primes)


def odd_part(n: int) -> int:
    if n < 1:
        raise InvalidInput(f"odd_part needs n >= 1, got {n}")
    return n >> ((n & -n).bit_length() - 1)


def omega_odd(n: int) -> int:
    return omega(odd_part(n))


def mu(n: int) -> int:
    f = factorize(n)
    if not f.is_squarefree:
        return 0
    return -1 if len(f.primes) % 2 else 1


def phi(n: int) -> int:
    result = n
    for p in factorize(n).primes:
        result -= result // p
    return result


@lru_cache(maxsize=1 << 16)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return tuple(sorted(divs))


def divisors(n: int) -> list[int]:
    """All positive divisors of n in ascending order."""
    return list(_divisors(n))


def kronecker(a: int, b: int) -> int:
    """The Kronecker symbol (a/b) for arbitrary integers a, b."""
    if b == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    k = 1 if v % 2 == 0 else _TAB2[a & 7]
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    # b is now odd and positive: Jacobi symbol with reciprocity
    while True:
        if a == 0:
            return k if b == 1 else 0
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2:
            k *= _TAB2[b & 7]
        if a & b & 2:
            k = -k
        r = abs(a)
        a = b % r
        b = r


def squarefree_level(n: int, what: str = "level") -> Factorization:
    """Validate a squarefree level N > 1 and return its factorization."""
    if not isinstance(n, int) or isinstance(n, bool):
        raise InvalidInput(f"{what} must be an integer, got {n!r}")
    if n <= 1:
        raise InvalidInput(f"{what} must be > 1, got {n}")
    f = factorize(n)
    if not f.is_squarefree:
        raise InvalidInput(f"{what} must be squarefree, got {n}")
    return f


def check_weight(k: int) -> int:
    if not isinstance(k, int) or isinstance(k, bool):
        raise InvalidInput(f"weight must be an integer, got {k!r}")
    if k < 2 or k % 2:
        raise InvalidInput(f"weight must be even and >= 2, got {k}")
    return k
