"""Imaginary quadratic discriminants.

Fundamental decompositions, class numbers counted from reduced binary
quadratic forms, unit-weighted class numbers and the square-root counts
r(D, n) = #{x mod 2n : x^2 = D mod 4n}.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .arith import factorize, kronecker
from .errors import InvalidInput

_memo: dict[int, int] = {}
_memo_lock = threading.Lock()


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def check_discriminant(D: int) -> int:
    if not isinstance(D, int) or not is_discriminant(D):
        raise InvalidInput(f"{D!r} is not a negative discriminant (need D < 0, D = 0 or 1 mod 4)")
    return D


def is_fundamental(D: int) -> bool:
    if not is_discriminant(D):
        return False
    if D % 4 == 1:
        return factorize(-D).is_squarefree
    m = D // 4
    return m % 4 in (2, 3) and factorize(-m).is_squarefree


@dataclass(frozen=True)
class FundamentalDecomposition:
    d0: int
    conductor: int


def fundamental_decomposition(D: int) -> FundamentalDecomposition:
    """Write D = d0 * F**2 with d0 a fundamental discriminant."""
    check_discriminant(D)
    core, root = -1, 1
    for p, e in factorize(-D).items():
        root *= p ** (e // 2)
        if e % 2:
            core *= p
    if core % 4 != 1:
        # core = 2, 3 mod 4 forces an even square part
        core *= 4
        root //= 2
    return FundamentalDecomposition(core, root)


def field_discriminant(M: int) -> int:
    """Discriminant of Q(sqrt(-M)) for squarefree M > 1."""
    if not isinstance(M, int) or M <= 1 or not factorize(M).is_squarefree:
        raise InvalidInput(f"field_discriminant needs a squarefree M > 1, got {M!r}")
    return -M if M % 4 == 3 else -4 * M


def _count_reduced_forms(D: int) -> int:
    h = 0
    b = D % 2
    bmax = math.isqrt(-D // 3)
    while b <= bmax:
        q = (b * b - D) // 4
        for a in range(max(b, 1), math.isqrt(q) + 1):
            if q % a:
                continue
            c = q // a
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            h += 1 if (b == 0 or a == b or a == c) else 2
        b += 2
    return h


def class_number(D: int) -> int:
    """Number of primitive reduced positive definite forms of discriminant D."""
    check_discriminant(D)
    h = _memo.get(D)
    if h is None:
        h = _count_reduced_forms(D)
        with _memo_lock:
            _memo[D] = h
    return h


def unit_weight(D: int) -> int:
    """Half the number of units of the order of discriminant D."""
    check_discriminant(D)
    return {-3: 3, -4: 2}.get(D, 1)


def h_prime(D: int) -> Fraction:
    """h(D)/w(D): equal to h(D) except h'(-4) = 1/2 and h'(-3) = 1/3."""
    return Fraction(class_number(D), unit_weight(D))


def sqrt_count(D: int, n: int) -> int:
    """Count x in [0, 2n) with x^2 = D (mod 4n), by direct enumeration."""
    if n < 1:
        raise InvalidInput(f"sqrt_count needs n >= 1, got {n}")
    mod = 4 * n
    target = D % mod
    return sum(1 for x in range(2 * n) if x * x % mod == target)


def sqrt_count_multiplicative(D: int, n: int) -> int:
    """r(D, n) for squarefree n as a product of 1 + (D/p) over p | n."""
    f = factorize(n)
    if not f.is_squarefree:
        raise InvalidInput(f"sqrt_count_multiplicative needs squarefree n, got {n}")
    if D % 4 in (2, 3):
        return 0
    return math.prod(1 + kronecker(D, p) for p in f.primes)


def class_number_table() -> dict[int, int]:
    """Snapshot of the in-memory class number memo."""
    with _memo_lock:
        return dict(_memo)


def seed_class_numbers(table: dict[int, int]) -> None:
    """Merge externally loaded (D, h) pairs into the memo."""
    for D, h in table.items():
        check_discriminant(D)
        if not isinstance(h, int) or h < 1:
            raise InvalidInput(f"class number for {D} must be a positive integer, got {h!r}")
    with _memo_lock:
        _memo.update(table)


def clear_class_number_memo() -> None:
    with _memo_lock:
        _memo.clear()
