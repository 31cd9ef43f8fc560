"""Traces of Atkin-Lehner operators W_M at squarefree level.

Two routes to the trace on the full cusp space S_k(N):

* ``full_trace`` evaluates the Skoruppa-Zagier triple sum literally, over
  s, f and t, with direct square-root counts;
* ``full_trace_explicit`` uses the simplified one-line form built from the
  a(M, M') table and the field discriminant of Q(sqrt(-M)).

Two routes to the trace on the new space S_k^new(N):

* ``new_trace_incl_excl`` is the weighted divisor sum of full traces;
* ``new_trace`` is the closed form with the b(M, M') table.  This is the
  production path; the others exist to check it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import check_weight, divisors, factorize, kronecker, odd_part, omega, squarefree_level
from .errors import ConsistencyError, InvalidInput
from .quadratic import (
    class_number,
    field_discriminant,
    fundamental_decomposition,
    h_prime,
    sqrt_count,
    sqrt_count_multiplicative,
)

# rows keyed by M mod 8: (M' odd, M' even)
A_TABLE = {1: (1, 1), 2: (1, 1), 5: (1, 1), 6: (1, 1), 3: (4, 6), 7: (2, 4)}
B_TABLE = {1: (1, -1), 2: (1, -1), 5: (1, -1), 6: (1, -1), 3: (4, -2), 7: (2, 0)}

# k mod 8 -> p_k(+-sqrt 2), k mod 12 -> p_k(+-sqrt 3)
_PK_SQRT2 = {0: -1, 2: 1, 4: 1, 6: -1}
_PK_SQRT3 = {0: -1, 2: 1, 4: 2, 6: 1, 8: -1, 10: -2}

# levels M > 3 with trace zero on S_2^new(N) and nonzero new space
K2_TRACE_ZERO_N_EQ_M = frozenset({37, 58})
K2_TRACE_ZERO_N_EQ_2M = frozenset({13, 19, 37, 43, 67, 163})


class PkArg(str, enum.Enum):
    ZERO = "zero"
    SQRT2 = "sqrt2"
    NEG_SQRT2 = "-sqrt2"
    SQRT3 = "sqrt3"
    NEG_SQRT3 = "-sqrt3"
    TWO = "two"
    NEG_TWO = "-two"

    @property
    def square(self) -> int:
        return {"zero": 0, "sqrt2": 2, "sqrt3": 3, "two": 4}[self.value.lstrip("-")]


@dataclass(frozen=True)
class TraceQuery:
    N: int
    M: int
    k: int

    def __post_init__(self):
        squarefree_level(self.N)
        check_weight(self.k)
        if not isinstance(self.M, int) or self.M <= 1:
            raise InvalidInput(f"M must be an integer > 1, got {self.M!r}")
        if self.N % self.M:
            raise InvalidInput(f"M = {self.M} does not divide N = {self.N}")

    @property
    def M_prime(self) -> int:
        return self.N // self.M

    @property
    def M_prime_odd(self) -> int:
        return odd_part(self.M_prime)

    @property
    def j(self) -> int:
        """2-adic valuation of M'; 0 or 1 since N is squarefree."""
        j = 0 if self.M_prime % 2 else 1
        assert self.M_prime % (2 ** (j + 1)), "M' not squarefree at 2"
        return j


def as_integer(x: Fraction, what: str) -> int:
    """Convert an exact rational that must be integral; never rounds."""
    if x.denominator != 1:
        raise ConsistencyError(f"{what} = {x} is not an integer")
    return x.numerator


def a_coeff(M: int, M_prime: int) -> int:
    return A_TABLE[M % 8][M_prime % 2 == 0]


def b_coeff(M: int, M_prime: int) -> int:
    return B_TABLE[M % 8][M_prime % 2 == 0]


def p_k_at(arg: PkArg | str, k: int) -> int:
    """p_k(s) = (x^(k-1) - y^(k-1))/(x - y), x, y the roots of X^2 - sX + 1,
    at the seven arguments that occur for squarefree level."""
    arg = PkArg(arg)
    if not isinstance(k, int) or k % 2:
        raise InvalidInput(f"p_k needs an even weight, got {k!r}")
    sq = arg.square
    if sq == 0:
        return -1 if (k // 2) % 2 == 0 else 1
    if sq == 2:
        return _PK_SQRT2[k % 8]
    if sq == 3:
        return _PK_SQRT3[k % 12]
    return k - 1


def p_k_recursive_oracle(s_squared: int, k: int) -> int:
    """p_k(sqrt(s_squared)) from u_j = s u_{j-1} - u_{j-2}, u_0 = 0, u_1 = 1.

    Elements of Z[sqrt c] are pairs (rational part, sqrt c part).  Test use only.
    """
    c = s_squared
    prev, cur = (0, 0), (1, 0)
    for _ in range(k - 2):
        # s * cur, with s = sqrt c
        s_cur = (cur[1] * c, cur[0])
        prev, cur = cur, (s_cur[0] - prev[0], s_cur[1] - prev[1])
    if cur[1] != 0 and c != 0:
        raise ConsistencyError(f"p_{k}(sqrt {c}) came out irrational: {cur}")
    return cur[0]


_PK_BY_SQUARE = {0: PkArg.ZERO, 2: PkArg.SQRT2, 3: PkArg.SQRT3, 4: PkArg.TWO}


@lru_cache(maxsize=None)
def _sz_inner_sums(N: int, M: int) -> tuple[tuple[int, Fraction], ...]:
    """Weight independent part of the triple sum, per value of s^2/M."""
    M_prime = N // M
    bound = math.isqrt(4 * M - 1)
    s_values = [s for s in range(-bound, bound + 1) if s % M == 0]
    expected = [-M, 0, M] if M in (2, 3) else [0]
    assert s_values == expected, (M, s_values)
    out = []
    for s in s_values:
        D = s * s - 4 * M
        F = fundamental_decomposition(D).conductor
        total = Fraction(0)
        for f in divisors(F):
            if math.gcd(f, M) != 1:
                continue
            Df = D // (f * f)
            inner = 0
            for t in divisors(M_prime):
                e = M_prime // t
                if (F // f) % e:
                    continue
                inner += sqrt_count(Df // (e * e), t)
            total += h_prime(Df) * inner
        out.append((s * s // M, total))
    return tuple(out)


def full_trace(N: int, M: int, k: int) -> int:
    """Trace of W_M on S_k(N) from the literal Skoruppa-Zagier sum."""
    TraceQuery(N, M, k)
    total = Fraction(0)
    for sq, inner in _sz_inner_sums(N, M):
        total += p_k_at(_PK_BY_SQUARE[sq], k) * inner
    total = -total / 2 + (k == 2)
    return as_integer(total, f"tr W_{M} on S_{k}({N})")


def full_trace_explicit(N: int, M: int, k: int) -> int:
    """Trace of W_M on S_k(N) from the explicated form with a(M, M')."""
    q = TraceQuery(N, M, k)
    Mp = q.M_prime
    dM = field_discriminant(M)
    sign = 1 if (k // 2) % 2 == 0 else -1
    total = Fraction(sign * a_coeff(M, Mp)) * h_prime(dM) * sqrt_count_multiplicative(dM, q.M_prime_odd) / 2
    if M == 2:
        total -= Fraction(p_k_at(PkArg.SQRT2, k) * sqrt_count_multiplicative(-4, Mp), 2)
    if M == 3:
        total -= Fraction(p_k_at(PkArg.SQRT3, k) * sqrt_count_multiplicative(-3, Mp), 3)
    total += k == 2
    return as_integer(total, f"tr W_{M} on S_{k}({N})")


def new_trace_incl_excl(N: int, M: int, k: int) -> int:
    """Trace on S_k^new(N) as sum over d | M' of (-2)^omega(M'/d) tr_{S_k(dM)} W_M."""
    q = TraceQuery(N, M, k)
    Mp = q.M_prime
    return sum((-2) ** omega(Mp // d) * full_trace(d * M, M, k) for d in divisors(Mp))


def _legendre_defect_product(D: int, m: int) -> int:
    # prod over p | m of ((D/p) - 1)
    return math.prod(kronecker(D, p) - 1 for p in factorize(m).primes)


@lru_cache(maxsize=None)
def _new_trace(N: int, M: int, k: int) -> int:
    q = TraceQuery(N, M, k)
    Mp, Mpo, j = q.M_prime, q.M_prime_odd, q.j
    dM = field_discriminant(M)
    sign = 1 if (k // 2) % 2 == 0 else -1
    total = Fraction(sign * b_coeff(M, Mp)) * h_prime(dM) * _legendre_defect_product(dM, Mpo) / 2
    if k == 2:
        total += (-1) ** omega(Mp)
    if M == 2:
        total -= Fraction(p_k_at(PkArg.SQRT2, k) * _legendre_defect_product(-4, Mpo), 2)
    if M == 3:
        total -= Fraction((-1) ** j * (j + 1) * p_k_at(PkArg.SQRT3, k) * _legendre_defect_product(-3, Mpo), 3)
    return as_integer(total, f"tr W_{M} on S_{k}^new({N})")


def new_trace(N: int, M: int, k: int) -> int:
    """Trace of W_M on S_k^new(N), closed form."""
    return _new_trace(N, M, k)


def new_trace_bound(N: int, M: int, k: int) -> int:
    """Upper bound 2^(omega(M'_odd)+1) h(Delta_M) + [k = 2] for |new_trace|."""
    q = TraceQuery(N, M, k)
    return 2 ** (omega(q.M_prime_odd) + 1) * class_number(field_discriminant(M)) + (k == 2)


def new_trace_zero_classifier(N: int, M: int, k: int) -> bool:
    """Predict whether tr W_M vanishes on S_k^new(N), for M > 3.

    For k = 2 the prediction is restricted to levels with a nonzero new
    space; callers pair it with a dimension check.
    """
    q = TraceQuery(N, M, k)
    if M <= 3:
        raise InvalidInput(f"zero classification needs M > 3, got M = {M}")
    if k == 2:
        return (N == M and M in K2_TRACE_ZERO_N_EQ_M) or (N == 2 * M and M in K2_TRACE_ZERO_N_EQ_2M)
    dM = field_discriminant(M)
    if any(kronecker(dM, p) == 1 for p in factorize(q.M_prime_odd).primes):
        return True
    return q.M_prime % 2 == 0 and M % 8 == 7


def alternating_divisor_sum(m: int) -> int:
    """Sum over d | m of (-2)^omega(m/d); equals (-1)^omega(m) for squarefree m."""
    return sum((-2) ** omega(m // d) for d in divisors(m))
