"""Dimensions of newform spaces at squarefree level.

``dim_new`` is the closed multiplicative formula for squarefree level.
The plus/minus split by root number and the split by Atkin-Lehner sign
pattern are both obtained by projecting with traces of Atkin-Lehner
operators from :mod:`alq.traces`.

Sign patterns are written as strings over ``+``/``-`` indexed by the
primes of the modulus in ascending order: for M = 35, ``"+-"`` means
eigenvalue +1 at 5 and -1 at 7.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import check_weight, divisors, factorize, kronecker, mu, odd_part, omega, phi, squarefree_level
from .errors import ConsistencyError, HypothesisNotSatisfied, InvalidInput
from .quadratic import field_discriminant, h_prime
from .traces import as_integer, b_coeff, new_trace

_MINUS_CHARS = "-−"


@dataclass(frozen=True)
class SignPattern:
    """A choice of sign at each prime of a squarefree modulus."""

    modulus: int
    signs: tuple[int, ...]

    def __post_init__(self):
        primes = squarefree_level(self.modulus, "sign modulus").primes
        if len(self.signs) != len(primes):
            raise InvalidInput(
                f"pattern for M = {self.modulus} needs {len(primes)} signs, got {len(self.signs)}"
            )
        if any(s not in (1, -1) for s in self.signs):
            raise InvalidInput(f"signs must be +1 or -1, got {self.signs}")

    @classmethod
    def parse(cls, modulus: int, text: str) -> SignPattern:
        signs = []
        for ch in text:
            if ch == "+":
                signs.append(1)
            elif ch in _MINUS_CHARS:
                signs.append(-1)
            else:
                raise InvalidInput(f"bad character {ch!r} in sign pattern {text!r}")
        return cls(modulus, tuple(signs))

    @classmethod
    def all_minus(cls, modulus: int) -> SignPattern:
        return cls(modulus, (-1,) * omega(modulus))

    @property
    def primes(self) -> tuple[int, ...]:
        return factorize(self.modulus).primes

    def __call__(self, d: int) -> int:
        """Multiplicative extension to divisors d of the modulus."""
        if self.modulus % d:
            raise InvalidInput(f"{d} does not divide {self.modulus}")
        return math.prod(s for p, s in zip(self.primes, self.signs) if d % p == 0)

    def __str__(self):
        return "".join("+" if s == 1 else "-" for s in self.signs)


def all_patterns(M: int) -> list[SignPattern]:
    """Every sign pattern for M, ordered ``++..``, ``+..-``, ..., ``--..``."""
    n = omega(M)
    return [SignPattern(M, signs) for signs in itertools.product((1, -1), repeat=n)]


@dataclass
class DimensionBreakdown:
    N: int
    k: int
    M: int
    entries: dict[str, int] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self):
        if self.entries and len(self.entries) != 2 ** omega(self.M):
            raise ConsistencyError(f"breakdown for M = {self.M} has {len(self.entries)} entries")
        if self.entries and sum(self.entries.values()) != self.total:
            raise ConsistencyError(f"pattern dimensions at N={self.N}, k={self.k} do not sum to {self.total}")


def _check(N: int, k: int) -> None:
    squarefree_level(N)
    check_weight(k)


def _root_sign(k: int) -> int:
    return 1 if (k // 2) % 2 == 0 else -1


@lru_cache(maxsize=None)
def dim_new(N: int, k: int) -> int:
    """dim S_k^new(N) for squarefree N > 1."""
    _check(N, k)
    primes = factorize(N).primes
    total = Fraction((k - 1) * phi(N), 12)
    total += (Fraction(1, 4) + k // 4 - Fraction(k, 4)) * math.prod(kronecker(-4, p) - 1 for p in primes)
    total += (Fraction(1, 3) + k // 3 - Fraction(k, 3)) * math.prod(kronecker(p, 3) - 1 for p in primes)
    if k == 2:
        total += mu(N)
    d = as_integer(total, f"dim S_{k}^new({N})")
    if d < 0:
        raise ConsistencyError(f"dim S_{k}^new({N}) = {d} < 0")
    return d


def root_number(k: int, eps_N: int) -> int:
    """Sign of the functional equation from the W_N eigenvalue."""
    if k % 2:
        raise InvalidInput(f"weight must be even, got {k}")
    return _root_sign(k) * eps_N


def dim_plus_minus(N: int, k: int) -> tuple[int, int]:
    """(dim S_k^{new,+}(N), dim S_k^{new,-}(N)) split by root number."""
    total = dim_new(N, k)
    # root number w_f = (-1)^(k/2) * (W_N eigenvalue)
    signed = _root_sign(k) * new_trace(N, N, k)
    if (total + signed) % 2:
        raise ConsistencyError(f"dim and trace parities disagree at N={N}, k={k}")
    plus, minus = (total + signed) // 2, (total - signed) // 2
    if minus < 0 or plus < 0:
        raise ConsistencyError(f"negative plus/minus dimension at N={N}, k={k}: {(plus, minus)}")
    return plus, minus


def _as_pattern(N: int, eps: SignPattern | str, M: int | None) -> SignPattern:
    if isinstance(eps, str):
        eps = SignPattern.parse(N if M is None else M, eps)
    if N % eps.modulus:
        raise InvalidInput(f"sign modulus {eps.modulus} does not divide N = {N}")
    return eps


def dim_sign_pattern(N: int, k: int, eps: SignPattern | str, M: int | None = None) -> int:
    """dim S_k^{new,eps}(N) by projecting with W_d for d | M.

    ``eps`` may be a string, read against ``M`` (default N).
    """
    _check(N, k)
    eps = _as_pattern(N, eps, M)
    M = eps.modulus
    total = dim_new(N, k) + sum(eps(d) * new_trace(N, d, k) for d in divisors(M)[1:])
    n = 2 ** omega(M)
    if total % n:
        raise ConsistencyError(f"dim S_{k}^new,{eps}({N}) = {Fraction(total, n)} is not an integer")
    if total < 0:
        raise ConsistencyError(f"dim S_{k}^new,{eps}({N}) = {total // n} < 0")
    return total // n


def signpat_hypotheses(N: int, M: int) -> tuple[bool, bool]:
    """Hypotheses (i), (ii) under which the closed sign-pattern formula has no M = 2, 3 terms."""
    rest = factorize(N // M).primes
    i = M % 2 == 1 or any(kronecker(-4, p) == 1 for p in rest)
    ii = M % 3 != 0 or any(p % 2 and kronecker(-3, p) == 1 for p in rest)
    return i, ii


def signpat_support(N: int, M: int) -> list[int]:
    """Divisors d > 1 of M with (Delta_d / p) = -1 for every odd p | N/d."""
    out = []
    for d in divisors(M)[1:]:
        Dd = field_discriminant(d)
        if all(kronecker(Dd, p) == -1 for p in factorize(odd_part(N // d)).primes):
            out.append(d)
    return out


def dim_sign_pattern_closed(N: int, k: int, eps: SignPattern | str, M: int | None = None) -> int:
    """Closed form for dim S_k^{new,eps}(N); raises HypothesisNotSatisfied outside its range."""
    _check(N, k)
    eps = _as_pattern(N, eps, M)
    M = eps.modulus
    i, ii = signpat_hypotheses(N, M)
    if not (i and ii):
        raise HypothesisNotSatisfied(
            f"closed sign-pattern formula needs hypotheses (i), (ii); got {(i, ii)} at N={N}, M={M}"
        )
    s = Fraction(0)
    for d in signpat_support(N, M):
        Nd = N // d
        s += eps(d) * h_prime(field_discriminant(d)) * b_coeff(d, Nd) * (-2) ** omega(odd_part(Nd))
    total = dim_new(N, k) + Fraction(_root_sign(k), 2) * s
    if k == 2:
        total += (-1) ** omega(N) * (math.prod(1 - e for e in eps.signs) - 1)
    total /= 2 ** omega(M)
    d = as_integer(total, f"dim S_{k}^new,{eps}({N})")
    if d < 0:
        raise ConsistencyError(f"dim S_{k}^new,{eps}({N}) = {d} < 0")
    return d


def dimension_breakdown(N: int, k: int, M: int | None = None) -> DimensionBreakdown:
    """All 2^omega(M) sign-pattern dimensions for modulus M (default N)."""
    M = N if M is None else M
    _check(N, k)
    entries = {str(e): dim_sign_pattern(N, k, e) for e in all_patterns(M)}
    return DimensionBreakdown(N, k, M, entries, dim_new(N, k))
