"""Distribution statistics built on the dimension formulas.

Bias toward root number +1, perfect equidistribution, bias of the
all-minus sign pattern, equidistribution forced by auxiliary primes in the
level, and lower bounds for the number of Galois orbits.  ``scan`` runs
any of these over a box of levels and weights and returns flat rows.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import check_weight, divisors, factorize, is_prime, is_squarefree, kronecker, odd_part, omega, phi
from .dimensions import (
    SignPattern,
    all_patterns,
    dim_new,
    dim_plus_minus,
    dim_sign_pattern,
    dim_sign_pattern_closed,
    signpat_hypotheses,
)
from .errors import ConsistencyError, HypothesisNotSatisfied, InvalidInput
from .quadratic import class_number, class_number_table, field_discriminant, seed_class_numbers
from .traces import b_coeff, new_trace_bound


def _disc(d: int) -> int:
    # Delta_1 is taken as -4, the discriminant of Q(sqrt -1)
    return -4 if d == 1 else field_discriminant(d)


@dataclass(frozen=True)
class BiasReport:
    N: int
    k: int
    dim_plus: int
    dim_minus: int
    defect: int
    c_N: Fraction
    class_number: int


@dataclass(frozen=True)
class OrbitBound:
    N: int
    k: int
    M: int
    patterns_occurring: int
    patterns_possible: int
    K_threshold: Fraction
    H_M: int

    @property
    def all_occur(self) -> bool:
        return self.patterns_occurring == self.patterns_possible


@dataclass(frozen=True)
class PatternBiasCheck:
    N: int
    k: int
    M: int
    direction: str  # "max": all-minus is largest, "min": smallest
    minus_dim: int
    dims: dict[str, int] = field(hash=False)
    holds: bool
    strict: bool


def bias_report(N: int, k: int) -> BiasReport:
    plus, minus = dim_plus_minus(N, k)
    c_N = Fraction(b_coeff(N, 1), 2)
    h = class_number(field_discriminant(N))
    defect = plus - minus
    if defect < 0:
        raise ConsistencyError(f"root number bias reversed at N={N}, k={k}")
    if k >= 4 and N > 3 and defect != c_N * h:
        raise ConsistencyError(f"defect {defect} != {c_N}*{h} at N={N}, k={k}")
    return BiasReport(N, k, plus, minus, defect, c_N, h)


def perfect_equidistribution(N: int, k: int) -> bool:
    """True iff root numbers +1 and -1 occur equally often in S_k^new(N)."""
    plus, minus = dim_plus_minus(N, k)
    return plus == minus


def perfect_equidistribution_expected(N: int, k: int) -> bool:
    """The classification of levels and weights with equal plus and minus spaces."""
    check_weight(k)
    if dim_new(N, k) == 0:
        return True
    if N == 2:
        return k % 8 in (4, 6)
    if N == 3:
        return k % 12 in (4, 10)
    return k == 2 and N in (37, 58)


def _bias2_hypotheses(N: int, k: int, M: int) -> str | None:
    if k < 4:
        return "k >= 4"
    if N % 2 == 0 or not is_squarefree(N):
        return "N odd and squarefree"
    if M <= 3 or N % M:
        return "M > 3 dividing N"
    if M % 3 == 0 and not any(kronecker(-3, p) == 1 for p in factorize(N // M).primes):
        return "an odd p | N/M with (-3/p) = 1 when 3 | M"
    return None


def pattern_bias_check(N: int, k: int, M: int) -> PatternBiasCheck:
    """Compare the all-minus pattern for M against every other pattern."""
    missing = _bias2_hypotheses(N, k, M)
    if missing:
        raise HypothesisNotSatisfied(f"pattern bias needs {missing} (N={N}, k={k}, M={M})")
    dims = {str(e): dim_sign_pattern(N, k, e) for e in all_patterns(M)}
    minus = str(SignPattern.all_minus(M))
    m = dims[minus]
    others = [v for key, v in dims.items() if key != minus]
    if (k // 2 + omega(N)) % 2 == 0:
        direction, holds, strict = "max", all(m >= v for v in others), any(m > v for v in others)
    else:
        direction, holds, strict = "min", all(m <= v for v in others), any(m < v for v in others)
    return PatternBiasCheck(N, k, M, direction, m, dims, holds, strict)


def equidistributing_primes_hold(N: int, M: int) -> bool:
    """Each d | M has an odd prime p | N/M with (Delta_d/p) = 1.

    d = 1 (Delta_1 = -4) is only required when M is even.
    """
    rest = [p for p in factorize(N // M).primes if p % 2]
    ds = divisors(M) if M % 2 == 0 else divisors(M)[1:]
    return all(any(kronecker(_disc(d), p) == 1 for p in rest) for d in ds)


def equidistributing_primes_check(N: int, k: int, M: int) -> bool:
    """Predict equal dimensions for all sign patterns of M; verify when predicted."""
    check_weight(k)
    if k < 4:
        raise InvalidInput(f"equidistribution in the level needs k >= 4, got {k}")
    if N % M:
        raise InvalidInput(f"M = {M} does not divide N = {N}")
    if not equidistributing_primes_hold(N, M):
        return False
    dims = {dim_sign_pattern(N, k, e) for e in all_patterns(M)}
    if len(dims) != 1:
        raise ConsistencyError(f"predicted equidistribution fails at N={N}, k={k}, M={M}: {dims}")
    return True


def max_class_number(M: int) -> int:
    return max(class_number(_disc(d)) for d in divisors(M))


def k_threshold(N: int, M: int) -> Fraction:
    """K_{N,M}: beyond max(K_{N,M}, 3) every sign pattern for M occurs."""
    if N % M or M <= 1:
        raise InvalidInput(f"k_threshold needs 1 < M | N, got N={N}, M={M}")
    w = omega(N)
    H = max_class_number(M)
    return Fraction(24 * (3**w - 2 ** omega(odd_part(N))) * H + 10 * 2**w, phi(N)) + 1


def guaranteed_weight_bound(N: int, M: int) -> Fraction:
    return max(k_threshold(N, M), Fraction(3))


def patterns_occurring(N: int, k: int, M: int | None = None) -> OrbitBound:
    """Number of sign patterns for M (default N) with a nonzero subspace."""
    M = N if M is None else M
    count = sum(1 for e in all_patterns(M) if dim_sign_pattern(N, k, e) > 0)
    return OrbitBound(N, k, M, count, 2 ** omega(M), k_threshold(N, M), max_class_number(M))


def prime_sign_occurrence(p: int, k: int) -> bool:
    """Whether both Atkin-Lehner signs occur in S_k^new(p)."""
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    return all(dim_sign_pattern(p, k, e) > 0 for e in all_patterns(p))


# ---------------------------------------------------------------------------
# scans

REPORT_FIELDS = {
    "dims": ("N", "k", "M", "pattern", "dim", "total", "main_term", "defect", "defect_bound", "formula"),
    "bias": ("N", "k", "total", "plus", "minus", "defect", "c_N", "class_number"),
    "equidist": ("N", "k", "M", "total", "min_dim", "max_dim", "defect", "perfect", "predicted"),
    "orbits": ("N", "k", "M", "occurring", "possible", "all_occur", "K_threshold", "H_M", "guaranteed"),
}


def parse_m_mode(text: str) -> int | None:
    """``full`` -> None (M = N); ``fixed:M`` -> M."""
    if text == "full":
        return None
    if text.startswith("fixed:"):
        try:
            M = int(text[6:])
        except ValueError:
            raise InvalidInput(f"bad M in m-mode {text!r}") from None
        if M <= 1 or not is_squarefree(M):
            raise InvalidInput(f"fixed M must be squarefree and > 1, got {M}")
        return M
    raise InvalidInput(f"m-mode must be 'full' or 'fixed:M', got {text!r}")


def _dims_rows(N: int, k: int, M: int) -> list[dict]:
    total = dim_new(N, k)
    n = 2 ** omega(M)
    main = Fraction((k - 1) * phi(N), 12 * n)
    bound = Fraction(sum(new_trace_bound(N, d, k) for d in divisors(M)[1:]), n)
    closed = all(signpat_hypotheses(N, M))
    rows = []
    for e in all_patterns(M):
        if closed:
            dim = dim_sign_pattern_closed(N, k, e)
        else:
            dim = dim_sign_pattern(N, k, e)
        defect = dim - Fraction(total, n)
        if abs(defect) > bound:
            raise ConsistencyError(f"defect bound fails at N={N}, k={k}, pattern {e}")
        rows.append(
            dict(
                N=N, k=k, M=M, pattern=str(e), dim=dim, total=total, main_term=main,
                defect=defect, defect_bound=bound, formula="closed" if closed else "sum",
            )
        )
    return rows


def _bias_rows(N: int, k: int, M: int) -> list[dict]:
    r = bias_report(N, k)
    return [dict(N=N, k=k, total=r.dim_plus + r.dim_minus, plus=r.dim_plus, minus=r.dim_minus,
                 defect=r.defect, c_N=r.c_N, class_number=r.class_number)]


def _equidist_rows(N: int, k: int, M: int) -> list[dict]:
    dims = [dim_sign_pattern(N, k, e) for e in all_patterns(M)]
    predicted = k >= 4 and equidistributing_primes_check(N, k, M)
    lo, hi = min(dims), max(dims)
    return [dict(N=N, k=k, M=M, total=dim_new(N, k), min_dim=lo, max_dim=hi, defect=hi - lo,
                 perfect=lo == hi, predicted=predicted)]


def _orbit_rows(N: int, k: int, M: int) -> list[dict]:
    b = patterns_occurring(N, k, M)
    return [dict(N=N, k=k, M=M, occurring=b.patterns_occurring, possible=b.patterns_possible,
                 all_occur=b.all_occur, K_threshold=b.K_threshold, H_M=b.H_M,
                 guaranteed=k > max(b.K_threshold, 3))]


_ROW_BUILDERS = {"dims": _dims_rows, "bias": _bias_rows, "equidist": _equidist_rows, "orbits": _orbit_rows}


def scan_cells(levels: range, weights: range, m_fixed: int | None) -> list[tuple[int, int, int]]:
    if len(levels) == 0 or len(weights) == 0:
        raise InvalidInput("empty level or weight range")
    Ns = [N for N in levels if N > 1 and is_squarefree(N) and (m_fixed is None or N % m_fixed == 0)]
    ks = [k for k in weights if k >= 2 and k % 2 == 0]
    if not Ns:
        raise InvalidInput("no squarefree levels > 1 in range" + (f" divisible by {m_fixed}" if m_fixed else ""))
    if not ks:
        raise InvalidInput("no even weights >= 2 in range")
    return [(N, k, N if m_fixed is None else m_fixed) for N in Ns for k in ks]


_reported: set[int] = set()


def _scan_cell(args: tuple[str, int, int, int]):
    report, N, k, M = args
    rows = _ROW_BUILDERS[report](N, k, M)
    table = class_number_table()
    fresh = {D: h for D, h in table.items() if D not in _reported}
    _reported.update(fresh)
    return rows, fresh


def scan(levels: range, weights: range, m_fixed: int | None = None, report: str = "dims", jobs: int = 1) -> list[dict]:
    """Rows for every (N, k) cell, ordered by N, then k, then pattern.

    Output does not depend on ``jobs``.  Class numbers computed in worker
    processes are merged back into this process's memo.
    """
    if report not in _ROW_BUILDERS:
        raise InvalidInput(f"unknown report {report!r}; choose from {sorted(_ROW_BUILDERS)}")
    tasks = [(report, N, k, M) for N, k, M in scan_cells(levels, weights, m_fixed)]
    rows: list[dict] = []
    if jobs <= 1:
        for t in tasks:
            rows.extend(_ROW_BUILDERS[report](*t[1:]))
        return rows
    chunk = max(1, len(tasks) // (8 * jobs))
    with ProcessPoolExecutor(max_workers=jobs, initializer=seed_class_numbers,
                             initargs=(class_number_table(),)) as pool:
        for cell_rows, fresh in pool.map(_scan_cell, tasks, chunksize=chunk):
            rows.extend(cell_rows)
            seed_class_numbers(fresh)
    return rows


def orbit_lower_bound(N: int, k: int) -> int:
    """Lower bound for the number of Galois orbits in S_k^new(N)."""
    return patterns_occurring(N, k).patterns_occurring
