"""Self-verification: every identity between independent routes, per level."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import analysis, dimensions, traces
from .arith import divisors, is_squarefree, omega
from .errors import ConsistencyError, HypothesisNotSatisfied, InvalidInput
from .quadratic import class_number, field_discriminant


@dataclass(frozen=True)
class Failure:
    N: int
    M: int
    k: int
    identity: str
    detail: str = ""

    def __str__(self):
        return f"N={self.N} M={self.M} k={self.k} identity={self.identity} {self.detail}".rstrip()


def _check_level(N: int, weights: list[int]) -> Failure | None:
    for k in weights:
        total = dimensions.dim_new(N, k)
        plus, minus = dimensions.dim_plus_minus(N, k)
        if plus + minus != total or plus < minus:
            return Failure(N, N, k, "plus_minus", f"{plus}+{minus} vs {total}")
        if k >= 4 and N > 3 and 2 * (plus - minus) != traces.b_coeff(N, 1) * class_number(field_discriminant(N)):
            return Failure(N, N, k, "bias_defect")
        if analysis.perfect_equidistribution(N, k) != analysis.perfect_equidistribution_expected(N, k):
            return Failure(N, N, k, "perfect_equidistribution")
        for M in divisors(N)[1:]:
            tr = traces.new_trace(N, M, k)
            if traces.full_trace(N, M, k) != traces.full_trace_explicit(N, M, k):
                return Failure(N, M, k, "full_trace_vs_explicit")
            if tr != traces.new_trace_incl_excl(N, M, k):
                return Failure(N, M, k, "new_trace_vs_incl_excl")
            if abs(tr) > traces.new_trace_bound(N, M, k):
                return Failure(N, M, k, "trace_bound")
            if M > 3:
                predicted = traces.new_trace_zero_classifier(N, M, k)
                actual = tr == 0 and (k > 2 or total > 0)
                if predicted != actual:
                    return Failure(N, M, k, "zero_classifier", f"predicted {predicted}, trace {tr}")
            n = 2 ** omega(M)
            bound = Fraction(sum(traces.new_trace_bound(N, d, k) for d in divisors(M)[1:]), n)
            closed = all(dimensions.signpat_hypotheses(N, M))
            dims = {}
            for e in dimensions.all_patterns(M):
                dims[str(e)] = v = dimensions.dim_sign_pattern(N, k, e)
                if abs(v - Fraction(total, n)) > bound:
                    return Failure(N, M, k, "defect_bound", str(e))
                if closed and dimensions.dim_sign_pattern_closed(N, k, e) != v:
                    return Failure(N, M, k, "sign_pattern_closed", str(e))
            if sum(dims.values()) != total:
                return Failure(N, M, k, "partition")
            if N % 2 and k >= 4:
                try:
                    c = analysis.pattern_bias_check(N, k, M)
                except HypothesisNotSatisfied:
                    pass
                else:
                    if not c.holds or (M == N and not c.strict):
                        return Failure(N, M, k, "pattern_bias")
            if k >= 4 and analysis.equidistributing_primes_hold(N, M) and len(set(dims.values())) != 1:
                return Failure(N, M, k, "level_equidistribution")
    return None


def _check_level_safe(args: tuple[int, tuple[int, ...]]) -> Failure | None:
    N, weights = args
    try:
        return _check_level(N, list(weights))
    except ConsistencyError as exc:
        return Failure(N, 0, 0, "integrality", str(exc))


def run_verify(max_level: int = 500, max_weight: int = 20, jobs: int = 1) -> Failure | None:
    """Check all identities for squarefree 1 < N <= max_level, even k <= max_weight.

    Returns the first failure in level order, or None.
    """
    levels = [N for N in range(2, max_level + 1) if is_squarefree(N)]
    weights = tuple(range(2, max_weight + 1, 2))
    if not levels or not weights:
        raise InvalidInput("empty verification range")
    tasks = [(N, weights) for N in levels]
    if jobs <= 1:
        results = map(_check_level_safe, tasks)
        return next((f for f in results if f is not None), None)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for f in pool.map(_check_level_safe, tasks, chunksize=8):
            if f is not None:
                return f
    return None
