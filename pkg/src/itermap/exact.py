"""Ground-truth computations: brute-force enumeration of all n^n mappings,
the exact distribution of the cyclic-vertex count Z, mean permutation order
M_m, mean permutation cycle product b_m, and the exact conditional
expectations E_n(T) and E_n(B).

Everything here is exact rational arithmetic; these routines are the
oracles every asymptotic route is validated against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

BRUTE_FORCE_MAX_N = 8
M_MAX_DEFAULT = 60
CONDITIONAL_MAX_N = 500


class CeilingError(ValueError):
    """A requested size exceeds the configured enumeration ceiling."""


# ---------------------------------------------------------------------------
# Exhaustive enumeration of Omega_n


@dataclass(frozen=True)
class EnumerationSummary:
    """Aggregates over all n^n mappings of [n]."""

    n: int
    count: int                 # n^n
    sum_T: int
    sum_B: int
    z_counts: tuple[int, ...]  # z_counts[m] = #{f : Z(f) = m}, index 0..n
    connected_count: int       # |U_n|
    connected_cycle_total: int  # sum of the cycle length over connected f


def _profile_T_B(counts: tuple[int, ...]) -> tuple[int, int]:
    """T and B for a cycle-count profile (counts[L-1] cycles of length L)."""
    T = 1
    B = 1
    for L, a in enumerate(counts, start=1):
        if a:
            T = math.lcm(T, L)
            B *= L**a
    return T, B


@lru_cache(maxsize=None)
def enumerate_summary(n: int, chunk: int = 1 << 18) -> EnumerationSummary:
    """One vectorized pass over all n^n mappings.

    Mappings are enumerated in mixed radix; cycles are found by pointer
    doubling (f^(2^k) for 2^k >= n has the cyclic set as image) and the
    per-vertex cycle length by comparing iterates f^t against the identity.
    Rows are then grouped by cycle-count profile so T and B are computed
    once per profile.
    """
    if not 1 <= n <= BRUTE_FORCE_MAX_N:
        raise CeilingError("enumeration too large")
    total = n**n
    ident = np.arange(n, dtype=np.int64)
    doublings = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    sum_T = 0
    sum_B = 0
    z_counts = np.zeros(n + 1, dtype=np.int64)
    connected_count = 0
    connected_cycle_total = 0
    radix = np.array([(n + 1) ** L for L in range(n)], dtype=np.int64)
    profile_cache: dict[int, tuple[int, int]] = {}

    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        f = np.empty((hi - lo, n), dtype=np.int64)
        for j in range(n):
            f[:, j] = (idx // n**j) % n

        g = f
        for _ in range(doublings):
            g = np.take_along_axis(g, g, axis=1)
        cyclic = np.zeros_like(f, dtype=bool)
        np.put_along_axis(cyclic, g, True, axis=1)
        Z = cyclic.sum(axis=1)
        z_counts += np.bincount(Z, minlength=n + 1)

        clen = np.zeros_like(f)
        ft = f
        for t in range(1, n + 1):
            hit = cyclic & (clen == 0) & (ft == ident)
            clen[hit] = t
            if t < n:
                ft = np.take_along_axis(f, ft, axis=1)

        counts = np.stack(
            [(clen == L).sum(axis=1) // L for L in range(1, n + 1)], axis=1
        )
        ncomp = counts.sum(axis=1)
        conn = ncomp == 1
        connected_count += int(conn.sum())
        connected_cycle_total += int(Z[conn].sum())

        keys = counts @ radix
        uniq, inv, ucounts = np.unique(keys, return_inverse=True, return_counts=True)
        first = np.empty(len(uniq), dtype=np.int64)
        first[inv] = np.arange(len(keys))
        for u, key in enumerate(uniq):
            k = int(key)
            if k not in profile_cache:
                profile_cache[k] = _profile_T_B(tuple(counts[first[u]]))
            T, B = profile_cache[k]
            sum_T += T * int(ucounts[u])
            sum_B += B * int(ucounts[u])

    return EnumerationSummary(
        n=n,
        count=total,
        sum_T=sum_T,
        sum_B=sum_B,
        z_counts=tuple(int(c) for c in z_counts),
        connected_count=connected_count,
        connected_cycle_total=connected_cycle_total,
    )


def brute_force_expectations(n: int) -> tuple[Fraction, Fraction]:
    """Exact (E_n(T), E_n(B)) by enumerating all n^n mappings; n <= 8."""
    s = enumerate_summary(n)
    return Fraction(s.sum_T, s.count), Fraction(s.sum_B, s.count)


# ---------------------------------------------------------------------------
# Distribution of the number of cyclic vertices (Rubin-Sitgreaves formula)


@dataclass(frozen=True)
class ZDistribution:
    """Exact pmf of Z, the number of cyclic vertices, for one n."""

    n: int
    pmf: tuple[Fraction, ...]  # pmf[m-1] = P_n(Z = m), m = 1..n


def z_pmf(n: int) -> ZDistribution:
    """P_n(Z=m) = n! m / ((n-m)! n^(m+1)) as exact rationals."""
    if n < 1:
        raise ValueError("n must be positive")
    probs = []
    falling = 1  # n! / (n-m)! for the current m
    for m in range(1, n + 1):
        falling *= n - m + 1
        probs.append(Fraction(falling * m, n ** (m + 1)))
    return ZDistribution(n=n, pmf=tuple(probs))


def z_pmf_sums_to_one(n: int) -> bool:
    """Integer-only normalization check: sum_m m * n!/(n-m)! * n^(n-m) == n^(n+1)."""
    acc = 0
    falling = 1
    for m in range(1, n + 1):
        falling *= n - m + 1
        acc += m * falling * n ** (n - m)
    return acc == n ** (n + 1)


def z_log_pmf(n: int) -> np.ndarray:
    """log P_n(Z=m) for m = 1..n, vectorized floats for large n."""
    m = np.arange(1, n + 1, dtype=np.float64)
    from scipy.special import gammaln

    return gammaln(n + 1) - gammaln(n - m + 1) + np.log(m) - (m + 1) * math.log(n)


def z_mean(n: int) -> float:
    """E_n(Z), in floats, usable at large n."""
    logp = z_log_pmf(n)
    m = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum(m * np.exp(logp)))


# ---------------------------------------------------------------------------
# Integer partitions and permutation averages


def iter_cycle_types(m: int):
    """Yield (lcm, product, count) over integer partitions of m.

    count is the number of permutations of [m] with that cycle type,
    m! / prod(d^a_d * a_d!).  Parts are enumerated descending with
    multiplicity grouping so the weight accumulates incrementally.
    """
    fact_m = math.factorial(m)

    def rec(remaining: int, max_part: int, denom: int, cur_lcm: int, cur_prod: int):
        if remaining == 0:
            yield cur_lcm, cur_prod, fact_m // denom
            return
        for part in range(min(max_part, remaining), 0, -1):
            piece = 1
            new_lcm = math.lcm(cur_lcm, part)
            for mult in range(1, remaining // part + 1):
                piece *= part * mult
                yield from rec(
                    remaining - part * mult,
                    part - 1,
                    denom * piece,
                    new_lcm,
                    cur_prod * part**mult,
                )

    yield from rec(m, m, 1, 1, 1)


@lru_cache(maxsize=None)
def _partition_sums(m: int) -> tuple[int, int, int]:
    """(sum lcm*count, sum product*count, number of partitions) over cycle types of m."""
    lcm_total = 0
    prod_total = 0
    partitions = 0
    for l, p, c in iter_cycle_types(m):
        lcm_total += l * c
        prod_total += p * c
        partitions += 1
    return lcm_total, prod_total, partitions


def partition_count(m: int) -> int:
    """p(m), counted by the same enumeration that drives M_m."""
    return _partition_sums(m)[2]


def perm_order_mean(m: int, m_max: int = M_MAX_DEFAULT) -> Fraction:
    """M_m: mean order (lcm of cycle lengths) of a uniform permutation of [m]."""
    if not 1 <= m <= m_max:
        raise CeilingError("partition enumeration too large")
    return Fraction(_partition_sums(m)[0], math.factorial(m))


def perm_B_mean_by_partitions(m: int) -> Fraction:
    """b_m via explicit partition enumeration (slow reference route)."""
    if m == 0:
        return Fraction(1)
    return Fraction(_partition_sums(m)[1], math.factorial(m))


@lru_cache(maxsize=None)
def _perm_B_numerators(upto: int) -> tuple[int, ...]:
    """beta_m with b_m = beta_m / m!, via the exp-of-series recurrence.

    b(x) = exp(x/(1-x)); m*b_m = sum_d d*b_{m-d} becomes integer-only after
    clearing factorials.
    """
    beta = [1] * (upto + 1)
    fact = [math.factorial(i) for i in range(upto + 1)]
    for m in range(1, upto + 1):
        acc = 0
        for d in range(1, m + 1):
            acc += d * beta[m - d] * (fact[m - 1] // fact[m - d])
        beta[m] = acc
    return tuple(beta)


def perm_B_mean(m: int) -> Fraction:
    """b_m: mean of the cycle-length product of a uniform permutation of [m].

    Equals the coefficient of x^m in exp(x/(1-x)); second, structurally
    independent exact route to E_n(B).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    beta = _perm_B_numerators(max(m, 64))
    return Fraction(beta[m], math.factorial(m))


# ---------------------------------------------------------------------------
# Exact expectations by conditioning on the cyclic-vertex count


def exact_E_T(n: int, m_max: int = M_MAX_DEFAULT) -> Fraction:
    """E_n(T) = sum_m P_n(Z=m) * M_m, exact."""
    if n > m_max:
        raise CeilingError("partition enumeration too large")
    dist = z_pmf(n)
    return sum(
        (p * perm_order_mean(m, m_max) for m, p in enumerate(dist.pmf, start=1)),
        Fraction(0),
    )


def exact_E_B_conditional(n: int, ceiling: int = CONDITIONAL_MAX_N) -> Fraction:
    """E_n(B) = sum_m P_n(Z=m) * b_m, exact; independent of the series engine."""
    if n > ceiling:
        raise CeilingError("enumeration too large")
    dist = z_pmf(n)
    beta = _perm_B_numerators(max(n, 64))
    return sum(
        (p * Fraction(beta[m], math.factorial(m)) for m, p in enumerate(dist.pmf, start=1)),
        Fraction(0),
    )
