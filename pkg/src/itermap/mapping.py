"""Functional graphs of self-maps of {1..n}: cycle structure and period statistics.

A mapping f: [n] -> [n] induces a directed graph with edges v -> f(v).
Every weak component contains exactly one directed cycle with trees
hanging off it.  The period T(f) of the iterate sequence equals the lcm
of the cycle lengths; B(f) is their product with multiplicity; O(f), the
number of distinct iterates, equals T plus the preperiod excess and
always satisfies |O - T| < n.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass


class MappingError(ValueError):
    """Invalid mapping input (bad target, wrong token count, empty domain)."""


@dataclass(frozen=True)
class Mapping:
    """A total function on {1..n}; targets[i-1] holds f(i), 1-based."""

    n: int
    targets: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise MappingError("empty domain")
        if len(self.targets) != self.n:
            raise MappingError("length mismatch")
        for t in self.targets:
            if not 1 <= t <= self.n:
                raise MappingError("invalid target")


@dataclass(frozen=True)
class CycleStructure:
    """Decomposition of the functional graph of one mapping.

    cyclic_vertices are the v with f^t(v) = v for some t >= 1 (1-based).
    tail_heights[v-1] is the distance from v to the cyclic set (0 iff
    cyclic); component_profile maps component size d to the number of
    d-vertex weak components; nu is the total vertex count.
    """

    cyclic_vertices: frozenset[int]
    cycle_lengths: tuple[int, ...]
    tail_heights: tuple[int, ...]
    component_profile: dict[int, int]
    nu: int

    @property
    def num_cyclic(self) -> int:
        return len(self.cyclic_vertices)

    @property
    def max_tail_height(self) -> int:
        return max(self.tail_heights)


@dataclass(frozen=True)
class PeriodStats:
    """Period statistics of one mapping: exact T, B, O and their logs."""

    T: int
    B: int
    O: int
    log_T: float
    log_B: float
    prime_exponents_T: dict[int, int]


def parse_mapping(text: str | bytes) -> Mapping:
    """Parse 'n t1 ... tn' (whitespace separated, 1-based targets)."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    tokens = text.split()
    if not tokens:
        raise MappingError("empty domain")
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise MappingError(f"invalid token: {exc}") from None
    n = values[0]
    if n < 1:
        raise MappingError("empty domain")
    if len(values) != n + 1:
        raise MappingError("length mismatch")
    return Mapping(n, tuple(values[1:]))


def analyze(f: Mapping) -> CycleStructure:
    """Decompose the functional graph of f in O(n) time and space."""
    n = f.n
    t = [v - 1 for v in f.targets]

    # Cycle detection: walk forward from each unvisited vertex; a walk that
    # closes on itself (hits a vertex of the current path) found a new cycle.
    color = [0] * n  # 0 unseen, 1 on current path, 2 finished
    cycle_id = [-1] * n
    cycle_lengths: list[int] = []
    for start in range(n):
        if color[start]:
            continue
        path = []
        v = start
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = t[v]
        if color[v] == 1:
            cyc = path[path.index(v):]
            cid = len(cycle_lengths)
            cycle_lengths.append(len(cyc))
            for u in cyc:
                cycle_id[u] = cid
        for u in path:
            color[u] = 2

    # Tail heights and component ids by reverse BFS from the cyclic set.
    preds: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        preds[t[v]].append(v)
    height = [-1] * n
    comp = [-1] * n
    queue: deque[int] = deque()
    for v in range(n):
        if cycle_id[v] >= 0:
            height[v] = 0
            comp[v] = cycle_id[v]
            queue.append(v)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if height[u] < 0:
                height[u] = height[v] + 1
                comp[u] = comp[v]
                queue.append(u)

    comp_sizes = Counter(comp)
    profile = dict(sorted(Counter(comp_sizes.values()).items()))
    cyclic = frozenset(v + 1 for v in range(n) if cycle_id[v] >= 0)
    assert sum(cycle_lengths) == len(cyclic)
    assert sum(d * a for d, a in profile.items()) == n
    return CycleStructure(
        cyclic_vertices=cyclic,
        cycle_lengths=tuple(sorted(cycle_lengths)),
        tail_heights=tuple(height),
        component_profile=profile,
        nu=n,
    )


def _smallest_prime_factors(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    return spf


_SPF: list[int] = [0, 1]


def _spf(limit: int) -> list[int]:
    global _SPF
    if limit >= len(_SPF):
        _SPF = _smallest_prime_factors(max(limit, 2 * len(_SPF)))
    return _SPF


def factorize(m: int) -> dict[int, int]:
    """Prime factorization via a cached smallest-prime-factor sieve."""
    spf = _spf(m)
    out: dict[int, int] = {}
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out[p] = e
    return out


def period_stats(cs: CycleStructure) -> PeriodStats:
    """T = lcm of cycle lengths, B = their product, O = T + max(h-1, 0).

    T is carried both as a big integer and as a prime -> max-exponent map
    so log T stays cheap at large n.
    """
    exps: dict[int, int] = {}
    B = 1
    log_B = 0.0
    for length in cs.cycle_lengths:
        B *= length
        log_B += math.log(length)
        for p, e in factorize(length).items():
            if e > exps.get(p, 0):
                exps[p] = e
    T = 1
    log_T = 0.0
    for p, e in sorted(exps.items()):
        T *= p**e
        log_T += e * math.log(p)
    h_max = cs.max_tail_height
    O = T + max(h_max - 1, 0)
    assert B % T == 0
    assert abs(O - T) < cs.nu
    return PeriodStats(T=T, B=B, O=O, log_T=log_T, log_B=log_B, prime_exponents_T=exps)


def distinct_iterate_count(f: Mapping, limit: int = 10**6) -> int:
    """Count distinct functions among f, f^2, f^3, ... by explicit composition.

    Exponential-free reference route for small n; used to validate the
    closed form O = T + max(h_max - 1, 0).
    """
    t = tuple(v - 1 for v in f.targets)
    seen = {}
    cur = t
    count = 0
    while cur not in seen:
        seen[cur] = count
        count += 1
        if count > limit:
            raise RuntimeError("iterate sequence did not close")
        cur = tuple(t[v] for v in cur)
    # Distinct functions = preperiod start of repeat + period remainder.
    return count


def stats_to_json_dict(f: Mapping, cs: CycleStructure, ps: PeriodStats) -> dict:
    """JSON-ready dict with big integers as decimal strings."""
    return {
        "n": f.n,
        "T": str(ps.T),
        "B": str(ps.B),
        "O": str(ps.O),
        "log_T": ps.log_T,
        "log_B": ps.log_B,
        "cycle_lengths": sorted(cs.cycle_lengths),
        "num_cyclic": cs.num_cyclic,
    }
