"""Reproducible sampling of uniform random mappings at large n.

Samples are drawn in fixed-size blocks; block b uses the generator
PCG64(SeedSequence(entropy=seed, spawn_key=(b,))), so results are
bit-identical for a given (n, samples, seed, blocks) no matter how the
blocks would be scheduled.  Per sample the cyclic set is found by
pointer doubling, tail heights by a binary descent over the cached
f^(2^k) tables, and log T through the prime-exponent sieve (no big
integers on the hot path).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc

from . import asymptotics
from .exact import ZDistribution
from .mapping import _spf

HIST_BINS = 41          # over [-4, 4], plus two overflow bins; fixed forever
HIST_LO, HIST_HI = -4.0, 4.0
BATCH_N_MAX = 1024      # analyze whole blocks as matrices up to this n
MAX_N = 10**7
DEFAULT_BLOCK = 256


class ResourceError(ValueError):
    pass


@dataclass
class StatSummary:
    """Accumulated statistics of one experiment."""

    n: int
    samples: int
    seed: int
    blocks: int
    mean_log_T: float
    var_log_T: float
    mean_log_B: float
    var_log_B: float
    mean_diff: float        # log B - log T
    var_diff: float
    frac_norm_nonpos: float  # empirical P((log T - a_n)/b_n <= 0)
    hist: np.ndarray         # HIST_BINS + 2 counts (underflow, bins, overflow)
    z_counts: np.ndarray     # index m = 0..n
    violations: dict[str, int]
    crosscheck_max_rel: float = 0.0


@dataclass
class _Accum:
    n: int
    count: int = 0
    s_logT: float = 0.0
    s2_logT: float = 0.0
    s_logB: float = 0.0
    s2_logB: float = 0.0
    s_diff: float = 0.0
    s2_diff: float = 0.0
    nonpos: int = 0
    hist: np.ndarray = field(default_factory=lambda: np.zeros(HIST_BINS + 2, dtype=np.int64))
    z_counts: np.ndarray | None = None
    v_divide: int = 0
    v_denes: int = 0
    v_logorder: int = 0
    cross_rel: float = 0.0


def sample_mapping(n: int, rng: np.random.Generator) -> np.ndarray:
    """One uniform mapping as a 0-based target array of length n."""
    if n < 1:
        raise ValueError("n must be positive")
    return rng.integers(0, n, size=n, dtype=np.int64)


def block_rng(seed: int, block_index: int) -> np.random.Generator:
    """The documented split: PCG64 seeded by SeedSequence(seed, spawn_key=(block,))."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(block_index,)))
    )


def _doubling_tables(f: np.ndarray, axis1: bool):
    """f^(2^k) for k = 0..K with 2^K >= n; also the cyclic-vertex mask."""
    n = f.shape[-1]
    K = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    gs = [f]
    g = f
    for _ in range(K):
        g = np.take_along_axis(g, g, axis=1) if axis1 else g[g]
        gs.append(g)
    if axis1:
        mask = np.zeros(f.shape, dtype=bool)
        np.put_along_axis(mask, gs[-1], True, axis=1)
    else:
        mask = np.zeros(n, dtype=bool)
        mask[gs[-1]] = True
    return gs, mask, K


def _tail_heights_1d(gs, mask, K, n) -> np.ndarray:
    cur = np.arange(n)
    t = np.zeros(n, dtype=np.int64)
    for k in range(K - 1, -1, -1):
        nxt = gs[k][cur]
        step = ~mask[nxt]
        cur = np.where(step, nxt, cur)
        t += (1 << k) * step
    return np.where(mask, 0, t + 1)


def _tail_heights_2d(gs, mask, K, n) -> np.ndarray:
    rows = gs[0].shape[0]
    cur = np.broadcast_to(np.arange(n), (rows, n)).copy()
    t = np.zeros((rows, n), dtype=np.int64)
    for k in range(K - 1, -1, -1):
        nxt = np.take_along_axis(gs[k], cur, axis=1)
        step = ~np.take_along_axis(mask, nxt, axis=1)
        cur = np.where(step, nxt, cur)
        t += (1 << k) * step
    return np.where(mask, 0, t + 1)


def _cycle_lengths(f_row: np.ndarray, cyclic: np.ndarray) -> list[int]:
    """Cycle lengths of the permutation induced on the cyclic vertices."""
    seen = set()
    lengths = []
    for v in cyclic:
        v = int(v)
        if v in seen:
            continue
        length = 0
        u = v
        while u not in seen:
            seen.add(u)
            u = int(f_row[u])
            length += 1
        lengths.append(length)
    return lengths


def _log_T_via_sieve(lengths: list[int], n: int) -> tuple[float, bool]:
    """(log T, T divides B) from the prime-exponent maps of the cycle lengths."""
    spf = _spf(n)
    max_exp: dict[int, int] = {}
    sum_exp: dict[int, int] = {}
    for length in lengths:
        m = length
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e > max_exp.get(p, 0):
                max_exp[p] = e
            sum_exp[p] = sum_exp.get(p, 0) + e
    log_T = sum(e * math.log(p) for p, e in max_exp.items())
    divides = all(sum_exp[p] >= e for p, e in max_exp.items())
    return log_T, divides


def _consume_sample(acc: _Accum, f_row, cyclic_idx, h_max, a_n, b_n, crosscheck):
    n = acc.n
    lengths = _cycle_lengths(f_row, cyclic_idx)
    log_T, divides = _log_T_via_sieve(lengths, n)
    log_B = float(sum(math.log(L) for L in lengths))
    if not divides:
        acc.v_divide += 1
    if log_B < log_T - 1e-9:
        acc.v_logorder += 1
    if not max(int(h_max) - 1, 0) < n:  # |O - T| = max(h_max - 1, 0)
        acc.v_denes += 1
    if crosscheck:
        T = math.lcm(*lengths) if lengths else 1
        rel = abs(log_T - math.log(T)) / max(math.log(T), 1.0)
        acc.cross_rel = max(acc.cross_rel, rel)
    diff = log_B - log_T
    acc.count += 1
    acc.s_logT += log_T
    acc.s2_logT += log_T * log_T
    acc.s_logB += log_B
    acc.s2_logB += log_B * log_B
    acc.s_diff += diff
    acc.s2_diff += diff * diff
    norm = (log_T - a_n) / b_n
    if norm <= 0.0:
        acc.nonpos += 1
    if norm < HIST_LO:
        acc.hist[0] += 1
    elif norm >= HIST_HI:
        acc.hist[-1] += 1
    else:
        b = int((norm - HIST_LO) / (HIST_HI - HIST_LO) * HIST_BINS)
        acc.hist[1 + b] += 1
    acc.z_counts[len(cyclic_idx)] += 1


def run_experiment(
    n: int,
    samples: int,
    seed: int,
    blocks: int | None = None,
    crosscheck: bool = False,
) -> StatSummary:
    """Sample `samples` uniform mappings of [n] and accumulate StatSummary.

    Deterministic for fixed (n, samples, seed, blocks); blocks defaults
    to ceil(samples / 256).
    """
    if n < 1 or n > MAX_N:
        raise ResourceError("experiment too large")
    if samples < 1:
        raise ResourceError("samples must be positive")
    if crosscheck and n > 10**3:
        raise ResourceError("crosscheck limited to n <= 1000")
    if blocks is None:
        blocks = math.ceil(samples / DEFAULT_BLOCK)
    blocks = max(1, min(blocks, samples))
    a_n, b_n = asymptotics.harris_params(max(n, 2))
    acc = _Accum(n=n)
    acc.z_counts = np.zeros(n + 1, dtype=np.int64)

    base = samples // blocks
    extra = samples % blocks
    for b in range(blocks):
        bs = base + (1 if b < extra else 0)
        if bs == 0:
            continue
        rng = block_rng(seed, b)
        fmat = rng.integers(0, n, size=(bs, n), dtype=np.int64)
        if n <= BATCH_N_MAX:
            gs, mask, K = _doubling_tables(fmat, axis1=True)
            heights = _tail_heights_2d(gs, mask, K, n)
            hmaxes = heights.max(axis=1)
            for i in range(bs):
                cyc = np.flatnonzero(mask[i])
                _consume_sample(acc, fmat[i], cyc, hmaxes[i], a_n, b_n, crosscheck)
        else:
            for i in range(bs):
                row = fmat[i]
                gs, mask, K = _doubling_tables(row, axis1=False)
                heights = _tail_heights_1d(gs, mask, K, n)
                cyc = np.flatnonzero(mask)
                _consume_sample(acc, row, cyc, heights.max(), a_n, b_n, crosscheck)

    cnt = acc.count
    mean_T = acc.s_logT / cnt
    mean_B = acc.s_logB / cnt
    mean_d = acc.s_diff / cnt
    return StatSummary(
        n=n,
        samples=cnt,
        seed=seed,
        blocks=blocks,
        mean_log_T=mean_T,
        var_log_T=max(acc.s2_logT / cnt - mean_T**2, 0.0),
        mean_log_B=mean_B,
        var_log_B=max(acc.s2_logB / cnt - mean_B**2, 0.0),
        mean_diff=mean_d,
        var_diff=max(acc.s2_diff / cnt - mean_d**2, 0.0),
        frac_norm_nonpos=acc.nonpos / cnt,
        hist=acc.hist,
        z_counts=acc.z_counts,
        violations={
            "T_divides_B": acc.v_divide,
            "denes": acc.v_denes,
            "logB_lt_logT": acc.v_logorder,
        },
        crosscheck_max_rel=acc.cross_rel,
    )


def z_gof(
    z_counts: np.ndarray, pmf: ZDistribution | np.ndarray, min_expected: float = 5.0
) -> tuple[float, float]:
    """Pearson chi-square of observed Z counts against the exact pmf.

    Consecutive m are pooled (ascending, remainder merged into the last
    bin) until every retained bin expects at least min_expected counts.
    Returns (chi2, p-value from the regularized upper incomplete gamma).
    """
    counts = np.asarray(z_counts[1:], dtype=np.float64)  # m = 1..n
    n = counts.size
    samples = counts.sum()
    if isinstance(pmf, ZDistribution):
        probs = np.array([float(p) for p in pmf.pmf])
    else:
        probs = np.asarray(pmf, dtype=np.float64)
    expected = probs * samples

    obs_bins: list[float] = []
    exp_bins: list[float] = []
    co = ce = 0.0
    for m in range(n):
        co += counts[m]
        ce += expected[m]
        if ce >= min_expected:
            obs_bins.append(co)
            exp_bins.append(ce)
            co = ce = 0.0
    if ce > 0 or co > 0:
        if exp_bins:
            obs_bins[-1] += co
            exp_bins[-1] += ce
        else:
            obs_bins.append(co)
            exp_bins.append(ce)
    if len(exp_bins) < 2:
        raise ResourceError("insufficient data")
    obs = np.array(obs_bins)
    exp = np.array(exp_bins)
    chi2 = float(np.sum((obs - exp) ** 2 / exp))
    df = len(exp) - 1
    pvalue = float(gammaincc(df / 2.0, chi2 / 2.0))
    return chi2, pvalue


def hist_bin_edges() -> np.ndarray:
    """Edges of the fixed normalized-log-T histogram (without overflow bins)."""
    return np.linspace(HIST_LO, HIST_HI, HIST_BINS + 1)
