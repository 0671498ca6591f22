"""Independent ground truth: full enumeration and Monte Carlo sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional

import numpy as np

from .distribution import ExactDistribution
from .engine import AbsDeviation, ResourceGuardError

MAX_HISTOGRAMS = 10**7
GENERATOR = "numpy.random.PCG64 v1 (SeedSequence.spawn, one stream per trial chunk)"


def chunk_size(N: int) -> int:
    # keeps one chunk's (trials, N) draw matrix near 32 MB
    return max(1, min(65536, 4_000_000 // N))


def compositions(N: int, n: int) -> Iterator[List[int]]:
    """Yield every ``(x_1, ..., x_n)`` with nonnegative entries summing to ``N``.

    Odometer order starting from ``[N, 0, ..., 0]``; the same list object is
    mutated between yields.
    """
    x = [N] + [0] * (n - 1)
    if N == 0:
        yield x
        return
    while True:
        yield x
        i = 0
        while x[i] == 0:
            i += 1
        if i == n - 1:
            return
        v = x[i]
        x[i] = 0
        x[0] = v - 1
        x[i + 1] += 1


def brute_force_distribution(N: int, n: int,
                             contribution: Optional[Callable[[int], int]] = None) -> ExactDistribution:
    """Exact distribution by visiting every histogram.

    Each histogram is weighted by its number of assignment sequences,
    ``N! / (x_1! ... x_n!)``.
    """
    if N < 1 or n < 1:
        raise ValueError("N and n must be positive")
    histograms = math.comb(N + n - 1, n - 1)
    if histograms > MAX_HISTOGRAMS:
        raise ResourceGuardError(histograms, MAX_HISTOGRAMS,
                                 f"enumeration of N={N}, n={n} (use the dynamic program instead)")
    g = [m * m for m in range(N + 1)] if contribution is None else [contribution(m) for m in range(N + 1)]
    fact = [math.factorial(k) for k in range(N + 1)]
    tally: Dict[int, int] = {}
    for x in compositions(N, n):
        denom = 1
        s = 0
        for v in x:
            denom *= fact[v]
            s += g[v]
        tally[s] = tally.get(s, 0) + fact[N] // denom
    items = sorted(tally.items())
    if contribution is None:
        statistic = "chi2"
    else:
        statistic = "absdev" if isinstance(contribution, AbsDeviation) else "custom"
    return ExactDistribution(N, n, tuple(s for s, _ in items), tuple(c for _, c in items),
                             n ** N, statistic)


@dataclass(frozen=True)
class MonteCarloResult:
    N: int
    n: int
    trials: int
    seed: int
    pmf: Dict[int, float]
    counts: Dict[int, int]
    generator: str = GENERATOR


def _simulate_chunk(N: int, n: int, trials: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    bins = rng.integers(0, n, size=(trials, N))
    flat = (bins + (np.arange(trials) * n)[:, None]).ravel()
    hist = np.bincount(flat, minlength=trials * n).reshape(trials, n)
    return (hist.astype(np.int64) ** 2).sum(axis=1)


def monte_carlo_pmf(N: int, n: int, trials: int, seed: int) -> MonteCarloResult:
    """Empirical pmf of ``s`` from ``trials`` simulated samples.

    Every sample throws ``N`` items into uniformly chosen bins.  Trials are
    cut into fixed chunks, each with its own spawned seed, so the output
    depends only on ``(N, n, trials, seed)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if N < 1 or n < 1:
        raise ValueError("N and n must be positive")
    chunk = chunk_size(N)
    n_chunks = -(-trials // chunk)
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    counts: Dict[int, int] = {}
    for i, seq in enumerate(seqs):
        size = min(chunk, trials - i * chunk)
        values, freq = np.unique(_simulate_chunk(N, n, size, seq), return_counts=True)
        for v, f in zip(values.tolist(), freq.tolist()):
            counts[v] = counts.get(v, 0) + f
    counts = dict(sorted(counts.items()))
    pmf = {s: c / trials for s, c in counts.items()}
    return MonteCarloResult(N, n, trials, seed, pmf, counts)
