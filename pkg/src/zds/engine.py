"""Exact counts of bin-assignment sequences by histogram statistic.

The table ``C(i, M, s)`` counts the ways a subsample of size ``M`` (drawn
from a sample of size ``N``) can fill ``i`` bins so that the per-bin
contributions sum to ``s``.  Layers are built one bin at a time; each layer
maps ``M`` to a sparse, ascending ``{s: count}`` dict holding only nonzero
counts.  Counts are plain Python ints, so they never overflow.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

DEFAULT_MAX_CELLS = 10**8

Row = Dict[int, int]
Cells = Dict[int, Row]


class ResourceGuardError(RuntimeError):
    """Raised when a table would exceed the configured cell budget."""

    def __init__(self, estimate: int, budget: int, what: str = "table"):
        self.estimate = estimate
        self.budget = budget
        super().__init__(
            f"{what} needs an estimated {estimate} cells, "
            f"above the budget of {budget} (raise max_cells to force)"
        )


def square(m: int) -> int:
    return m * m


class AbsDeviation:
    """Scaled absolute deviation ``|n*m - N|`` of one bin from its expectation.

    Kept as a class (not a lambda) so it pickles for worker processes.
    """

    def __init__(self, N: int, n: int):
        self.N = N
        self.n = n

    def __call__(self, m: int) -> int:
        return abs(self.n * m - self.N)

    def __repr__(self) -> str:
        return f"AbsDeviation(N={self.N}, n={self.n})"


def binomial_row(a: int) -> List[int]:
    """``[C(a, 0), ..., C(a, a)]`` by the multiplicative recurrence."""
    row = [1] * (a + 1)
    c = 1
    for k in range(a):
        c = c * (a - k) // (k + 1)
        row[k + 1] = c
    return row


def binomial_coefficient(a: int, k: int) -> int:
    if a < 0 or k < 0:
        raise ValueError(f"binomial_coefficient needs nonnegative arguments, got ({a}, {k})")
    if k > a:
        raise ValueError(f"binomial_coefficient domain error: k={k} > a={a}")
    return math.comb(a, k)


@dataclass(frozen=True)
class SynthesisSpec:
    """Inputs of one synthesis run.

    ``contribution`` maps a bin value ``m`` in ``0..N`` to a nonnegative
    integer; the tracked statistic is its sum over bins.  The default
    ``square`` gives ``s = sum(x_i**2)``.  ``s_cap`` drops every cell whose
    statistic exceeds it.
    """

    N: int
    n: int
    contribution: Callable[[int], int] = square
    s_cap: Optional[int] = None
    retain_layers: bool = False

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        table = self.g_table
        if self.s_cap is not None:
            if self.s_cap < 0:
                raise ValueError(f"s_cap must be nonnegative, got {self.s_cap}")
            reach = self.N * self.N if self.is_default else self.n * max(table)
            if self.s_cap > reach:
                raise ValueError(f"s_cap={self.s_cap} exceeds the reachable maximum {reach}")

    @property
    def is_default(self) -> bool:
        return self.contribution is square

    @property
    def statistic(self) -> str:
        if self.is_default:
            return "chi2"
        if isinstance(self.contribution, AbsDeviation):
            return "absdev"
        return "custom"

    @cached_property
    def g_table(self) -> Tuple[int, ...]:
        values = []
        for m in range(self.N + 1):
            v = self.contribution(m)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(
                    f"contribution must map 0..N to nonnegative integers; g({m}) = {v!r}"
                )
            values.append(v)
        return tuple(values)


@dataclass
class CountLayer:
    bin_index: int
    cells: Cells

    def row(self, M: int) -> Row:
        return self.cells.get(M, {})

    def total(self, M: int) -> int:
        return sum(self.cells.get(M, {}).values())

    def n_cells(self) -> int:
        return sum(len(r) for r in self.cells.values())


@dataclass
class CountTable:
    spec: SynthesisSpec
    final_layer: CountLayer
    retained_layers: Optional[List[CountLayer]] = field(default=None, repr=False)

    def final_counts(self) -> Row:
        return self.final_layer.row(self.spec.N)


def _partitions_at_most(N: int, parts: int) -> List[int]:
    # p[M] = number of partitions of M into at most `parts` parts
    p = [1] + [0] * N
    for k in range(1, min(parts, N) + 1):
        for m in range(k, N + 1):
            p[m] += p[m - k]
    return p


def estimate_cells(spec: SynthesisSpec) -> int:
    """Upper estimate of the widest layer's cell count.

    Per ``M`` the number of distinct statistic values is bounded both by the
    number of histograms up to bin order and by the width of the reachable
    statistic range.
    """
    N, n = spec.N, spec.n
    parts = _partitions_at_most(N, n)
    g = spec.g_table
    total = 0
    for M in range(N + 1):
        if spec.is_default:
            lo = -(-M * M // n)
            hi = M * M if spec.s_cap is None else min(M * M, spec.s_cap)
            width = max(0, (hi - lo) // 2 + 1)
        else:
            hi = n * max(g) if spec.s_cap is None else spec.s_cap
            width = max(0, hi - n * min(g) + 1)
        total += min(parts[M], width)
    return total


def init_first_layer(spec: SynthesisSpec) -> CountLayer:
    N, cap, g = spec.N, spec.s_cap, spec.g_table
    binom = binomial_row(N)
    cells: Cells = {}
    for M in range(N + 1):
        s = g[M]
        if cap is not None and s > cap:
            continue
        cells[M] = {s: binom[M]}
    return CountLayer(1, cells)


def _scatter(rows: Sequence[Tuple[int, Row]], N: int, g: Sequence[int],
             cap: Optional[int], target_M: Optional[int]) -> Cells:
    # Each nonzero previous cell (ps, p_s) adds prev * C(N - ps, nl) into
    # (ps + nl, p_s + g(nl)).  Rows are ascending in s, which lets the cap
    # cut the inner loop short.
    out: Cells = {}
    for ps, row in rows:
        r = N - ps
        if target_M is None:
            nls = range(r + 1)
            binom = binomial_row(r)
        else:
            # only nl = target_M - ps is needed, and C(r, nl) is then built directly
            nls = (target_M - ps,)
            binom = None
        for nl in nls:
            if nl < 0 or nl > r:
                continue
            w = binom[nl] if binom is not None else math.comb(r, nl)
            add = g[nl]
            target = out.get(ps + nl)
            if target is None:
                target = out[ps + nl] = {}
            get = target.get
            if cap is None:
                for s, c in row.items():
                    t = s + add
                    target[t] = get(t, 0) + c * w
            else:
                limit = cap - add
                for s, c in row.items():
                    if s > limit:
                        break
                    t = s + add
                    target[t] = get(t, 0) + c * w
    return out


def _merge(parts: Sequence[Cells]) -> Cells:
    merged: Cells = {}
    for part in parts:
        for M, row in part.items():
            dest = merged.setdefault(M, {})
            for s, c in row.items():
                dest[s] = dest.get(s, 0) + c
    # canonical order: M ascending, s ascending within each row
    return {M: dict(sorted(merged[M].items())) for M in sorted(merged) if merged[M]}


def advance_layer(prev: CountLayer, spec: SynthesisSpec, *, target_M: Optional[int] = None,
                  workers: int = 1, executor: Optional[Executor] = None) -> CountLayer:
    """Build layer ``prev.bin_index + 1`` by scattering every stored cell.

    With ``target_M`` set only cells of that subsample size are produced.
    With several workers the previous rows are dealt round-robin to the
    workers and partial layers are merged by exact addition, so the result
    does not depend on the worker count.
    """
    if prev.bin_index >= spec.n:
        raise ValueError(f"layer {prev.bin_index} is already the last of {spec.n}")
    rows = [(M, prev.cells[M]) for M in sorted(prev.cells)]
    args = (spec.N, spec.g_table, spec.s_cap, target_M)
    if workers <= 1 or len(rows) < 2:
        parts = [_scatter(rows, *args)]
    else:
        chunks = [rows[w::workers] for w in range(workers)]
        own = executor is None
        pool = executor or ProcessPoolExecutor(max_workers=workers)
        try:
            futures = [pool.submit(_scatter, chunk, *args) for chunk in chunks if chunk]
            parts = [f.result() for f in futures]
        finally:
            if own:
                pool.shutdown()
    return CountLayer(prev.bin_index + 1, _merge(parts))


def advance_layer_gather(prev: CountLayer, spec: SynthesisSpec) -> CountLayer:
    """Reference form of the recurrence: pull each new cell from its sources.

    ``C(i, M, s) = sum_m C(N-M+m, m) * C(i-1, M-m, s-g(m))``.  Slow; kept as
    an independent check of :func:`advance_layer`.
    """
    N, g, cap = spec.N, spec.g_table, spec.s_cap
    cells: Cells = {}
    for M in range(N + 1):
        candidates = set()
        for m in range(M + 1):
            candidates.update(s + g[m] for s in prev.row(M - m))
        row = {}
        for s in sorted(candidates):
            if cap is not None and s > cap:
                continue
            c = 0
            for m in range(M + 1):
                c += math.comb(N - M + m, m) * prev.row(M - m).get(s - g[m], 0)
            if c:
                row[s] = c
        if row:
            cells[M] = row
    return CountLayer(prev.bin_index + 1, cells)


def synthesize(spec: SynthesisSpec, *, workers: int = 1,
               max_cells: int = DEFAULT_MAX_CELLS) -> CountTable:
    """Run the full dynamic program for ``spec``."""
    estimate = estimate_cells(spec)
    if estimate > max_cells:
        raise ResourceGuardError(estimate, max_cells, f"synthesis N={spec.N}, n={spec.n}")
    layer = init_first_layer(spec)
    retained = [layer] if spec.retain_layers else None
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for i in range(2, spec.n + 1):
            only_total = i == spec.n and not spec.retain_layers
            layer = advance_layer(layer, spec, target_M=spec.N if only_total else None,
                                  workers=workers, executor=pool)
            if retained is not None:
                retained.append(layer)
    finally:
        if pool is not None:
            pool.shutdown()
    return CountTable(spec, layer, retained)
