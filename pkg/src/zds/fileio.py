"""Distribution files (JSON and CSV) and the on-disk distribution cache.

Counts and totals are written as decimal strings so they survive any JSON
reader; chi-squared values are exact rationals rendered by ``Fraction``
(``"35"``, ``"373/11"``).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from .approx import chi2_sf
from .distribution import ExactDistribution, chi2_from_s

SCHEMA_VERSION = 1
CSV_FIELDS = ("s", "chi2", "count", "pmf", "cdf", "pvalue_exact", "pvalue_approx")
CACHE_ENV = "ZDS_CACHE_DIR"


class DistributionFileError(ValueError):
    def __init__(self, message: str, path: Optional[Union[str, Path]] = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def entries(dist: ExactDistribution) -> List[Dict]:
    """One record per support point, with exact and float views."""
    chi2_stat = dist.statistic == "chi2"
    total = dist.total
    rows = []
    before = 0
    for s, c, cum in zip(dist.support, dist.counts, dist.cumulative):
        chi2 = chi2_from_s(dist.N, dist.n, s) if chi2_stat else None
        approx = chi2_sf(dist.n - 1, float(chi2)) if chi2_stat and dist.n >= 2 else None
        rows.append({
            "s": s,
            "chi2": str(chi2) if chi2 is not None else None,
            "count": str(c),
            "pmf": c / total,
            "cdf": cum / total,
            "pvalue_exact": (total - before) / total,
            "pvalue_approx": approx,
        })
        before = cum
    return rows


def to_json(dist: ExactDistribution) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "N": dist.N,
        "n": dist.n,
        "statistic": dist.statistic,
        "total": str(dist.total),
        "entries": entries(dist),
    }
    return json.dumps(doc, indent=1) + "\n"


def to_csv(dist: ExactDistribution) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for e in entries(dist):
        writer.writerow(["" if e[k] is None else (repr(e[k]) if isinstance(e[k], float) else e[k])
                         for k in CSV_FIELDS])
    return buf.getvalue()


def _build(N, n, statistic, total, rows, path) -> ExactDistribution:
    try:
        support = tuple(int(r["s"]) for r in rows)
        counts = tuple(int(r["count"]) for r in rows)
        return ExactDistribution(int(N), int(n), support, counts, int(total), statistic)
    except (KeyError, TypeError, ValueError) as exc:
        raise DistributionFileError(f"invalid distribution data ({exc})", path) from exc


def from_json(text: str, path=None) -> ExactDistribution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionFileError(f"not valid JSON ({exc})", path) from exc
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise DistributionFileError(f"expected schema_version {SCHEMA_VERSION}", path)
    try:
        return _build(doc["N"], doc["n"], doc.get("statistic", "chi2"), doc["total"],
                      doc["entries"], path)
    except KeyError as exc:
        raise DistributionFileError(f"missing field {exc}", path) from exc


def from_csv(text: str, N: int, n: int, statistic: str = "chi2", path=None) -> ExactDistribution:
    """Parse CSV entries; the CSV carries no header fields for N, n or total."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise DistributionFileError(f"unexpected CSV header {reader.fieldnames}", path)
    rows = list(reader)
    return _build(N, n, statistic, sum(int(r["count"]) for r in rows), rows, path)


def write_atomic(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class DistributionCache:
    """One JSON distribution file per ``(N, n, statistic)`` under ``directory``."""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def path(self, N: int, n: int, statistic: str = "chi2") -> Path:
        return self.directory / f"zds_N{N}_n{n}_{statistic}.json"

    def load(self, N: int, n: int, statistic: str = "chi2") -> Optional[ExactDistribution]:
        path = self.path(N, n, statistic)
        if not path.exists():
            return None
        dist = from_json(path.read_text(encoding="utf-8"), path)
        if (dist.N, dist.n, dist.statistic) != (N, n, statistic):
            raise DistributionFileError(
                f"holds N={dist.N}, n={dist.n}, {dist.statistic}; expected N={N}, n={n}, {statistic}",
                path)
        return dist

    def store(self, dist: ExactDistribution) -> Path:
        path = self.path(dist.N, dist.n, dist.statistic)
        write_atomic(path, to_json(dist))
        return path

    def get_or_compute(self, N: int, n: int, statistic: str,
                       compute: Callable[[], ExactDistribution]) -> ExactDistribution:
        dist = self.load(N, n, statistic)
        if dist is None:
            dist = compute()
            self.store(dist)
        return dist


def resolve_cache(cache_dir: Optional[str], no_cache: bool = False) -> Optional[DistributionCache]:
    if no_cache:
        return None
    directory = cache_dir or os.environ.get(CACHE_ENV)
    return DistributionCache(directory) if directory else None
