"""Seeded, replication-parallel Monte Carlo driver.

Every replication ``i`` draws from its own Philox stream keyed by
``SeedSequence(seed, spawn_key=(i,))``, so per-replication values do not
depend on the thread count or on how replications are chunked. Chunks have a
fixed size and their moment accumulators are merged in chunk order, which
also makes the aggregated statistics independent of the thread count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError
from .estimator import xi_values
from .fbm import GridSpec, SpectralPlan, build_spectral_plan, normals_per_path, synthesize, z_field

__all__ = [
    "CHUNK",
    "RunningStats",
    "McSummary",
    "TailEstimate",
    "CampaignResult",
    "replication_rng",
    "default_threads",
    "plan_for",
    "campaign",
    "run_campaign",
    "estimate_tail",
    "wilson_interval",
    "log_tail_slope",
]

CHUNK = 512
THREADS_ENV = "PICKANDS_THREADS"


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for replication ``index`` of master ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def default_threads() -> int:
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        n = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {n}")
    return n


class RunningStats:
    """One-pass mean / M2 / extremes over rows, mergeable (Chan et al. update).

    Works column-wise on ``(batch, q)`` arrays so several statistics of the
    same replications can be tracked together.
    """

    def __init__(self, width: int = 1) -> None:
        self.count = 0
        self.mean = np.zeros(width)
        self.m2 = np.zeros(width)
        self.min = np.full(width, np.inf)
        self.max = np.full(width, -np.inf)

    def update(self, batch: np.ndarray) -> None:
        batch = np.asarray(batch, dtype=float)
        if batch.ndim == 1:
            batch = batch[:, None]
        if batch.shape[0] == 0:
            return
        other = RunningStats(batch.shape[1])
        other.count = batch.shape[0]
        other.mean = batch.mean(axis=0)
        other.m2 = ((batch - other.mean) ** 2).sum(axis=0)
        other.min = batch.min(axis=0)
        other.max = batch.max(axis=0)
        self.merge(other)

    def merge(self, other: "RunningStats") -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count = other.count
            self.mean = other.mean.copy()
            self.m2 = other.m2.copy()
            self.min = other.min.copy()
            self.max = other.max.copy()
            return
        n = self.count + other.count
        d = other.mean - self.mean
        self.mean = self.mean + d * (other.count / n)
        self.m2 = self.m2 + other.m2 + d * d * (self.count * other.count / n)
        self.min = np.minimum(self.min, other.min)
        self.max = np.maximum(self.max, other.max)
        self.count = n

    @property
    def variance(self) -> np.ndarray:
        if self.count < 2:
            return np.full_like(self.mean, np.nan)
        return self.m2 / (self.count - 1)

    @property
    def std_err(self) -> np.ndarray:
        return np.sqrt(self.variance / self.count)


@dataclass(frozen=True)
class McSummary:
    alpha: float
    delta: float
    T: float
    reps: int
    mean: float
    variance: float
    std_err: float
    min: float
    max: float
    seed: int
    wall_time: float
    samples: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class TailEstimate:
    """Empirical exceedance probabilities ``P(xi > x)`` with Wilson bounds."""

    thresholds: np.ndarray
    counts: np.ndarray
    reps: int
    p: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


@dataclass
class CampaignResult:
    stats: RunningStats
    samples: np.ndarray | None
    wall_time: float


def plan_for(grid: GridSpec) -> SpectralPlan | None:
    """Spectral plan if the grid needs one; ``None`` for the exact special cases."""
    if grid.alpha in (1.0, 2.0):
        return None
    return build_spectral_plan(grid)


def _chunk_fields(grid: GridSpec, plan: SpectralPlan | None, seed: int, start: int, stop: int) -> np.ndarray:
    width = normals_per_path(grid, plan)
    normals = np.empty((stop - start, width))
    for row, i in enumerate(range(start, stop)):
        normals[row] = replication_rng(seed, i).standard_normal(width)
    return z_field(synthesize(normals, grid, plan), grid)


def campaign(
    grid: GridSpec,
    reps: int,
    seed: int,
    statistic: Callable[[np.ndarray], np.ndarray],
    parallelism: int | None = None,
    keep_samples: bool = False,
    plan: SpectralPlan | None = None,
    offset: int = 0,
) -> CampaignResult:
    """Apply ``statistic`` to ``reps`` independent fields ``Z`` on ``grid``.

    Args:
        grid: Simulation grid; sub-grids can be read off inside ``statistic``.
        reps: Number of replications (at least 2).
        seed: Master seed.
        statistic: Maps a ``(batch, grid.size)`` array of ``Z`` rows to a
            ``(batch,)`` or ``(batch, q)`` array of per-replication values.
        parallelism: Worker threads; defaults to ``$PICKANDS_THREADS`` or 1.
        keep_samples: Also return the full ``(reps, q)`` value matrix.
        plan: Prebuilt spectral plan for ``grid``; built on demand otherwise.
        offset: Index of the first replication, so disjoint blocks of one
            campaign can be run separately and merged.
    """
    if reps < 2:
        raise ConfigError(f"reps must be >= 2, got {reps}")
    if parallelism is None:
        parallelism = default_threads()
    if parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {parallelism}")
    if plan is None:
        plan = plan_for(grid)
    if offset < 0:
        raise ConfigError(f"offset must be >= 0, got {offset}")
    stop = offset + reps
    bounds = [(a, min(a + CHUNK, stop)) for a in range(offset, stop, CHUNK)]

    def work(span: tuple[int, int]) -> tuple[RunningStats, np.ndarray | None]:
        values = np.asarray(statistic(_chunk_fields(grid, plan, seed, *span)), dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        acc = RunningStats(values.shape[1])
        acc.update(values)
        return acc, (values if keep_samples else None)

    t0 = time.perf_counter()
    if parallelism == 1:
        parts = [work(span) for span in bounds]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            parts = list(pool.map(work, bounds))
    total = RunningStats(parts[0][0].mean.shape[0])
    for acc, _ in parts:
        total.merge(acc)
    samples = np.concatenate([v for _, v in parts]) if keep_samples else None
    return CampaignResult(total, samples, time.perf_counter() - t0)


def run_campaign(
    alpha: float,
    delta: float,
    T: float,
    reps: int,
    seed: int,
    parallelism: int | None = None,
    keep_samples: bool = False,
) -> McSummary:
    """Monte Carlo estimate of the discrete Pickands constant with the truncated estimator."""
    grid = GridSpec(alpha, delta, T)
    res = campaign(grid, reps, seed, lambda z: xi_values(z, delta), parallelism, keep_samples)
    st = res.stats
    return McSummary(
        alpha=alpha,
        delta=delta,
        T=T,
        reps=reps,
        mean=float(st.mean[0]),
        variance=float(st.variance[0]),
        std_err=float(st.std_err[0]),
        min=float(st.min[0]),
        max=float(st.max[0]),
        seed=seed,
        wall_time=res.wall_time,
        samples=None if res.samples is None else res.samples[:, 0],
    )


def wilson_interval(count, n: int, z: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Wilson score interval for a binomial proportion ``count / n``."""
    p = np.asarray(count, dtype=float) / n
    z2 = z * z
    centre = (p + z2 / (2 * n)) / (1 + z2 / n)
    half = z / (1 + z2 / n) * np.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    lower = np.where(p == 0, 0.0, np.clip(centre - half, 0.0, 1.0))
    upper = np.where(p == 1, 1.0, np.clip(centre + half, 0.0, 1.0))
    return lower, upper


def estimate_tail(
    alpha: float,
    delta: float,
    T: float,
    reps: int,
    thresholds: Sequence[float],
    seed: int,
    parallelism: int | None = None,
    z: float = 3.0,
) -> TailEstimate:
    """Exceedance frequencies of the truncated estimator over increasing thresholds."""
    x = np.asarray(thresholds, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ConfigError("thresholds must be a non-empty 1-d sequence")
    if np.any(x < 1) or np.any(np.diff(x) <= 0):
        raise ConfigError("thresholds must be >= 1 and strictly increasing")
    grid = GridSpec(alpha, delta, T)

    def exceed(zb: np.ndarray) -> np.ndarray:
        return (xi_values(zb, delta)[:, None] > x[None, :]).astype(float)

    res = campaign(grid, reps, seed, exceed, parallelism)
    counts = np.rint(res.stats.mean * reps).astype(np.int64)
    lower, upper = wilson_interval(counts, reps, z)
    return TailEstimate(x, counts, reps, counts / reps, lower, upper)


def log_tail_slope(tail: TailEstimate) -> float:
    """Least-squares slope of ``log p`` against ``log(x)**2`` over thresholds with ``p > 0``.

    NaN when fewer than two thresholds have a positive exceedance frequency.
    """
    keep = tail.p > 0
    if keep.sum() < 2:
        return math.nan
    x2 = np.log(tail.thresholds[keep]) ** 2
    return float(np.polyfit(x2, np.log(tail.p[keep]), 1)[0])
