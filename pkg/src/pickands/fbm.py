"""Exact simulation of fractional Brownian motion on regular two-sided grids.

Paths are produced by circulant embedding (spectral synthesis) of the
fractional Gaussian noise on a one-sided grid, then re-centred at ``t = 0``.
Two exact special cases bypass the FFT: ``alpha == 1`` (independent Gaussian
increments) and ``alpha == 2`` (a straight line with Gaussian slope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmbeddingNotPSD

__all__ = [
    "GridSpec",
    "FbmPath",
    "SpectralPlan",
    "fbm_covariance",
    "fgn_autocovariance",
    "build_spectral_plan",
    "sample_path",
    "normals_per_path",
    "synthesize",
    "window_indices",
]

# Relative tolerance for rounding noise in the circulant eigenvalues.
EIGEN_CLAMP_TOL = 1e-8

# Guards floor(T / delta) against representation error, e.g. 0.3 / 0.1.
_FLOOR_SLACK = 1e-9


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (0, 2], got {alpha!r}")


# ---------------------------------------------------------------------------
# Covariance oracles
# ---------------------------------------------------------------------------


def fbm_covariance(alpha: float, t, s):
    """Covariance ``(|t|^a + |s|^a - |t - s|^a) / 2`` of fBm; broadcasts over arrays."""
    _check_alpha(alpha)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    out = 0.5 * (np.abs(t) ** alpha + np.abs(s) ** alpha - np.abs(t - s) ** alpha)
    return float(out) if out.ndim == 0 else out


def fgn_autocovariance(alpha: float, delta: float, k):
    """Autocovariance at lag ``k`` of the increments ``B((j+1)delta) - B(j delta)``."""
    _check_alpha(alpha)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    k = np.abs(np.asarray(k, dtype=float))
    out = 0.5 * delta**alpha * (
        np.abs(k + 1.0) ** alpha + np.abs(k - 1.0) ** alpha - 2.0 * k**alpha
    )
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Grids and paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Regular grid ``[-T, T]`` intersected with ``delta * Z``.

    Attributes:
        alpha: fBm scale parameter in (0, 2] (Hurst index ``alpha / 2``).
        delta: Grid step.
        T: Horizon; the grid covers ``[-T, T]``.
    """

    alpha: float
    delta: float
    T: float

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta!r}")
        if not self.T >= self.delta * (1 - _FLOOR_SLACK):
            raise ValueError(f"T must be at least delta, got T={self.T!r}, delta={self.delta!r}")

    @property
    def n_side(self) -> int:
        return int(math.floor(self.T / self.delta + _FLOOR_SLACK))

    @property
    def n_left(self) -> int:
        return self.n_side

    @property
    def n_right(self) -> int:
        return self.n_side

    @property
    def size(self) -> int:
        return 2 * self.n_side + 1

    @property
    def zero_index(self) -> int:
        return self.n_side

    @property
    def times(self) -> np.ndarray:
        k = np.arange(-self.n_side, self.n_side + 1)
        return k * self.delta

    @property
    def drift(self) -> np.ndarray:
        """The deterministic part ``|t|^alpha`` subtracted in ``Z``."""
        return np.abs(self.times) ** self.alpha


@dataclass(frozen=True)
class FbmPath:
    grid: GridSpec
    b: np.ndarray
    z: np.ndarray


@dataclass(frozen=True)
class SpectralPlan:
    """Eigen-decomposition of the circulant embedding of the fGn covariance.

    ``n`` is the number of increments the plan serves and ``m`` the embedding
    size. ``scale`` caches ``sqrt(eigenvalues / m)`` for synthesis.
    """

    alpha: float
    delta: float
    n: int
    m: int
    gamma: np.ndarray
    eigenvalues: np.ndarray
    scale: np.ndarray = field(repr=False)


def build_spectral_plan(grid: GridSpec) -> SpectralPlan:
    """Circulant embedding for the ``2 * n_side`` increments of ``grid``.

    Raises:
        ValueError: if ``grid.alpha == 2`` (degenerate covariance; the exact
            slope generator is used instead).
        EmbeddingNotPSD: if an eigenvalue falls below ``-1e-8`` times the
            largest one.
    """
    if grid.alpha >= 2.0:
        raise ValueError("spectral plan requires alpha < 2; alpha == 2 uses the slope generator")
    n = 2 * grid.n_side
    m = 1 << max(1, (2 * n - 1).bit_length())
    half = m // 2
    gamma = fgn_autocovariance(grid.alpha, grid.delta, np.arange(half + 1))
    row = np.concatenate([gamma, gamma[half - 1 : 0 : -1]])
    eig = np.fft.fft(row).real
    top = eig.max()
    if eig.min() < -EIGEN_CLAMP_TOL * top:
        raise EmbeddingNotPSD(
            f"circulant embedding not PSD: min eigenvalue {eig.min():.3e}, max {top:.3e}"
        )
    eig = np.maximum(eig, 0.0)
    eig.setflags(write=False)
    gamma.setflags(write=False)
    scale = np.sqrt(eig / m)
    scale.setflags(write=False)
    return SpectralPlan(grid.alpha, grid.delta, n, m, gamma, eig, scale)


def _method(grid: GridSpec, plan: SpectralPlan | None, method: str) -> str:
    if method == "auto":
        if grid.alpha == 2.0:
            return "slope"
        if grid.alpha == 1.0:
            return "brownian"
        return "spectral"
    if method not in ("spectral", "brownian", "slope"):
        raise ValueError(f"unknown method {method!r}")
    return method


def normals_per_path(grid: GridSpec, plan: SpectralPlan | None = None, method: str = "auto") -> int:
    """Number of standard normals consumed by one path."""
    kind = _method(grid, plan, method)
    if kind == "slope":
        return 1
    if kind == "brownian":
        return 2 * grid.n_side
    if plan is None:
        raise ValueError("spectral synthesis needs a SpectralPlan")
    return 2 * plan.m


def synthesize(
    normals: np.ndarray,
    grid: GridSpec,
    plan: SpectralPlan | None = None,
    method: str = "auto",
) -> np.ndarray:
    """Map a ``(batch, normals_per_path)`` array of N(0,1) draws to ``B`` on ``grid``.

    Returns an array of shape ``(batch, grid.size)`` with an exact zero at
    ``grid.zero_index``.
    """
    kind = _method(grid, plan, method)
    normals = np.atleast_2d(normals)
    K = grid.n_side
    if kind == "slope":
        return normals[:, :1] * grid.times[None, :]
    if kind == "brownian":
        incr = math.sqrt(grid.delta) * normals
    else:
        if plan is None or plan.n != 2 * K or plan.alpha != grid.alpha or plan.delta != grid.delta:
            raise ValueError("SpectralPlan was not built for this grid")
        m = plan.m
        coef = plan.scale * (normals[:, :m] + 1j * normals[:, m:])
        incr = np.fft.fft(coef, axis=1).real[:, : 2 * K]
    w = np.zeros((normals.shape[0], 2 * K + 1))
    np.cumsum(incr, axis=1, out=w[:, 1:])
    # Stationary increments: shifting a one-sided path by its value at K*delta
    # gives a two-sided fBm pinned at t = 0.
    return w - w[:, K : K + 1]


def z_field(b: np.ndarray, grid: GridSpec) -> np.ndarray:
    """``Z(t) = sqrt(2) B(t) - |t|^alpha``."""
    return math.sqrt(2.0) * b - grid.drift


def sample_path(
    plan: SpectralPlan | None,
    grid: GridSpec,
    rng: np.random.Generator,
    method: str = "auto",
) -> FbmPath:
    """Draw one exact sample of ``B`` and ``Z`` on ``grid``.

    ``plan`` may be ``None`` when ``method`` resolves to one of the special
    cases (``alpha`` equal to 1 or 2).
    """
    normals = rng.standard_normal(normals_per_path(grid, plan, method))
    b = synthesize(normals[None, :], grid, plan, method)[0]
    return FbmPath(grid, b, z_field(b, grid))


def window_indices(grid: GridSpec, delta: float, T: float) -> np.ndarray:
    """Indices into ``grid`` of the sub-grid ``[-T, T]`` intersected with ``delta * Z``.

    ``delta`` must be an integer multiple of ``grid.delta`` and ``T`` must not
    exceed ``grid.T``.
    """
    ratio = delta / grid.delta
    step = int(round(ratio))
    if step < 1 or abs(ratio - step) > 1e-9 * ratio:
        raise ValueError(f"delta={delta!r} is not an integer multiple of {grid.delta!r}")
    if T > grid.T * (1 + _FLOOR_SLACK):
        raise ValueError(f"T={T!r} exceeds grid horizon {grid.T!r}")
    k = int(math.floor(T / delta + _FLOOR_SLACK))
    if k < 1:
        raise ValueError(f"T={T!r} shorter than delta={delta!r}")
    return grid.zero_index + step * np.arange(-k, k + 1)
