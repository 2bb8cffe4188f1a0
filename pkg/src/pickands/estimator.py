"""Estimators of discrete Pickands constants computed from a sampled field ``Z``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fbm import FbmPath

__all__ = [
    "EstimatorSample",
    "xi_truncated",
    "xi_values",
    "definitional_estimator",
    "definitional_values",
]


@dataclass(frozen=True)
class EstimatorSample:
    """One realisation of the sup-over-sum estimator.

    Attributes:
        xi: ``sup exp(Z) / (delta * sum exp(Z))`` over the grid.
        argmax_t: Grid time at which ``Z`` is maximal.
        log_denominator: ``log(delta * sum exp(Z))``.
        z_max: Maximum of ``Z`` over the grid.
    """

    xi: float
    argmax_t: float
    log_denominator: float
    z_max: float


def xi_values(z: np.ndarray, delta: float) -> np.ndarray:
    """Vectorised estimator over the last axis of ``z``.

    The sum is normalised by the row maximum so the result is finite for any
    finite ``z``.
    """
    z = np.asarray(z, dtype=float)
    z_max = z.max(axis=-1, keepdims=True)
    s = np.exp(z - z_max).sum(axis=-1)
    return 1.0 / (delta * s)


def xi_truncated(path: FbmPath) -> EstimatorSample:
    z = np.asarray(path.z, dtype=float)
    delta = path.grid.delta
    i = int(np.argmax(z))
    z_max = float(z[i])
    s = float(np.exp(z - z_max).sum())
    return EstimatorSample(
        xi=1.0 / (delta * s),
        argmax_t=float(path.grid.times[i]),
        log_denominator=math.log(delta) + z_max + math.log(s),
        z_max=z_max,
    )


def definitional_values(z: np.ndarray, S: float) -> np.ndarray:
    """``exp(max Z) / S`` over the last axis; ``z`` must cover ``[0, S]`` on the grid."""
    return np.exp(np.asarray(z, dtype=float).max(axis=-1)) / S


def definitional_estimator(z, S: float) -> float:
    """Truncated limit-definition estimator ``sup_{[0,S]} exp(Z) / S`` for one path.

    Its variance grows without bound in ``S``; it exists here only to contrast
    with :func:`xi_truncated`.
    """
    if S <= 0:
        raise ValueError(f"S must be positive, got {S!r}")
    return float(definitional_values(z, S))
