"""
Exact fractional Brownian motion on a two-sided grid
====================================================
"""

import math

import numpy as np

from pickands.fbm import GridSpec, build_spectral_plan, fbm_covariance, sample_path

# A grid is (alpha, delta, T): points -T..T in steps of delta, pinned at 0
grid = GridSpec(alpha=0.5, delta=0.25, T=2.0)
print(grid.times)

# Increments are fractional Gaussian noise; the circulant embedding of their
# covariance is diagonalised by the FFT
plan = build_spectral_plan(grid)
print("increments:", plan.n, " embedding size:", plan.m)
print("smallest eigenvalue:", plan.eigenvalues.min())

rng = np.random.default_rng(1)
path = sample_path(plan, grid, rng)
print("B(0) =", path.b[grid.zero_index])
print("Z = sqrt(2) B - |t|^alpha:", np.round(path.z, 3))

# Empirical covariance against the exact one on a five point grid
small = GridSpec(1.5, 0.5, 1.0)
small_plan = build_spectral_plan(small)
paths = np.array([sample_path(small_plan, small, rng).b for _ in range(20000)])
emp = paths.T @ paths / len(paths)
exact = fbm_covariance(1.5, small.times[:, None], small.times[None, :])
print("max |empirical - exact| covariance:", np.abs(emp - exact).max())

# alpha = 1 and alpha = 2 bypass the FFT: independent increments, and a line t*N
for a in (1.0, 2.0):
    g = GridSpec(a, 0.5, 2.0)
    print(a, np.round(sample_path(None, g, rng).b, 3))
