"""
The sup-over-sum estimator
==========================

xi = max_t exp(Z(t)) / (delta * sum_t exp(Z(t))) has mean H_alpha^delta for
every horizon, up to the truncation of the sum to [-T, T].
"""

import numpy as np

from pickands.estimator import definitional_estimator, xi_truncated, xi_values
from pickands.fbm import GridSpec, build_spectral_plan, sample_path

# Hand example: three points
z = np.array([0.0, -1.0, -2.0])
print(xi_values(z, 1.0), 1 / (1 + np.exp(-1) + np.exp(-2)))

# The estimator never exceeds 1/delta, since the maximum is one of the summands
grid = GridSpec(0.5, 0.1, 10.0)
plan = build_spectral_plan(grid)
rng = np.random.default_rng(0)
sample = xi_truncated(sample_path(plan, grid, rng))
print("xi =", sample.xi, " argmax t =", sample.argmax_t, " bound 1/delta =", 1 / grid.delta)

# Evaluation is in log space, so very negative fields do not underflow
print(xi_values(np.array([-1000.0, -1001.0]), 1.0))

# The definitional estimator exp(max Z)/S on [0, S] is a different quantity
# with much heavier tails
right = sample_path(plan, grid, rng).z[grid.zero_index:]
print("definitional, S=10:", definitional_estimator(right, 10.0))
