"""
Closed-form discrete Pickands constants
=======================================

For alpha = 1 and alpha = 2 the constant on the grid delta*Z is known exactly.
"""

import math

import numpy as np

from pickands import closedform as cf

# alpha = 2: a single Gaussian slope, H_2^delta = erf(delta/2)/delta
for d in [0.01, 0.1, 0.5, 1.0, 2.0]:
    print(f"H_2^{d:<5} = {cf.h2_delta(d).value:.10f}")
print("H_2       =", cf.H2)

# alpha = 1 needs a series; each value comes with a certified truncation bound
for d in [1e-4, 1e-2, 0.5, 1.0]:
    v = cf.h1_delta(d)
    print(f"H_1^{d:<6g} = {v.value:.12f}  (+/- {v.truncation_bound:.1e}, {v.terms_used} terms)")

# Both decrease as the grid coarsens
deltas = 0.05 * np.arange(1, 61)
h1 = np.array([cf.h1_delta(d).value for d in deltas])
h2 = np.array([cf.h2_delta(d).value for d in deltas])
print("strictly decreasing:", bool(np.all(np.diff(h1) < 0)), bool(np.all(np.diff(h2) < 0)))

# Discretisation error, rescaled by its leading order
print("limit for alpha=1:", cf.alpha1_rate_constant(), "  zeta(1/2) =", cf.zeta_half())
for d in [1e-2, 1e-4, 1e-6]:
    print(f"  delta={d:g}: (1 - H_1^delta)/sqrt(delta) = {(1 - cf.h1_delta(d).value) / math.sqrt(d):.6f}")
# the approach is slow: the next term is O(sqrt(delta))

print("limit for alpha=2:", cf.alpha2_rate_constant())
for d in [0.1, 0.01]:
    print(f"  delta={d:g}: (H_2 - H_2^delta)/delta^2 = {(cf.H2 - cf.h2_delta(d).value) / d**2:.7f}")

# H_1^eta = 1/v(eta), and v is increasing
for eta in [0.1, 0.5, 1.0, 2.0]:
    print(f"v({eta}) = {cf.v_eta(eta):.6f}   v'({eta}) = {cf.v_eta_prime(eta):.6f}")
