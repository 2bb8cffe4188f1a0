"""Monte Carlo and closed-form evaluation of discrete Pickands constants.

The sup-over-sum estimator is evaluated on exactly simulated fractional
Brownian motion; exact values for ``alpha`` in {1, 2} serve as references.
"""

from .closedform import (
    ClosedFormValue,
    alpha1_rate_constant,
    alpha2_rate_constant,
    h1_delta,
    h2_delta,
    normal_cdf,
    v_eta,
    v_eta_prime,
    zeta_half,
)
from .errors import ConfigError, EmbeddingNotPSD
from .estimator import EstimatorSample, definitional_estimator, xi_truncated
from .fbm import (
    FbmPath,
    GridSpec,
    SpectralPlan,
    build_spectral_plan,
    fbm_covariance,
    fgn_autocovariance,
    sample_path,
)
from .montecarlo import McSummary, TailEstimate, estimate_tail, run_campaign
from .studies import Report, StudyConfig, run_study

__version__ = "0.1.0"
