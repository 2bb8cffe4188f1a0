"""Desk-scale experiments on discrete Pickands constants.

Each ``study_*`` function takes a :class:`StudyConfig` and returns a
:class:`Report`: flat rows following the CSV schema
``study,alpha,delta,T,reps,seed,stat,value,std_err`` plus named pass/fail
checks. Reports contain no timing information, so identical configurations
produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import closedform as cf
from .errors import ConfigError
from .estimator import definitional_values, xi_values
from .fbm import GridSpec, window_indices
from .montecarlo import campaign, estimate_tail, log_tail_slope, run_campaign

__all__ = [
    "StudyConfig",
    "Row",
    "Check",
    "Report",
    "STUDIES",
    "study_closed_form",
    "study_estimate",
    "study_discretization",
    "study_truncation",
    "study_variance_blowup",
    "study_tail",
    "run_study",
]

FIELDS = ("study", "alpha", "delta", "T", "reps", "seed", "stat", "value", "std_err")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class StudyConfig:
    study: str
    alphas: tuple[float, ...]
    deltas: tuple[float, ...]
    Ts: tuple[float, ...] = ()
    reps: int = 10_000
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"
    parallelism: int | None = None
    thresholds: tuple[float, ...] = (2.0, 3.0, 4.0, 6.0)

    def __post_init__(self) -> None:
        if self.study not in STUDIES:
            raise ConfigError(f"unknown study {self.study!r}; choose from {sorted(STUDIES)}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if not self.alphas or any(not (0 < a <= 2) for a in self.alphas):
            raise ConfigError(f"alphas must be non-empty and lie in (0, 2]: {self.alphas}")
        if not self.deltas or any(not d > 0 for d in self.deltas):
            raise ConfigError(f"deltas must be non-empty and positive: {self.deltas}")
        if any(not t > 0 for t in self.Ts):
            raise ConfigError(f"T values must be positive: {self.Ts}")
        exact_only = self.study == "closed-form" or (
            self.study == "discretization" and all(a in (1.0, 2.0) for a in self.alphas))
        if not exact_only and self.reps < 2:
            raise ConfigError(f"reps must be >= 2, got {self.reps}")
        if self.parallelism is not None and self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")


@dataclass(frozen=True)
class Row:
    study: str
    alpha: float | None
    delta: float | None
    T: float | None
    reps: int
    seed: int
    stat: str
    value: float | None
    std_err: float | None


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _num(x) -> float | None:
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


@dataclass
class Report:
    study: str
    rows: list[Row] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)

    def add(self, config: StudyConfig, stat: str, value, std_err=None, *, alpha=None,
            delta=None, T=None, reps: int | None = None) -> None:
        self.rows.append(Row(
            self.study, _num(alpha), _num(delta), _num(T),
            config.reps if reps is None else reps, config.seed,
            stat, _num(value), _num(std_err),
        ))

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for r in self.rows:
            writer.writerow([_fmt(getattr(r, f)) for f in FIELDS])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "study": self.study,
            "rows": [asdict(r) for r in self.rows],
            "checks": [asdict(c) for c in self.checks],
        }
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def read_csv(text: str) -> list[dict]:
    """Parse :meth:`Report.to_csv` output back into typed row dicts."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if k in ("study", "stat"):
                row[k] = v
            elif k in ("reps", "seed"):
                row[k] = int(v)
            else:
                row[k] = float(v) if v != "" else None
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _variance_se(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column sample variance and its large-sample standard error."""
    n = samples.shape[0]
    centred = samples - samples.mean(axis=0)
    var = (centred**2).sum(axis=0) / (n - 1)
    m4 = (centred**4).mean(axis=0)
    return var, np.sqrt(np.maximum(m4 - var**2, 0.0) / n)


def _loglog_slope(x, y, y_se=None) -> tuple[float, float]:
    """OLS slope of ``log y`` on ``log x`` with a delta-method standard error."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    c = lx - lx.mean()
    slope = float((c * ly).sum() / (c * c).sum())
    if y_se is None:
        return slope, 0.0
    rel = np.asarray(y_se, float) / np.asarray(y, float)
    return slope, float(np.sqrt(((c / (c * c).sum()) ** 2 * rel**2).sum()))


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _strictly_increasing(values: Sequence[float]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


def _common_grid(alpha: float, deltas: Sequence[float], T: float) -> GridSpec:
    base = min(deltas)
    for d in deltas:
        r = d / base
        if abs(r - round(r)) > 1e-9 * r:
            raise ConfigError(f"delta {d} is not an integer multiple of {base}")
    return GridSpec(alpha, base, T)


# ---------------------------------------------------------------------------
# Studies
# ---------------------------------------------------------------------------


def study_closed_form(config: StudyConfig) -> Report:
    """Exact ``H_alpha^delta`` for ``alpha`` in {1, 2} over the configured deltas."""
    rep = Report("closed-form")
    deltas = sorted(config.deltas)
    for alpha in config.alphas:
        if alpha not in (1.0, 2.0):
            raise ConfigError(f"closed forms exist only for alpha in {{1, 2}}, got {alpha}")
        limit = cf.H1 if alpha == 1.0 else cf.H2
        rate = cf.alpha1_rate_constant() if alpha == 1.0 else cf.alpha2_rate_constant()
        rep.add(config, "H_limit", limit, 0.0, alpha=alpha, reps=0)
        rep.add(config, "rate_constant", rate, 0.0, alpha=alpha, reps=0)
        values = []
        for d in deltas:
            v = cf.closed_form(alpha, d)
            values.append(v.value)
            rep.add(config, "H_delta", v.value, v.truncation_bound, alpha=alpha, delta=d, reps=0)
        if len(values) > 1:
            rep.check(f"decreasing_in_delta[alpha={alpha:g}]", _strictly_decreasing(values))
    return rep


def study_estimate(config: StudyConfig) -> Report:
    """Monte Carlo means of the truncated estimator, checked against closed forms when known."""
    rep = Report("estimate")
    for alpha in config.alphas:
        for d in config.deltas:
            for T in config.Ts:
                s = run_campaign(alpha, d, T, config.reps, config.seed, config.parallelism,
                                 keep_samples=True)
                var, var_se = _variance_se(s.samples[:, None])
                kw = dict(alpha=alpha, delta=d, T=T)
                rep.add(config, "mean", s.mean, s.std_err, **kw)
                rep.add(config, "variance", var[0], var_se[0], **kw)
                if alpha in (1.0, 2.0):
                    exact = cf.closed_form(alpha, d)
                    rep.add(config, "closed_form", exact.value, exact.truncation_bound,
                            reps=0, **kw)
                    z = (s.mean - exact.value) / s.std_err
                    rep.add(config, "z_score", z, 1.0, **kw)
                    rep.check(f"within_3se[alpha={alpha:g},delta={d:g},T={T:g}]",
                              abs(z) <= 3.0, f"z={z:.3f}")
    return rep


def _discretization_exact(config: StudyConfig, alpha: float, rep: Report) -> None:
    if alpha == 1.0:
        limit, power, H = cf.alpha1_rate_constant(), 0.5, cf.H1
    else:
        limit, power, H = cf.alpha2_rate_constant(), 2.0, cf.H2
    deltas = sorted(config.deltas, reverse=True)
    ratios, gaps = [], []
    for d in deltas:
        v = cf.closed_form(alpha, d)
        gap = H - v.value
        ratio = gap / d**power
        gaps.append(gap)
        ratios.append(ratio)
        rep.add(config, "H_delta", v.value, v.truncation_bound, alpha=alpha, delta=d, reps=0)
        rep.add(config, "rate_ratio", ratio, v.truncation_bound / d**power,
                alpha=alpha, delta=d, reps=0)
    rep.add(config, "rate_limit", limit, 0.0, alpha=alpha, reps=0)
    if len(deltas) > 1:
        slope, _ = _loglog_slope(deltas, gaps)
        rep.add(config, "loglog_slope", slope, 0.0, alpha=alpha, reps=0)
        dist = [abs(r - limit) for r in ratios]
        rep.check(f"ratio_approaches_limit[alpha={alpha:g}]", _strictly_decreasing(dist),
                  f"last |ratio - limit| = {dist[-1]:.3g}")


def _discretization_mc(config: StudyConfig, alpha: float, rep: Report) -> None:
    deltas = sorted(config.deltas, reverse=True)
    cols = sorted(set(deltas) | {d / 2 for d in deltas}, reverse=True)
    for T in config.Ts:
        grid = _common_grid(alpha, cols, T)
        idx = [window_indices(grid, d, T) for d in cols]
        res = campaign(
            grid, config.reps, config.seed,
            lambda z: np.stack([xi_values(z[:, i], d) for i, d in zip(idx, cols)], axis=1),
            config.parallelism, keep_samples=True,
        )
        x = res.samples
        pos = {d: j for j, d in enumerate(cols)}
        diffs, ses = [], []
        for d in deltas:
            a, b = x[:, pos[d]], x[:, pos[d / 2]]
            diff = b - a
            diffs.append(diff.mean())
            ses.append(diff.std(ddof=1) / math.sqrt(len(diff)))
            rep.add(config, "H_delta", a.mean(), a.std(ddof=1) / math.sqrt(len(a)),
                    alpha=alpha, delta=d, T=T)
            rep.add(config, "diff_half_step", diffs[-1], ses[-1], alpha=alpha, delta=d, T=T)
        # Refinement of a grid can only raise the discrete constant.
        rep.check(f"refinement_nonnegative[alpha={alpha:g},T={T:g}]",
                  all(m >= -3 * s for m, s in zip(diffs, ses)))
        if len(deltas) > 1 and all(m > 0 for m in diffs):
            slope, slope_se = _loglog_slope(deltas, diffs, ses)
            rep.add(config, "loglog_slope", slope, slope_se, alpha=alpha, T=T)


def study_discretization(config: StudyConfig) -> Report:
    """Discretisation error ``H - H^delta`` against the grid step.

    Exact closed forms for ``alpha`` in {1, 2}; otherwise paired Monte Carlo
    estimates of ``H^{delta/2} - H^delta`` from one fine-grid path per
    replication, with a descriptive log-log slope.
    """
    rep = Report("discretization")
    for alpha in config.alphas:
        if alpha in (1.0, 2.0):
            _discretization_exact(config, alpha, rep)
        else:
            if not config.Ts:
                raise ConfigError("Monte Carlo discretization needs at least one T")
            _discretization_mc(config, alpha, rep)
    return rep


def study_truncation(config: StudyConfig) -> Report:
    """Bias from the finite horizon, using one path on ``[-T_max, T_max]`` per replication."""
    if len(config.Ts) < 2:
        raise ConfigError("truncation study needs at least two T values")
    rep = Report("truncation")
    Ts = sorted(config.Ts)
    for alpha in config.alphas:
        for d in config.deltas:
            grid = GridSpec(alpha, d, Ts[-1])
            idx = [window_indices(grid, d, T) for T in Ts]
            res = campaign(
                grid, config.reps, config.seed,
                lambda z: np.stack([xi_values(z[:, i], d) for i in idx], axis=1),
                config.parallelism,
            )
            means, ses = res.stats.mean, res.stats.std_err
            gaps, gap_se = [], []
            for j, T in enumerate(Ts):
                gap = abs(means[j] - means[-1])
                se = math.hypot(ses[j], ses[-1]) if j != len(Ts) - 1 else 0.0
                gaps.append(gap)
                gap_se.append(se)
                rep.add(config, "mean", means[j], ses[j], alpha=alpha, delta=d, T=T)
                rep.add(config, "abs_diff_to_Tmax", gap, se, alpha=alpha, delta=d, T=T)
            ok = all(
                b <= a + 3 * math.hypot(sa, sb)
                for a, b, sa, sb in zip(gaps, gaps[1:], gap_se, gap_se[1:])
            )
            rep.check(f"nonincreasing_in_T[alpha={alpha:g},delta={d:g}]", ok)
    return rep


def study_variance_blowup(config: StudyConfig) -> Report:
    """Variance of the limit-definition estimator against that of the sup-over-sum estimator.

    ``Ts`` is read as the horizon ladder ``S``.
    """
    if len(config.Ts) < 2:
        raise ConfigError("variance-blowup study needs at least two horizons")
    rep = Report("variance-blowup")
    Ss = sorted(config.Ts)
    for alpha in config.alphas:
        for d in config.deltas:
            grid = GridSpec(alpha, d, Ss[-1])
            K = grid.zero_index
            right = [K + np.arange(0, window_indices(grid, d, S).size // 2 + 1) for S in Ss]
            both = [window_indices(grid, d, S) for S in Ss]

            def stats(z: np.ndarray) -> np.ndarray:
                cols = [definitional_values(z[:, i], S) for i, S in zip(right, Ss)]
                cols += [xi_values(z[:, i], d) for i in both]
                return np.stack(cols, axis=1)

            res = campaign(grid, config.reps, config.seed, stats, config.parallelism,
                           keep_samples=True)
            var, var_se = _variance_se(res.samples)
            n = len(Ss)
            for j, S in enumerate(Ss):
                rep.add(config, "var_definitional", var[j], var_se[j], alpha=alpha, delta=d, T=S)
            for j, S in enumerate(Ss):
                rep.add(config, "var_xi", var[n + j], var_se[n + j], alpha=alpha, delta=d, T=S)
            tag = f"[alpha={alpha:g},delta={d:g}]"
            rep.check("definitional_variance_increasing" + tag, _strictly_increasing(var[:n]))
            band = float(var[n:].max() / var[n:].min())
            rep.check("xi_variance_within_10x" + tag, band < 10.0, f"max/min={band:.3g}")
    return rep


def study_tail(config: StudyConfig) -> Report:
    """Exceedance probabilities of the truncated estimator with Wilson bounds."""
    rep = Report("tail")
    for alpha in config.alphas:
        for d in config.deltas:
            for T in config.Ts:
                tail = estimate_tail(alpha, d, T, config.reps, config.thresholds, config.seed,
                                     config.parallelism)
                kw = dict(alpha=alpha, delta=d, T=T)
                se = np.sqrt(tail.p * (1 - tail.p) / tail.reps)
                for x, p, lo, hi, s in zip(tail.thresholds, tail.p, tail.lower, tail.upper, se):
                    rep.add(config, f"p_exceed[x={x:g}]", p, s, **kw)
                    rep.add(config, f"wilson_lower[x={x:g}]", lo, s, **kw)
                    rep.add(config, f"wilson_upper[x={x:g}]", hi, s, **kw)
                slope = log_tail_slope(tail)
                rep.add(config, "log_p_vs_log2x_slope", slope, None, **kw)
                tag = f"[alpha={alpha:g},delta={d:g},T={T:g}]"
                rep.check("nonincreasing" + tag, bool(np.all(np.diff(tail.p) <= 0)))
                beyond = tail.thresholds >= 1.0 / d
                rep.check("zero_beyond_inverse_delta" + tag, bool(np.all(tail.p[beyond] == 0)))
                # Zero frequencies are log(0) = -inf; the finite part must fall strictly
                # and the fitted slope must be negative.
                finite = tail.p[~beyond][tail.p[~beyond] > 0]
                rep.check("log_p_decreasing" + tag,
                          finite.size >= 2 and _strictly_decreasing(list(finite))
                          and slope < 0, f"slope={slope:.3g}")
    return rep


STUDIES: dict[str, Callable[[StudyConfig], Report]] = {
    "closed-form": study_closed_form,
    "estimate": study_estimate,
    "discretization": study_discretization,
    "truncation": study_truncation,
    "variance-blowup": study_variance_blowup,
    "tail": study_tail,
}


def run_study(config: StudyConfig) -> Report:
    return STUDIES[config.study](config)
