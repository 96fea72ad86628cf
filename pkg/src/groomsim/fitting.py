"""Estimators: trade-off regression, simulation error, alpha calibration,
power-law MLE, hierarchy profiles, and AIC-based model comparison.

All logs are natural unless a base is passed explicitly; argmins and
correlations are base-invariant, so one convention avoids mixed-base bugs.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .errors import EstimationError, ValidationError
from .model import GroomerSpec, ModelParams, log_spaced_specs, run_simulation
from .seeds import DEFAULT_SEED, mix_seed

ALPHA_LO = 1.0 / 16.0
ALPHA_HI = 8.0

_LN_2PI = math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# Ordinary least squares core


@dataclass(frozen=True)
class OlsResult:
    betas: tuple[float, ...]
    se: tuple[float, ...]
    rss: float
    sigma_mle: float
    aic: float
    n: int
    k: int


def _ols(y, X) -> OlsResult:
    """Least squares with Gaussian-MLE AIC = n*ln(RSS/n) + 2(k+1) + n(1 + ln 2pi)."""
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    n, k = X.shape
    if n < k + 2:
        raise EstimationError(f"need at least {k + 2} points for {k} coefficients, got {n}")
    betas, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < k:
        raise EstimationError("collinear design: regressors are linearly dependent")
    resid = y - X @ betas
    rss = float(resid @ resid)
    sigma_mle = math.sqrt(rss / n)
    aic = n * math.log(rss / n) + 2.0 * (k + 1) + n * (1.0 + _LN_2PI) if rss > 0 else float("-inf")
    sigma2 = rss / (n - k)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    se = tuple(math.sqrt(max(c, 0.0)) for c in np.diag(cov))
    return OlsResult(tuple(float(b) for b in betas), se, rss, sigma_mle, aic, n, k)


def _t_stat(num: float, se: float) -> float:
    if se > 0:
        return num / se
    return 0.0 if num == 0 else math.copysign(math.inf, num)


def _two_sided_p(t: float, df: int) -> float:
    if math.isinf(t):
        return 0.0
    return float(2.0 * sps.t.sf(abs(t), df))


# ---------------------------------------------------------------------------
# Trade-off regression


@dataclass(frozen=True)
class TradeoffFit:
    """No-intercept fit of log N on (-log m, log u); t for the trade-off
    exponent is against 1 (the no-trade-off null), for the cost exponent
    against 0."""

    a_hat: float
    b_hat: float
    se_a: float
    se_b: float
    t_a: float
    t_b: float
    p_a: float
    p_b: float
    adj_r2: float
    sigma_hat: float
    n: int


def fit_tradeoff(agents) -> TradeoffFit:
    """Fit log N ~ -a*log m + b*log u over (N, m, u) triples."""
    rows = [(float(N), float(m), float(u)) for N, m, u in agents]
    n = len(rows)
    if n < 3:
        raise ValidationError(f"need at least 3 agents, got {n}")
    for N, m, u in rows:
        if N < 1 or m < 1 or u < 1:
            raise ValidationError(f"agent values must be >= 1, got (N={N}, m={m}, u={u})")
    if len({m for _, m, _ in rows}) < 2 or len({u for _, _, u in rows}) < 2:
        raise EstimationError("collinear design: need at least two distinct m and two distinct u")

    y = np.log([N for N, _, _ in rows])
    X = np.column_stack([[-math.log(m) for _, m, _ in rows],
                         [math.log(u) for _, _, u in rows]])
    ols = _ols(y, X)
    a_hat, b_hat = ols.betas
    se_a, se_b = ols.se
    df = n - 2
    t_a = _t_stat(a_hat - 1.0, se_a)
    t_b = _t_stat(b_hat, se_b)
    tss = float(y @ y)  # uncentered: the model has no intercept
    r2 = 1.0 if tss == 0 else 1.0 - ols.rss / tss
    adj_r2 = 1.0 - (1.0 - r2) * n / df
    sigma_hat = math.sqrt(ols.rss / df)
    return TradeoffFit(a_hat, b_hat, se_a, se_b, t_a, t_b,
                       _two_sided_p(t_a, df), _two_sided_p(t_b, df),
                       adj_r2, sigma_hat, n)


# ---------------------------------------------------------------------------
# Simulation error


def sim_error(targets, realized, base: float | None = None) -> float:
    """Mean squared log-deviation of realized (N', m') from target (N, m),
    summed over both coordinates.  Natural log unless `base` is given."""
    if len(targets) != len(realized):
        raise ValidationError(f"length mismatch: {len(targets)} targets vs {len(realized)} realized")
    if not targets:
        raise ValidationError("need at least one individual")
    total = 0.0
    for (N, m), (N2, m2) in zip(targets, realized):
        for val in (N, m, N2, m2):
            if val <= 0:
                raise ValidationError(f"entries must be positive, got {val}")
        dn = math.log(N) - math.log(N2)
        dm = math.log(m) - math.log(m2)
        total += dn * dn + dm * dm
    if base is not None:
        total /= math.log(base) ** 2
    return total / len(targets)


# ---------------------------------------------------------------------------
# Alpha calibration


@dataclass(frozen=True)
class AlphaFit:
    alpha_star: float
    e_star: float
    evaluations: tuple[tuple[float, float], ...]  # (alpha, mean e) sorted by alpha
    flat_objective: bool
    reps: int


def calibration_seed(master_seed: int, rep: int) -> int:
    """Seed of replication `rep`, shared by every candidate alpha so the
    objective differences come from alpha alone (common random numbers)."""
    return mix_seed(master_seed, 0xCA11, rep)


def optimize_alpha(a: float, T: int, C: float | None = None, M: int = 30,
                   specs: list[GroomerSpec] | None = None, targets=None,
                   reps: int = 10, master_seed: int = DEFAULT_SEED,
                   lo: float = ALPHA_LO, hi: float = ALPHA_HI,
                   passes: int = 3, points: int = 33) -> AlphaFit:
    """Minimize mean simulation error over alpha by iterated grid refinement.

    The first pass covers [lo, hi] with `points` candidates; each later pass
    halves the step and recenters a 5-point grid on the incumbent.  Targets
    default to each spec's (N_target, m_target); pass one target list, or one
    list per replication for paired comparisons against reference runs.
    """
    if specs is None:
        if C is None:
            raise ValidationError("either specs or C must be given")
        specs = log_spaced_specs(C, a, T, M)
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")
    if not (0 <= lo < hi):
        raise ValidationError(f"bad search range [{lo}, {hi}]")

    if targets is None:
        rep_targets = [[(s.N_target, s.m_target) for s in specs]] * reps
    elif targets and isinstance(targets[0], (list, tuple)) and targets[0] \
            and isinstance(targets[0][0], (list, tuple)):
        if len(targets) != reps:
            raise ValidationError(f"per-rep targets: expected {reps} lists, got {len(targets)}")
        rep_targets = [list(t) for t in targets]
    else:
        rep_targets = [list(targets)] * reps

    seeds = [calibration_seed(master_seed, rep) for rep in range(reps)]
    cache: dict[float, float] = {}

    def objective(alpha: float) -> float:
        if alpha in cache:
            return cache[alpha]
        params = ModelParams(a=a, alpha=alpha, T=T)
        total = 0.0
        for rep in range(reps):
            ledgers = run_simulation(specs, params, seeds[rep])
            realized = [(led.tie_count(), led.mean_strength()) for led in ledgers]
            total += sim_error(rep_targets[rep], realized)
        val = total / reps
        cache[alpha] = val
        return val

    step = (hi - lo) / (points - 1)
    best_alpha = None
    best_e = math.inf
    for p in range(passes):
        if p == 0:
            candidates = [lo + i * step for i in range(points)]
        else:
            step /= 2.0
            candidates = [best_alpha + j * step for j in range(-2, 3)]
            candidates = [min(max(c, lo), hi) for c in candidates]
        for cand in candidates:
            e = objective(cand)
            if e < best_e or (e == best_e and cand < best_alpha):
                best_e = e
                best_alpha = cand

    values = list(cache.values())
    if all(math.isnan(v) for v in values):
        raise EstimationError("objective non-finite at every candidate")
    spread = max(values) - min(values)
    flat = spread <= 1e-12 * max(1.0, abs(max(values)))
    evaluations = tuple(sorted(cache.items()))
    return AlphaFit(best_alpha, best_e, evaluations, flat, reps)


# ---------------------------------------------------------------------------
# Power-law tail


@dataclass(frozen=True)
class PowerLawFit:
    phi: float
    x_min: float
    n: int
    method: str = "continuous-mle"


def fit_powerlaw(strengths, x_min: float = 1.0) -> PowerLawFit:
    """Continuous MLE phi = 1 + n / sum(ln(d/x_min)) with fixed cutoff."""
    xs = [float(d) for d in strengths]
    n = len(xs)
    if n < 10:
        raise ValidationError(f"sample too small: need >= 10 values, got {n}")
    bad = [d for d in xs if d < x_min]
    if bad:
        raise ValidationError(f"{len(bad)} values below the cutoff {x_min}")
    s = math.fsum(math.log(d / x_min) for d in xs)
    if s <= 0:
        raise EstimationError("every value sits at the cutoff; the exponent diverges")
    return PowerLawFit(1.0 + n / s, x_min, n)


def sample_powerlaw(phi: float, n: int, rng, x_min: float = 1.0) -> list[float]:
    """Inverse-CDF sampler for the continuous power law; oracle for fit_powerlaw."""
    if phi <= 1:
        raise ValidationError(f"phi must be > 1, got {phi}")
    inv = -1.0 / (phi - 1.0)
    return [x_min * (1.0 - rng.random()) ** inv for _ in range(n)]


# ---------------------------------------------------------------------------
# Hierarchy profiles


@dataclass(frozen=True)
class HierarchyProfile:
    """Tie counts per integer threshold k = 1..K; data mode counts d >= k
    (integer day counts), sim mode counts d > k (real-valued strengths)."""

    H: tuple[int, ...]
    mode: str


def hierarchy_profile(strengths, mode: str, K: int) -> HierarchyProfile:
    if K < 2:
        raise ValidationError(f"K must be >= 2, got {K}")
    if mode not in ("data", "sim"):
        raise ValidationError(f"mode must be 'data' or 'sim', got {mode!r}")
    xs = sorted(float(d) for d in strengths)
    n = len(xs)
    H = []
    for k in range(1, K + 1):
        # count of strengths >= k (data) or > k (sim) via binary search
        import bisect
        idx = bisect.bisect_left(xs, k) if mode == "data" else bisect.bisect_right(xs, k)
        H.append(n - idx)
    return HierarchyProfile(tuple(H), mode)


def hierarchy_ratios(profile: HierarchyProfile) -> list[float | None]:
    """Neighbor ratios H_k / H_{k+1}; None where the inner count is zero."""
    H = profile.H
    return [H[k] / H[k + 1] if H[k + 1] > 0 else None for k in range(len(H) - 1)]


# ---------------------------------------------------------------------------
# Linear models with AIC, threshold regression


def linear_fit_aic(y, design):
    """OLS of y on the given design matrix; returns (betas, sigma_mle, aic)."""
    ols = _ols(y, design)
    return ols.betas, ols.sigma_mle, ols.aic


@dataclass(frozen=True)
class ThresholdFit:
    """Piecewise-slope fit phi ~ b1*a*f + b2*a*(1-f) + b3*f + b0 with
    f = 1 at a >= a_thresh, plus the AIC of the plain linear fit on the
    same points."""

    beta1: float
    beta2: float
    beta3: float
    beta0: float
    sigma: float
    aic_threshold: float
    aic_linear: float


def threshold_fit(phi_points, a_thresh: float = 0.8) -> ThresholdFit:
    pts = [(float(a), float(phi)) for a, phi in phi_points]
    if not pts:
        raise ValidationError("no points")
    avals = np.array([a for a, _ in pts])
    phis = np.array([phi for _, phi in pts])
    f = (avals >= a_thresh).astype(float)
    if f.all() or not f.any():
        raise EstimationError(f"both regimes around a={a_thresh} must be populated")
    ones = np.ones_like(avals)
    X_thresh = np.column_stack([avals * f, avals * (1.0 - f), f, ones])
    X_linear = np.column_stack([avals, ones])
    ols_t = _ols(phis, X_thresh)
    ols_l = _ols(phis, X_linear)
    b1, b2, b3, b0 = ols_t.betas
    return ThresholdFit(b1, b2, b3, b0, ols_t.sigma_mle, ols_t.aic, ols_l.aic)


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    se_slope: float
    t_slope: float
    p_slope: float
    n: int


def slope_regression(x, y) -> SlopeFit:
    """Simple y ~ slope*x + intercept with a two-sided t-test on the slope."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ols = _ols(y, np.column_stack([x, np.ones_like(x)]))
    slope, intercept = ols.betas
    se = ols.se[0]
    t = _t_stat(slope, se)
    return SlopeFit(slope, intercept, se, t, _two_sided_p(t, ols.n - 2), ols.n)


# ---------------------------------------------------------------------------
# Budget correlation


def budget_correlation(predicted, actual) -> tuple[float, float]:
    """Pearson correlation between log predicted and log actual per-day
    grooming totals, with its two-sided p-value."""
    if len(predicted) != len(actual):
        raise ValidationError("length mismatch")
    if len(predicted) < 3:
        raise ValidationError(f"need at least 3 pairs, got {len(predicted)}")
    p = np.asarray(predicted, dtype=float)
    q = np.asarray(actual, dtype=float)
    if (p <= 0).any() or (q <= 0).any():
        raise ValidationError("entries must be positive")
    lp = np.log(p)
    lq = np.log(q)
    if lp.std() == 0 or lq.std() == 0:
        raise EstimationError("zero variance in one of the vectors")
    r, pval = sps.pearsonr(lp, lq)
    return float(r), float(pval)
