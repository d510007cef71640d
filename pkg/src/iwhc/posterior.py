"""Exact posterior machinery for hybrid censored inverse Weibull data.

Under independent gamma priors the joint posterior of (alpha, lam) factors as

    pi(alpha, lam | data)  propto  g1(lam | alpha) * g2(alpha) * h(alpha, lam)

where g1 is Gamma(r + c, rate d + sum(x_i**alpha)), g2 is a proper log-concave
density on alpha, and h = (1 - exp(-lam * u**-alpha))**(n-r) carries the
censoring information.  Posterior summaries are computed by importance
sampling: draw alpha from g2 (adaptive rejection sampling exploits the
log-concavity), lam from g1 given alpha, and weight each pair by h.  Weighted
step-function quantiles give credible bounds, and the highest-density interval
is the shortest of the candidate quantile windows.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .censoring import ReciprocalSample
from .errors import DegenerateWeightsError, DomainError, InsufficientDataError, NumericError
from .lindley import GammaPriors
from .mle import ConfidenceInterval

__all__ = [
    "PosteriorDraws",
    "BayesEstimate",
    "IsResult",
    "g2_log_density",
    "g2_log_density_grad",
    "sample_g2",
    "sample_g1",
    "posterior_draws",
    "importance_estimate",
    "weighted_quantile",
    "hpd_interval",
    "bayes_is",
]


# ---------------------------------------------------------------------------
# conditional and marginal posterior factors
# ---------------------------------------------------------------------------


def g2_log_density(alpha, s: ReciprocalSample, priors: GammaPriors):
    """Unnormalized log density of the alpha-marginal proposal g2.

    log g2 = -(r+c)*log(d + sum x**alpha) + (a+r-1)*log(alpha) - b*alpha
             + (alpha+1)*sum(log x), up to an additive constant.  Concave in
    alpha because log(d + sum x**alpha) is convex.
    """
    if s.r < 1:
        raise InsufficientDataError("g2 requires at least one observed failure")
    arr = np.asarray(alpha, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise DomainError("alpha must be strictly positive and finite")
    slx = np.log(s.x).sum()
    if arr.ndim == 0:
        S = priors.d + (s.x ** float(arr)).sum()
        out = (-(s.r + priors.c) * np.log(S)
               + (priors.a + s.r - 1.0) * np.log(arr) - priors.b * arr
               + (arr + 1.0) * slx)
        return float(out)
    S = priors.d + np.power.outer(s.x, arr).sum(axis=0)
    return (-(s.r + priors.c) * np.log(S)
            + (priors.a + s.r - 1.0) * np.log(arr) - priors.b * arr
            + (arr + 1.0) * slx)


def g2_log_density_grad(alpha: float, s: ReciprocalSample, priors: GammaPriors) -> float:
    """d/d-alpha of :func:`g2_log_density` (scalar)."""
    if alpha <= 0:
        raise DomainError("alpha must be strictly positive")
    lx = np.log(s.x)
    xa = s.x ** alpha
    S = priors.d + xa.sum()
    return float(-(s.r + priors.c) * (xa * lx).sum() / S
                 + (priors.a + s.r - 1.0) / alpha - priors.b + lx.sum())


def sample_g1(alpha, s: ReciprocalSample, priors: GammaPriors, seed):
    """Draw lam ~ g1(. | alpha): Gamma(r + c, rate d + sum x**alpha).

    The "scale" of the conditional gamma is a rate: the joint density carries
    exp(-lam * (d + sum x**alpha)).  ``alpha`` may be a scalar or an array of
    conditioning values (one draw each); ``seed`` may also be a Generator.
    """
    shape = s.r + priors.c
    if shape <= 0:
        raise DomainError(f"gamma shape r + c must be positive, got {shape}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    arr = np.asarray(alpha, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("alpha must be strictly positive")
    if arr.ndim == 0:
        rate = priors.d + (s.x ** float(arr)).sum()
        return float(rng.gamma(shape, 1.0 / rate))
    rate = priors.d + np.power.outer(s.x, arr).sum(axis=0)
    return rng.gamma(shape, 1.0, size=arr.size) / rate


# ---------------------------------------------------------------------------
# adaptive rejection sampling from the log-concave g2
# ---------------------------------------------------------------------------


class _Hull:
    """Piecewise-linear upper hull of a concave function on (0, inf).

    Tangents at the support points bound the function from above; the
    exponential of the hull is a piecewise-exponential envelope that can be
    sampled by inverse cdf segment by segment.
    """

    def __init__(self, xs, hs, ds):
        self.x = list(xs)
        self.h = list(hs)
        self.d = list(ds)
        self._refresh()

    def _refresh(self):
        x, h, d = self.x, self.h, self.d
        z = [0.0]
        for i in range(len(x) - 1):
            slope_gap = d[i] - d[i + 1]
            if slope_gap <= 1e-14:          # numerically parallel tangents
                z.append(0.5 * (x[i] + x[i + 1]))
            else:
                z.append((h[i + 1] - h[i] + x[i] * d[i] - x[i + 1] * d[i + 1]) / slope_gap)
        z.append(np.inf)
        self.z = z
        logmass = []
        for i in range(len(x)):
            a = h[i] - x[i] * d[i]
            k = d[i]
            lo, hi = z[i], z[i + 1]
            if not np.isfinite(hi):
                lm = a + k * lo - np.log(-k)    # k < 0 on the last segment
            elif abs(k) < 1e-12:
                lm = a + np.log(max(hi - lo, 0.0)) if hi > lo else -np.inf
            elif k > 0:
                lm = a + k * hi + np.log1p(-np.exp(-k * (hi - lo))) - np.log(k)
            else:
                lm = a + k * lo + np.log1p(-np.exp(k * (hi - lo))) - np.log(-k)
            logmass.append(lm)
        logmass = np.array(logmass)
        peak = logmass.max()
        w = np.exp(logmass - peak)
        self.seg_prob = w / w.sum()

    def envelope(self, t: float) -> float:
        j = bisect.bisect_left(self.z, t, 1, len(self.z) - 1) - 1
        return self.h[j] + self.d[j] * (t - self.x[j])

    def draw(self, rng: np.random.Generator) -> float:
        j = rng.choice(len(self.seg_prob), p=self.seg_prob)
        k = self.d[j]
        lo, hi = self.z[j], self.z[j + 1]
        xi = rng.random()
        if not np.isfinite(hi):
            return lo + np.log1p(-xi) / k
        if abs(k) < 1e-12:
            return lo + xi * (hi - lo)
        return lo + np.log1p(xi * np.expm1(k * (hi - lo))) / k

    def insert(self, t: float, h: float, d: float) -> None:
        j = bisect.bisect(self.x, t)
        self.x.insert(j, t)
        self.h.insert(j, h)
        self.d.insert(j, d)
        self._refresh()


def _find_mode(lnf, dlnf, guess: float = 1.0) -> float:
    """Safeguarded search for the stationary point of a concave lnf on (0, inf)."""
    lo = hi = guess
    for _ in range(80):
        if dlnf(lo) > 0:
            break
        lo /= 4.0
    else:
        return lo      # decreasing everywhere that matters: mode at the left edge
    for _ in range(80):
        if dlnf(hi) < 0:
            break
        hi *= 4.0
    else:
        raise NumericError("mode search failed: log density still rising at huge alpha")
    if lo >= hi:
        return lo
    return float(optimize.brentq(dlnf, lo, hi, xtol=1e-12 * max(1.0, hi)))


def sample_g2(
    count: int,
    s: ReciprocalSample,
    priors: GammaPriors,
    seed,
    return_info: bool = False,
):
    """Exact draws from the normalized g2 via adaptive rejection sampling.

    Builds a tangent hull around the mode of log g2 and refines it on every
    rejection, so acceptance climbs toward 1 as draws accumulate.  Deterministic
    for a given seed.  With ``return_info=True`` also returns a dict carrying
    the realized acceptance ratio and number of hull points.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    def lnf(a):
        return g2_log_density(a, s, priors)

    def dlnf(a):
        return g2_log_density_grad(a, s, priors)

    mode = _find_mode(lnf, dlnf)
    offset = lnf(mode)
    pts = sorted({mode * 0.5, mode, mode * 2.0})
    xs = [float(t) for t in pts]
    hs = [lnf(t) - offset for t in xs]
    ds = [dlnf(t) for t in xs]
    while ds[-1] >= 0.0:
        xs.append(xs[-1] * 2.0)
        hs.append(lnf(xs[-1]) - offset)
        ds.append(dlnf(xs[-1]))
        if xs[-1] > 1e12:
            raise NumericError("upper tail of g2 never turns over; density improper?")
    hull = _Hull(xs, hs, ds)
    draws = np.empty(count)
    proposals = 0
    accepted = 0
    for idx in range(count):
        while True:
            t = hull.draw(rng)
            proposals += 1
            if t <= 0.0 or not np.isfinite(t):
                continue
            hval = lnf(t) - offset
            if np.log(rng.random()) <= hval - hull.envelope(t):
                draws[idx] = t
                accepted += 1
                break
            if len(hull.x) < 60:
                hull.insert(t, hval, dlnf(t))
    if return_info:
        return draws, {"acceptance_ratio": accepted / proposals,
                       "hull_points": len(hull.x), "mode": mode}
    return draws


# ---------------------------------------------------------------------------
# weighted draws and summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PosteriorDraws:
    """Importance-sampled (alpha, lam) pairs with normalized weights."""

    alphas: np.ndarray
    lams: np.ndarray
    weights: np.ndarray
    acceptance_ratio: float = field(default=float("nan"), compare=False)

    @property
    def size(self) -> int:
        return int(self.alphas.size)

    @property
    def thetas(self) -> np.ndarray:
        return np.exp(-np.log(self.lams) / self.alphas)

    @property
    def ess(self) -> float:
        """Effective sample size 1 / sum(w**2); equals M for equal weights."""
        return float(1.0 / (self.weights ** 2).sum())


@dataclass(frozen=True)
class BayesEstimate:
    mean: float
    variance: float
    hpd: ConfidenceInterval | None = None


@dataclass(frozen=True)
class IsResult:
    alpha: BayesEstimate
    lam: BayesEstimate
    theta: BayesEstimate
    draws: PosteriorDraws


def _log_weights(alphas: np.ndarray, lams: np.ndarray, s: ReciprocalSample) -> np.ndarray:
    if s.n == s.r:
        return np.zeros(alphas.size)
    with np.errstate(over="ignore"):
        q = np.exp(np.minimum(np.log(lams) - alphas * np.log(s.u), 709.0))
    return (s.n - s.r) * np.log(-np.expm1(-np.maximum(q, np.finfo(float).tiny)))


def posterior_draws(
    s: ReciprocalSample,
    priors: GammaPriors,
    count: int,
    seed,
    chunks: int = 1,
) -> PosteriorDraws:
    """Steps 1-3 of the sampler: alphas from g2, lams from g1, weights from h.

    ``chunks`` splits the draw budget into independently seeded streams
    (children of ``SeedSequence(seed)``) concatenated in chunk order, so the
    result is reproducible for a given (seed, count, chunks) regardless of
    how the chunks are executed.  For complete samples the weights are exactly
    uniform.
    """
    if s.r < 1:
        raise InsufficientDataError("posterior sampling needs at least one failure")
    if count < 2:
        raise DomainError(f"count must be >= 2, got {count}")
    if chunks < 1 or chunks > count:
        raise DomainError(f"chunks must be in [1, count], got {chunks}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    sizes = [count // chunks + (1 if i < count % chunks else 0) for i in range(chunks)]
    alphas = np.empty(count)
    lams = np.empty(count)
    acc = 0.0
    pos = 0
    for child, size in zip(root.spawn(chunks), sizes):
        rng = np.random.default_rng(child)
        a, info = sample_g2(size, s, priors, rng, return_info=True)
        l = sample_g1(a, s, priors, rng)
        alphas[pos:pos + size] = a
        lams[pos:pos + size] = l
        acc += info["acceptance_ratio"] * size
        pos += size
    if s.n == s.r:
        weights = np.full(count, 1.0 / count)
    else:
        lw = _log_weights(alphas, lams, s)
        w = np.exp(lw - lw.max())
        total = w.sum()
        if not total > 0:
            raise DegenerateWeightsError("all importance weights underflowed to zero")
        weights = w / total
    return PosteriorDraws(alphas, lams, weights, acceptance_ratio=acc / count)


def importance_estimate(draws: PosteriorDraws, statistic) -> BayesEstimate:
    """Weighted posterior mean and variance of ``statistic(alphas, lams)``."""
    if draws.size < 2:
        raise DomainError("need at least two draws")
    if not np.any(draws.weights > 0):
        raise DegenerateWeightsError("no positive importance weight")
    values = np.asarray(statistic(draws.alphas, draws.lams), dtype=float)
    mean = float((values * draws.weights).sum())
    var = float((((values - mean) ** 2) * draws.weights).sum())
    return BayesEstimate(mean=mean, variance=var)


def weighted_quantile(values, weights, beta: float) -> float:
    """Step-function quantile: the first ordered value whose cumulative weight
    reaches ``beta``.  ``beta = 0`` returns the smallest value; ties in the
    values accumulate weight in stable sorted order."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must be in [0, 1], got {beta}")
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if v.size == 0 or v.shape != w.shape:
        raise DomainError("values and weights must be nonempty and equally long")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    total = w.sum()
    if not total > 0:
        raise DegenerateWeightsError("weights sum to zero")
    order = np.argsort(v, kind="stable")
    cum = np.cumsum(w[order]) / total
    idx = int(np.searchsorted(cum, beta, side="left"))
    return float(v[order][min(idx, v.size - 1)])


def hpd_interval(values, weights, level: float) -> ConfidenceInterval:
    """Shortest credible interval among the candidate quantile windows
    (q(j/M), q((j + floor(level*M))/M)) for j = 1, ..., M - floor(level*M)."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must be in (0, 1), got {level}")
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    m = v.size
    if m * level < 2:
        raise DomainError(f"need M*level >= 2, got M={m}, level={level}")
    total = w.sum()
    if not total > 0:
        raise DegenerateWeightsError("weights sum to zero")
    order = np.argsort(v, kind="stable")
    vs = v[order]
    cum = np.cumsum(w[order]) / total
    k = int(np.floor(level * m))
    js = np.arange(1, m - k + 1)
    lo_idx = np.minimum(np.searchsorted(cum, js / m, side="left"), m - 1)
    hi_idx = np.minimum(np.searchsorted(cum, (js + k) / m, side="left"), m - 1)
    lengths = vs[hi_idx] - vs[lo_idx]
    j = int(np.argmin(lengths))
    return ConfidenceInterval(float(vs[lo_idx[j]]), float(vs[hi_idx[j]]), level)


def bayes_is(
    s: ReciprocalSample,
    priors: GammaPriors,
    count: int,
    seed,
    level: float = 0.95,
    chunks: int = 1,
) -> IsResult:
    """Full importance-sampling pipeline: draws, then means, variances and
    highest-density intervals for alpha, lam and theta = lam**(-1/alpha)."""
    draws = posterior_draws(s, priors, count, seed, chunks=chunks)

    def summarize(values: np.ndarray) -> BayesEstimate:
        mean = float((values * draws.weights).sum())
        var = float((((values - mean) ** 2) * draws.weights).sum())
        hpd = hpd_interval(values, draws.weights, level)
        return BayesEstimate(mean=mean, variance=var, hpd=hpd)

    return IsResult(
        alpha=summarize(draws.alphas),
        lam=summarize(draws.lams),
        theta=summarize(draws.thetas),
        draws=draws,
    )
