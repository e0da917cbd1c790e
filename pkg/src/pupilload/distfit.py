"""Histograms, Normal/Beta fitting and the L1 histogram fit error.

All distributions live on the unit interval: the values being fitted are
segment diameters after min-max normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import betaln, digamma, erf, polygamma

DEFAULT_BINS = 20

_CF_MAX_ITER = 2000
_CF_EPS = 1e-16
_TINY = 1e-300


class DegenerateSegmentError(ValueError):
    """Values carry no spread, so a Beta distribution cannot be fitted."""


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    masses: np.ndarray

    @property
    def bins(self) -> int:
        return len(self.masses)


class NormalParams(NamedTuple):
    mu: float
    sigma: float

    @property
    def std(self) -> float:
        return self.sigma


class BetaParams(NamedTuple):
    alpha: float
    beta: float

    @property
    def std(self) -> float:
        return beta_std(self)


def unit_edges(bins: int) -> np.ndarray:
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    return np.linspace(0.0, 1.0, bins + 1)


def histogram(values, bins: int = DEFAULT_BINS) -> Histogram:
    """Relative-frequency histogram over uniform bins on [0, 1]; 1.0 lands in the last bin."""
    values = np.asarray(values, dtype=float)
    edges = unit_edges(bins)
    if values.size == 0:
        raise ValueError("cannot build a histogram from no values")
    if values.min() < 0.0 or values.max() > 1.0:
        raise ValueError("histogram values must lie in [0, 1]")
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(edges, counts / values.size)


def fit_normal(values) -> NormalParams:
    """Moment (= maximum likelihood) fit: sample mean and population std."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("fit_normal needs at least one value")
    mu = float(values.mean())
    return NormalParams(mu, float(np.sqrt(np.mean((values - mu) ** 2))))


def beta_moments(values) -> BetaParams:
    values = np.asarray(values, dtype=float)
    m = float(values.mean())
    v = float(np.mean((values - m) ** 2))
    if v <= 0.0 or values.max() == values.min():
        raise DegenerateSegmentError("all values identical")
    common = m * (1.0 - m) / v - 1.0
    return BetaParams(m * common, (1.0 - m) * common)


def _beta_loglik(a, b, mean_log_x, mean_log_1mx):
    return (a - 1.0) * mean_log_x + (b - 1.0) * mean_log_1mx - betaln(a, b)


def beta_loglik(params: BetaParams, values) -> float:
    values = np.asarray(values, dtype=float)
    ll = _beta_loglik(params.alpha, params.beta, np.log(values).mean(), np.log1p(-values).mean())
    return float(ll * values.size)


def fit_beta(values, max_iter: int = 100, tol: float = 1e-12) -> BetaParams:
    """Maximum-likelihood Beta fit.

    Starts from the method-of-moments estimate and takes damped Newton steps on
    the mean log-likelihood. A step is halved until both parameters stay
    positive and either the likelihood does not drop or the score shrinks (the
    likelihood is too flat to compare near the optimum). Iteration stops once
    a step is below ``tol`` relative to the parameters. The moments estimate
    is returned whenever refinement fails to beat it.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("fit_beta needs at least two values")
    if values.min() <= 0.0 or values.max() >= 1.0:
        raise ValueError("fit_beta values must lie strictly inside (0, 1)")
    start = beta_moments(values)
    slx = float(np.log(values).mean())
    sl1x = float(np.log1p(-values).mean())

    def score(a, b):
        psi_ab = digamma(a + b)
        return np.array([slx - digamma(a) + psi_ab, sl1x - digamma(b) + psi_ab])

    a, b = start
    ll = _beta_loglik(a, b, slx, sl1x)
    ll_start = ll
    for _ in range(max_iter):
        g = score(a, b)
        gnorm = float(np.hypot(g[0], g[1]))
        tri_ab = polygamma(1, a + b)
        h = np.array([[tri_ab - polygamma(1, a), tri_ab],
                      [tri_ab, tri_ab - polygamma(1, b)]])
        try:
            step = -np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        scale = 1.0
        for _ in range(60):
            na, nb = a + scale * step[0], b + scale * step[1]
            if na > 0.0 and nb > 0.0:
                nll = _beta_loglik(na, nb, slx, sl1x)
                if nll >= ll or float(np.hypot(*score(na, nb))) < gnorm:
                    break
            scale *= 0.5
        else:
            break
        taken = scale * float(np.hypot(step[0], step[1]))
        a, b, ll = na, nb, nll
        if taken < tol * (1.0 + float(np.hypot(a, b))):
            break
    if not (np.isfinite(ll) and ll >= ll_start - 1e-12 * abs(ll_start) and a > 0.0 and b > 0.0):
        return start
    return BetaParams(float(a), float(b))


def beta_std(p: BetaParams) -> float:
    a, b = p
    s = a + b
    return math.sqrt(a * b / (s * s * (s + 1.0)))


def _betacf(a, b, x):
    """Continued fraction for I_x(a, b) by the modified Lentz method (vectorized over x)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= _CF_EPS
        if not active.any():
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b})")


def regularized_incomplete_beta(a: float, b: float, x):
    """Regularized incomplete beta function I_x(a, b); accepts scalar or array ``x``.

    Uses the continued fraction where it converges fast
    (``x < (a+1)/(a+b+2)``) and ``I_x(a,b) = 1 - I_{1-x}(b,a)`` elsewhere.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"shape parameters must be positive, got a={a!r}, b={b!r}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x < 0.0) | (x > 1.0)) or np.any(np.isnan(x)):
        raise ValueError("x must lie in [0, 1]")
    out = np.zeros_like(x)
    out[x == 1.0] = 1.0
    inner = (x > 0.0) & (x < 1.0)
    direct = inner & (x < (a + 1.0) / (a + b + 2.0))
    flipped = inner & ~direct
    lbeta = betaln(a, b)
    if direct.any():
        xs = x[direct]
        front = np.exp(a * np.log(xs) + b * np.log1p(-xs) - lbeta) / a
        out[direct] = front * _betacf(a, b, xs)
    if flipped.any():
        ys = 1.0 - x[flipped]
        front = np.exp(b * np.log(ys) + a * np.log1p(-ys) - lbeta) / b
        out[flipped] = 1.0 - front * _betacf(b, a, ys)
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if scalar else out


def _point_mass(loc: float, edges: np.ndarray) -> np.ndarray:
    masses = np.zeros(len(edges) - 1)
    j = int(np.searchsorted(edges, loc, side="right")) - 1
    masses[min(max(j, 0), len(masses) - 1)] = 1.0
    return masses


def normal_cdf(x, mu: float, sigma: float):
    return 0.5 * (1.0 + erf((np.asarray(x, dtype=float) - mu) / (sigma * math.sqrt(2.0))))


def dist_bin_masses(dist, edges) -> np.ndarray:
    """Probability mass the fitted distribution assigns to each histogram bin.

    The Normal is truncated to the histogram range and renormalized; a Normal
    with zero spread is a point mass on the bin holding its mean.
    """
    edges = np.asarray(edges, dtype=float)
    if isinstance(dist, NormalParams):
        mu, sigma = dist
        if sigma <= 0.0:
            return _point_mass(mu, edges)
        cdf = normal_cdf(edges, mu, sigma)
        masses = np.diff(cdf)
        total = cdf[-1] - cdf[0]
        if not total > 0.0:
            return _point_mass(mu, edges)
        return np.maximum(masses, 0.0) / total
    if isinstance(dist, BetaParams):
        cdf = regularized_incomplete_beta(dist.alpha, dist.beta, np.clip(edges, 0.0, 1.0))
        return np.maximum(np.diff(cdf), 0.0)
    raise TypeError(f"unsupported distribution {type(dist).__name__}")


def l1_fit_error(hist, dist_masses) -> float:
    p = np.asarray(hist.masses if isinstance(hist, Histogram) else hist, dtype=float)
    q = np.asarray(dist_masses, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"mass vectors differ in length: {p.shape} vs {q.shape}")
    return float(np.abs(p - q).sum())


def normal_pdf(x, p: NormalParams):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * ((x - p.mu) / p.sigma) ** 2) / (p.sigma * math.sqrt(2.0 * math.pi))


def beta_pdf(x, p: BetaParams):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = np.exp((p.alpha - 1.0) * np.log(xi) + (p.beta - 1.0) * np.log1p(-xi)
                         - betaln(p.alpha, p.beta))
    return out
