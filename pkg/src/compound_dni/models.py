"""Frequency and severity distributions used to build compound losses.

Severities are continuous on ``[0, inf)``; frequencies are counts on
``{0, 1, 2, ...}``.  Every model is an immutable dataclass and every method is
vectorised over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

ArrayLike = Union[float, np.ndarray]

PGF_DISK_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside the support or domain of a distribution function."""


def _check_nonneg(x: ArrayLike) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("severity functions are defined for x >= 0 only")
    return arr


def _check_prob(q: ArrayLike) -> np.ndarray:
    arr = np.asarray(q, dtype=float)
    if np.any(~((arr > 0) & (arr < 1))):
        raise DomainError("probability level must lie strictly inside (0, 1)")
    return arr


def _out(arr: np.ndarray, like: ArrayLike):
    return float(arr) if np.ndim(like) == 0 else arr


# --------------------------------------------------------------------------- #
# Severities
# --------------------------------------------------------------------------- #


class SeverityModel:
    """Common interface for nonnegative continuous severities."""

    def pdf(self, x: ArrayLike):
        raise NotImplementedError

    def cdf(self, x: ArrayLike):
        raise NotImplementedError

    def sf(self, x: ArrayLike):
        raise NotImplementedError

    def quantile(self, q: ArrayLike):
        raise NotImplementedError

    def isf(self, s: ArrayLike):
        """Inverse survival function, accurate for tiny tail probabilities."""
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def mode(self) -> float:
        raise NotImplementedError

    def limited_mean(self, c: float) -> float:
        """E[X; X <= c]."""
        raise NotImplementedError


@dataclass(frozen=True)
class Lognormal(SeverityModel):
    """Lognormal(mu, sigma): ``log X`` is normal with mean mu and std sigma."""

    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma) and math.isfinite(self.mu)):
            raise ValueError(f"Lognormal requires finite mu and sigma > 0, got {self}")

    def _std(self, x):
        with np.errstate(divide="ignore"):
            return (np.log(x) - self.mu) / self.sigma

    def pdf(self, x):
        arr = _check_nonneg(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            zs = self._std(arr)
            val = np.exp(-0.5 * zs * zs) / (arr * self.sigma * math.sqrt(2.0 * math.pi))
        val = np.where(arr > 0, val, 0.0)
        return _out(val, x)

    def cdf(self, x):
        arr = _check_nonneg(x)
        return _out(special.ndtr(self._std(arr)), x)

    def sf(self, x):
        arr = _check_nonneg(x)
        return _out(special.ndtr(-self._std(arr)), x)

    def quantile(self, q):
        arr = _check_prob(q)
        return _out(np.exp(self.mu + self.sigma * special.ndtri(arr)), q)

    def isf(self, s):
        arr = _check_prob(s)
        return _out(np.exp(self.mu - self.sigma * special.ndtri(arr)), s)

    def mean(self) -> float:
        return math.exp(self.mu + 0.5 * self.sigma**2)

    def mode(self) -> float:
        return math.exp(self.mu - self.sigma**2)

    def limited_mean(self, c: float) -> float:
        if c <= 0:
            return 0.0
        return self.mean() * float(special.ndtr((math.log(c) - self.mu - self.sigma**2) / self.sigma))

    def spec(self) -> str:
        return f"lognormal:{self.mu:g},{self.sigma:g}"


@dataclass(frozen=True)
class GPD(SeverityModel):
    """Generalised Pareto with shape xi > 0 and scale beta > 0 (location 0)."""

    xi: float
    beta: float

    def __post_init__(self):
        if not (self.xi > 0 and self.beta > 0 and math.isfinite(self.xi) and math.isfinite(self.beta)):
            raise ValueError(f"GPD requires xi > 0 and beta > 0, got {self}")

    def pdf(self, x):
        arr = _check_nonneg(x)
        val = np.exp((-1.0 - 1.0 / self.xi) * np.log1p(self.xi * arr / self.beta)) / self.beta
        return _out(val, x)

    def _log_sf(self, arr):
        return -np.log1p(self.xi * arr / self.beta) / self.xi

    def cdf(self, x):
        arr = _check_nonneg(x)
        return _out(-np.expm1(self._log_sf(arr)), x)

    def sf(self, x):
        arr = _check_nonneg(x)
        return _out(np.exp(self._log_sf(arr)), x)

    def quantile(self, q):
        arr = _check_prob(q)
        return _out(self.beta / self.xi * np.expm1(-self.xi * np.log1p(-arr)), q)

    def isf(self, s):
        arr = _check_prob(s)
        return _out(self.beta / self.xi * np.expm1(-self.xi * np.log(arr)), s)

    def mean(self) -> float:
        return self.beta / (1.0 - self.xi) if self.xi < 1 else math.inf

    def mode(self) -> float:
        return 0.0

    def limited_mean(self, c: float) -> float:
        # integral of the survival function up to c, minus c * sf(c)
        if c <= 0:
            return 0.0
        u = math.log1p(self.xi * c / self.beta)
        if abs(self.xi - 1.0) < 1e-12:
            area = self.beta * u
        else:
            area = self.beta / (1.0 - self.xi) * -math.expm1((1.0 - 1.0 / self.xi) * u)
        return area - c * math.exp(-u / self.xi)

    def spec(self) -> str:
        return f"gpd:{self.xi:g},{self.beta:g}"


# --------------------------------------------------------------------------- #
# Frequencies
# --------------------------------------------------------------------------- #


def _check_disk(s) -> np.ndarray:
    arr = np.asarray(s, dtype=complex)
    if np.any(np.abs(arr) > 1.0 + PGF_DISK_TOL):
        raise DomainError("pgf argument must lie in the closed unit disk")
    return arr


class FrequencyModel:
    """Common interface for count distributions."""

    def pmf(self, k):
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def var(self) -> float:
        raise NotImplementedError

    def pgf(self, s):
        raise NotImplementedError

    def prob_zero(self) -> float:
        return float(self.pmf(0))


def _stirling_remainder(k: np.ndarray) -> np.ndarray:
    """log(k!) - [(k + 1/2) log k - k + log(2 pi)/2] for k >= 1."""
    big = k >= 16
    kb = np.where(big, k, 16.0)
    series = 1 / (12 * kb) - 1 / (360 * kb**3) + 1 / (1260 * kb**5) - 1 / (1680 * kb**7)
    ks = np.where(big, 1.0, k)
    direct = special.gammaln(ks + 1) - (ks + 0.5) * np.log(ks) + ks - 0.5 * math.log(2 * math.pi)
    return np.where(big, series, direct)


def _poisson_saddle(k: np.ndarray, lam: float) -> np.ndarray:
    # exp(-stirling - deviance)/sqrt(2 pi k); the log form loses ~1e-10 at large lam
    pos = k >= 1
    kk = np.where(pos, k, 1.0)
    u = (kk - lam) / lam
    deviance = lam * ((1 + u) * np.log1p(u) - u)
    val = np.exp(-_stirling_remainder(kk) - deviance) / np.sqrt(2 * math.pi * kk)
    val = np.where(pos, val, math.exp(-lam))
    return np.where((k >= 0) & (k == np.floor(k)), val, 0.0)


@dataclass(frozen=True)
class Poisson(FrequencyModel):
    lam: float

    def __post_init__(self):
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise ValueError(f"Poisson intensity must be finite and >= 0, got {self.lam}")

    def pmf(self, k):
        kk = np.asarray(k, dtype=float)
        if self.lam == 0:
            val = np.where(kk == 0, 1.0, 0.0)
        else:
            val = _poisson_saddle(kk, self.lam)
        return _out(val, k)

    def mean(self) -> float:
        return self.lam

    def var(self) -> float:
        return self.lam

    def prob_zero(self) -> float:
        return math.exp(-self.lam)

    def pgf(self, s):
        val = np.exp(self.lam * (_check_disk(s) - 1.0))
        return val if np.ndim(s) else complex(val)

    def spec(self) -> str:
        return f"poisson:{self.lam:g}"


@dataclass(frozen=True)
class NegBinomial(FrequencyModel):
    """Pr(K=k) = C(k+m-1, k) (1-p)^k p^m, with real size m >= 1."""

    p: float
    m: float

    def __post_init__(self):
        if not (0 < self.p <= 1 and self.m >= 1 and math.isfinite(self.m)):
            raise ValueError(f"NegBinomial requires 0 < p <= 1 and m >= 1, got {self}")

    def pmf(self, k):
        kk = np.asarray(k, dtype=float)
        logc = special.gammaln(kk + self.m) - special.gammaln(kk + 1) - special.gammaln(self.m)
        if self.p == 1:
            val = np.where(kk == 0, 1.0, 0.0)
        else:
            val = np.exp(logc + kk * math.log1p(-self.p) + self.m * math.log(self.p))
        return _out(val, k)

    def mean(self) -> float:
        return self.m * (1 - self.p) / self.p

    def var(self) -> float:
        return self.m * (1 - self.p) / self.p**2

    def prob_zero(self) -> float:
        return self.p**self.m

    def pgf(self, s):
        arr = _check_disk(s)
        val = (1.0 + (1.0 - self.p) / self.p * (1.0 - arr)) ** -self.m
        return val if np.ndim(s) else complex(val)

    def spec(self) -> str:
        return f"negbinomial:{self.p:g},{self.m:g}"


@dataclass(frozen=True)
class SingleLoss(FrequencyModel):
    """Exactly one event: the compound loss is the severity itself."""

    def pmf(self, k):
        kk = np.asarray(k, dtype=float)
        return _out(np.where(kk == 1, 1.0, 0.0), k)

    def mean(self) -> float:
        return 1.0

    def var(self) -> float:
        return 0.0

    def prob_zero(self) -> float:
        return 0.0

    def pgf(self, s):
        arr = _check_disk(s)
        return arr if np.ndim(s) else complex(arr)

    def spec(self) -> str:
        return "none"


@dataclass(frozen=True)
class CompoundModel:
    """Z = X_1 + ... + X_K with K ~ frequency and X_i iid ~ severity."""

    frequency: FrequencyModel
    severity: SeverityModel
    cf_tolerance: float = 1e-13

    def __post_init__(self):
        if not self.cf_tolerance > 0:
            raise ValueError("cf_tolerance must be positive")

    def prob_zero(self) -> float:
        return self.frequency.prob_zero()


# --------------------------------------------------------------------------- #
# Functional aliases
# --------------------------------------------------------------------------- #


def severity_pdf(model: SeverityModel, x):
    return model.pdf(x)


def severity_cdf(model: SeverityModel, x):
    return model.cdf(x)


def severity_quantile(model: SeverityModel, q):
    return model.quantile(q)


def severity_mean(model: SeverityModel) -> float:
    return model.mean()


def frequency_pmf(model: FrequencyModel, k):
    if np.any(np.asarray(k) < 0):
        raise DomainError("counts are nonnegative")
    return model.pmf(k)


def pgf(model: FrequencyModel, s):
    return model.pgf(s)
