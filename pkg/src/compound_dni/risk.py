"""Quantiles, CVaR and expected exceedance computed from the inverted distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charfn import CfCache, compound_cf_re
from .dni import DniConfig, _even_derivatives, _run_cycles, invert_cdf
from .models import GPD, CompoundModel
from .quadrature import adaptive_integrate

DEFAULT_EPS = 1e-12
BRACKET_DOUBLINGS = 200
REFINE_TOL = 1e-4


class BracketError(RuntimeError):
    pass


class InfiniteMeanError(ValueError):
    pass


@dataclass(frozen=True)
class QuantileResult:
    q: float
    Q_q: float
    iterations: int
    achieved_eps: float
    df_evaluations: int
    config: DniConfig | None = None
    history: tuple = ()


@dataclass(frozen=True)
class CvarResult:
    q: float
    Q_q: float
    cvar: float
    mean: float
    tail_expectation_integral: float


def compound_mean(model: CompoundModel) -> float:
    freq_mean = model.frequency.mean()
    if freq_mean == 0:
        return 0.0
    return freq_mean * model.severity.mean()


def gpd_quantile_scaling(xi: float, beta: float, lam: float, q: float) -> float:
    """Heavy-tail approximation (beta/xi) (lam/(1-q))^xi for Poisson-GPD quantiles."""
    if not (xi > 0 and beta > 0 and lam > 0 and 0 < q < 1):
        raise ValueError("need xi, beta, lam > 0 and 0 < q < 1")
    return beta / xi * (lam / (1.0 - q)) ** xi


def _initial_upper(model: CompoundModel, q: float) -> float:
    sev = model.severity
    n_mean = max(model.frequency.mean(), 1e-300)
    if isinstance(sev, GPD):
        return max(gpd_quantile_scaling(sev.xi, sev.beta, n_mean, q), float(sev.quantile(q)))
    return compound_mean(model) + 50.0 * float(sev.quantile(0.999)) * max(1.0, math.sqrt(n_mean))


def quantile(
    model: CompoundModel,
    q: float,
    config: DniConfig | None = None,
    eps: float = DEFAULT_EPS,
    warm_start: float | None = None,
) -> QuantileResult:
    """Smallest Q with H(Q) = q, by bisection on the inverted distribution."""
    config = config or DniConfig()
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0, 1)")
    if q <= model.prob_zero():
        return QuantileResult(q, 0.0, 0, 0.0, 0, config)

    calls = 0

    def H(z):
        nonlocal calls
        calls += 1
        return invert_cdf(model, z, config).value

    if warm_start is not None and warm_start > 0:
        lo, hi = warm_start * (1 - 1e-3), warm_start * (1 + 1e-3)
        while H(lo) > q:
            lo *= 0.5
            if calls > BRACKET_DOUBLINGS:
                raise BracketError("could not bracket the quantile from the warm start")
        while H(hi) <= q:
            hi *= 2.0
            if calls > BRACKET_DOUBLINGS:
                raise BracketError("could not bracket the quantile from the warm start")
    else:
        lo, hi = 0.0, _initial_upper(model, q)
        for _ in range(BRACKET_DOUBLINGS):
            if H(hi) > q:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise BracketError(f"H stayed below {q} up to {hi:.6g}")

    iterations = 0
    mid, achieved = hi, math.inf
    while True:
        mid = 0.5 * (lo + hi)
        h = H(mid)
        iterations += 1
        achieved = abs(h - q) / q
        if achieved < eps or (hi - lo) < 1e-12 * mid:
            break
        if h > q:
            hi = mid
        else:
            lo = mid
    return QuantileResult(q, mid, iterations, achieved, calls, config)


def converged_quantile(
    model: CompoundModel,
    q: float,
    config: DniConfig | None = None,
    eps: float = DEFAULT_EPS,
    rel_tol: float = REFINE_TOL,
    max_refinements: int = 3,
) -> QuantileResult:
    """Quantile search repeated on successively refined grids until it settles.

    Each refinement halves the panel width and doubles the truncation length,
    starting from the previous answer.  Stops once two consecutive answers
    differ by less than ``rel_tol`` relative.
    """
    config = config or DniConfig()
    res = quantile(model, q, config, eps)
    history = [(config.n0, config.N, res.Q_q)]
    total = res.df_evaluations
    for _ in range(max_refinements):
        if res.Q_q == 0:
            break
        config = config.refined()
        new = quantile(model, q, config, eps, warm_start=res.Q_q)
        total += new.df_evaluations
        history.append((config.n0, config.N, new.Q_q))
        change = abs(new.Q_q - res.Q_q) / new.Q_q
        res = new
        if change < rel_tol:
            break
    return QuantileResult(res.q, res.Q_q, res.iterations, res.achieved_eps, total, config, tuple(history))


# --------------------------------------------------------------------------- #
# tail expectations
# --------------------------------------------------------------------------- #


def _partial_integral(model: CompoundModel, L: float, config: DniConfig) -> float:
    """J(L) = int_0^inf Re[chi(x/L)] (1 - cos x)/x^2 dx, so that int_0^L H = 2 L J / pi."""
    cache = CfCache(model.severity, model.cf_tolerance)

    def re_chi(x):
        return compound_cf_re(model, x / L, cache)

    def body(x):
        s = np.sin(0.5 * x)
        return re_chi(x) * 2.0 * s * s / (x * x)

    def g_cos(x):
        return re_chi(x) / (x * x)

    # body up to a = (2N - 1/2) pi, where cos vanishes and sin = -1
    res = _run_cycles(body, config, "none")
    a = (2 * config.N - 0.5) * math.pi
    pr0 = model.prob_zero()

    # int_a^inf Re[chi]/x^2 with x = a e^v; Re[chi] -> Pr(K=0) at infinity
    def smooth(v):
        return (re_chi(a * np.exp(v)) - pr0) * np.exp(-v)

    non_osc = (pr0 + adaptive_integrate(smooth, 0.0, 40.0, 1e-15).value) / a
    # int_a^inf Re[chi] cos x / x^2 by parts: g(a) - g''(a) + ...
    gc, gc2, _ = _even_derivatives(g_cos, a, math.pi / 8)
    osc = gc - gc2 if config.tail_order == 2 else gc
    if config.tail_order == 0:
        osc = 0.0
    return res.body + non_osc - osc


def _require_finite_mean(model: CompoundModel) -> float:
    mu = compound_mean(model)
    if not math.isfinite(mu):
        raise InfiniteMeanError("tail expectations need a finite severity mean")
    return mu


def exceedance_above(model: CompoundModel, L: float, config: DniConfig | None = None, level: float | None = None) -> float:
    """E[Z 1{Z > L}] = mu - H(L) L + int_0^L H.

    ``level`` substitutes a known value of H(L), as when L is itself a
    quantile; otherwise H(L) is inverted.
    """
    config = config or DniConfig(n0=2, N=100)
    mu = _require_finite_mean(model)
    if not L > 0:
        raise ValueError("threshold must be positive")
    hl = invert_cdf(model, L, config).value if level is None else level
    integral = 2.0 * L / math.pi * _partial_integral(model, L, config)
    return mu - hl * L + integral


def cvar(model: CompoundModel, q: float, config: DniConfig | None = None, quantile_result: QuantileResult | None = None) -> CvarResult:
    """Expected loss given the loss exceeds its q-quantile."""
    mu = _require_finite_mean(model)
    if quantile_result is None:
        quantile_result = converged_quantile(model, q, config or DniConfig())
    Q = quantile_result.Q_q
    cfg = quantile_result.config or config or DniConfig(n0=2, N=100)
    if Q == 0:
        return CvarResult(q, 0.0, mu / (1.0 - q), mu, 0.0)
    J = _partial_integral(model, Q, cfg)
    value = (mu - q * Q + 2.0 * Q / math.pi * J) / (1.0 - q)
    return CvarResult(q, Q, value, mu, J)
