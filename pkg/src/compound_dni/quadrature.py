"""Gauss-Legendre panels and adaptive Gauss-Kronrod integration.

Integrands passed to the routines here must be vectorised: they receive a 1-D
numpy array of abscissae and return an array of the same shape (real or
complex).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _gk_tables as tables

MAX_SUBINTERVALS = 2**15
MIN_WIDTH_FRACTION = 1e-14
ROUNDOFF_FLOOR = 64 * np.finfo(float).eps
EVAL_CHUNK = 2**16


class UnsupportedOrderError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """Adaptive integration hit its caps; ``estimate`` holds the best result."""

    def __init__(self, message: str, estimate: "PanelEstimate"):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class GaussRule:
    """m-point Gauss-Legendre rule on [-1, 1] with its (2m+1)-point Kronrod extension.

    ``embedded_weights`` are the Gauss weights aligned with ``kronrod_nodes``
    (zero at the m+1 Kronrod-only nodes), so a single evaluation of the
    integrand on the Kronrod nodes yields both estimates.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    kronrod_nodes: np.ndarray
    kronrod_weights: np.ndarray
    embedded_weights: np.ndarray


def _build(m: int) -> GaussRule:
    xg = np.array(getattr(tables, f"GAUSS_{m}_NODES"))
    wg = np.array(getattr(tables, f"GAUSS_{m}_WEIGHTS"))
    xk = np.array(getattr(tables, f"KRONROD_{2 * m + 1}_NODES"))
    wk = np.array(getattr(tables, f"KRONROD_{2 * m + 1}_WEIGHTS"))
    emb = np.zeros_like(wk)
    for x, w in zip(xg, wg):
        emb[np.argmin(np.abs(xk - x))] = w
    for arr in (xg, wg, xk, wk, emb):
        arr.setflags(write=False)
    return GaussRule(m, xg, wg, xk, wk, emb)


_RULES = {m: _build(m) for m in (7, 15)}


def gauss_rule(m: int = 7) -> GaussRule:
    try:
        return _RULES[m]
    except KeyError:
        raise UnsupportedOrderError(f"only m in {sorted(_RULES)} are tabulated, got {m}") from None


def integrate_panel(f: Callable, a: float, b: float, rule: GaussRule | None = None) -> float:
    """Plain m-point Gauss rule on a single panel [a, b]."""
    rule = rule or gauss_rule(7)
    if not b > a:
        raise ValueError("integrate_panel needs a < b")
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * rule.nodes
    fx = np.asarray(f(x))
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError(f"non-finite integrand value on [{a}, {b}]")
    return half * float(np.dot(rule.weights, fx))


def gauss_error_bound(delta: float, m: int, C: float) -> float:
    """Derivative-based error bound of the m-point Gauss rule on a panel of width delta.

    ``C`` bounds the magnitude of the 2m-th derivative on the panel.
    """
    if delta < 0 or C < 0:
        raise ValueError("delta and C must be nonnegative")
    coef = math.factorial(m) ** 4 / ((2 * m + 1) * math.factorial(2 * m) ** 3)
    return delta ** (2 * m + 1) * coef * C


@dataclass(frozen=True)
class PanelEstimate:
    value: float | complex
    error_estimate: float
    evaluations: int
    intervals: int = 1


def gk_panels(f: Callable, a: np.ndarray, b: np.ndarray, rule: GaussRule) -> tuple[np.ndarray, np.ndarray]:
    """Kronrod estimates and |Kronrod - Gauss| errors for many panels at once."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size > EVAL_CHUNK:
        parts = [gk_panels(f, a[i:i + EVAL_CHUNK], b[i:i + EVAL_CHUNK], rule) for i in range(0, a.size, EVAL_CHUNK)]
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
    half = 0.5 * (b - a)
    x = (0.5 * (a + b))[:, None] + half[:, None] * rule.kronrod_nodes[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise FloatingPointError("non-finite integrand value in Gauss-Kronrod panel")
    k = half * (fx @ rule.kronrod_weights)
    g = half * (fx @ rule.embedded_weights)
    return k, np.abs(k - g)


def adaptive_integrate(
    f: Callable,
    a: float,
    b: float,
    abs_tol: float,
    rule: GaussRule | None = None,
    max_intervals: int = MAX_SUBINTERVALS,
) -> PanelEstimate:
    """Globally adaptive (2m+1)-point Gauss-Kronrod integration.

    The subinterval with the largest error estimate is bisected until the sum
    of error estimates drops below ``abs_tol``.  Raises ``ConvergenceError``
    carrying the best estimate if the interval count or width caps are hit.
    """
    rule = rule or gauss_rule(7)
    if not b > a:
        raise ValueError("adaptive_integrate needs a < b")
    if not abs_tol > 0:
        raise ValueError("abs_tol must be positive")
    min_width = MIN_WIDTH_FRACTION * (b - a)
    npts = len(rule.kronrod_nodes)

    val, err = gk_panels(f, np.array([a]), np.array([b]), rule)
    heap = [(-float(err[0]), a, b, val[0])]
    evaluations = npts
    total_err = float(err[0])

    def result():
        value = _sum_panels([np.array([item[3] for item in heap])])
        return PanelEstimate(value, math.fsum(-item[0] for item in heap), evaluations, len(heap))

    while total_err > abs_tol:
        neg_err, lo, hi, _ = heap[0]
        mid = 0.5 * (lo + hi)
        if len(heap) >= max_intervals or (hi - lo) < min_width:
            raise ConvergenceError(
                f"adaptive_integrate stopped with error {total_err:.3g} > {abs_tol:.3g}", result()
            )
        heapq.heappop(heap)
        vals, errs = gk_panels(f, np.array([lo, mid]), np.array([mid, hi]), rule)
        evaluations += 2 * npts
        heapq.heappush(heap, (-float(errs[0]), lo, mid, vals[0]))
        heapq.heappush(heap, (-float(errs[1]), mid, hi, vals[1]))
        total_err += float(errs[0] + errs[1]) + neg_err
        if len(heap) % 64 == 0:
            total_err = math.fsum(-item[0] for item in heap)
    return result()


def adaptive_integrate_panels(
    f: Callable,
    edges: np.ndarray,
    abs_tol: float,
    rule: GaussRule | None = None,
    max_rounds: int = 60,
    max_panels: int = 2**20,
) -> PanelEstimate:
    """Batch-adaptive Gauss-Kronrod over a prescribed panel partition.

    All panels are evaluated together; those whose error exceeds their share
    of the tolerance are bisected and re-evaluated as a batch.  Suited to
    long oscillatory ranges split into aligned panels.
    """
    rule = rule or gauss_rule(7)
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    span = edges[-1] - edges[0]
    npts = len(rule.kronrod_nodes)
    done_vals = []
    done_err = 0.0
    evaluations = 0
    accepted = 0
    for _ in range(max_rounds):
        vals, errs = gk_panels(f, a, b, rule)
        evaluations += npts * a.size
        # each panel may use tolerance in proportion to its width
        budget = 0.5 * abs_tol * (b - a) / span
        # a panel already at roundoff level cannot improve by bisection
        ok = (errs <= budget) | (errs <= ROUNDOFF_FLOOR * np.abs(vals))
        done_vals.append(vals[ok])
        done_err += float(errs[ok].sum())
        accepted += int(ok.sum())
        if ok.all():
            a = a[:0]
            break
        a, b = a[~ok], b[~ok]
        remaining = float(errs[~ok].sum())
        if done_err + remaining <= abs_tol:
            done_vals.append(vals[~ok])
            done_err += remaining
            accepted += a.size
            a = a[:0]
            break
        if 2 * a.size + accepted > max_panels or np.any((b - a) < MIN_WIDTH_FRACTION * span):
            done_vals.append(vals[~ok])
            est = _sum_panels(done_vals)
            raise ConvergenceError(
                "adaptive_integrate_panels exhausted its panel budget",
                PanelEstimate(est, done_err + remaining, evaluations, accepted + a.size),
            )
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    if a.size:
        raise ConvergenceError(
            "adaptive_integrate_panels ran out of refinement rounds",
            PanelEstimate(_sum_panels(done_vals), math.inf, evaluations, accepted),
        )
    return PanelEstimate(_sum_panels(done_vals), done_err, evaluations, accepted)


def _sum_panels(chunks) -> float | complex:
    allv = np.concatenate(chunks) if chunks else np.zeros(0)
    if np.iscomplexobj(allv):
        return complex(math.fsum(allv.real), math.fsum(allv.imag))
    return math.fsum(allv)
