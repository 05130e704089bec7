"""Closed-form oscillatory integrals for checking tail closures.

Each case is ``int_0^inf G(x) sin(x) dx`` with a known value and analytic
even derivatives of ``G``, so truncation and tail-closure errors can be
measured exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special


@dataclass(frozen=True)
class TailCase:
    name: str
    G: Callable
    exact: float
    derivative: Callable  # derivative(n, x) -> n-th derivative of G at x


def exponential_decay(alpha: float = 0.01) -> TailCase:
    def G(x):
        return np.exp(-alpha * np.asarray(x, dtype=float))

    def derivative(n, x):
        return (-alpha) ** n * math.exp(-alpha * x)

    return TailCase(f"exp(-{alpha:g} x)", G, 1.0 / (1.0 + alpha**2), derivative)


def inverse_sqrt() -> TailCase:
    def G(x):
        return 1.0 / np.sqrt(np.asarray(x, dtype=float))

    def derivative(n, x):
        # d^n x^{-1/2} = (-1)^n Gamma(n + 1/2)/Gamma(1/2) x^{-n-1/2}
        return (-1) ** n * math.exp(special.gammaln(n + 0.5) - special.gammaln(0.5)) * x ** (-n - 0.5)

    return TailCase("1/sqrt(x)", G, math.sqrt(math.pi / 2), derivative)


def damped_cosine(alpha: float = 0.2) -> TailCase:
    if not 0 < alpha < 1:
        raise ValueError("closed form needs 0 < alpha < 1")

    def G(x):
        x = np.asarray(x, dtype=float)
        return np.cos(alpha * x) / x

    def derivative(n, x):
        # Leibniz rule on cos(alpha x) * x^{-1}
        total = 0.0
        for j in range(n + 1):
            d_cos = alpha**j * math.cos(alpha * x + j * math.pi / 2)
            r = n - j
            d_inv = (-1) ** r * math.factorial(r) * x ** (-r - 1)
            total += math.comb(n, j) * d_cos * d_inv
        return total

    return TailCase(f"cos({alpha:g} x)/x", G, math.pi / 2, derivative)


CASES = {1: exponential_decay, 2: inverse_sqrt, 3: damped_cosine}


def tail_case(example: int, alpha: float | None = None) -> TailCase:
    try:
        factory = CASES[example]
    except KeyError:
        raise ValueError(f"unknown example {example}; choose from {sorted(CASES)}") from None
    if example == 2 or alpha is None:
        return factory()
    return factory(alpha)


def even_derivatives(case: TailCase, b: float, terms: int) -> list[float]:
    return [case.derivative(2 * k, b) for k in range(1, terms + 1)]
