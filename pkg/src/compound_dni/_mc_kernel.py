"""Compiled sampler for compound losses.

A xoshiro256** generator per stream, seeded through splitmix64 from
``(seed, stream)``, feeds inverse-transform severity draws.  Poisson counts use
sequential inversion for small means and Hormann's PTRS transformed rejection
otherwise; negative binomial counts are gamma-mixed Poisson.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, uint64

FREQ_SINGLE, FREQ_POISSON, FREQ_NEGBIN = 0, 1, 2
SEV_LOGNORMAL, SEV_GPD = 0, 1

_M64 = 0xFFFFFFFFFFFFFFFF


@njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(cache=True)
def _splitmix(x):
    x = (x + uint64(0x9E3779B97F4A7C15)) & uint64(_M64)
    z = x
    z = ((z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)) & uint64(_M64)
    z = ((z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)) & uint64(_M64)
    return x, z ^ (z >> uint64(31))


@njit(cache=True)
def seed_state(seed, stream):
    s = np.empty(4, dtype=np.uint64)
    x = uint64(seed) ^ ((uint64(stream) * uint64(0xD1B54A32D192ED03)) & uint64(_M64))
    for i in range(4):
        x, s[i] = _splitmix(x)
    return s


@njit(cache=True, inline="always")
def _next(s):
    result = (_rotl((s[1] * uint64(5)) & uint64(_M64), 7) * uint64(9)) & uint64(_M64)
    t = (s[1] << uint64(17)) & uint64(_M64)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True, inline="always")
def uniform(s):
    # open interval (0, 1)
    return ((_next(s) >> uint64(11)) + 0.5) * (1.0 / 9007199254740992.0)


@njit(cache=True, fastmath=True, inline="always")
def ndtri(p):
    """Wichura's AS241 (PPND16) inverse standard normal, about 1e-16 relative."""
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r
                        + 45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r
                      + 133.14166789178437745) * r + 3.387132872796366608) / \
            (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r
                 + 21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r
              + 42.313330701600911252) * r + 1.0)
    r = p if q < 0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r
                   + 1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r
                 + 4.6303378461565452959) * r + 1.42343711074968357734) / \
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r
                 + 0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r
              + 2.05319162663775882187) * r + 1.0)
    else:
        r -= 5.0
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r
                   + 0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r
                 + 5.4637849111641143699) * r + 6.6579046435011037772) / \
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r
                 + 7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r
              + 0.59983220655588793769) * r + 1.0)
    return -val if q < 0 else val


@njit(cache=True)
def _poisson_inversion(s, lam):
    u = uniform(s)
    k = 0
    p = math.exp(-lam)
    c = p
    while u > c:
        k += 1
        p *= lam / k
        c += p
        if k > 1000:
            break
    return k


@njit(cache=True)
def _poisson_ptrs(s, lam):
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2)
    while True:
        u = uniform(s) - 0.5
        v = uniform(s)
        us = 0.5 - abs(u)
        k = math.floor((2 * a / us + b) * u + lam + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        if (math.log(v) + math.log(inv_alpha) - math.log(a / (us * us) + b)) <= (
            -lam + k * loglam - math.lgamma(k + 1)
        ):
            return int(k)


@njit(cache=True)
def poisson(s, lam):
    if lam <= 0:
        return 0
    if lam <= 30:
        return _poisson_inversion(s, lam)
    return _poisson_ptrs(s, lam)


@njit(cache=True)
def gamma(s, shape):
    """Marsaglia-Tsang for shape >= 1, unit scale."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = ndtri(uniform(s))
        v = 1.0 + c * x
        if v <= 0:
            continue
        v = v * v * v
        u = uniform(s)
        if math.log(u) < 0.5 * x * x + d - d * v + d * math.log(v):
            return d * v


@njit(cache=True, fastmath=True)
def _sum_lognormal(s, k, mu, sigma):
    total = 0.0
    for _ in range(k):
        total += math.exp(mu + sigma * ndtri(uniform(s)))
    return total


@njit(cache=True, fastmath=True)
def _sum_gpd(s, k, xi, beta):
    # inverse survival function: x = beta/xi (u^{-xi} - 1)
    total = 0.0
    for _ in range(k):
        total += math.expm1(-xi * math.log(uniform(s)))
    return beta / xi * total


@njit(cache=True, nogil=True, fastmath=True)
def simulate(freq_kind, f1, f2, sev_kind, s1, s2, n, seed, stream):
    st = seed_state(seed, stream)
    out = np.empty(n)
    for i in range(n):
        if freq_kind == FREQ_SINGLE:
            k = 1
        elif freq_kind == FREQ_POISSON:
            k = poisson(st, f1)
        else:
            # NegBinomial(p=f1, m=f2): Poisson with Gamma(m, (1-p)/p) mean
            k = poisson(st, gamma(st, f2) * (1.0 - f1) / f1)
        if sev_kind == SEV_LOGNORMAL:
            out[i] = _sum_lognormal(st, k, s1, s2)
        else:
            out[i] = _sum_gpd(st, k, s1, s2)
    return out
