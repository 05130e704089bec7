"""Monte Carlo and FFT reference methods for cross-checking the inversion."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from . import _mc_kernel as kernel
from .models import GPD, CompoundModel, Lognormal, NegBinomial, Poisson, SeverityModel, SingleLoss
from .risk import compound_mean

BATCH = 2**20
NEGATIVE_TOL = 1e-12


class LatticeExhaustedError(RuntimeError):
    pass


class LatticeRoundoffError(RuntimeError):
    pass


# --------------------------------------------------------------------------- #
# Monte Carlo
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class McEstimate:
    n_sims: int
    seed: int
    quantile_estimate: float
    quantile_stderr: float
    cvar_estimate: float
    cvar_stderr: float


def _kernel_args(model: CompoundModel):
    f, s = model.frequency, model.severity
    if isinstance(f, SingleLoss):
        fa = (kernel.FREQ_SINGLE, 0.0, 0.0)
    elif isinstance(f, Poisson):
        fa = (kernel.FREQ_POISSON, float(f.lam), 0.0)
    elif isinstance(f, NegBinomial):
        fa = (kernel.FREQ_NEGBIN, float(f.p), float(f.m))
    else:
        raise TypeError(f"no sampler for {type(f).__name__}")
    if isinstance(s, Lognormal):
        sa = (kernel.SEV_LOGNORMAL, float(s.mu), float(s.sigma))
    elif isinstance(s, GPD):
        sa = (kernel.SEV_GPD, float(s.xi), float(s.beta))
    else:
        raise TypeError(f"no sampler for {type(s).__name__}")
    return fa + sa


def sample_compound(model: CompoundModel, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """``n`` iid draws of the compound loss from stream ``(seed, stream)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return kernel.simulate(*_kernel_args(model), int(n), np.uint64(seed), np.uint64(stream))


def simulate_losses(model: CompoundModel, n_sims: int, seed: int, workers: int = 1) -> np.ndarray:
    """Pooled sample built from fixed-size batches, one stream per batch.

    The batch layout depends only on ``n_sims``, so the sample is the same
    for any number of workers.
    """
    sizes = [min(BATCH, n_sims - start) for start in range(0, n_sims, BATCH)]
    args = _kernel_args(model)

    def run(i):
        return kernel.simulate(*args, sizes[i], np.uint64(seed), np.uint64(i))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    return np.concatenate(parts) if parts else np.zeros(0)


def _density_at(sample: np.ndarray, x: float) -> float:
    """Gaussian KDE of the loss density at x > 0, built on log losses."""
    pos = sample[sample > 0]
    if pos.size < 2 or x <= 0:
        return math.nan
    y = np.log(pos)
    sd = float(np.std(y))
    iqr = float(np.subtract(*np.percentile(y, [75, 25])))
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    bw = 0.9 * spread * pos.size ** (-0.2)
    u = (math.log(x) - y) / bw
    dens_log = float(np.exp(-0.5 * u * u).sum()) / (pos.size * bw * math.sqrt(2 * math.pi))
    return dens_log / x * pos.size / sample.size


def mc_estimate(model: CompoundModel, q: float, n_sims: int, seed: int, workers: int = 1) -> McEstimate:
    if n_sims < 1000:
        raise ValueError("n_sims must be at least 1000")
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0, 1)")
    z = simulate_losses(model, n_sims, seed, workers)
    Q = float(np.quantile(z, q, method="linear"))
    dens = _density_at(z, Q)
    q_se = math.sqrt(q * (1 - q) / n_sims) / dens if dens > 0 else math.inf
    exceed = z[z >= Q]
    if math.isfinite(compound_mean(model)) and exceed.size > 1:
        c = float(exceed.mean())
        c_se = float(exceed.std(ddof=1)) / math.sqrt(exceed.size)
    else:
        c, c_se = math.inf, math.inf
    return McEstimate(n_sims, seed, Q, q_se, c, c_se)


# --------------------------------------------------------------------------- #
# FFT on a lattice
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class LatticePmf:
    h: float
    n: int
    masses: np.ndarray
    tail_mass: float = 0.0
    clipped: float = 0.0

    def mean(self) -> float:
        return float(self.h * np.dot(np.arange(self.n), self.masses))


def _check_lattice(h: float, n: int):
    if not h > 0:
        raise ValueError("bandwidth must be positive")
    if n < 2 or n & (n - 1):
        raise ValueError("lattice size must be a power of two")


def fft_discretize(sev: SeverityModel, h: float, n: int) -> LatticePmf:
    """Rounding discretisation: cell k collects the mass of [(k-1/2)h, (k+1/2)h)."""
    _check_lattice(h, n)
    edges = h * (np.arange(n) + 0.5)
    sf = np.asarray(sev.sf(edges))
    masses = np.empty(n)
    masses[0] = 1.0 - sf[0]
    masses[1:] = sf[:-1] - sf[1:]
    return LatticePmf(h, n, masses, float(sf[-1]))


def fft_compound(freq, pmf: LatticePmf) -> LatticePmf:
    """Compound lattice pmf: inverse DFT of the pgf applied to the severity DFT."""
    spectrum = sfft.rfft(pmf.masses)
    # the DFT of a sub-probability vector lies in the unit disk up to round-off
    mag = np.abs(spectrum)
    spectrum = np.where(mag > 1.0, spectrum / np.maximum(mag, 1e-300), spectrum)
    out = sfft.irfft(freq.pgf(spectrum), pmf.n)
    worst = float(out.min())
    if worst < -NEGATIVE_TOL:
        raise LatticeRoundoffError(f"compound lattice has mass {worst:.3g} < -{NEGATIVE_TOL:g}")
    neg = out < 0
    clipped = float(-out[neg].sum())
    out[neg] = 0.0
    return LatticePmf(pmf.h, pmf.n, out, pmf.tail_mass, clipped)


def fft_bandwidth(q_hint: float, n: int) -> tuple[float, float]:
    """Smallest h = nu * 10^k (nu in 1..9) with n h > 2 q_hint, and twice that."""
    if not q_hint > 0:
        raise ValueError("q_hint must be positive")
    target = 2.0 * q_hint / n
    k = math.floor(math.log10(target))
    nu = math.floor(target / 10.0**k + 1e-12) + 1
    if nu >= 10:
        nu, k = 1, k + 1
    h = float(f"{nu}e{k}")
    while n * h <= 2 * q_hint:
        nu += 1
        if nu >= 10:
            nu, k = 1, k + 1
        h = float(f"{nu}e{k}")
    return h, float(f"{2 * nu}e{k}")


def lattice_quantile_cvar(pmf: LatticePmf, q: float, mean: float | None = None) -> tuple[float, float]:
    """Quantile and CVaR from a compound lattice.

    Each cell's mass is spread uniformly over its rounding cell, which makes
    the cumulative piecewise linear between cell edges.  The CVaR uses
    ``mean`` (the analytic compound mean) minus the expectation below the
    quantile; without it the lattice mean is used.
    """
    if not 0 < q < 1:
        raise ValueError("q must lie strictly inside (0, 1)")
    cum = np.cumsum(pmf.masses)
    j = int(np.searchsorted(cum, q, side="left"))
    if j >= pmf.n:
        raise LatticeExhaustedError(f"lattice mass {cum[-1]:.6g} never reaches {q}")
    below_mass = cum[j - 1] if j > 0 else 0.0
    frac = (q - below_mass) / pmf.masses[j]
    h = pmf.h
    lo = max((j - 0.5) * h, 0.0)
    hi = (j + 0.5) * h
    Q = lo + frac * (hi - lo)
    ks = np.arange(j)
    below = h * float(np.dot(ks, pmf.masses[:j])) + (q - below_mass) * 0.5 * (lo + Q)
    mu = pmf.mean() if mean is None else mean
    return float(Q), (mu - below) / (1.0 - q)


@dataclass(frozen=True)
class FftEstimate:
    h: float
    n: int
    quantile_estimate: float
    cvar_estimate: float
    lattice_mean: float
    failed: bool
    reason: str = ""
    aliased: bool = False
    wrapped_mass: float = 0.0


def discretisation_bias(sev: SeverityModel, pmf: LatticePmf) -> float:
    """Lattice severity mean minus the exact mean of the severity restricted to the lattice range."""
    return pmf.mean() - sev.limited_mean((pmf.n - 0.5) * pmf.h)


def wrapped_mass(freq, sev_pmf: LatticePmf, comp: LatticePmf) -> float:
    """Compound mass folded back onto the lattice by the circular convolution.

    Without wrap-around the lattice mean would be psi'(s) times the severity
    lattice mean, with s the retained severity mass; each unit of folded mass
    lowers it by ``n h``.  psi' comes from a complex-step derivative.
    """
    step = 1e-30
    kept = 1.0 - sev_pmf.tail_mass
    dpsi = complex(freq.pgf(np.array([kept + 1j * step]))[0]).imag / step
    return max((dpsi * sev_pmf.mean() - comp.mean()) / (comp.n * comp.h), 0.0)


def fft_estimate(model: CompoundModel, q: float, h: float, n: int) -> FftEstimate:
    """FFT quantile and CVaR with checks for wrap-around and discretisation bias.

    Both estimates are marked ``aliased`` and failed when the folded mass
    exceeds 1% of the tail probability, or the quantile sits beyond half the
    lattice.  The CVaR alone is marked failed when either folded mass times
    the quantile, or the rounding shift of the severity mean summed over the
    expected number of events, exceeds 1% of the expected excess above the
    quantile.
    """
    sev_pmf = fft_discretize(model.severity, h, n)
    comp = fft_compound(model.frequency, sev_pmf)
    mu = compound_mean(model)
    lat_mean = comp.mean()
    wrap = wrapped_mass(model.frequency, sev_pmf, comp)
    try:
        Q, cv = lattice_quantile_cvar(comp, q, mu if math.isfinite(mu) else None)
    except LatticeExhaustedError as exc:
        return FftEstimate(h, n, math.nan, math.nan, lat_mean, True, str(exc), True, wrap)
    tail = 1.0 - q
    if Q > 0.5 * n * h:
        return FftEstimate(h, n, Q, cv, lat_mean, True, f"quantile {Q:.6g} beyond half the lattice range", True, wrap)
    if wrap > 0.01 * tail:
        return FftEstimate(h, n, Q, cv, lat_mean, True, f"wrapped mass {wrap:.3g} rivals the tail probability", True, wrap)
    if not math.isfinite(mu):
        return FftEstimate(h, n, Q, math.inf, lat_mean, False, "", False, wrap)
    excess = 0.01 * tail * abs(cv)
    if wrap * Q > excess:
        return FftEstimate(h, n, Q, cv, lat_mean, True, f"wrapped mass {wrap:.3g} swamps the tail excess", False, wrap)
    shift = model.frequency.mean() * abs(discretisation_bias(model.severity, sev_pmf))
    if shift > excess:
        return FftEstimate(h, n, Q, cv, lat_mean, True, f"discretisation shift {shift:.3g} swamps the tail excess", False, wrap)
    return FftEstimate(h, n, Q, cv, lat_mean, False, "", False, wrap)
