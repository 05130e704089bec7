import math

import numpy as np
import pytest
from scipy import special

from compound_dni import baselines, dni, risk
from compound_dni.models import GPD, CompoundModel, Lognormal, NegBinomial, Poisson, SingleLoss

LN = Lognormal(0.0, 2.0)
G11 = GPD(1.0, 1.0)
Q = 0.999


def test_compound_mean():
    assert risk.compound_mean(CompoundModel(Poisson(10), LN)) == pytest.approx(10 * math.e**2)
    assert risk.compound_mean(CompoundModel(Poisson(10), G11)) == math.inf
    assert risk.compound_mean(CompoundModel(Poisson(0.0), LN)) == 0.0


def test_compound_mean_against_sampling():
    m = CompoundModel(Poisson(10), LN)
    z = baselines.simulate_losses(m, 10**7, seed=11)
    se = z.std() / math.sqrt(z.size)
    assert abs(z.mean() - risk.compound_mean(m)) < 3 * se


def test_quantile_reference_cases():
    r = risk.converged_quantile(CompoundModel(Poisson(100), LN), Q)
    assert r.Q_q == pytest.approx(5853.1, rel=5e-5)
    g = risk.converged_quantile(CompoundModel(Poisson(10), G11), Q)
    assert g.Q_q == pytest.approx(10081, rel=5e-5)


def test_quantile_zero_when_atom_covers_level():
    r = risk.quantile(CompoundModel(Poisson(1e-4), LN), Q)
    assert r.Q_q == 0.0


def test_bisection_soundness():
    m = CompoundModel(Poisson(10), LN)
    cfg = dni.DniConfig(n0=2, N=100)
    r = risk.quantile(m, Q, cfg)
    h = dni.invert_cdf(m, r.Q_q, cfg).value
    assert abs(h - Q) <= Q * 1e-12 or r.achieved_eps < 1e-10
    assert r.iterations > 0 and r.df_evaluations >= r.iterations


def test_quantile_monotone_in_level():
    m = CompoundModel(Poisson(10), LN)
    cfg = dni.DniConfig(n0=2, N=100)
    qs = [risk.quantile(m, q, cfg).Q_q for q in (0.99, 0.995, 0.999)]
    assert qs[0] <= qs[1] <= qs[2]


def test_warm_start_reaches_same_root():
    m = CompoundModel(Poisson(1.0), LN)
    cfg = dni.DniConfig(n0=2, N=100)
    cold = risk.quantile(m, Q, cfg)
    warm = risk.quantile(m, Q, cfg, warm_start=cold.Q_q * 1.0003)
    assert warm.Q_q == pytest.approx(cold.Q_q, rel=1e-9)
    assert warm.df_evaluations < cold.df_evaluations


def test_converged_quantile_history():
    r = risk.converged_quantile(CompoundModel(Poisson(100), LN), Q)
    assert [h[:2] for h in r.history[:2]] == [(1, 50), (2, 100)]
    last, prev = r.history[-1][2], r.history[-2][2]
    assert abs(last - prev) / last < 1e-4


def test_quantile_rejects_bad_level():
    with pytest.raises(ValueError):
        risk.quantile(CompoundModel(Poisson(1), LN), 1.0)


def test_cvar_reference_cases():
    c = risk.cvar(CompoundModel(Poisson(100), LN), Q)
    assert c.cvar == pytest.approx(9470.7, rel=2e-3)
    nb = risk.cvar(CompoundModel(NegBinomial(0.1, 10), LN), Q)
    assert nb.cvar == pytest.approx(9102.4, rel=2e-3)


def test_cvar_single_lognormal_closed_form():
    zq = special.ndtri(Q)
    exact = math.e**2 * special.ndtr(2.0 - zq) / (1 - Q)
    c = risk.cvar(CompoundModel(SingleLoss(), LN), Q)
    assert c.cvar == pytest.approx(exact, rel=1e-5)


def test_cvar_requires_finite_mean():
    with pytest.raises(risk.InfiniteMeanError):
        risk.cvar(CompoundModel(Poisson(1), G11), Q)


def test_cvar_with_atom_above_level():
    m = CompoundModel(Poisson(1e-4), LN)
    c = risk.cvar(m, Q)
    assert c.Q_q == 0.0
    assert c.cvar == pytest.approx(risk.compound_mean(m) / (1 - Q))


def test_exceedance_consistency_with_cvar():
    m = CompoundModel(Poisson(10), LN)
    c = risk.cvar(m, Q)
    ex = risk.exceedance_above(m, c.Q_q)
    assert ex == pytest.approx((1 - Q) * c.cvar, rel=1e-4)


def test_exceedance_reference_value():
    m = CompoundModel(Poisson(10), LN)
    assert risk.exceedance_above(m, 1779.2) == pytest.approx(0.001 * 3241.8, rel=2e-3)


def test_exceedance_small_threshold_is_mean():
    m = CompoundModel(Poisson(1), LN)
    assert risk.exceedance_above(m, 1e-6) == pytest.approx(risk.compound_mean(m), rel=1e-5)


def test_exceedance_nonincreasing():
    m = CompoundModel(NegBinomial(0.1, 1), LN)
    vals = [risk.exceedance_above(m, L) for L in np.geomspace(1.0, 1e5, 10)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_gpd_scaling():
    approx = risk.gpd_quantile_scaling(1.0, 1.0, 1.0, Q)
    assert approx == pytest.approx(1000.0)
    dni_q = risk.converged_quantile(CompoundModel(Poisson(1), G11), Q).Q_q
    assert abs(dni_q - approx) / dni_q < 6e-3
    base = risk.gpd_quantile_scaling(1.5, 1.0, 1.0, Q)
    assert risk.gpd_quantile_scaling(1.5, 1.0, 10.0, Q) / base == pytest.approx(10**1.5)


def test_two_grid_quantile_error_estimate():
    m = CompoundModel(SingleLoss(), LN)
    coarse = risk.quantile(m, Q, dni.DniConfig(n0=1, N=50)).Q_q
    fine = risk.quantile(m, Q, dni.DniConfig(n0=2, N=100), warm_start=coarse).Q_q
    exact = LN.quantile(Q)
    assert abs(coarse - exact) / exact == pytest.approx(4.8e-5, abs=0.05e-5)
    assert abs(coarse - fine) / exact == pytest.approx(4.3e-5, abs=0.05e-5)
