"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import math
import time

import numpy as np
import pytest

from bessel_oracle import FROZEN, FROZEN_ORDERS, FROZEN_TAUS, series_j
from qwline.analytic import (
    AnalyticInitial,
    analytic_profile,
    analytic_prob_pair,
    analytic_survival,
    bessel_j,
    bessel_j_orders,
    pair_closed_form_k1,
)
from qwline.core import Localized, SymmetricPair, evolve, make_initial, trajectory
from qwline.observables import (
    TimeSeries,
    asymptotic_entropy,
    fit_decay_exponent,
    probability_profile,
    record_series,
)

R2 = 1 / math.sqrt(2)
T = 1000
WINDOW = (100, 1000)
SMOOTH = 32
LOCALIZED = Localized(1j * R2, R2)


def run(cond, s, steps=T):
    return record_series(make_initial(cond, t_max=steps), steps, s=s)


@pytest.fixture(scope="module")
def runs():
    return {
        "plus1": run(SymmetricPair(1, 1), 1),
        "minus1": run(SymmetricPair(1, -1), 1),
        "plus2": run(SymmetricPair(2, 1), 2),
        "minus2": run(SymmetricPair(2, -1), 2),
        "localized": run(LOCALIZED, 0),
    }


def exponent(series):
    return fit_decay_exponent(series, WINDOW, SMOOTH).exponent


def test_c01_enhanced_decay(acceptance_report):
    start = time.perf_counter()
    series = run(SymmetricPair(1, 1), 1)["survival"]
    e = exponent(series)
    elapsed = time.perf_counter() - start
    ok = abs(e + 3) <= 0.2 and elapsed < 10
    acceptance_report("C1 enhanced decay (psi+, k=1)", ok,
                      f"exponent {e:.4f} (target -3 +/- 0.2), {elapsed:.2f} s (< 10 s)")
    assert ok


def test_c02_normal_decay(runs, acceptance_report):
    e = exponent(runs["minus1"]["survival"])
    ok = abs(e + 1) <= 0.1
    acceptance_report("C2 normal decay (psi-, k=1)", ok, f"exponent {e:.4f} (target -1 +/- 0.1)")
    assert ok


def test_c03_localized_baseline(runs, acceptance_report):
    e = exponent(runs["localized"]["survival"])
    ok = abs(e + 1) <= 0.1
    acceptance_report("C3 localized baseline (s=0)", ok, f"exponent {e:.4f} (target -1 +/- 0.1)")
    assert ok


def test_c04_parity_swap(runs, acceptance_report):
    ep = exponent(runs["plus2"]["survival"])
    em = exponent(runs["minus2"]["survival"])
    ok = abs(ep + 1) <= 0.1 and abs(em + 3) <= 0.2
    acceptance_report("C4 parity swap (k=2)", ok,
                      f"psi+ {ep:.4f} (target -1 +/- 0.1), psi- {em:.4f} (target -3 +/- 0.2)")
    assert ok


@pytest.mark.parametrize(
    "name, target",
    [("localized", 0.872), ("plus1", 0.979), ("minus1", 0.661)],
)
def test_c05_entanglement_levels(runs, name, target, acceptance_report):
    series = runs[name]["entropy"]
    default = asymptotic_entropy(series, (900, 1000))
    wide = asymptotic_entropy(series, (500, 1000))
    ok = abs(default - target) <= 0.01
    acceptance_report(f"C5 entanglement ({name})", ok,
                      f"S_E[900,1000]={default:.4f}, S_E[500,1000]={wide:.4f} (target {target} +/- 0.01)")
    assert ok


def test_c06_quadratic_spread(runs, acceptance_report):
    fit = fit_decay_exponent(runs["localized"]["variance"], WINDOW, smoothing_width=1)
    ok = abs(fit.exponent - 2) <= 0.05
    acceptance_report("C6 quadratic spread", ok, f"slope {fit.exponent:.4f} (target 2 +/- 0.05)")
    assert ok


def test_c07_oracle_equivalence(acceptance_report):
    xs = np.arange(-200, 201)
    worst_reduction = 0.0
    for t in (50, 100, 500):
        for sign in (1, -1):
            init = AnalyticInitial.from_condition(SymmetricPair(1, sign))
            full = analytic_profile(xs, t, init)
            pair = np.array([analytic_prob_pair(int(x), t, 1, sign) for x in xs])
            worst_reduction = max(worst_reduction, float(np.max(np.abs(full - pair))))
    worst_closed = 0.0
    for t in (50, 100, 500):
        for sign in (1, -1):
            for x in range(-200, 201):
                diff = abs(pair_closed_form_k1(x, t, sign) - analytic_prob_pair(x, t, 1, sign))
                worst_closed = max(worst_closed, diff)
    ok = worst_reduction <= 1e-10 and worst_closed <= 1e-10
    acceptance_report("C7 oracle equivalence", ok,
                      f"double sum vs pair max diff {worst_reduction:.2e}, closed forms {worst_closed:.2e}"
                      " (tol 1e-10)")
    assert ok


def test_c08_bessel_correctness(acceptance_report):
    resid = 0.0
    for tau in (1.0, 10.0, 100.0):
        j = bessel_j_orders(201, tau)
        n = np.arange(1, 201)
        resid = max(resid, float(np.max(np.abs(j[n - 1] + j[n + 1] - (2 * n / tau) * j[n]))))
    norm_err = 0.0
    for tau in (1.0, 10.0, 100.0, 707.0):
        j = bessel_j_orders(int(tau) + 300, tau)
        norm_err = max(norm_err, abs(j[0] + 2 * j[2::2].sum() - 1))
    series_err = 0.0
    for tau in FROZEN_TAUS:
        for n, frozen in zip(FROZEN_ORDERS, FROZEN[tau]):
            assert series_j(n, tau) == pytest.approx(frozen, rel=1e-14, abs=1e-300)
            series_err = max(series_err, abs(bessel_j(n, tau) - frozen))
    ok = resid <= 1e-9 and norm_err <= 1e-10 and series_err <= 1e-10
    acceptance_report("C8 Bessel correctness", ok,
                      f"recurrence {resid:.2e} (1e-9), normalisation {norm_err:.2e} (1e-10),"
                      f" series oracle {series_err:.2e} (1e-10)")
    assert ok


@pytest.mark.parametrize(
    "name, cond",
    [("localized", LOCALIZED), ("psi+", SymmetricPair(1, 1)), ("psi-", SymmetricPair(1, -1))],
)
def test_c09_unitarity(name, cond, acceptance_report):
    steps = 10_000
    drift = max(abs(s.norm() - 1) for s in trajectory(make_initial(cond, t_max=steps), steps))
    ok = drift <= 1e-10
    acceptance_report(f"C9 unitarity over 1e4 steps ({name})", ok, f"max |norm - 1| = {drift:.2e} (1e-10)")
    assert ok


@pytest.mark.parametrize("sign", [1, -1])
def test_c10_exact_vs_analytic_exponent(runs, sign, acceptance_report):
    exact = runs["plus1" if sign == 1 else "minus1"]["survival"]
    t = np.arange(1, T + 1)
    init = AnalyticInitial.from_condition(SymmetricPair(1, sign))
    analytic = TimeSeries(t, analytic_survival(init, 1, t), "p_surv_analytic")
    e_exact, e_analytic = exponent(exact), exponent(analytic)
    ok = abs(e_exact - e_analytic) <= 0.1
    acceptance_report(f"C10 exact vs analytic exponent (psi{'+' if sign == 1 else '-'})", ok,
                      f"exact {e_exact:.4f}, analytic {e_analytic:.4f}, |diff| {abs(e_exact - e_analytic):.4f}"
                      " (0.1)")
    assert ok


def test_c11_profile_peaks_and_symmetry(acceptance_report):
    profiles = {}
    for sign in (1, -1):
        final = evolve(make_initial(SymmetricPair(1, sign), t_max=T), T)
        profiles[sign] = probability_profile(final)
    asym = 0.0
    for prof in profiles.values():
        # stored window is symmetric about x = 0
        assert prof.x[0] == -prof.x[-1]
        asym = max(asym, float(np.max(np.abs(prof.p - prof.p[::-1]))))
    peak_plus, peak_minus = profiles[1].p.max(), profiles[-1].p.max()
    ok = peak_plus > peak_minus and asym <= 1e-10
    acceptance_report("C11 t=1000 profiles", ok,
                      f"max p psi+ {peak_plus:.4f} > psi- {peak_minus:.4f}; asymmetry {asym:.2e} (1e-10)")
    assert ok
