"""Acceptance gate: each test checks one criterion at its stated tolerance
and records a PASS/FAIL verdict, summarized at the end of the run."""
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (brute_force_peaks, central_difference, direct_dft,
                     integrated_arma)
from ppfd.evaluation import (ExperimentConfig, forward_chain_splits,
                             run_experiment)
from ppfd.forecasters import arima_fit
from ppfd.forecasters.ann import HIDDEN_UNITS, loss_and_grad
from ppfd.metrics import mse, report, wse
from ppfd.peaks import find_peaks
from ppfd.scaling import fit_forward, invert_step
from ppfd.spectral import (dft, idft, remove_components, seasonal_values,
                           top_components)
from ppfd.synth import generate, summary

pytestmark = pytest.mark.acceptance

SYNTH_TARGET = {"mean": 1_375_816_074.4, "min": 824_704_284.8,
                "max": 1_944_188_859.3}


def test_01_synthetic_regeneration(criterion):
    t0 = time.perf_counter()
    stats = summary(generate())
    elapsed = time.perf_counter() - t0
    rel = {k: abs(stats[k] - v) / v for k, v in SYNTH_TARGET.items()}
    ok = stats["n"] == 7500 and max(rel.values()) <= 5e-3 and elapsed < 1
    criterion(1, ok, f"n={stats['n']} worst rel dev "
              f"{max(rel.values()):.2e} in {elapsed:.3f}s")
    assert ok


def test_02_seasonal_recovery(criterion):
    t0 = time.perf_counter()
    x = generate().values
    train_stop = forward_chain_splits(x.size, 5).folds[0][0][1]
    n = train_stop
    sins = top_components(dft(x[:n]), 3)
    elapsed = time.perf_counter() - t0
    targets = [(7, 8e7), (30, 7.2e7), (365, 5.6e7)]
    # pair each target with the recovered bin nearest in frequency
    within_bin, amp_ok, matched = True, True, []
    for period, amp in targets:
        s = min(sins, key=lambda s: abs(s.bin - n / period))
        within_bin &= abs(s.bin - n / period) <= 1
        amp_ok &= abs(s.amplitude - amp) <= 0.1 * amp
        matched.append(s)
    order_ok = [s.bin for s in sins] == [s.bin for s in matched]
    ok = within_bin and amp_ok and order_ok and elapsed < 1
    detail = ", ".join(f"P={s.period:.2f} A={s.amplitude:.3g}" for s in sins)
    criterion(2, ok, f"periods within one bin: {within_bin}; amplitude "
              f"order: {order_ok}; amplitudes within 10%: {amp_ok} "
              f"[{detail}]")
    assert ok


@pytest.mark.slow
def test_03_ppfd_beats_ann_on_peaks(criterion):
    t0 = time.perf_counter()
    x = generate().values
    wins, lines = 0, []
    for seed in range(5):
        ann = run_experiment(x, ExperimentConfig("ann", seed=seed)).averaged
        ppfd = run_experiment(
            x, ExperimentConfig("ppfd-ann", c=3, seed=seed)).averaged
        better = (ppfd.peak_rmse < ann.peak_rmse
                  and ppfd.peak_rwse < ann.peak_rwse)
        fewer = ppfd.under_predicted <= 0.8 * ann.under_predicted
        wins += better and fewer
        lines.append(f"seed {seed}: peak RMSE {ppfd.peak_rmse:.4f} vs "
                     f"{ann.peak_rmse:.4f}, under {ppfd.under_predicted} vs "
                     f"{ann.under_predicted}")
    elapsed = time.perf_counter() - t0
    ok = wins >= 3 and elapsed < 300
    criterion(3, ok, f"{wins}/5 seeds satisfy both conditions in "
              f"{elapsed:.0f}s; " + "; ".join(lines))
    assert ok


@pytest.mark.slow
def test_04_arima_under_predicts_peaks(criterion):
    t0 = time.perf_counter()
    avg = run_experiment(generate().values,
                         ExperimentConfig("arima")).averaged
    elapsed = time.perf_counter() - t0
    share = avg.under_predicted / avg.n_peaks
    ok = share >= 0.85 and elapsed < 120
    criterion(4, ok, f"{avg.under_predicted}/{avg.n_peaks} peaks "
              f"under-predicted ({share:.1%}) in {elapsed:.0f}s")
    assert ok


def test_05_spectral_properties(criterion):
    rng = np.random.default_rng(5)
    worst_rt = worst_parseval = worst_complete = worst_oracle = 0.0
    for n in (3, 8, 100, 968, 7500):
        x = rng.normal(size=n) * 1e6 + 1e8
        spec = dft(x)
        back = idft(spec).values
        worst_rt = max(worst_rt, np.max(np.abs(back - x) / np.abs(x)))
        energy = np.sum(x ** 2)
        worst_parseval = max(worst_parseval, abs(
            np.sum(np.abs(spec.coeffs) ** 2) / n - energy) / energy)
        if n <= 1000:
            worst_oracle = max(worst_oracle, np.max(np.abs(
                spec.coeffs - direct_dft(x))) / np.max(np.abs(spec.coeffs)))
        c = min(3, n // 2)
        sins = top_components(spec, c)
        resid = idft(remove_components(spec, sins)).values
        recon = resid + seasonal_values(sins, np.arange(n))
        worst_complete = max(worst_complete, np.max(
            np.abs(recon - x)) / np.max(np.abs(x)))
    ok = worst_rt <= 1e-9 and worst_parseval <= 1e-8 and worst_complete <= 1e-7
    criterion(5, ok, f"round trip {worst_rt:.1e}, Parseval "
              f"{worst_parseval:.1e}, completeness {worst_complete:.1e}, "
              f"vs direct sum {worst_oracle:.1e}")
    assert ok


def test_06_scaling_round_trip(criterion):
    rng = np.random.default_rng(6)
    worst, bounded = 0.0, True
    for _ in range(1000):
        n = int(rng.integers(3, 300))
        x = rng.uniform(0.1, 1.0, n) * 10 ** rng.uniform(0, 10)
        y, state = fit_forward(x)
        s = state.scale(x)
        bounded &= bool(np.all((s >= 1) & (s <= 2)))
        bounded &= bool(np.all(np.abs(y.values) <= 1))
        for t in range(1, n):
            state.s_prev = float(state.scale(x[t - 1]))
            back = invert_step(y.values[t - 1], state)
            worst = max(worst, abs(back - x[t]) / abs(x[t]))
    ok = worst <= 1e-10 and bounded
    criterion(6, ok, f"worst relative error {worst:.1e} over 1000 series; "
              f"bounds hold: {bounded}")
    assert ok


def test_07_metric_identities(criterion):
    rng = np.random.default_rng(7)
    exact_mse = all(wse(a, f, 1.0) == mse(a, f) for a, f in
                    (rng.normal(size=(2, 50)) for _ in range(200)))
    single = (wse([0.0], [1.0], 0.2) == 0.2
              and wse([0.0], [-1.0], 0.2) == 1.0)
    counts_ok = True
    for _ in range(1000):
        n = int(rng.integers(1, 100))
        a = rng.integers(0, 5, n).astype(float)
        f = a + rng.integers(-1, 2, n)
        r = report(a, f, find_peaks(a))
        counts_ok &= r.under_predicted + r.over_predicted == r.n_peaks
    ok = exact_mse and single and counts_ok
    criterion(7, ok, f"wse(alpha=1)==mse: {exact_mse}; single over-prediction"
              f" weight 0.2: {single}; counts sum to peaks: {counts_ok}")
    assert ok


def test_08_arima_and_gradient_oracles(criterion):
    z = integrated_arma(2000, ar=[0.6], seed=8)
    phi = arima_fit(z, 1, 0).ar_coefs_[0]
    rng = np.random.default_rng(8)
    X = rng.normal(size=(50, 7))
    y = rng.normal(size=50)
    theta = rng.uniform(-0.5, 0.5, 7 * HIDDEN_UNITS + 2 * HIDDEN_UNITS + 1)
    grad = loss_and_grad(theta, X, y)[1]
    numeric = central_difference(lambda th: loss_and_grad(th, X, y)[0], theta)
    rel = np.max(np.abs(grad - numeric) / np.maximum(np.abs(numeric), 1e-8))
    ok = abs(phi - 0.6) <= 0.05 and rel <= 1e-4
    criterion(8, ok, f"AR coefficient {phi:.4f}; gradient max rel "
                     f"error {rel:.1e}")
    assert ok


def test_09_peak_finder_oracle(criterion):
    rng = np.random.default_rng(9)
    mismatches, plateaus = 0, 0
    for _ in range(1000):
        n = int(rng.integers(1, 201))
        x = rng.integers(0, int(rng.integers(2, 8)), n).astype(float)
        plateaus += bool(np.any(np.diff(x) == 0))
        mismatches += list(find_peaks(x)) != brute_force_peaks(list(x))
    ok = mismatches == 0
    criterion(9, ok, f"{mismatches} mismatches on 1000 series "
                     f"({plateaus} with plateaus)")
    assert ok


def test_10_cv_structure(criterion):
    failures = []

    @settings(max_examples=300, deadline=None)
    @given(st.integers(1, 12), st.integers(0, 5000))
    def check(k, extra):
        n = 2 * (k + 1) + extra
        plan = forward_chain_splits(n, k)
        blocks = [plan.folds[0][0]] + [va for _, va in plan]
        try:
            assert blocks[0][0] == 0 and blocks[-1][1] == n
            for (a0, a1), (b0, b1) in zip(blocks, blocks[1:]):
                assert a1 == b0 and a1 > a0 and b1 > b0
            for i, (tr, va) in enumerate(plan):
                assert tr == (0, va[0])
                if i:
                    prev_tr = plan.folds[i - 1][0]
                    assert prev_tr[1] < tr[1]
            sizes = [b - a for a, b in blocks]
            assert max(sizes) - min(sizes) <= 1
        except AssertionError:
            failures.append((n, k))
            raise

    try:
        check()
        props = True
    except AssertionError:
        props = False
    plan = forward_chain_splits(7500, 5)
    blocks = [plan.folds[0][0]] + [va for _, va in plan]
    sizes = [b - a for a, b in blocks]
    ok = props and sizes == [1250] * 6
    criterion(10, ok, f"nesting/disjointness properties hold: {props}; "
                      f"block sizes {sizes}")
    assert ok
