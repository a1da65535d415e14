"""Acceptance gate: ten end-to-end checks, one printed pass/fail line each.

Each check has a pinned tolerance and a runtime budget. Run with
`pytest tests/test_acceptance.py -v` to see the per-criterion lines.
"""

import json
import time
from datetime import date, timedelta

import numpy as np
import pytest
from click.testing import CliRunner

from gelab.cli import main as cli_main
from gelab.econometrics import (
    ControlSetConfig,
    DidSpec,
    RdSpec,
    RkSpec,
    break_test,
    build_control_set,
    did_estimate,
    price_correlation,
    price_index,
    rd_estimate,
    rk_estimate,
)
from gelab.econometrics.localpoly import KERNELS, local_poly_fit
from gelab.econometrics.errors import InsufficientSupport, RankDeficient
from gelab.exchange import ItemSpec, Market, Side, SinkPolicy, TaxSchedule, apply_tax
from gelab.panel import Panel
from gelab.simkit import (
    InjectedEffect,
    SynthConfig,
    load_scenario_config,
    replicate,
    run_scenario,
    synth_panel,
)

DEMO_CONFIG = "configs/demo_scenario.toml"


def _report(capsys, number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"[{status}] criterion {number:2d}: {name}{suffix}")
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def _budget(capsys, number, name, started, limit_s):
    elapsed = time.monotonic() - started
    _report(capsys, number, f"{name} runtime", elapsed < limit_s, f"{elapsed:.2f}s < {limit_s}s")


def test_criterion_01_tax_schedule_exactness(capsys):
    started = time.monotonic()
    schedule = TaxSchedule()
    expected = {
        99: 0,
        100: 1,
        101: 1,
        499_999_999: 4_999_999,
        500_000_000: 5_000_000,
        1_000_000_000: 5_000_000,
    }
    mismatches = {
        p: (apply_tax(p, schedule), want)
        for p, want in expected.items()
        if apply_tax(p, schedule) != want
    }
    floor_ok = all(
        apply_tax(p, schedule) == min((p * 1) // 100, 5_000_000)
        for p in range(100, 5000)
    )
    elapsed = time.monotonic() - started
    _report(
        capsys, 1, "tax schedule exactness",
        not mismatches and floor_ok and elapsed < 1.0,
        f"boundaries ok, floor(1%) ok, {elapsed:.3f}s < 1s" if not mismatches else str(mismatches),
    )


def test_criterion_02_exchange_conservation(capsys):
    started = time.monotonic()
    rng = np.random.default_rng(20211209)
    # base price levels spanning the exempt region through the tax cap
    bases = {"it0": 80, "it1": 5_000, "it2": 2_000_000, "it3": 600_000_000}
    items = [ItemSpec(name, buy_limit=1_000_000) for name in bases]
    m = Market(items, tax=TaxSchedule(), base_date=date(2021, 12, 9))
    players = [f"p{i}" for i in range(8)]
    start_inv = 100_000
    for p in players:
        m.add_player(p, gp=10**13, inventory={it.id: start_inv for it in items})
    policy = SinkPolicy(
        target_items=frozenset({"it0", "it1"}), daily_max=5, active_from=date(2021, 12, 9)
    )

    total0 = m.total_gp()
    items0 = m.total_items()
    violations = 0
    step = 0
    while len(m.trades) < 10_000:
        step += 1
        m.advance_to(step * 0.005)
        p = players[int(rng.integers(len(players)))]
        side = Side.BUY if rng.random() < 0.5 else Side.SELL
        item = f"it{int(rng.integers(4))}"
        price = max(1, int(bases[item] * rng.uniform(0.95, 1.05)))
        try:
            m.submit_order(p, side, item, price, int(rng.integers(1, 6)))
        except Exception:
            m.cancel_all(p)
        if m.total_gp() != total0:
            violations += 1
        if step % 500 == 0:
            m.run_sink_day(policy)
            if m.total_gp() != total0:
                violations += 1

    removed = m.removed_counts()
    final = m.total_items()
    item_ok = all(
        final[it.id] == items0[it.id] - removed.get(it.id, 0) for it in items
    )
    # tax/sink transfers reconcile: coffer = taxes collected - sink spending
    taxes = sum(t.tax_paid for t in m.trades)
    sink_spend = sum(t.price * t.quantity for t in m.trades if t.sink)
    reconciles = m.coffer.balance == taxes - sink_spend
    elapsed = time.monotonic() - started
    _report(
        capsys, 2, "exchange conservation",
        violations == 0 and item_ok and reconciles and elapsed < 30.0,
        f"{len(m.trades)} trades, 0 violations, {elapsed:.1f}s < 30s"
        if violations == 0
        else f"{violations} violations",
    )


def test_criterion_03_noiseless_oracle_recovery(capsys):
    started = time.monotonic()
    rd_panel = synth_panel(
        SynthConfig(
            seed=17, n_items=200, n_days=2, price_min=80.0, price_max=120.0,
            vol_slope=-0.002,
            injected_effects=(
                InjectedEffect(kind="rd_step", magnitude=-0.069, cutoff=100.0),
            ),
        )
    )
    rd = rd_estimate(rd_panel, RdSpec())

    kink = 500e6
    rk_panel = synth_panel(
        SynthConfig(
            seed=23, n_items=300, n_days=2,
            price_min=kink - 5_000.0, price_max=kink + 5_000.0,
            injected_effects=(
                InjectedEffect(kind="rk_slope", magnitude=-0.069, cutoff=kink),
            ),
        )
    )
    rk = rk_estimate(rk_panel, RkSpec())

    treated = frozenset(f"item_{i:03d}" for i in range(5))
    impl = date(2021, 12, 15)
    did_panel = synth_panel(
        SynthConfig(
            seed=31, n_items=12, n_days=30, start_date=date(2021, 12, 1),
            price_min=1e5, price_max=4e5, post_step=0.05, post_step_date=impl,
            injected_effects=(
                InjectedEffect(
                    kind="did_level", magnitude=0.07, items=treated, effect_date=impl
                ),
            ),
        )
    )
    did = did_estimate(
        did_panel,
        DidSpec(
            treated=treated,
            control=frozenset(f"item_{i:03d}" for i in range(5, 12)),
            implementation_date=impl,
            window_start=date(2021, 12, 1),
            window_end=date(2021, 12, 30),
        ),
    )

    errs = {
        "rd": abs(rd.effect - (-0.069)) / 0.069,
        "rk": abs(rk.effect - (-0.069)) / 0.069,
        "did": abs(did.effect - 0.07) / 0.07,
    }
    elapsed = time.monotonic() - started
    _report(
        capsys, 3, "noiseless oracle recovery (rd/rk/did)",
        max(errs.values()) <= 1e-8 and elapsed < 10.0,
        f"max rel err {max(errs.values()):.2e} <= 1e-8, {elapsed:.1f}s < 10s",
    )


def test_criterion_04_monte_carlo_coverage(capsys):
    started = time.monotonic()
    reps = 200

    def rd_config(magnitude):
        return SynthConfig(
            seed=7, n_items=150, n_days=4, start_date=date(2021, 12, 9),
            price_min=80.0, price_max=120.0, vol_slope=-0.002, sigma_vol=0.35,
            injected_effects=(
                InjectedEffect(kind="rd_step", magnitude=magnitude, cutoff=100.0),
            )
            if magnitude != 0.0
            else (),
        )

    treated = frozenset(f"item_{i:03d}" for i in range(10))
    impl = date(2021, 12, 15)

    def did_config(magnitude):
        return SynthConfig(
            seed=11, n_items=40, n_days=30, start_date=date(2021, 12, 1),
            price_min=1e5, price_max=4e5, sigma_price=0.04,
            post_step=0.05, post_step_date=impl,
            injected_effects=(
                InjectedEffect(
                    kind="did_level", magnitude=magnitude, items=treated, effect_date=impl
                ),
            )
            if magnitude != 0.0
            else (),
        )

    did_spec = DidSpec(
        treated=treated,
        control=frozenset(f"item_{i:03d}" for i in range(10, 40)),
        implementation_date=impl,
        window_start=date(2021, 12, 1),
        window_end=date(2021, 12, 30),
    )

    def coverage(config, analysis, truth):
        results = replicate(config, reps, analysis)
        assert all(r.ok for r in results)
        covered = sum(r.value.ci_low <= truth <= r.value.ci_high for r in results)
        rejected = sum(r.value.p_value < 0.05 for r in results)
        return covered / reps, rejected / reps

    rd_cov, _ = coverage(rd_config(-0.069), lambda p: rd_estimate(p, RdSpec()), -0.069)
    did_cov, _ = coverage(did_config(0.07), lambda p: did_estimate(p, did_spec), 0.07)
    _, rd_null_rej = coverage(rd_config(0.0), lambda p: rd_estimate(p, RdSpec()), 0.0)
    _, did_null_rej = coverage(did_config(0.0), lambda p: did_estimate(p, did_spec), 0.0)

    cov_ok = 0.90 <= rd_cov <= 0.99 and 0.90 <= did_cov <= 0.99
    null_ok = rd_null_rej <= 0.10 and did_null_rej <= 0.10
    elapsed = time.monotonic() - started
    _report(
        capsys, 4, "Monte-Carlo coverage",
        cov_ok and null_ok and elapsed < 300.0,
        f"rd cov {rd_cov:.3f}, did cov {did_cov:.3f}, null rej {rd_null_rej:.3f}/"
        f"{did_null_rej:.3f}, {elapsed:.1f}s < 300s",
    )


def test_criterion_05_price_index_fixture(capsys):
    started = time.monotonic()
    base = date(2021, 11, 1)

    def fixture(scale=1.0):
        return Panel.from_records(
            [
                ("a", base, 100.0 * scale, 10.0),
                ("b", base, 200.0 * scale, 10.0),
                ("a", base + timedelta(days=7), 110.0 * scale, 10.0),
                ("b", base + timedelta(days=7), 220.0 * scale, 10.0),
            ]
        )

    series = price_index(fixture(), ["a", "b"], base)
    base_val = series.value_at(base)
    week1 = series.value_at(base + timedelta(days=7))
    week1_scaled = price_index(fixture(3.0), ["a", "b"], base).value_at(
        base + timedelta(days=7)
    )
    elapsed = time.monotonic() - started
    ok = (
        base_val == 100.0
        and abs(week1 - 110.0) < 5e-7  # 110.000000 at 6 decimal places
        and abs(week1_scaled - week1) <= 1e-12
        and elapsed < 1.0
    )
    _report(
        capsys, 5, "price index fixture",
        ok,
        f"base {base_val}, week1 {week1:.6f}, scale gap {abs(week1_scaled - week1):.1e}, "
        f"{elapsed:.3f}s < 1s",
    )


def test_criterion_06_control_set_equality(capsys):
    started = time.monotonic()
    rng = np.random.default_rng(13)
    n_items, n_days = 20, 800
    start = date(2021, 11, 1)
    f = rng.normal(size=n_days)
    prices = np.empty((n_items, n_days))
    prices[0] = 200_000.0 + 1_000.0 * (f + 0.1 * rng.normal(size=n_days))
    for i in range(1, n_items):
        load = 1.0 if i % 2 == 0 else 0.0
        prices[i] = 200_000.0 + 1_000.0 * (load * f + rng.normal(size=n_days))
    panel = Panel.from_records(
        [
            (f"item_{i:03d}", start + timedelta(days=d), float(prices[i, d]), 1.0)
            for i in range(n_items)
            for d in range(n_days)
        ]
    )

    sinked = frozenset({"item_000"})
    result = build_control_set(
        panel, ControlSetConfig(sinked=sinked, correlation_threshold=0.1)
    )
    brute = {
        item
        for item in panel.items
        if item not in sinked
        and abs(price_correlation(panel, item, "item_000")) < 0.1
    }
    elapsed = time.monotonic() - started
    _report(
        capsys, 6, "control set equality",
        set(result.control) == brute and elapsed < 5.0,
        f"{len(result.control)} controls match brute force, {elapsed:.1f}s < 5s",
    )


def test_criterion_07_local_polynomial_oracle(capsys):
    started = time.monotonic()
    rng = np.random.default_rng(20211209)
    compared, worst = 0, 0.0
    while compared < 1_000:
        n = int(rng.integers(12, 80))
        x = rng.uniform(-10, 10, n)
        y = rng.normal(size=n) + 0.3 * x
        order = int(rng.integers(0, 3))
        kernel = KERNELS[int(rng.integers(len(KERNELS)))]
        bandwidth = float(rng.uniform(5.0, 20.0))
        side = [None, "left", "right"][int(rng.integers(3))]
        try:
            fit = local_poly_fit(x, y, 0.0, bandwidth, order, kernel, side=side)
        except (InsufficientSupport, RankDeficient):
            continue
        # dense weighted normal equations, built independently
        u = np.abs(x / bandwidth)
        if kernel == "triangular":
            w = np.maximum(0.0, 1.0 - u)
        elif kernel == "uniform":
            w = (u <= 1.0).astype(float)
        else:
            w = np.maximum(0.0, 0.75 * (1.0 - u**2))
        if side == "left":
            w = np.where(x < 0.0, w, 0.0)
        elif side == "right":
            w = np.where(x >= 0.0, w, 0.0)
        mask = w > 0
        X = np.column_stack([x[mask] ** k for k in range(order + 1)])
        A = X.T @ np.diag(w[mask]) @ X
        expected = np.linalg.solve(A, X.T @ (w[mask] * y[mask]))
        rel = np.max(
            np.abs(fit.coef - expected) / np.maximum(np.abs(expected), 1e-12)
        )
        worst = max(worst, float(rel))
        compared += 1
    elapsed = time.monotonic() - started
    _report(
        capsys, 7, "local polynomial oracle",
        worst <= 1e-8 and elapsed < 30.0,
        f"{compared} fits, worst rel err {worst:.2e} <= 1e-8, {elapsed:.1f}s < 30s",
    )


def test_criterion_08_break_test_calibration(capsys):
    started = time.monotonic()
    start = date(2021, 11, 1)

    def series(rng, shift):
        return [
            (
                start + timedelta(days=i),
                float((shift if i >= 30 else 0.0) + rng.standard_normal()),
            )
            for i in range(60)
        ]

    planted = break_test(
        series(np.random.default_rng(1), 5.0), known_date=start + timedelta(days=30)
    )
    planted_ok = planted.break_detected and planted.mean_p < 0.01

    reps = 500
    rejections = 0
    for rep in range(reps):
        rng = np.random.default_rng(40_000 + rep)
        result = break_test(series(rng, 0.0), known_date=start + timedelta(days=30))
        rejections += result.break_detected
    null_rate = rejections / reps
    elapsed = time.monotonic() - started
    _report(
        capsys, 8, "break test calibration",
        planted_ok and null_rate <= 0.07 and elapsed < 120.0,
        f"planted p {planted.mean_p:.1e} < 0.01, null rejection {null_rate:.3f} <= 0.07, "
        f"{elapsed:.1f}s < 120s",
    )


def test_criterion_09_end_to_end_sink_experiment(capsys):
    started = time.monotonic()
    config = load_scenario_config(DEMO_CONFIG)
    result = run_scenario(config)

    treated = frozenset()
    impl = None
    for eff in config.injected_effects:
        treated = treated | eff.items
        impl = eff.effect_date if impl is None else min(impl, eff.effect_date)
    control = frozenset(config.item_ids()) - treated

    def spec(outcome):
        return DidSpec(
            treated=treated,
            control=control,
            implementation_date=impl,
            window_start=config.start_date,
            window_end=config.end_date,
            outcome=outcome,
        )

    price_est = did_estimate(result.panel, spec("price"))
    volume_est = did_estimate(result.panel, spec("volume"))
    sign_ok = price_est.effect > 0
    volume_ok = volume_est.ci_low <= 0.0 <= volume_est.ci_high
    elapsed = time.monotonic() - started
    _report(
        capsys, 9, "end-to-end sink experiment",
        sign_ok and volume_ok and elapsed < 120.0,
        f"price effect {price_est.effect:+.3f} > 0, volume CI "
        f"[{volume_est.ci_low:+.3f}, {volume_est.ci_high:+.3f}] contains 0, "
        f"{elapsed:.1f}s < 120s",
    )


def test_criterion_10_reproducible_bundles(capsys, tmp_path):
    started = time.monotonic()
    runner = CliRunner()
    checksums = []
    for name in ("run_a", "run_b"):
        out = tmp_path / name
        invoked = runner.invoke(
            cli_main, ["--quiet", "simulate", DEMO_CONFIG, "--out", str(out)]
        )
        assert invoked.exit_code == 0, invoked.output
        manifest = json.loads((out / "manifest.json").read_text())
        checksums.append(manifest["artifacts"])
    elapsed = time.monotonic() - started
    _report(
        capsys, 10, "reproducible bundles",
        checksums[0] == checksums[1] and len(checksums[0]) == 4,
        f"{len(checksums[0])} artifact checksums identical across re-runs, {elapsed:.1f}s",
    )
