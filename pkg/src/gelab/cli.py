"""Command-line front door: simulate, analyze, ingest, montecarlo, report.

Exit codes are a stable contract: 0 success, 2 config error, 3 analysis
error, 4 ingest/IO error.
"""

from __future__ import annotations

import csv as csv_mod
import hashlib
import json
import sys
from datetime import date as Date, datetime, timedelta, timezone
from pathlib import Path

import click
import numpy as np

import gelab
from gelab import figures
from gelab.econometrics import (
    ControlSetConfig,
    DidSpec,
    EstimationError,
    RdSpec,
    RkSpec,
    break_test,
    build_control_set,
    did_estimate,
    pretrends_test,
    price_index,
    rd_estimate,
    rk_estimate,
)
from gelab.ingest import ApiClient, ApiConfig, IngestError, load_panel_csv
from gelab.panel import Panel, PanelError
from gelab.simkit import (
    ConfigInvalid,
    load_scenario_config,
    load_synth_config,
    replicate,
    run_scenario,
    synth_panel,
)

EXIT_CONFIG = 2
EXIT_ANALYSIS = 3
EXIT_INGEST = 4

DESIGNS = ("index", "rd", "rk", "did", "pretrends", "breaks")


@click.group()
@click.option("--quiet", is_flag=True, help="suppress progress output")
@click.option("--json-errors", is_flag=True, help="emit errors as JSON on stderr")
@click.pass_context
def main(ctx, quiet, json_errors):
    """gelab: exchange simulation and intervention-effect estimation."""
    ctx.obj = {"quiet": quiet, "json_errors": json_errors}


def _fail(ctx_obj: dict, exc: Exception, code: int):
    if ctx_obj.get("json_errors"):
        payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
        click.echo(json.dumps(payload), err=True)
    else:
        click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _say(ctx_obj: dict, message: str):
    if not ctx_obj.get("quiet"):
        click.echo(message)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(
    out_dir: Path,
    command: str,
    params: dict,
    artifacts: list[Path],
    seed=None,
    config_path: Path | None = None,
) -> Path:
    manifest = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": gelab.__version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config_sha256": _sha256(config_path) if config_path else None,
        "artifacts": {p.name: _sha256(p) for p in sorted(artifacts)},
    }
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return path


def _load_panel(ctx_obj: dict, panel_path: str) -> Panel:
    try:
        return load_panel_csv(panel_path)
    except (IngestError, PanelError, OSError) as exc:
        _fail(ctx_obj, exc, EXIT_INGEST)


def _write_estimate(out_dir: Path, result_dict: dict) -> list[Path]:
    json_path = out_dir / "estimate.json"
    with open(json_path, "w") as fh:
        json.dump(result_dict, fh, indent=2, sort_keys=True)
    csv_path = out_dir / "estimate.csv"
    flat = {
        k: v
        for k, v in result_dict.items()
        if not isinstance(v, (dict, list))
    }
    with open(csv_path, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(list(flat))
        writer.writerow([flat[k] for k in flat])
    return [json_path, csv_path]


def _read_item_file(path: str) -> frozenset[str]:
    with open(path) as fh:
        return frozenset(line.strip() for line in fh if line.strip())


# -- simulate -----------------------------------------------------------------


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--seed", type=int, default=None, help="override the config seed")
@click.pass_obj
def simulate(ctx_obj, config_path, out_dir, seed):
    """Run an agent-based scenario and write its panel and logs."""
    config_path = Path(config_path)
    if not config_path.exists():
        _fail(ctx_obj, FileNotFoundError(f"config file not found: {config_path}"), EXIT_CONFIG)
    try:
        config = load_scenario_config(config_path)
        if seed is not None:
            config = config.with_seed(seed)
    except (ConfigInvalid, ValueError, KeyError, TypeError) as exc:
        _fail(ctx_obj, exc, EXIT_CONFIG)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_scenario(config)

    panel_path = out / "panel.csv"
    result.panel.write_csv(panel_path)
    trades_path = out / "trades.csv"
    result.market.trades_to_csv(trades_path)
    removals_path = out / "removals.csv"
    result.market.removals_to_csv(removals_path)

    artifacts = [
        panel_path,
        panel_path.with_suffix(".csv.meta.json"),
        trades_path,
        removals_path,
    ]
    _write_manifest(
        out,
        "simulate",
        {"config": str(config_path)},
        artifacts,
        seed=config.seed,
        config_path=config_path,
    )
    _say(ctx_obj, f"wrote {len(artifacts)} artifacts to {out}")


# -- analyze ------------------------------------------------------------------


@main.command()
@click.argument("panel_path", type=click.Path())
@click.option("--design", required=True, type=click.Choice(DESIGNS))
@click.option("--out", "out_dir", required=True, type=click.Path())
# index
@click.option("--base-week", type=str, default=None, help="base week start (ISO date)")
@click.option("--group-file", type=click.Path(exists=True), default=None)
# rd / rk
@click.option("--cutoff", type=float, default=100.0)
@click.option("--bandwidth", type=float, default=20.0)
@click.option("--kink", type=float, default=500e6)
@click.option("--restriction", type=float, default=100e6)
@click.option("--order", type=int, default=1)
@click.option("--kernel", default="triangular")
# did / pretrends
@click.option("--treated-file", type=click.Path(exists=True), default=None)
@click.option("--control-file", type=click.Path(exists=True), default=None)
@click.option("--auto-control", is_flag=True)
@click.option("--corr-threshold", type=float, default=0.1)
@click.option("--price-floor", type=float, default=1e5)
@click.option("--impl-date", type=str, default=None)
@click.option("--window-start", type=str, default=None)
@click.option("--window-end", type=str, default="2022-01-01")
@click.option("--outcome", type=click.Choice(["price", "volume"]), default="price")
@click.option("--cluster", is_flag=True, help="cluster DiD standard errors by item")
# breaks
@click.option("--item", default=None, help="item whose price series to break-test")
@click.option("--known-date", type=str, default=None)
@click.option("--level", type=float, default=0.05)
@click.pass_obj
def analyze(ctx_obj, panel_path, design, out_dir, **flags):
    """Run one analysis design on a panel and write estimate + figure."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if design == "breaks":
            artifacts = _analyze_breaks(Path(panel_path), out, flags, ctx_obj)
        else:
            panel = _load_panel(ctx_obj, panel_path)
            runner = {
                "index": _analyze_index,
                "rd": _analyze_rd,
                "rk": _analyze_rk,
                "did": _analyze_did,
                "pretrends": _analyze_pretrends,
            }[design]
            artifacts = runner(panel, out, flags)
    except (EstimationError, ValueError) as exc:
        _fail(ctx_obj, exc, EXIT_ANALYSIS)
    _write_manifest(out, f"analyze:{design}", {"panel": str(panel_path), **_jsonable(flags)}, artifacts)
    _say(ctx_obj, f"wrote {len(artifacts)} artifacts to {out}")


def _date_flag(flags: dict, key: str, required: bool = True) -> Date | None:
    value = flags.get(key)
    if value is None:
        if required:
            raise ValueError(f"--{key.replace('_', '-')} is required for this design")
        return None
    return Date.fromisoformat(value)


def _jsonable(flags: dict) -> dict:
    return {k: v for k, v in flags.items() if v is not None and not isinstance(v, Path)}


def _analyze_index(panel: Panel, out: Path, flags: dict) -> list[Path]:
    base_week = _date_flag(flags, "base_week")
    group = (
        _read_item_file(flags["group_file"]) if flags.get("group_file") else panel.items
    )
    series = price_index(panel, group, base_week)
    svg, table = figures.index_figure(series)
    table_path = out / "index.csv"
    table.to_csv(table_path, index=False)
    fig_path = out / "index.svg"
    fig_path.write_text(svg)
    return [table_path, fig_path]


def _analyze_rd(panel: Panel, out: Path, flags: dict) -> list[Path]:
    window = _window_or_none(flags)
    spec = RdSpec(
        cutoff=flags["cutoff"],
        bandwidth=flags["bandwidth"],
        order=flags["order"],
        kernel=flags["kernel"],
        date_window=window,
    )
    est = rd_estimate(panel, spec)
    artifacts = _write_estimate(out, est.to_dict())
    svg, table = figures.rd_figure(panel, est)
    table_path = out / "rd_plotdata.csv"
    table.to_csv(table_path, index=False)
    fig_path = out / "rd.svg"
    fig_path.write_text(svg)
    return artifacts + [table_path, fig_path]


def _analyze_rk(panel: Panel, out: Path, flags: dict) -> list[Path]:
    window = _window_or_none(flags)
    spec = RkSpec(
        kink=flags["kink"],
        lower_restriction=flags["restriction"],
        order=flags["order"],
        kernel=flags["kernel"],
        date_window=window,
    )
    est = rk_estimate(panel, spec)
    artifacts = _write_estimate(out, est.to_dict())
    svg, table = figures.rk_figure(panel, est)
    table_path = out / "rk_plotdata.csv"
    table.to_csv(table_path, index=False)
    fig_path = out / "rk.svg"
    fig_path.write_text(svg)
    return artifacts + [table_path, fig_path]


def _did_groups(panel: Panel, flags: dict, impl_date: Date, window_start: Date):
    treated = _read_item_file(flags["treated_file"]) if flags.get("treated_file") else None
    if treated is None:
        raise ValueError("--treated-file is required for did/pretrends")
    if flags.get("auto_control"):
        config = ControlSetConfig(
            sinked=treated,
            price_floor=flags["price_floor"],
            correlation_threshold=flags["corr_threshold"],
            window=(window_start, impl_date - timedelta(days=1)),
        )
        control = build_control_set(panel, config).control
    elif flags.get("control_file"):
        control = _read_item_file(flags["control_file"])
    else:
        raise ValueError("provide --control-file or --auto-control")
    return treated, control


def _analyze_did(panel: Panel, out: Path, flags: dict) -> list[Path]:
    impl_date = _date_flag(flags, "impl_date")
    window_start = _date_flag(flags, "window_start")
    window_end = _date_flag(flags, "window_end")
    treated, control = _did_groups(panel, flags, impl_date, window_start)
    spec = DidSpec(
        treated=treated,
        control=control,
        implementation_date=impl_date,
        window_start=window_start,
        window_end=window_end,
        outcome=flags["outcome"],
        cluster_by_item=flags["cluster"],
    )
    est = did_estimate(panel, spec)
    artifacts = _write_estimate(out, est.to_dict())
    control_path = out / "control_items.txt"
    control_path.write_text("\n".join(sorted(control)) + "\n")
    svg, weekly = figures.did_figure(panel, est)
    table_path = out / "did_weekly_means.csv"
    weekly.to_csv(table_path, index=False)
    fig_path = out / "did.svg"
    fig_path.write_text(svg)
    return artifacts + [control_path, table_path, fig_path]


def _analyze_pretrends(panel: Panel, out: Path, flags: dict) -> list[Path]:
    window_start = _date_flag(flags, "window_start")
    window_end = _date_flag(flags, "window_end")
    treated = _read_item_file(flags["treated_file"]) if flags.get("treated_file") else None
    control = _read_item_file(flags["control_file"]) if flags.get("control_file") else None
    if treated is None or control is None:
        raise ValueError("pretrends needs --treated-file and --control-file")
    result = pretrends_test(
        panel, treated, control, (window_start, window_end), outcome=flags["outcome"]
    )
    artifacts = _write_estimate(out, result.to_dict())
    svg, weekly = figures.pretrends_figure(result, window_start)
    table_path = out / "pretrends_weekly_means.csv"
    weekly.to_csv(table_path, index=False)
    fig_path = out / "pretrends.svg"
    fig_path.write_text(svg)
    return artifacts + [table_path, fig_path]


def _analyze_breaks(path: Path, out: Path, flags: dict, ctx_obj: dict) -> list[Path]:
    series = _load_series(path, flags, ctx_obj)
    known_date = (
        Date.fromisoformat(flags["known_date"]) if flags.get("known_date") else None
    )
    result = break_test(
        series, known_date=known_date, level=flags["level"], series_id=flags.get("item") or path.name
    )
    artifacts = _write_estimate(out, result.to_dict())
    svg = figures.breaks_figure(series, result.break_dates[0])
    fig_path = out / "breaks.svg"
    fig_path.write_text(svg)
    return artifacts + [fig_path]


def _load_series(path: Path, flags: dict, ctx_obj: dict) -> list[tuple[Date, float]]:
    """Either a 2-column `date,value` CSV or a panel CSV plus --item."""
    with open(path, newline="") as fh:
        header = next(csv_mod.reader(fh), None)
    if header == ["date", "value"]:
        series = []
        with open(path, newline="") as fh:
            reader = csv_mod.reader(fh)
            next(reader)
            for row in reader:
                if row:
                    series.append((Date.fromisoformat(row[0]), float(row[1])))
        return series
    panel = _load_panel(ctx_obj, path)
    item = flags.get("item")
    if not item:
        raise ValueError("--item is required when break-testing a panel CSV")
    series = [(o.date, o.price) for o in panel.observations if o.item_id == item]
    if not series:
        raise ValueError(f"no observations for item {item!r}")
    return series


def _window_or_none(flags: dict) -> tuple[Date, Date] | None:
    start = _date_flag(flags, "window_start", required=False)
    end = _date_flag(flags, "window_end", required=False)
    if start is None or end is None:
        return None
    return (start, end)


# -- ingest -------------------------------------------------------------------


@main.command()
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="re-export a panel CSV")
@click.option("--items", default=None, help="comma-separated item ids to fetch")
@click.option("--base-url", envvar="GELAB_BASE_URL", default=None)
@click.option("--cache-dir", envvar="GELAB_CACHE_DIR", default=None, type=click.Path())
@click.option("--user-agent", default="gelab market-data client")
@click.option("--step", default="daily")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.pass_obj
def ingest(ctx_obj, csv_path, items, base_url, cache_dir, user_agent, step, out_dir):
    """Build a canonical panel CSV from the HTTP API or a local CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if csv_path is not None:
            panel = load_panel_csv(csv_path)
            params = {"csv": str(csv_path)}
            requests_made = 0
        elif items:
            if not base_url:
                raise ValueError("--base-url (or GELAB_BASE_URL) is required for API ingest")
            config = ApiConfig(
                base_url=base_url,
                user_agent=user_agent,
                cache_dir=Path(cache_dir) if cache_dir else None,
            )
            client = ApiClient(config)
            observations = []
            for item_id in items.split(","):
                observations.extend(client.fetch_timeseries(item_id.strip(), step=step))
            panel = Panel(observations, {"provenance": "ingested", "source": base_url})
            params = {"items": items, "base_url": base_url, "step": step}
            requests_made = client.request_count
        else:
            raise ValueError("provide --csv or --items")
    except (IngestError, PanelError, ValueError, OSError) as exc:
        _fail(ctx_obj, exc, EXIT_INGEST)

    panel_path = out / "panel.csv"
    panel.write_csv(panel_path)
    artifacts = [panel_path, panel_path.with_suffix(".csv.meta.json")]
    _write_manifest(out, "ingest", {**params, "requests_made": requests_made}, artifacts)
    _say(ctx_obj, f"wrote panel with {len(panel)} observations ({requests_made} requests)")


# -- montecarlo ---------------------------------------------------------------


@main.command()
@click.argument("config_path", type=click.Path())
@click.option("--design", required=True, type=click.Choice(["rd", "did"]))
@click.option("--reps", type=int, default=200)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--cutoff", type=float, default=100.0)
@click.option("--bandwidth", type=float, default=20.0)
@click.pass_obj
def montecarlo(ctx_obj, config_path, design, reps, out_dir, cutoff, bandwidth):
    """Replicate an estimator over independently seeded synthetic panels."""
    config_path = Path(config_path)
    if not config_path.exists():
        _fail(ctx_obj, FileNotFoundError(f"config file not found: {config_path}"), EXIT_CONFIG)
    try:
        config = load_synth_config(config_path)
    except (ConfigInvalid, ValueError, KeyError, TypeError) as exc:
        _fail(ctx_obj, exc, EXIT_CONFIG)

    truth = 0.0
    did_effect = None
    for eff in config.injected_effects:
        if design == "rd" and eff.kind == "rd_step":
            truth = eff.magnitude
        if design == "did" and eff.kind == "did_level":
            truth = eff.magnitude
            did_effect = eff

    if design == "rd":
        spec = RdSpec(cutoff=cutoff, bandwidth=bandwidth)
        analysis = lambda panel: rd_estimate(panel, spec)  # noqa: E731
    else:
        if did_effect is None and not config.treated_items:
            _fail(ctx_obj, ValueError("did design needs a did_level effect or treated_items"), EXIT_CONFIG)
        treated = did_effect.items if did_effect else config.treated_items
        impl = did_effect.effect_date if did_effect else config.post_step_date
        control = frozenset(config.item_ids()) - treated
        spec = DidSpec(
            treated=treated,
            control=control,
            implementation_date=impl,
            window_start=config.start_date,
            window_end=config.start_date + timedelta(days=config.n_days - 1),
            outcome=did_effect.outcome if did_effect else "price",
        )
        analysis = lambda panel: did_estimate(panel, spec)  # noqa: E731

    try:
        results = replicate(config, reps, analysis, simulate=synth_panel)
    except EstimationError as exc:
        _fail(ctx_obj, exc, EXIT_ANALYSIS)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps_path = out / "reps.csv"
    covered, rejected, n_ok, effects = 0, 0, 0, []
    with open(reps_path, "w", newline="") as fh:
        writer = csv_mod.writer(fh)
        writer.writerow(["rep", "seed", "ok", "effect", "se", "ci_low", "ci_high", "covered"])
        for r in results:
            if r.ok:
                est = r.value
                cov = est.ci_low <= truth <= est.ci_high
                n_ok += 1
                covered += cov
                rejected += est.p_value < 0.05
                effects.append(est.effect)
                writer.writerow([r.rep, r.seed, 1, est.effect, est.se, est.ci_low, est.ci_high, int(cov)])
            else:
                writer.writerow([r.rep, r.seed, 0, "", "", "", "", ""])
    summary = {
        "design": design,
        "truth": truth,
        "n_reps": reps,
        "n_ok": n_ok,
        "coverage": covered / n_ok if n_ok else None,
        "rejection_rate": rejected / n_ok if n_ok else None,
        "mean_effect": float(np.mean(effects)) if effects else None,
    }
    summary_path = out / "summary.json"
    with open(summary_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    _write_manifest(
        out,
        f"montecarlo:{design}",
        {"config": str(config_path), "reps": reps},
        [reps_path, summary_path],
        seed=config.seed,
        config_path=config_path,
    )
    _say(ctx_obj, f"coverage {summary['coverage']}, rejection {summary['rejection_rate']}")


# -- report -------------------------------------------------------------------


@main.command()
@click.argument("bundle_dir", type=click.Path(exists=True))
@click.pass_obj
def report(ctx_obj, bundle_dir):
    """Write an index.html listing every artifact in a bundle directory."""
    bundle = Path(bundle_dir)
    entries = sorted(
        p for p in bundle.iterdir() if p.is_file() and p.name != "index.html"
    )
    rows = "\n".join(
        f'<li><a href="{p.name}">{p.name}</a> ({p.stat().st_size} bytes)</li>'
        for p in entries
    )
    html = (
        "<!doctype html>\n<html><head><title>gelab report</title></head>\n"
        f"<body><h1>Artifacts in {bundle.name}</h1>\n<ul>\n{rows}\n</ul></body></html>\n"
    )
    (bundle / "index.html").write_text(html)
    _say(ctx_obj, f"indexed {len(entries)} artifacts")


if __name__ == "__main__":
    main()
