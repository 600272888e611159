"""Command-line interface: data ingestion, test execution, reports, traces.

Input files are UTF-8 CSV with a header row and decimal-point numbers.  Each
command emits a versioned JSON document on stdout (and to --out-json when
given); --out-trace additionally writes the plotted criterion processes as a
CSV of full-precision columns, with a rendered PNG figure written next to it
unless --no-plot is passed.

Exit codes: 0 when the run completes (whatever the test decides), 2 for
input-data problems, 3 for configuration problems.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import replace
from math import isfinite

import click
import numpy as np

from . import __version__
from .bootstrap import (
    BootstrapConfig,
    run_fosd_family,
    run_partial_family,
    run_point_family,
)
from .criterion import (
    DiscreteDistribution,
    ValueFunction,
    criterion_eval,
    evaluate_svf,
    fosd_process,
    named_value_functions,
)
from .ecdf import Sample, build_ecdf, build_evaluation_set
from .makarov import build_grid2d, makarov_lower, makarov_upper, t3_process
from .simulate import ScenarioSpec, run_scenario

SCHEMA_VERSION = 1


class InputError(click.ClickException):
    exit_code = 2


class ConfigError(click.ClickException):
    exit_code = 3


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def _parse_cell(row: dict, column: str, line_num: int, path: str) -> float:
    raw = row.get(column)
    if raw is None or raw == "":
        raise InputError(f"{path}: line {line_num}: missing value in column {column!r}")
    try:
        value = float(raw)
    except ValueError:
        raise InputError(
            f"{path}: line {line_num}: cannot parse {raw!r} in column {column!r} as a number"
        )
    if not isfinite(value):
        raise InputError(f"{path}: line {line_num}: value {raw!r} is not finite")
    return value


def _open_reader(path: str, needed: tuple[str, ...]):
    fh = open(path, "r", encoding="utf-8", newline="")
    reader = csv.DictReader(fh)
    if reader.fieldnames is None:
        fh.close()
        raise InputError(f"{path}: empty file; a header row is required")
    missing = [c for c in needed if c not in reader.fieldnames]
    if missing:
        fh.close()
        raise InputError(
            f"{path}: missing column(s) {missing}; found {reader.fieldnames}"
        )
    return fh, reader


def read_values(path: str, column: str) -> np.ndarray:
    """One numeric column from a headered CSV file."""
    fh, reader = _open_reader(path, (column,))
    try:
        values = [_parse_cell(row, column, reader.line_num, path) for row in reader]
    finally:
        fh.close()
    if not values:
        raise InputError(f"{path}: no data rows")
    return np.asarray(values, dtype=np.float64)


def read_grouped(path: str, column: str, group_column: str) -> dict[str, np.ndarray]:
    """Numeric column split by the values of a grouping column."""
    fh, reader = _open_reader(path, (column, group_column))
    groups: dict[str, list[float]] = {}
    try:
        for row in reader:
            key = (row.get(group_column) or "").strip()
            if not key:
                raise InputError(
                    f"{path}: line {reader.line_num}: empty group label in {group_column!r}"
                )
            groups.setdefault(key, []).append(
                _parse_cell(row, column, reader.line_num, path)
            )
    finally:
        fh.close()
    return {k: np.asarray(v, dtype=np.float64) for k, v in groups.items()}


def _collect_samples(data, group_column, column, files: dict, labels: dict) -> list[Sample]:
    """Samples from either one grouped file or one file per group.

    files maps canonical label -> path (or None); labels maps canonical
    label -> group-column value used in the grouped file.
    """
    per_file = {k: v for k, v in files.items() if v is not None}
    if data is not None and per_file:
        raise ConfigError("use either --data with --group-column or per-group files, not both")
    if data is not None:
        if group_column is None:
            raise ConfigError("--data requires --group-column")
        groups = read_grouped(data, column, group_column)
        out = []
        for canonical, wanted in labels.items():
            if wanted not in groups:
                raise InputError(
                    f"{data}: no rows with {group_column!r} == {wanted!r} "
                    f"(found {sorted(groups)})"
                )
            out.append(Sample.from_values(groups[wanted], canonical))
        return out
    if set(per_file) != set(labels):
        needed = ", ".join(f"--{k.lower()}" for k in labels)
        raise ConfigError(f"provide {needed} (or --data with --group-column)")
    return [Sample.from_values(read_values(path, column), canonical)
            for canonical, path in files.items()]


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _emit_json(doc: dict, out_json) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out_json:
        with open(out_json, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text)


def _write_trace(path, header: list[str], columns: list[np.ndarray]) -> None:
    # repr round-trips float64 exactly, which the trace contract relies on
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])


def _figure_path(trace_path: str) -> str:
    root, _ = os.path.splitext(trace_path)
    return root + ".png"


def _render_figure(png_path: str, x: np.ndarray, series: dict[str, np.ndarray], title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for name, values in series.items():
        ax.step(x, values, where="post", label=name, linewidth=1.2)
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("x")
    ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def _resolve_threads(threads) -> int:
    if threads is None:
        raw = os.environ.get("LASD_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"LASD_THREADS={raw!r} is not an integer")
    if threads < 1:
        raise ConfigError("thread count must be at least 1")
    return threads


def _build_config(alpha, reps, seed, mults, grid) -> BootstrapConfig:
    try:
        return BootstrapConfig(
            reps=reps, seed=seed, alpha=alpha, tuning_multipliers=mults, grid_size=grid
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _report_doc(mode: str, reports: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "reports": {kind: rep.to_dict() for kind, rep in reports.items()},
    }


# ---------------------------------------------------------------------------
# shared option stacks
# ---------------------------------------------------------------------------

def _test_options(fn):
    options = [
        click.option("--alpha", type=float, default=0.05, show_default=True,
                     help="Nominal test level."),
        click.option("--reps", type=int, default=None,
                     help="Bootstrap repetitions (default picked by pooled size)."),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="Master seed for the bootstrap streams."),
        click.option("--an-mult", type=float, default=1.0, show_default=True,
                     help="Multiplier on the contact-set tolerance."),
        click.option("--bn-mult", type=float, default=1.0, show_default=True,
                     help="Multiplier on the near-maximizer tolerance."),
        click.option("--cn-mult", type=float, default=1.0, show_default=True,
                     help="Multiplier on the branch-selection tolerance."),
        click.option("--dn-mult", type=float, default=1.0, show_default=True,
                     help="Multiplier on the joint near-maximizer tolerance."),
        click.option("--grid", type=int, default=512, show_default=True,
                     help="Shift-grid resolution (three-sample mode)."),
        click.option("--column", default="value", show_default=True,
                     help="Name of the numeric CSV column."),
        click.option("--out-json", type=click.Path(dir_okay=False), default=None,
                     help="Also write the JSON report to this file."),
        click.option("--out-trace", type=click.Path(dir_okay=False), default=None,
                     help="Write the criterion-process trace CSV here."),
        click.option("--no-plot", is_flag=True, default=False,
                     help="Skip the PNG figure next to the trace CSV."),
    ]
    for deco in reversed(options):
        fn = deco(fn)
    return fn


def _two_sample_inputs(fn):
    options = [
        click.option("--a", "path_a", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="CSV file with the policy-A outcomes."),
        click.option("--b", "path_b", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="CSV file with the policy-B outcomes."),
        click.option("--data", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="Single CSV holding all groups."),
        click.option("--group-column", default=None,
                     help="Grouping column when using --data."),
        click.option("--label-a", default="A", show_default=True,
                     help="Group value mapped to policy A."),
        click.option("--label-b", default="B", show_default=True,
                     help="Group value mapped to policy B."),
    ]
    for deco in reversed(options):
        fn = deco(fn)
    return fn


_STAT_CHOICES_POINT = ("v1", "v2", "w1", "w2", "all")
_STAT_CHOICES_PARTIAL = ("v3", "w3", "all")
_STAT_CHOICES_FOSD = ("ks", "cvm", "all")


def _selected(reports: dict, stat: str, mapping: dict) -> dict:
    if stat == "all":
        return reports
    return {mapping[stat]: reports[mapping[stat]]}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

@click.group()
@click.version_option(version=__version__, prog_name="lasd")
def main() -> None:
    """Dominance tests for distributions of policy-induced gains and losses."""


@main.command("point")
@_two_sample_inputs
@click.option("--stat", type=click.Choice(_STAT_CHOICES_POINT), default="all",
              show_default=True, help="Which statistic(s) to report.")
@_test_options
def cmd_test_point(path_a, path_b, data, group_column, label_a, label_b, stat,
                   alpha, reps, seed, an_mult, bn_mult, cn_mult, dn_mult, grid,
                   column, out_json, out_trace, no_plot):
    """Two-sample dominance test on the full criterion (both samples observed)."""
    samples = _collect_samples(
        data, group_column, column,
        {"A": path_a, "B": path_b},
        {"A": label_a, "B": label_b},
    )
    config = _build_config(alpha, reps, seed, (an_mult, bn_mult, cn_mult, dn_mult), grid)
    try:
        reports = run_point_family(samples[0], samples[1], config)
    except ValueError as exc:
        raise ConfigError(str(exc))
    mapping = {"v1": "V1", "v2": "V2", "w1": "W1", "w2": "W2"}
    _emit_json(_report_doc("point", _selected(reports, stat, mapping)), out_json)

    if out_trace:
        eval_grid = build_evaluation_set(samples)
        ce = criterion_eval(build_ecdf(samples[0]), build_ecdf(samples[1]), eval_grid)
        x = eval_grid.points
        t1 = ce.t1.values[1:]
        m1 = ce.t2_m1.values[1:]
        m2 = ce.t2_m2.values[1:]
        _write_trace(out_trace, ["x", "t1", "m1", "m2"], [x, t1, m1, m2])
        if not no_plot:
            _render_figure(
                _figure_path(out_trace), x,
                {"t1": t1, "m1": m1, "m2": m2},
                "criterion processes",
            )


@main.command("partial")
@click.option("--control", "path_control", type=click.Path(exists=True, dir_okay=False),
              default=None, help="CSV file with the status-quo outcomes.")
@_two_sample_inputs
@click.option("--label-control", default="Control", show_default=True,
              help="Group value mapped to the status-quo arm.")
@click.option("--stat", type=click.Choice(_STAT_CHOICES_PARTIAL), default="all",
              show_default=True, help="Which statistic(s) to report.")
@_test_options
def cmd_test_partial(path_control, path_a, path_b, data, group_column,
                     label_a, label_b, label_control, stat,
                     alpha, reps, seed, an_mult, bn_mult, cn_mult, dn_mult, grid,
                     column, out_json, out_trace, no_plot):
    """Three-sample test of the bound-gap implication (unpaired outcomes)."""
    samples = _collect_samples(
        data, group_column, column,
        {"Control": path_control, "A": path_a, "B": path_b},
        {"Control": label_control, "A": label_a, "B": label_b},
    )
    config = _build_config(alpha, reps, seed, (an_mult, bn_mult, cn_mult, dn_mult), grid)
    try:
        reports = run_partial_family(samples[0], samples[1], samples[2], config)
    except ValueError as exc:
        raise ConfigError(str(exc))
    mapping = {"v3": "V3", "w3": "W3"}
    _emit_json(_report_doc("partial", _selected(reports, stat, mapping)), out_json)

    if out_trace:
        grid2d = build_grid2d(tuple(samples), n_x=config.grid_size)
        g0, ga, gb = (build_ecdf(s) for s in samples)
        x = grid2d.x_points
        la_neg = makarov_lower(ga, g0, -x)
        la_pos = makarov_lower(ga, g0, x)
        ub_neg = makarov_upper(gb, g0, -x)
        ub_pos = makarov_upper(gb, g0, x)
        t3 = t3_process(g0, ga, gb, grid2d).values[1:]
        _write_trace(
            out_trace,
            ["x", "L_A_neg", "L_A_pos", "U_B_neg", "U_B_pos", "t3"],
            [x, la_neg, la_pos, ub_neg, ub_pos, t3],
        )
        if not no_plot:
            _render_figure(
                _figure_path(out_trace), x,
                {"L_A(-x)": la_neg, "L_A(x)": la_pos,
                 "U_B(-x)": ub_neg, "U_B(x)": ub_pos, "t3": t3},
                "distributional bounds and bound gap",
            )


@main.command("fosd")
@_two_sample_inputs
@click.option("--stat", type=click.Choice(_STAT_CHOICES_FOSD), default="all",
              show_default=True, help="Which statistic(s) to report.")
@_test_options
def cmd_test_fosd(path_a, path_b, data, group_column, label_a, label_b, stat,
                  alpha, reps, seed, an_mult, bn_mult, cn_mult, dn_mult, grid,
                  column, out_json, out_trace, no_plot):
    """First-order dominance test on outcome levels (same machinery)."""
    samples = _collect_samples(
        data, group_column, column,
        {"A": path_a, "B": path_b},
        {"A": label_a, "B": label_b},
    )
    config = _build_config(alpha, reps, seed, (an_mult, bn_mult, cn_mult, dn_mult), grid)
    try:
        reports = run_fosd_family(samples[0], samples[1], config)
    except ValueError as exc:
        raise ConfigError(str(exc))
    mapping = {"ks": "FOSD_KS", "cvm": "FOSD_CvM"}
    _emit_json(_report_doc("fosd", _selected(reports, stat, mapping)), out_json)

    if out_trace:
        levels = np.unique(np.concatenate([s.values for s in samples]))
        d = fosd_process(build_ecdf(samples[0]), build_ecdf(samples[1]), levels)
        _write_trace(out_trace, ["x", "d"], [levels, d.values[1:]])
        if not no_plot:
            _render_figure(
                _figure_path(out_trace), levels, {"d": d.values[1:]},
                "CDF difference on levels",
            )


@main.command("svf")
@click.option("--data", type=click.Path(exists=True, dir_okay=False), required=True,
              help="CSV file with observed gains/losses.")
@click.option("--column", default="value", show_default=True,
              help="Name of the numeric CSV column.")
@click.option("--value-function", "vf_name",
              type=click.Choice(sorted(named_value_functions())), default=None,
              help="Built-in value function to aggregate with.")
@click.option("--value-table", type=click.Path(exists=True, dir_okay=False), default=None,
              help="CSV (columns x,v) interpolated piecewise-linearly instead.")
@click.option("--out-json", type=click.Path(dir_okay=False), default=None,
              help="Also write the JSON result to this file.")
def cmd_svf(data, column, vf_name, value_table, out_json):
    """Social value of the empirical gain/loss distribution under one value function."""
    if (vf_name is None) == (value_table is None):
        raise ConfigError("choose exactly one of --value-function or --value-table")
    values = read_values(data, column)
    locations, counts = np.unique(values, return_counts=True)
    dist = DiscreteDistribution(locations, counts / values.size)

    if vf_name is not None:
        vf = named_value_functions()[vf_name]
        label = vf_name
    else:
        table = np.loadtxt(value_table, delimiter=",", skiprows=1, ndmin=2)
        if table.shape[1] != 2:
            raise InputError(f"{value_table}: expected exactly two columns (x, v)")
        xs, vs = table[:, 0], table[:, 1]
        if not np.all(np.diff(xs) > 0):
            raise InputError(f"{value_table}: x column must be strictly increasing")
        vf = ValueFunction(lambda q, xs=xs, vs=vs: np.interp(q, xs, vs))
        label = "table:" + os.path.basename(value_table)

    try:
        w_value = evaluate_svf(dist, vf, check=True)
    except ValueError as exc:
        raise ConfigError(str(exc))
    _emit_json(
        {
            "schema_version": SCHEMA_VERSION,
            "mode": "svf",
            "value_function": label,
            "W_value": w_value,
            "n": int(values.size),
        },
        out_json,
    )


@main.command("simulate")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="JSON scenario description.")
@click.option("--out", "out_csv", type=click.Path(dir_okay=False), required=True,
              help="Destination CSV for the rejection table.")
@click.option("--threads", type=int, default=None,
              help="Worker threads (default: LASD_THREADS or 1).")
def cmd_simulate(spec_path, out_csv, threads):
    """Monte Carlo rejection rates for a scenario described in a JSON file.

    Recognized keys: family, parameter_grid, n_per_sample, reps_mc, kinds,
    alpha, reps, seed, tuning_multipliers, grid_size.
    """
    threads = _resolve_threads(threads)
    with open(spec_path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{spec_path}: invalid JSON ({exc})")
    if not isinstance(raw, dict):
        raise InputError(f"{spec_path}: top-level JSON object required")

    known = {"family", "parameter_grid", "n_per_sample", "reps_mc", "kinds",
             "alpha", "reps", "seed", "tuning_multipliers", "grid_size"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown scenario key(s): {unknown}")
    try:
        config = BootstrapConfig(
            reps=raw.get("reps"),
            seed=raw.get("seed", 0),
            alpha=raw.get("alpha", 0.05),
            tuning_multipliers=tuple(raw.get("tuning_multipliers", (1.0, 1.0, 1.0, 1.0))),
            grid_size=raw.get("grid_size", 512),
        )
        spec = ScenarioSpec(
            family=raw.get("family", ""),
            parameter_grid=tuple(raw.get("parameter_grid", ())),
            n_per_sample=raw.get("n_per_sample", 0),
            reps_mc=raw.get("reps_mc", 1000),
            bootstrap=config,
            kinds=tuple(raw.get("kinds", ("V1",))),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc))

    table = run_scenario(spec, threads=threads)
    table.to_csv(out_csv)
    click.echo(f"wrote {len(table.rows)} rows to {out_csv}")


if __name__ == "__main__":
    main()
