"""Command-line front end: scenario presets, CSV/SVG bundles, sweeps.

Subcommands: simulate, feasibility, montecarlo, sweep, fig2, presets.
Output always lands as a bundle of atomically written files under --out
(or $GRAVKICK_OUT).  Errors produce a one-line JSON record on stderr next
to the human-readable message, and a nonzero exit code.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import analysis, montecarlo, protocol, svg
from .config import (
    PRESET_NAMES,
    BuiltScenario,
    ConfigError,
    build_scenario,
    load_config,
    load_preset,
    preset_descriptions,
)
from .feasibility import SOLVABLE_FIELDS, evaluate_case, solve_parameter, sweep, sweep_csv
from .output import summary_csv, write_bundle, write_text_atomic
from .protocol import PostselectionImpossible
from .units import UnitSystem, convert
from .wavepacket import GridPacket, gaussian, to_csv

FIG2_SAMPLES = 401


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # also emit the machine-readable record
        print(json.dumps({"error": "usage", "message": message}), file=sys.stderr)
        super().error(message)


def _emit_error(kind: str, message: str, **extra) -> None:
    record = {"error": kind, "message": message, **extra}
    print(f"error: {message}", file=sys.stderr)
    print(json.dumps(record), file=sys.stderr)


def _out_dir(args) -> str:
    return args.out or os.environ.get("GRAVKICK_OUT") or "gravkick-out"


def _resolve_doc(args) -> dict:
    if args.scenario and args.config:
        raise ConfigError("give either a config file or --scenario, not both")
    if args.scenario:
        return load_preset(args.scenario)
    if args.config:
        return load_config(args.config)
    raise ConfigError("a config file or --scenario preset is required")


def _momentum_unit(built: BuiltScenario, display: UnitSystem) -> float:
    """Factor dividing scenario momenta for display in `display` units."""
    if display == built.units:
        return 1.0
    if built.params is None:
        raise ConfigError("natural-unit scenarios have no SI anchor; cannot convert")
    if display == UnitSystem.NATURAL:
        return convert(1.0, "momentum", UnitSystem.NATURAL, UnitSystem.SI, built.params.W)
    return 1.0 / convert(1.0, "momentum", UnitSystem.NATURAL, UnitSystem.SI, built.params.W)


def _decomposition_curves(built: BuiltScenario, n: int = FIG2_SAMPLES):
    """The two scaled branch pointers and their normalized sum, natural units."""
    sigma = built.hbar / built.width
    alpha = abs(built.scenario.pre.amp_a)
    beta = abs(built.scenario.pre.amp_b)
    d_a = built.scenario.delta_a / sigma
    d_b = built.scenario.delta_b / sigma
    psi = gaussian(0.0, 1.0, 1.0)
    p = np.linspace(-4.0, 4.0, n)
    branch_b = beta * psi(p - d_b)
    branch_a = -alpha * psi(p - d_a)
    pointer_overlap = math.exp(-((d_a - d_b) ** 2) / 8.0)
    norm = math.sqrt((1.0 - 2.0 * alpha * beta * pointer_overlap) / 2.0)
    total = (branch_b + branch_a) / math.sqrt(2.0) / norm
    return p, branch_b, branch_a, total


def _decomposition_files(built: BuiltScenario) -> tuple[str, str]:
    p, branch_b, branch_a, total = _decomposition_curves(built)
    rows = ["p,beta_branch,neg_alpha_branch,postselected"]
    rows.extend(
        f"{pi:.8e},{bb:.8e},{ba:.8e},{tt:.8e}"
        for pi, bb, ba, tt in zip(p, branch_b, branch_a, total)
    )
    image = svg.line_plot(
        [
            ("beta branch", p, branch_b),
            ("-alpha branch", p, branch_a),
            ("postselected", p, total),
        ],
        title="Postselected wavefunction decomposition",
        xlabel="p [hbar/W]",
        ylabel="amplitude",
    )
    return "\n".join(rows) + "\n", image


def cmd_simulate(args) -> int:
    built = build_scenario(_resolve_doc(args))
    display = UnitSystem(args.units) if args.units else built.units
    unit = _momentum_unit(built, display)

    result = protocol.run(built.scenario, n=built.grid_points)
    report = analysis.weak_value_report(
        built.scenario.pre, built.scenario.post, built.scenario.delta_a, built.scenario.delta_b
    )
    validity = analysis.validity_check(built.scenario, n=built.grid_points)

    rows: list[tuple[str, object]] = [("units", display.value)]
    rows += [
        ("delta_a", built.scenario.delta_a / unit),
        ("delta_b", built.scenario.delta_b / unit),
        ("exact_mean", result.mean_kick / unit),
        ("exact_std", result.std / unit),
        ("postselection_probability", result.probability),
        ("delta_ef", report.effective_kick / unit),
        ("gain", report.gain),
        ("projector_weak_value_re", report.projector_weak_value.real),
        ("projector_weak_value_im", report.projector_weak_value.imag),
        ("postselection_overlap_re", report.postselection_overlap.real),
        ("postselection_overlap_im", report.postselection_overlap.imag),
        ("kick_ratio_a", validity.kick_ratio_a),
        ("kick_ratio_b", validity.kick_ratio_b),
        ("regime", validity.regime.value),
    ]

    conditional = result.conditional
    assert isinstance(conditional, GridPacket)
    shown = GridPacket(p=conditional.p / unit, amps=conditional.amps * math.sqrt(unit))
    buf = io.StringIO()
    to_csv(shown, buf, units=display.value, width=built.width)

    files = {"summary.csv": summary_csv(rows), "wavefunction.csv": buf.getvalue()}
    if args.svg:
        curves_csv, image = _decomposition_files(built)
        files["fig2.svg"] = image
        files["fig2_curves.csv"] = curves_csv
    write_bundle(_out_dir(args), files)
    print(f"wrote {', '.join(sorted(files))} to {_out_dir(args)}")
    return 0


def cmd_feasibility(args) -> int:
    built = build_scenario(_resolve_doc(args))
    if built.params is None:
        raise ConfigError("feasibility needs physical (SI) kick parameters", field="kicks")
    if (args.solve is None) != (args.target is None):
        raise ConfigError("--solve and --target must be given together")

    case = evaluate_case(built.params)
    p = built.params
    rows: list[tuple[str, object]] = [
        ("M", p.M), ("m", p.m), ("T", p.T), ("x_A", p.x_A), ("x_B", p.x_B),
        ("W", p.W), ("g", p.g),
        ("delta_a", case.delta_a), ("delta_b", case.delta_b),
        ("ratio", case.ratio), ("tau", case.tau), ("ps_prob", case.ps_prob),
        ("valid_flag", case.separation_ok),
    ]
    if args.solve is not None:
        solved = solve_parameter(p, args.solve, args.target)
        rows.append((f"solved_{args.solve}", solved))
        rows.append(("solve_target", args.target))

    files = {
        "summary.csv": summary_csv(rows),
        "sweep.csv": sweep_csv([case]),
    }
    write_bundle(_out_dir(args), files)
    print(f"wrote {', '.join(sorted(files))} to {_out_dir(args)}")
    return 0


def cmd_montecarlo(args) -> int:
    built = build_scenario(_resolve_doc(args))
    if built.mc is None:
        raise ConfigError("montecarlo needs a montecarlo section (trials, seed)",
                          field="montecarlo")
    cfg = montecarlo.RunConfig(
        scenario=built.scenario,
        trials=built.mc.trials,
        seed=built.mc.seed,
        bins=built.mc.bins,
        grid_points=built.grid_points,
    )
    stats = montecarlo.run_ensemble(cfg, workers=args.workers)
    exact = protocol.run(built.scenario, n=built.grid_points)
    rows = stats.summary_rows() + [
        ("seed", built.mc.seed),
        ("exact_probability", exact.probability),
        ("exact_mean", exact.mean_kick),
    ]
    files = {
        "summary.csv": summary_csv(rows),
        "histogram.csv": stats.histogram_csv(),
    }
    write_bundle(_out_dir(args), files)
    print(f"wrote {', '.join(sorted(files))} to {_out_dir(args)}")
    return 0


def _parse_axis(text: str):
    try:
        field, rng = text.split("=", 1)
        start, stop, count = rng.split(":")
        return (field.strip(), float(start), float(stop), int(count))
    except ValueError as exc:
        raise ConfigError(f"axis must look like FIELD=start:stop:count, got {text!r}") from exc


def cmd_sweep(args) -> int:
    built = build_scenario(_resolve_doc(args))
    if built.params is None:
        raise ConfigError("sweep needs physical (SI) kick parameters", field="kicks")
    axes = [_parse_axis(args.axis)]
    if args.axis2:
        axes.append(_parse_axis(args.axis2))
    cases = sweep(built.params, axes, workers=args.workers)

    files = {"sweep.csv": sweep_csv(cases)}
    rows: list[tuple[str, object]] = [("rows", len(cases))]
    for i, (field, start, stop, count) in enumerate(axes, start=1):
        rows.append((f"axis{i}", f"{field}={start:.8e}:{stop:.8e}:{count}"))
    files["summary.csv"] = summary_csv(rows)

    if args.svg:
        if len(axes) != 2:
            raise ConfigError("--svg heatmaps need two axes")
        (f1, s1, e1, c1), (f2, s2, e2, c2) = axes
        z = np.abs(np.array([case.ratio for case in cases])).reshape(c1, c2)
        files["sweep.svg"] = svg.heatmap(
            np.linspace(s1, e1, c1),
            np.linspace(s2, e2, c2),
            z,
            title="|ratio| over the swept parameters",
            xlabel=f1,
            ylabel=f2,
        )
    write_bundle(_out_dir(args), files)
    print(f"wrote {', '.join(sorted(files))} to {_out_dir(args)}")
    return 0


def cmd_fig2(args) -> int:
    built = build_scenario(load_preset("fig2"))
    curves_csv, image = _decomposition_files(built)
    out = args.out or os.path.join(os.environ.get("GRAVKICK_OUT", "."), "fig2.svg")
    stem, _ = os.path.splitext(out)
    write_text_atomic(out, image)
    write_text_atomic(stem + ".csv", curves_csv)
    print(f"wrote {out} and {stem + '.csv'}")
    return 0


def cmd_presets(args) -> int:
    if args.action == "list":
        for name, description in preset_descriptions():
            print(f"{name}\t{description}")
        return 0
    raise ConfigError(f"unknown presets action {args.action!r}")


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", nargs="?", help="scenario config JSON file")
    parser.add_argument(
        "--scenario",
        choices=PRESET_NAMES,
        help="use a shipped preset instead of a config file",
    )
    parser.add_argument("--out", help="output directory (default: $GRAVKICK_OUT)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gravkick", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="exact + first-order postselected statistics")
    _add_config_args(p_sim)
    p_sim.add_argument("--units", choices=["si", "natural"], help="unit system for the summary")
    p_sim.add_argument("--svg", action="store_true", help="also render the decomposition plot")
    p_sim.set_defaults(func=cmd_simulate)

    p_feas = sub.add_parser("feasibility", help="kicks, ratio and spreading time from SI params")
    _add_config_args(p_feas)
    p_feas.add_argument("--solve", choices=SOLVABLE_FIELDS, help="invert the ratio for one field")
    p_feas.add_argument("--target", type=float, help="target ratio for --solve")
    p_feas.set_defaults(func=cmd_feasibility)

    p_mc = sub.add_parser("montecarlo", help="sample repeated postselected runs")
    _add_config_args(p_mc)
    p_mc.add_argument("--workers", type=int, default=1, help="parallel workers (same output)")
    p_mc.set_defaults(func=cmd_montecarlo)

    p_sweep = sub.add_parser("sweep", help="grid sweep of feasibility cases")
    _add_config_args(p_sweep)
    p_sweep.add_argument("--axis", required=True, help="FIELD=start:stop:count")
    p_sweep.add_argument("--axis2", help="second axis FIELD=start:stop:count")
    p_sweep.add_argument("--svg", action="store_true", help="heatmap of |ratio| (two axes)")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel workers (same output)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_fig2 = sub.add_parser("fig2", help="render the decomposition figure")
    p_fig2.add_argument("--out", help="output SVG path (curves CSV lands next to it)")
    p_fig2.set_defaults(func=cmd_fig2)

    p_presets = sub.add_parser("presets", help="preset management")
    p_presets.add_argument("action", choices=["list"])
    p_presets.set_defaults(func=cmd_presets)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _emit_error("config", str(exc), field=exc.field)
        return 2
    except PostselectionImpossible as exc:
        _emit_error("postselection-impossible", str(exc))
        return 1
    except (ValueError, OSError) as exc:
        _emit_error("runtime", str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
