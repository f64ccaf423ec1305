"""Command-line entry points.

Subcommands: ``simulate``, ``compare``, ``verify``, ``sweep``.  Exit codes:
0 success (or all checks pass), 1 check failure, 2 usage or configuration
error, 3 numerical failure during integration.

``CPFLOW_THREADS`` sets the worker count for the fan-out commands
(``compare``, ``sweep``); results are assembled in sorted order so the
thread count never changes any output byte.
"""

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import config as cf
from . import flow_rules as fr
from . import integrate as it
from . import loading as ld
from . import reporting as rp
from . import verify as vf
from .errors import CpflowError, ParseError, ValidationError


def _thread_count():
    raw = os.environ.get("CPFLOW_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError("CPFLOW_THREADS must be an integer", field="CPFLOW_THREADS")
    if n < 1:
        raise ValidationError("CPFLOW_THREADS must be >= 1", field="CPFLOW_THREADS")
    return n


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_scenario(args):
    if getattr(args, "config", None):
        cfg = cf.parse_config_file(args.config)
    elif getattr(args, "demo", None):
        cfg = cf.demo_config(args.demo, n_steps=args.steps)
    else:
        raise ValidationError("either --config or --demo is required", field="config")
    if getattr(args, "label", None):
        cfg = dataclasses.replace(cfg, label=args.label)
    return cfg


def _parser():
    parser = argparse.ArgumentParser(
        prog="cpflow",
        description="simulate and verify finite-strain plastic-metric flow rules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_opts(p, demo_help):
        p.add_argument("--config", help="scenario TOML file")
        p.add_argument("--demo", choices=fr.MODEL_IDS, help=demo_help)
        p.add_argument("--steps", type=int, default=1000, help="steps for --demo runs")
        p.add_argument("--label", help="output file stem override")
        p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("simulate", help="run one model along one loading program")
    add_scenario_opts(p, "use the shipped demo scenario for this model")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    p = sub.add_parser("compare", help="run several models on a shared scenario")
    p.add_argument("--models", required=True, help="comma-separated model ids")
    add_scenario_opts(p, "base scenario: the shipped demo for this model")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument(
        "--tol",
        type=float,
        default=1e-6,
        help="max allowed pairwise deviation (use inf to disable the gate)",
    )

    p = sub.add_parser("verify", help="run the check suites")
    p.add_argument("--suite", default="all", choices=vf.SUITES + ("all",))
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=1000, help="random states per check")
    p.add_argument("--steps", type=int, default=1000, help="steps for demo trajectories")
    p.add_argument("--out", default=".", help="output directory for the summary document")
    p.add_argument(
        "--threshold",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a threshold-table entry (repeatable)",
    )

    p = sub.add_parser("sweep", help="grid over one numeric parameter")
    p.add_argument("--param", required=True, help="material.<f>, integration.dt, loading.amplitude")
    p.add_argument("--values", required=True, help="comma-separated numeric grid")
    add_scenario_opts(p, "base scenario: the shipped demo for this model")
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_simulate(args):
    cfg = _load_scenario(args)
    traj = it.simulate(cfg.loading, cfg.model, cfg.params, cfg.controls)
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "%s.csv" % cfg.label)
    _write_text(csv_path, rp.trajectory_csv(traj, label=cfg.label))
    print("wrote %s (%d records)" % (csv_path, len(traj.records)))
    if not args.no_figures:
        fig_path = os.path.join(args.out, "%s.png" % cfg.label)
        rp.trajectory_figure(traj, fig_path)
        print("wrote %s" % fig_path)
    final = traj.final
    print(
        "final: det_residual=%.3e symmetry_residual=%.3e min_eig=%.6f"
        % (final.det_residual, final.symmetry_residual, final.min_eigenvalue)
    )
    return 0


def _shared_controls(cfg, models):
    controls = cfg.controls
    needs_explicit = any(m in it.EXPLICIT_ONLY_MODELS for m in models)
    if needs_explicit and controls.scheme == "exponential_map":
        print(
            "note: falling back to forward_euler so all models share one scheme",
            file=sys.stderr,
        )
        controls = dataclasses.replace(controls, scheme="forward_euler")
    return controls


def _cmd_compare(args):
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    if len(models) < 2:
        raise ValidationError("compare needs at least two models", field="models")
    for m in models:
        if m not in fr.MODEL_IDS:
            raise ValidationError("unknown model %r" % m, field="models")
    if not args.config and not args.demo:
        args.demo = models[0]
    cfg = _load_scenario(args)
    controls = _shared_controls(cfg, models)

    def run(model):
        return it.simulate(cfg.loading, model, cfg.params, controls)

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        trajectories = list(pool.map(run, models))

    os.makedirs(args.out, exist_ok=True)
    stem = "%s-compare" % cfg.label
    csv_path = os.path.join(args.out, "%s.csv" % stem)
    _write_text(csv_path, rp.comparison_csv(trajectories, label=cfg.label))
    summary = rp.comparison_summary(trajectories)
    summary_path = os.path.join(args.out, "%s.json" % stem)
    _write_text(summary_path, rp.canonical_json(summary))
    if not args.no_figures:
        fig_path = os.path.join(args.out, "%s.png" % stem)
        rp.comparison_figure(trajectories, fig_path)
    print("wrote %s and %s" % (csv_path, summary_path))
    worst = max(p["max_relative_deviation"] for p in summary["pairs"])
    for pair in summary["pairs"]:
        print(
            "%s vs %s: max deviation %.3e at t=%.4f"
            % (pair["a"], pair["b"], pair["max_relative_deviation"], pair["at_t"])
        )
    if worst > args.tol:
        print("deviation gate failed: %.3e > %.3e" % (worst, args.tol), file=sys.stderr)
        return 1
    return 0


def _parse_threshold_overrides(pairs):
    overrides = {}
    for item in pairs:
        if "=" not in item:
            raise ValidationError(
                "threshold override must look like key=value", field="threshold"
            )
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in vf.THRESHOLDS:
            raise ValidationError("unknown threshold key %r" % key, field="threshold")
        try:
            overrides[key] = float(raw)
        except ValueError:
            raise ValidationError(
                "threshold value for %r must be numeric" % key, field="threshold"
            )
    return overrides


def _cmd_verify(args):
    overrides = _parse_threshold_overrides(args.threshold)
    summary = vf.run_suites(
        args.suite,
        seed=args.seed,
        n_samples=args.samples,
        thresholds=overrides or None,
        n_steps=args.steps,
    )
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(
        args.out, "verify-%s-seed%d.json" % (args.suite, args.seed)
    )
    _write_text(out_path, rp.canonical_json(summary))
    sys.stdout.write(rp.summary_text(summary))
    print("wrote %s" % out_path)
    return 0 if summary["all_pass"] else 1


def _apply_sweep_value(cfg, param, value):
    if param.startswith("material."):
        field = param.split(".", 1)[1]
        if field not in {"mu", "lam", "kappa", "sigma_y", "yield_radius_factor", "eta"}:
            raise ValidationError("cannot sweep %r" % param, field="param")
        params = dataclasses.replace(cfg.params, **{field: value})
        return dataclasses.replace(cfg, params=params)
    if param == "integration.dt":
        controls = dataclasses.replace(cfg.controls, dt=value)
        return dataclasses.replace(cfg, controls=controls)
    if param == "loading.amplitude":
        prog = cfg.loading
        if prog.kind not in ("simple_shear", "uniaxial_stretch", "biaxial_stretch"):
            raise ValidationError(
                "loading.amplitude sweep needs a ramp loading kind", field="param"
            )
        schedule = prog.schedule[:-1] + ((prog.T, value),)
        loading_program = ld.LoadingProgram(kind=prog.kind, T=prog.T, schedule=schedule)
        return dataclasses.replace(cfg, loading=loading_program)
    raise ValidationError("cannot sweep %r" % param, field="param")


def _cmd_sweep(args):
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ValidationError("--values must be comma-separated numbers", field="values")
    if not values:
        raise ValidationError("--values is empty", field="values")
    if not args.config and not args.demo:
        raise ValidationError("sweep needs --config or --demo", field="config")
    base = _load_scenario(args)
    cases = [(v, _apply_sweep_value(base, args.param, v)) for v in values]

    def run(case):
        value, cfg = case
        traj = it.simulate(cfg.loading, cfg.model, cfg.params, cfg.controls)
        recs = traj.records
        dt = cfg.controls.dt
        return {
            "value": value,
            "max_abs_det_residual": max(abs(r.det_residual) for r in recs),
            "max_symmetry_residual": max(r.symmetry_residual for r in recs),
            "min_eigenvalue": min(r.min_eigenvalue for r in recs),
            "final_phi": recs[-1].phi,
            "final_dev_norm_ring": recs[-1].dev_norm_sigma_ring,
            "dissipated_energy": dt * sum(r.dissipation_rate for r in recs),
        }

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        rows = list(pool.map(run, cases))

    os.makedirs(args.out, exist_ok=True)
    stem = "%s-sweep-%s" % (base.label, args.param.replace(".", "-"))
    cols = (
        "value", "max_abs_det_residual", "max_symmetry_residual", "min_eigenvalue",
        "final_phi", "final_dev_norm_ring", "dissipated_energy",
    )
    lines = [
        "# cpflow sweep csv, format_version=%d" % rp.CSV_FORMAT_VERSION,
        "# model=%s param=%s" % (base.model, args.param),
        ",".join(cols),
    ]
    for row in rows:
        lines.append(",".join(repr(float(row[c])) for c in cols))
    csv_path = os.path.join(args.out, "%s.csv" % stem)
    _write_text(csv_path, "\n".join(lines) + "\n")
    print("wrote %s (%d cases)" % (csv_path, len(rows)))
    return 0


# ---------------------------------------------------------------------------

def run_command(argv):
    """Parse argv (excluding program name) and execute one subcommand."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "simulate": _cmd_simulate,
        "compare": _cmd_compare,
        "verify": _cmd_verify,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except (ParseError, ValidationError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except CpflowError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


def main():
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
