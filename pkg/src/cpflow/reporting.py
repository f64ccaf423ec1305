"""Run outputs: trajectory CSV, machine-readable summaries, figures.

All writers are deterministic: floats are serialized with ``repr`` (the
shortest round-trip form), dictionaries are emitted with sorted keys, and
no timestamps or absolute paths appear in any output.
"""

import json

import numpy as np

from . import tensors as tn

CSV_FORMAT_VERSION = 1
SUMMARY_FORMAT_VERSION = 1

#: Fixed trajectory column set; order is part of the file format.
CSV_COLUMNS = (
    "t",
    "F11", "F12", "F13", "F21", "F22", "F23", "F31", "F32", "F33",
    "Cp11", "Cp22", "Cp33", "Cp12", "Cp13", "Cp23",
    "lambda", "phi",
    "dev_norm_tau", "dev_norm_sigma_e", "script_measure", "dev_norm_ring",
    "det_residual", "symmetry_residual", "min_eigenvalue", "dissipation_rate",
)


def _f(x):
    return repr(float(x))


def trajectory_csv(trajectory, label=None):
    """Render a trajectory as CSV text with a commented metadata header.

    Cp columns hold the symmetric part (six independent entries); for the
    transposed-kernel model the skew magnitude lives in symmetry_residual.
    """
    p = trajectory.params
    c = trajectory.controls
    lines = [
        "# cpflow trajectory csv, format_version=%d" % CSV_FORMAT_VERSION,
        "# model=%s energy=%s" % (trajectory.model, p.energy),
        "# scheme=%s closure=%s dt=%s" % (c.scheme, c.closure, _f(c.dt)),
        "# loading=%s" % trajectory.loading_label,
        "# mu=%s lam=%s kappa=%s sigma_y=%s yield_radius_factor=%s eta=%s"
        % (_f(p.mu), _f(p.lam), _f(p.kappa), _f(p.sigma_y), _f(p.yield_radius_factor), _f(p.eta)),
    ]
    if label:
        lines.append("# label=%s" % label)
    lines.append(",".join(CSV_COLUMNS))
    for r in trajectory.records:
        cp = tn.sym6_pack(tn.symmetrize(r.Cp))
        row = (
            [_f(r.t)]
            + [_f(x) for x in np.asarray(r.F).reshape(-1)]
            + [_f(x) for x in cp]
            + [
                _f(r.lam), _f(r.phi),
                _f(r.dev_norm_tau_e), _f(r.dev_norm_sigma_e),
                _f(r.F_script), _f(r.dev_norm_sigma_ring),
                _f(r.det_residual), _f(r.symmetry_residual),
                _f(r.min_eigenvalue), _f(r.dissipation_rate),
            ]
        )
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def comparison_csv(trajectories, label=None):
    """Per-time pairwise deviation table for a list of same-scenario runs."""
    models = [t.model for t in trajectories]
    pairs = [
        (models[i], models[j])
        for i in range(len(models))
        for j in range(i + 1, len(models))
    ]
    lines = [
        "# cpflow comparison csv, format_version=%d" % CSV_FORMAT_VERSION,
        "# models=%s" % ",".join(models),
    ]
    if label:
        lines.append("# label=%s" % label)
    header = ["t"] + ["dev_%s__%s" % (a, b) for a, b in pairs]
    lines.append(",".join(header))
    n = len(trajectories[0].records)
    for k in range(n):
        t = trajectories[0].records[k].t
        row = [_f(t)]
        for i in range(len(models)):
            for j in range(i + 1, len(models)):
                ra = trajectories[i].records[k]
                rb = trajectories[j].records[k]
                dev = tn.norm(ra.Cp - rb.Cp) / max(tn.norm(ra.Cp), 1e-300)
                row.append(_f(dev))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def comparison_summary(trajectories):
    models = [t.model for t in trajectories]
    out = {
        "format_version": SUMMARY_FORMAT_VERSION,
        "kind": "compare-summary",
        "models": models,
        "pairs": [],
    }
    for i in range(len(models)):
        for j in range(i + 1, len(models)):
            worst = 0.0
            t_worst = 0.0
            for ra, rb in zip(trajectories[i].records, trajectories[j].records):
                dev = tn.norm(ra.Cp - rb.Cp) / max(tn.norm(ra.Cp), 1e-300)
                if dev > worst:
                    worst, t_worst = dev, ra.t
            out["pairs"].append(
                {
                    "a": models[i],
                    "b": models[j],
                    "max_relative_deviation": worst,
                    "at_t": t_worst,
                }
            )
    return out


def canonical_json(document):
    """Byte-stable JSON: sorted keys, no whitespace surprises."""
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def check_reports_text(reports):
    """Line-oriented report rendering: one check per line."""
    lines = []
    for r in reports:
        lines.append(
            "%-4s %-55s worst=%-12.5g threshold=%-12.5g n=%d"
            % ("PASS" if r.passed else "FAIL", r.name, r.worst, r.threshold, r.count)
        )
    return "\n".join(lines) + "\n"


def summary_text(summary):
    lines = []
    for suite_name in sorted(summary["suites"]):
        suite = summary["suites"][suite_name]
        lines.append("suite %s: %s" % (suite_name, "PASS" if suite["all_pass"] else "FAIL"))
        for chk in suite["checks"]:
            lines.append(
                "  %-4s %-55s worst=%-12.5g threshold=%-12.5g"
                % ("PASS" if chk["pass"] else "FAIL", chk["name"], chk["worst"], chk["threshold"])
            )
    lines.append("overall: %s" % ("PASS" if summary["all_pass"] else "FAIL"))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# figures

def _agg_pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def trajectory_figure(trajectory, path):
    """Quad panel: yield measures, residuals, multiplier, Cp entries."""
    plt = _agg_pyplot()
    t = [r.t for r in trajectory.records]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7), constrained_layout=True)

    ax = axes[0][0]
    ax.plot(t, [r.dev_norm_sigma_ring for r in trajectory.records], label="|dev ring|")
    ax.plot(t, [r.F_script for r in trajectory.records], "--", label="script measure")
    ax.axhline(trajectory.params.yield_radius, color="k", lw=0.8, label="radius")
    ax.set_xlabel("t")
    ax.set_title("yield measures")
    ax.legend(fontsize=8)

    ax = axes[0][1]
    ax.semilogy(
        t, [max(abs(r.det_residual), 1e-18) for r in trajectory.records], label="|det-1|"
    )
    ax.semilogy(
        t, [max(r.symmetry_residual, 1e-18) for r in trajectory.records], label="skew"
    )
    ax.set_xlabel("t")
    ax.set_title("structural residuals")
    ax.legend(fontsize=8)

    ax = axes[1][0]
    ax.plot(t, [r.lam for r in trajectory.records], label="lambda")
    ax.plot(t, [r.dissipation_rate for r in trajectory.records], "--", label="dissipation rate")
    ax.set_xlabel("t")
    ax.set_title("multiplier and dissipation")
    ax.legend(fontsize=8)

    ax = axes[1][1]
    for idx, name in ((0, "Cp11"), (4, "Cp22"), (8, "Cp33"), (1, "Cp12")):
        ax.plot(t, [np.asarray(r.Cp).reshape(-1)[idx] for r in trajectory.records], label=name)
    ax.set_xlabel("t")
    ax.set_title("plastic metric entries")
    ax.legend(fontsize=8)

    fig.suptitle("%s / %s" % (trajectory.model, trajectory.params.energy))
    fig.savefig(path, dpi=110)
    plt.close(fig)


def comparison_figure(trajectories, path):
    plt = _agg_pyplot()
    fig, ax = plt.subplots(figsize=(8, 5), constrained_layout=True)
    base = trajectories[0]
    t = [r.t for r in base.records]
    for other in trajectories[1:]:
        devs = [
            max(tn.norm(ra.Cp - rb.Cp) / max(tn.norm(ra.Cp), 1e-300), 1e-18)
            for ra, rb in zip(base.records, other.records)
        ]
        ax.semilogy(t, devs, label="%s vs %s" % (base.model, other.model))
    ax.set_xlabel("t")
    ax.set_ylabel("relative deviation of Cp")
    ax.set_title("trajectory deviation")
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=110)
    plt.close(fig)
