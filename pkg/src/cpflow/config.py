"""Scenario configuration: TOML parsing, validation, serialization.

A scenario file has four tables.  Only ``run.model`` is required; every
other key has the documented default.

::

    [run]
    model = "lion1997"
    label = "shear-demo"        # output file stem
    seed = 42                   # only used by verify-style randomness

    [material]
    energy = "isochoric_neo_hooke"
    mu = 80.0
    lam = 120.0
    kappa = 160.0
    sigma_y = 1.0
    yield_radius_factor = 0.8164965809277260
    eta = 0.1

    [loading]
    kind = "simple_shear"       # uniaxial_stretch, biaxial_stretch,
                                # relaxation, piecewise_table
    T = 1.0
    amplitude = 0.5             # default only for simple_shear, required
                                # for the stretch ramps
    start = 0.0                 # ramp kinds only
    held_value = 0.3            # relaxation only
    base_kind = "simple_shear"  # relaxation only
    rows = [[0.0, 1,0,0, 0,1,0, 0,0,1], ...]   # piecewise_table only

    [integration]
    dt = 0.001
    scheme = "exponential_map"  # forward_euler, rk4
    closure = "perzyna"         # consistent_return
    newton_tol = 1e-12
    newton_max_iter = 60

Unknown keys are rejected so typos fail loudly.
"""

import dataclasses
from dataclasses import dataclass

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import flow_rules as fr
from . import integrate as it
from . import loading as ld
from . import materials as mat
from .errors import ParseError, ValidationError

_RAMP_KINDS = ("simple_shear", "uniaxial_stretch", "biaxial_stretch")

_RAMP_DEFAULT_START = {
    "simple_shear": 0.0,
    "uniaxial_stretch": 1.0,
    "biaxial_stretch": 1.0,
}


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    label: str
    seed: int
    params: mat.MaterialParams
    loading: ld.LoadingProgram
    controls: it.StepControls


def _expect_table(data, name):
    value = data.get(name, {})
    if not isinstance(value, dict):
        raise ValidationError("[%s] must be a table" % name, field=name)
    return dict(value)


def _take(table, section, key, default, kinds):
    value = table.pop(key, default)
    if value is None:
        return None
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise ValidationError(
            "%s.%s has the wrong type" % (section, key), field="%s.%s" % (section, key)
        )
    return value


def _reject_leftovers(table, section):
    if table:
        key = sorted(table)[0]
        raise ValidationError(
            "unknown key %s.%s" % (section, key), field="%s.%s" % (section, key)
        )


def parse_config(text):
    """Parse and validate scenario TOML given as a string."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError("invalid TOML: %s" % exc) from exc

    known_sections = {"run", "material", "loading", "integration"}
    for section in data:
        if section not in known_sections:
            raise ValidationError("unknown section [%s]" % section, field=section)

    run = _expect_table(data, "run")
    model = _take(run, "run", "model", None, str)
    if model is None:
        raise ValidationError("run.model is required", field="run.model")
    if model not in fr.MODEL_IDS:
        raise ValidationError(
            "run.model must be one of %s" % (", ".join(fr.MODEL_IDS)), field="run.model"
        )
    label = _take(run, "run", "label", model, str)
    seed = _take(run, "run", "seed", 0, int)
    _reject_leftovers(run, "run")

    material = _expect_table(data, "material")
    mfields = {}
    defaults = mat.MaterialParams()
    for key, kinds in (
        ("energy", str),
        ("mu", (int, float)),
        ("lam", (int, float)),
        ("kappa", (int, float)),
        ("sigma_y", (int, float)),
        ("yield_radius_factor", (int, float)),
        ("eta", (int, float)),
    ):
        value = _take(material, "material", key, getattr(defaults, key), kinds)
        mfields[key] = value if key == "energy" else float(value)
    _reject_leftovers(material, "material")
    try:
        params = mat.MaterialParams(**mfields)
    except ValueError as exc:
        raise ValidationError("material: %s" % exc, field="material") from exc

    loading_tab = _expect_table(data, "loading")
    kind = _take(loading_tab, "loading", "kind", "simple_shear", str)
    T = float(_take(loading_tab, "loading", "T", 1.0, (int, float)))
    amplitude = _take(loading_tab, "loading", "amplitude", None, (int, float))
    start = _take(loading_tab, "loading", "start", None, (int, float))
    held_value = _take(loading_tab, "loading", "held_value", None, (int, float))
    base_kind = _take(loading_tab, "loading", "base_kind", None, str)
    rows = loading_tab.pop("rows", None)
    _reject_leftovers(loading_tab, "loading")
    try:
        loading_program = _build_loading(
            kind, T, amplitude, start, held_value, base_kind, rows
        )
    except (ValidationError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError("loading: %s" % exc, field="loading") from exc

    integration = _expect_table(data, "integration")
    dt = float(_take(integration, "integration", "dt", 1e-3, (int, float)))
    scheme = _take(integration, "integration", "scheme", "exponential_map", str)
    closure = _take(integration, "integration", "closure", "perzyna", str)
    newton_tol = float(_take(integration, "integration", "newton_tol", 1e-12, (int, float)))
    newton_max_iter = int(_take(integration, "integration", "newton_max_iter", 60, int))
    _reject_leftovers(integration, "integration")
    if model in it.EXPLICIT_ONLY_MODELS and scheme == "exponential_map":
        scheme = "forward_euler"
    try:
        controls = it.StepControls(
            dt=dt,
            scheme=scheme,
            closure=closure,
            newton_tol=newton_tol,
            newton_max_iter=newton_max_iter,
        )
    except ValueError as exc:
        raise ValidationError("integration: %s" % exc, field="integration") from exc

    return ScenarioConfig(
        model=model,
        label=label,
        seed=int(seed),
        params=params,
        loading=loading_program,
        controls=controls,
    )


def parse_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError("cannot read config %s: %s" % (path, exc)) from exc
    return parse_config(text)


def _build_loading(kind, T, amplitude, start, held_value, base_kind, rows):
    if kind in _RAMP_KINDS:
        if amplitude is None:
            if kind != "simple_shear":
                raise ValidationError(
                    "loading.amplitude is required for kind %r" % kind,
                    field="loading.amplitude",
                )
            amplitude = 0.5
        s0 = _RAMP_DEFAULT_START[kind] if start is None else float(start)
        return ld.LoadingProgram(
            kind=kind, T=T, schedule=((0.0, s0), (T, float(amplitude)))
        )
    if kind == "relaxation":
        if held_value is None or base_kind is None:
            raise ValidationError(
                "relaxation needs loading.held_value and loading.base_kind",
                field="loading.held_value",
            )
        return ld.relaxation(base_kind, float(held_value), T=T)
    if kind == "piecewise_table":
        if rows is None:
            raise ValidationError(
                "piecewise_table needs loading.rows", field="loading.rows"
            )
        try:
            parsed = tuple(tuple(float(x) for x in row) for row in rows)
        except (TypeError, ValueError) as exc:
            raise ValidationError(
                "loading.rows must be rows of 10 numbers", field="loading.rows"
            ) from exc
        return ld.piecewise_table(parsed, T=T)
    raise ValidationError(
        "loading.kind must be one of %s" % (", ".join(ld.KINDS)), field="loading.kind"
    )


# ---------------------------------------------------------------------------
# serialization (round-trips through parse_config)

def _fmt(value):
    if isinstance(value, bool):
        raise TypeError("no boolean scenario fields exist")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return '"%s"' % value.replace("\\", "\\\\").replace('"', '\\"')
    raise TypeError("cannot serialize %r" % (value,))


def serialize_config(cfg):
    """Write a ScenarioConfig back to TOML text."""
    lines = ["[run]"]
    lines.append("model = %s" % _fmt(cfg.model))
    lines.append("label = %s" % _fmt(cfg.label))
    lines.append("seed = %s" % _fmt(cfg.seed))
    lines.append("")
    lines.append("[material]")
    for key in ("energy", "mu", "lam", "kappa", "sigma_y", "yield_radius_factor", "eta"):
        lines.append("%s = %s" % (key, _fmt(getattr(cfg.params, key))))
    lines.append("")
    lines.append("[loading]")
    lines.append("kind = %s" % _fmt("piecewise_table" if cfg.loading.table else cfg.loading.kind))
    lines.append("T = %s" % _fmt(float(cfg.loading.T)))
    if cfg.loading.table:
        rows = ", ".join(
            "[%s]" % ", ".join(_fmt(float(x)) for x in row) for row in cfg.loading.table
        )
        lines.append("rows = [%s]" % rows)
    elif cfg.loading.kind == "relaxation":
        lines.append("base_kind = %s" % _fmt(cfg.loading.base_kind))
        lines.append("held_value = %s" % _fmt(float(cfg.loading.schedule[0][1])))
    else:
        lines.append("start = %s" % _fmt(float(cfg.loading.schedule[0][1])))
        lines.append("amplitude = %s" % _fmt(float(cfg.loading.schedule[-1][1])))
    lines.append("")
    lines.append("[integration]")
    lines.append("dt = %s" % _fmt(float(cfg.controls.dt)))
    lines.append("scheme = %s" % _fmt(cfg.controls.scheme))
    lines.append("closure = %s" % _fmt(cfg.controls.closure))
    lines.append("newton_tol = %s" % _fmt(float(cfg.controls.newton_tol)))
    lines.append("newton_max_iter = %s" % _fmt(cfg.controls.newton_max_iter))
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# built-in demos

def demo_config(model, n_steps=1000):
    """Shipped demonstration scenario for one model (no user files needed)."""
    from . import verify as vf

    sc = vf.demo_scenario(model, n_steps)
    return ScenarioConfig(
        model=model,
        label="demo-%s" % model.replace("_", "-"),
        seed=0,
        params=sc["params"],
        loading=sc["loading"],
        controls=sc["controls"],
    )


def replace_scenario(cfg, **overrides):
    """Dataclass-style replace for whole-field overrides."""
    return dataclasses.replace(cfg, **overrides)
