"""TOML scenario parsing, strictness, and round-trip serialization."""

import math

import pytest

from cpflow import MODEL_IDS, demo_config, parse_config, parse_config_file, serialize_config
from cpflow import config as cf
from cpflow.errors import ParseError, ValidationError

MINIMAL = """
[run]
model = "lion1997"
"""


def test_minimal_config_fills_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.model == "lion1997"
    assert cfg.label == "lion1997"
    assert cfg.seed == 0
    assert cfg.params.mu == 80.0
    assert cfg.params.energy == "isochoric_neo_hooke"
    assert cfg.params.yield_radius_factor == pytest.approx(math.sqrt(2.0 / 3.0))
    assert cfg.loading.kind == "simple_shear"
    assert cfg.loading.T == 1.0
    # default ramp: 0 -> 0.5 shear
    assert cfg.loading.value(0.0) == 0.0
    assert cfg.loading.value(1.0) == 0.5
    assert cfg.controls.dt == 1e-3
    assert cfg.controls.scheme == "exponential_map"
    assert cfg.controls.closure == "perzyna"


def test_full_config_round_trips():
    text = """
[run]
model = "helm2001"
label = "bench-a"
seed = 7

[material]
energy = "simple_neo_hooke"
mu = 40.0
sigma_y = 2.0
eta = 0.25

[loading]
kind = "uniaxial_stretch"
T = 2.0
amplitude = 1.3

[integration]
dt = 0.002
scheme = "forward_euler"
"""
    cfg = parse_config(text)
    assert cfg.params.mu == 40.0
    assert cfg.loading.value(0.0) == 1.0  # stretch ramps start at 1 by default
    again = parse_config(serialize_config(cfg))
    assert again == cfg


def test_every_demo_config_round_trips():
    for model in MODEL_IDS:
        cfg = demo_config(model, n_steps=50)
        if cfg.loading.kind == "piecewise_table":
            # table programs serialize their rows verbatim
            again = parse_config(serialize_config(cfg))
            assert again.loading.table == cfg.loading.table
        else:
            assert parse_config(serialize_config(cfg)) == cfg


def test_relaxation_config():
    text = """
[run]
model = "miehe1995"

[loading]
kind = "relaxation"
base_kind = "simple_shear"
held_value = 0.3
T = 0.5
"""
    cfg = parse_config(text)
    assert cfg.loading.kind == "relaxation"
    assert cfg.loading.F(0.25)[0, 1] == 0.3
    assert parse_config(serialize_config(cfg)) == cfg


def test_piecewise_table_config():
    text = """
[run]
model = "grandi_stefanelli2015"

[loading]
kind = "piecewise_table"
T = 1.0
rows = [[0.0, 1,0,0, 0,1,0, 0,0,1], [1.0, 1,0.4,0, 0,1,0, 0,0,1]]
"""
    cfg = parse_config(text)
    assert cfg.loading.F(0.5)[0, 1] == pytest.approx(0.2)


def test_model_is_required():
    with pytest.raises(ValidationError) as err:
        parse_config("[run]\nlabel = \"x\"\n")
    assert "run.model" in str(err.value)


def test_unknown_model_rejected():
    with pytest.raises(ValidationError):
        parse_config('[run]\nmodel = "lion1998"\n')


def test_unknown_section_rejected():
    with pytest.raises(ValidationError) as err:
        parse_config(MINIMAL + "\n[output]\nkind = \"csv\"\n")
    assert "output" in str(err.value)


def test_unknown_key_rejected():
    with pytest.raises(ValidationError) as err:
        parse_config(MINIMAL + "\n[material]\nnu = 0.3\n")
    assert "material.nu" in str(err.value)


def test_wrong_type_rejected():
    with pytest.raises(ValidationError) as err:
        parse_config(MINIMAL + "\n[material]\nmu = \"eighty\"\n")
    assert "material.mu" in str(err.value)
    # booleans are not numbers
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "\n[integration]\ndt = true\n")


def test_invalid_material_names_the_section():
    with pytest.raises(ValidationError) as err:
        parse_config(MINIMAL + "\n[material]\neta = -1.0\n")
    assert "material" in str(err.value)
    assert "eta" in str(err.value)


def test_invalid_toml_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_config("[run\nmodel = ")


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ParseError):
        parse_config_file(tmp_path / "nope.toml")


def test_config_file_reads_utf8(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text(MINIMAL, encoding="utf-8")
    assert parse_config_file(path).model == "lion1997"


def test_explicit_only_model_downgrades_exponential_map():
    cfg = parse_config('[run]\nmodel = "appendix_a3"\n')
    assert cfg.controls.scheme == "forward_euler"
    # an explicit scheme request is honored unchanged
    cfg2 = parse_config('[run]\nmodel = "appendix_a3"\n[integration]\nscheme = "rk4"\n')
    assert cfg2.controls.scheme == "rk4"


def test_rk4_consistent_return_rejected_with_section_name():
    text = MINIMAL + "\n[integration]\nscheme = \"rk4\"\nclosure = \"consistent_return\"\n"
    with pytest.raises(ValidationError) as err:
        parse_config(text)
    assert "integration" in str(err.value)


def test_ramp_needs_amplitude():
    with pytest.raises(ValidationError) as err:
        parse_config(MINIMAL + "\n[loading]\nkind = \"uniaxial_stretch\"\n")
    assert "amplitude" in str(err.value)


def test_relaxation_needs_held_value():
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "\n[loading]\nkind = \"relaxation\"\n")


def test_unknown_loading_kind_rejected():
    with pytest.raises(ValidationError):
        parse_config(MINIMAL + "\n[loading]\nkind = \"torsion\"\namplitude = 1.0\n")


def test_replace_scenario_overrides_fields():
    cfg = demo_config("lion1997", n_steps=10)
    out = cf.replace_scenario(cfg, label="other")
    assert out.label == "other"
    assert out.params == cfg.params


def test_demo_config_labels():
    assert demo_config("simo_hughes1998", n_steps=10).label == "demo-simo-hughes1998"
