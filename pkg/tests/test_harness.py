import hashlib
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from lognls.figures import FigureError, emit_figures, load_manifests
from lognls.harness import (
    CSV_COLUMNS,
    CSV_MAGIC,
    ConfigError,
    SCENARIO_NAMES,
    RunManifest,
    make_scenario,
    parse_config,
    read_csv,
    run_scenario,
    sweep,
    sweep_summary,
)


def test_parse_defaults_and_override():
    s = parse_config("scenario=cos_probe\nK=11\n")
    assert s.name == "cos_probe"
    assert s.params["K"] == 11 and s.params["T"] == 0.1 and s.params["J"] == 1000
    assert s.overrides == ("K",)


def test_parse_lists_comments_ranges():
    s = parse_config("# restricted sweep\nscenario = sweep_sobolev  # trailing\nK_list=7,8,9\n\n")
    assert s.params["K_list"] == [7, 8, 9]
    assert parse_config("scenario=sweep_sobolev\nK_list=7..11").params["K_list"] == [7, 8, 9, 10, 11]


@pytest.mark.parametrize(
    "text,msg",
    [
        ("scenario=bogus", "unknown scenario"),
        ("scenario=cos_probe\nK=8\nK=9", "duplicate"),
        ("scenario=cos_probe\nK=eleven", "bad value"),
        ("scenario=cos_probe\nKK=8", "unknown key"),
        ("K=8", "missing key"),
        ("scenario=cos_probe\nbc=robin", "bc"),
        ("scenario=cos_probe\ninitial=sech", "initial"),
        ("scenario=cos_probe\njust a line", "key=value"),
        ("scenario=toymodel_checks\nbc=neumann", "Dirichlet"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def _small(name, **kw):
    return make_scenario(name, **kw)


def test_run_writes_versioned_csv(tmp_path):
    m = run_scenario(_small("tanh_evolution", K=6, J=50, T=0.5, profile_times=[0.0, 0.5]), tmp_path)
    assert m.status == "ok", m.assertions
    text = (tmp_path / "tanh_evolution.csv").read_text().splitlines()
    assert text[0] == CSV_MAGIC
    assert text[1] == ",".join(CSV_COLUMNS)
    data = read_csv(tmp_path / "tanh_evolution.csv")
    tau = 0.5 / 50
    j = data["t"] / tau
    np.testing.assert_allclose(j, np.round(j), atol=1e-9)
    loaded = RunManifest.load(tmp_path / "tanh_evolution.manifest.json")
    assert loaded.params["K"] == 6 and "K" in loaded.overrides


def test_runs_are_byte_identical(tmp_path):
    s = _small("cos_probe", K=7, J=100, T=0.02, record_every=10)
    run_scenario(s, tmp_path / "a")
    run_scenario(s, tmp_path / "b")
    h = [hashlib.sha256((tmp_path / d / "cos_probe.csv").read_bytes()).hexdigest() for d in "ab"]
    assert h[0] == h[1]


def test_assertion_failure_status(tmp_path):
    m = run_scenario(_small("gausson_validate", K=5, J=20), tmp_path)
    assert m.status == "assertion_failure"
    assert m.assertions["max_error_le_5e-3"] is False


def test_file_initial_data(tmp_path):
    x = np.linspace(-16, 16, 401)
    np.savetxt(tmp_path / "u0.csv", np.c_[x, np.tanh(x), 0 * x], delimiter=",")
    m = run_scenario(_small("tanh_evolution", K=6, J=10, T=0.1, initial=f"file:{tmp_path / 'u0.csv'}"), tmp_path)
    assert m.status == "ok"
    np.savetxt(tmp_path / "short.csv", np.c_[x[:10], x[:10]], delimiter=",")
    with pytest.raises(ConfigError, match="cover"):
        run_scenario(_small("tanh_evolution", K=6, J=10, initial=f"file:{tmp_path / 'short.csv'}"), tmp_path)


def test_numerical_abort_is_flagged(tmp_path, monkeypatch):
    import lognls.solver as solver

    real = solver._nonlinear

    def poisoned(values, t, lam):
        out = real(values, t, lam).copy()
        out[3] = np.inf
        return out

    monkeypatch.setattr(solver, "_nonlinear", poisoned)
    m = run_scenario(_small("tanh_evolution", K=6, J=10, T=0.1), tmp_path)
    assert m.status == "numerical_abort" and m.details["partial"]
    assert len(read_csv(tmp_path / "tanh_evolution.csv")["t"]) == 1


def test_sweep_order_and_isolation(tmp_path):
    parent = _small("sweep_sobolev", T=0.001, J=10, record_every=5)
    ms = sweep(parent, "K", [6, 5], tmp_path)
    assert [m.tag for m in ms] == ["sweep_sobolev_K6", "sweep_sobolev_K5"]
    assert all(m.status == "ok" for m in ms)
    assert sweep(parent, "K", [], tmp_path) == []
    bad = sweep(_small("tanh_evolution", K=5, J=5, T=0.05), "initial", ["tanh", "file:/no/such/file"], tmp_path)
    assert bad[0].status == "ok" and bad[1].status == "error"
    assert sweep_summary(bad, "initial")["ok"] == 1


def test_sweep_tau_gives_order(tmp_path):
    parent = _small("strang_order", K=7, T=0.2)
    ms = sweep(parent, "tau", [0.04, 0.02, 0.01], tmp_path)
    assert sweep_summary(ms, "tau")["order"] == pytest.approx(2, abs=0.3)


def test_unknown_sweep_axis():
    with pytest.raises(ConfigError):
        sweep(_small("cos_probe"), "colour", [1])


def test_figures(tmp_path):
    run_scenario(_small("sweep_sobolev", K_list=[5, 6], T=0.001, J=10), tmp_path)
    run_scenario(_small("tanh_evolution", K=6, J=20, T=0.2, profile_times=[0.0, 0.1, 0.2]), tmp_path)
    run_scenario(_small("cos_probe", K=6, J=20, T=0.02, profile_times=[0.0, 0.02]), tmp_path)
    paths = emit_figures(tmp_path)
    names = sorted(p.name for p in paths)
    assert names == ["cos_probe_modulus.svg", "sobolev_norms.svg", "tanh_evolution_re_im.svg"]
    for p in paths:
        root = ET.parse(p).getroot()
        assert root.tag.endswith("svg")
        assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) >= 1
    six = ET.parse(tmp_path / "sobolev_norms.svg").getroot()
    assert len(six.findall(".//{http://www.w3.org/2000/svg}rect")) == 7  # background + 6 panels


def test_figures_missing_columns(tmp_path):
    m = run_scenario(_small("cos_probe", K=6, J=10, T=0.01, profile_times=[0.0]), tmp_path)
    csv = tmp_path / "cos_probe.csv"
    lines = csv.read_text().splitlines()
    csv.write_text("\n".join([lines[0], lines[1].replace("min_abs_u", "other")] + lines[2:]) + "\n")
    with pytest.raises(FigureError, match="missing"):
        emit_figures(load_manifests(tmp_path), tmp_path)


def test_shipped_configs_parse():
    from pathlib import Path

    cfgs = sorted((Path(__file__).parents[1] / "configs").glob("*.cfg"))
    scen = {p.stem: parse_config(p.read_text()) for p in cfgs}
    assert {s.name for s in scen.values()} >= set(SCENARIO_NAMES)
    assert scen["tanh_evolution"].params["T"] == 1.0
    t2 = scen["tanh_evolution_T2"]
    assert t2.params["T"] == 2.0 and t2.params["profile_times"] == [0.0, 1.0, 2.0]
    assert t2.tag == "tanh_evolution_T2"


def test_tag_validation():
    assert parse_config("scenario=cos_probe\ntag=run-1").tag == "run-1"
    with pytest.raises(ConfigError, match="tag"):
        parse_config("scenario=cos_probe\ntag=../x")
