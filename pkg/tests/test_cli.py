"""Command-line surface: config validation, output formats, exit codes."""

import json
import math

import pytest

from drivejj import cli
from drivejj.circuits import TwoCosine, mode_frame
from drivejj.configs import KERR_CAT_DESIGNS
from drivejj.effective import kerr_cat
from drivejj.supercoef import ScIndex, sc_closed
from drivejj.units import radns_from_ghz

TWO_PI = 2.0 * math.pi

SC_TOML = """\
[circuit]
family = "transmon"
e_j_ghz = 30.0
e_c_ghz = 0.3

[drive]
pi_tilde = 0.7
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_examples_list_and_content(tmp_path, capsys):
    assert cli.main(["examples", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert set(names) == {
        "kerr-cat-configA",
        "kerr-cat-configB",
        "kerr-cat-configC",
        "kerr-cat-configD",
        "beam-splitter",
    }
    for name in names:
        out = tmp_path / f"{name}.toml"
        assert cli.main(["examples", name, "-o", str(out)]) == 0
        cli.load_config(str(out))  # validates sections and keys


def test_examples_unknown_name():
    assert cli.main(["examples", "nope"]) == 1


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_kerrcat_matches_library_and_repeats(tmp_path, capsys):
    cfg = tmp_path / "a.toml"
    assert cli.main(["examples", "kerr-cat-configA", "-o", str(cfg)]) == 0

    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert cli.main(["kerrcat", "--config", str(cfg), "-o", str(out1)]) == 0
    assert cli.main(["kerrcat", "--config", str(cfg), "-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    doc = json.loads(out1.read_text())
    assert doc["schema"] == "drivejj.kerrcat.v1"
    assert doc["config"]["circuit"]["family"] == "snail_strayl"

    design = KERR_CAT_DESIGNS["A"]
    frame = design.frame()
    direct = kerr_cat(
        frame, 0.5, omega_d=2.0 * frame.omega0, fix_detuning_zero=True
    ).to_record()
    for key, value in doc["results"].items():
        assert value == float(f"{direct[key]:.12g}")  # 12-significant-digit contract


def test_sc_csv_layout_and_overrides(tmp_path, capsys):
    cfg = _write(tmp_path, "sc.toml", SC_TOML)
    assert cli.main(["sc", "--config", cfg, "--nmax", "1", "--lmax", "2", "--pmax", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# schema: drivejj.sc.v1"
    assert lines[1] == "n,l,p,q0,engine,value_GHz,halving_weight"
    assert len(lines) == 2 + 2 * 3 * 2

    model = TwoCosine(a_energy=-radns_from_ghz(30.0), b_energy=0.0, a1=1.0)
    frame = mode_frame(model, e_c=radns_from_ghz(0.3))
    expected = sc_closed(model, frame, 0.7, ScIndex(0, 2, 1)).value / TWO_PI
    row = next(l for l in lines[2:] if l.startswith("0,2,1,"))
    fields = row.split(",")
    assert fields[3] == "3" and fields[4] == "closed"
    assert float(fields[5]) == pytest.approx(expected, rel=1e-12)
    assert float(fields[6]) == 1.0  # l>0 and p>0: no halving


def test_unknown_key_rejected(tmp_path, capsys):
    cfg = _write(tmp_path, "bad.toml", '[circuit]\nfamily = "snail"\nmm = 3\n')
    assert cli.main(["sc", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "unknown key" in err and "mm" in err


def test_parse_error_has_location(tmp_path, capsys):
    cfg = _write(tmp_path, "broken.toml", "[circuit\n")
    assert cli.main(["sc", "--config", cfg]) == 1
    assert "line 1" in capsys.readouterr().err


def test_missing_energy_scale_rejected(tmp_path, capsys):
    cfg = _write(tmp_path, "none.toml", '[circuit]\nfamily = "transmon"\n')
    assert cli.main(["sc", "--config", cfg]) == 1
    assert "e_j_ghz" in capsys.readouterr().err


def test_beamsplitter_needs_cavities(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "bs.toml",
        '[circuit]\nfamily = "transmon"\ne_j_ghz = 30.0\ne_c_ghz = 0.3\n',
    )
    assert cli.main(["beamsplitter", "--config", cfg]) == 1
    assert "omega_b_ghz" in capsys.readouterr().err


def test_verify_fast_suite_passes(capsys):
    assert cli.main(["verify", "--suite", "fast"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_eigen_csv(tmp_path, capsys):
    cfg = _write(
        tmp_path,
        "eig.toml",
        '[circuit]\nfamily = "transmon"\ne_j_ghz = 30.0\ne_c_ghz = 0.3\n'
        "\n[task]\njmax = 1\npmax = 1\n",
    )
    assert cli.main(["eigen", "--config", cfg]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# schema: drivejj.eigen.v1"
    # undriven: every p = 1 element is an exact zero
    for line in lines[2:]:
        j, k, p, basis, value = line.split(",")
        assert basis == "charge"
        if p == "1":
            assert abs(float(value)) < 1e-12


SWEEP_TOML = """\
[sweep]
family = "snail"
objective = "cat_size"

[sweep.fixed]
e_j_ghz = 90.0
e_c_ghz = 0.18
alpha_s = 0.12
m = 1
n = 3
pi_tilde = 0.5

[sweep.grids]
flux_phi0 = [0.33, 0.36, 0.39]

[[sweep.constraint]]
name = "kerr_abs_min_mhz"
threshold = 1.0
"""


def test_sweep_outputs(tmp_path):
    cfg = _write(tmp_path, "sw.toml", SWEEP_TOML)
    csv1, js = tmp_path / "a.csv", tmp_path / "a.json"
    assert cli.main(["sweep", "--config", cfg, "--csv", str(csv1), "--json", str(js)]) == 0

    lines = csv1.read_text().splitlines()
    assert lines[0] == "# schema: drivejj.sweep.v1"
    assert len(lines) == 2 + 3

    summary = json.loads(js.read_text())
    assert summary["results"]["grid_points"] == 3
    assert summary["results"]["feasible_points"] >= 1
    best_flux = summary["results"]["best_params"]["phi_e"]
    assert any(abs(best_flux - TWO_PI * f) < 1e-9 for f in (0.33, 0.36, 0.39))

    csv2 = tmp_path / "b.csv"
    assert cli.main(["sweep", "--config", cfg, "--csv", str(csv2)]) == 0
    assert csv1.read_bytes() == csv2.read_bytes()
