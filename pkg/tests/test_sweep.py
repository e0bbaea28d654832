"""Grid-sweep mechanics: determinism, constraint flags, filtering."""

import math

import pytest

from drivejj.circuits import SnailArray, SquidArray, mode_frame
from drivejj.effective import kerr_cat
from drivejj.errors import NoFeasiblePoint
from drivejj.sweep import Constraint, SweepSpec, chaos_filter, run_sweep

TWO_PI = 2.0 * math.pi

FIXED = {
    "e_j": TWO_PI * 90.0,
    "e_c": TWO_PI * 0.18,
    "alpha_s": 0.12,
    "m": 1,
    "n": 3,
    "pi_tilde": 0.5,
    "phi_e": TWO_PI * 0.35,
}


def _flux_grid(lo, hi, count):
    step = (hi - lo) / (count - 1)
    return tuple(TWO_PI * (lo + i * step) for i in range(count))


def _spec(**overrides):
    base = dict(
        family="snail",
        fixed=FIXED,
        grids={"phi_e": _flux_grid(0.30, 0.42, 5)},
        objective="cat_size",
    )
    base.update(overrides)
    return SweepSpec(**base)


def test_single_point_matches_direct_call():
    spec = _spec(grids={"phi_e": (TWO_PI * 0.35,)})
    rec = run_sweep(spec).best

    model = SnailArray(M=1, N=3, alpha_s=0.12, e_j=FIXED["e_j"], phi_e=TWO_PI * 0.35)
    frame = mode_frame(model, e_c=FIXED["e_c"])
    direct = kerr_cat(
        frame, 0.5, omega_d=2.0 * frame.omega0, fix_detuning_zero=True
    ).to_record()
    assert rec.values == direct
    assert rec.objective == direct["cat_size"]


def test_squid_flux_alias():
    spec = _spec(
        family="squid",
        fixed={**FIXED, "alpha_s": 0.4, "m": 2},
        grids={"phi_e": (TWO_PI * 0.18,)},
    )
    rec = run_sweep(spec).best

    model = SquidArray(M=2, alpha_s=0.4, e_j=FIXED["e_j"], phi_dc=TWO_PI * 0.18)
    frame = mode_frame(model, e_c=FIXED["e_c"])
    direct = kerr_cat(
        frame, 0.5, omega_d=2.0 * frame.omega0, fix_detuning_zero=True
    ).to_record()
    assert rec.values == direct


def test_rerun_is_byte_identical():
    spec = _spec()
    assert run_sweep(spec).to_csv() == run_sweep(spec).to_csv()


def test_parallel_matches_sequential(monkeypatch):
    spec = _spec(grids={"phi_e": _flux_grid(0.30, 0.42, 5), "pi_tilde": (0.3, 0.6)})
    sequential = run_sweep(spec).to_csv()
    monkeypatch.setenv("DRIVEJJ_THREADS", "4")
    assert run_sweep(spec).to_csv() == sequential


def test_csv_layout():
    spec = _spec(constraints=(Constraint("kerr_abs_min_mhz", 0.0),))
    text = run_sweep(spec).to_csv()
    lines = text.splitlines()
    assert lines[0].startswith("# schema: drivejj.sweep")
    header = lines[1].split(",")
    assert header[0] == "phi_e"
    assert "kerr_abs_min_mhz" in header
    assert header[-3:] == ["feasible", "objective", "note"]
    assert len(lines) == 2 + 5


def test_infeasible_points_flagged_not_dropped():
    loose = run_sweep(_spec(constraints=(Constraint("kerr_abs_min_mhz", 0.0),)))
    kerrs = sorted(abs(r.values["K_MHz"]) for r in loose.records)
    cut = 0.5 * (kerrs[1] + kerrs[2])  # splits the grid into both classes

    result = run_sweep(_spec(constraints=(Constraint("kerr_abs_min_mhz", cut),)))
    assert len(result.records) == len(loose.records)
    feasible = [r.feasible for r in result.records]
    assert any(feasible) and not all(feasible)
    for rec in result.records:
        assert rec.flags["kerr_abs_min_mhz"] == (abs(rec.values["K_MHz"]) >= cut)
    assert result.best.feasible


def test_monotone_constraint_tightening():
    loose = run_sweep(_spec(constraints=(Constraint("kerr_abs_min_mhz", 0.0),)))
    kerrs = sorted(abs(r.values["K_MHz"]) for r in loose.records)
    best_sizes = []
    for cut in (0.0, kerrs[1], kerrs[3]):
        result = run_sweep(_spec(constraints=(Constraint("kerr_abs_min_mhz", cut),)))
        best_sizes.append(result.best.objective)
    assert best_sizes[0] >= best_sizes[1] >= best_sizes[2]


def test_drive_budget_default():
    spec = _spec(grids={"pi_tilde": (0.5, 2.5)})
    result = run_sweep(spec)
    over = result.records[1]
    assert not over.feasible
    assert over.values == {}
    assert over.note == "over drive budget"
    assert math.isnan(over.objective)
    assert result.best is result.records[0]


def test_no_feasible_point_raises():
    spec = _spec(constraints=(Constraint("kerr_abs_min_mhz", 1e9),))
    with pytest.raises(NoFeasiblePoint):
        run_sweep(spec)


def test_unknown_names_rejected():
    with pytest.raises(ValueError):
        run_sweep(_spec(family="fluxonium"))
    with pytest.raises(ValueError):
        run_sweep(_spec(task="ramsey"))
    with pytest.raises(ValueError):
        run_sweep(_spec(objective="coolness"))
    with pytest.raises(ValueError):
        run_sweep(_spec(constraints=(Constraint("min_vibes", 1.0),)))
    with pytest.raises(ValueError):
        run_sweep(_spec(grids={"l_stray": (1.0,)}))


def test_chaos_filter_identity_when_all_regular():
    result = run_sweep(_spec(fixed={**FIXED, "pi_tilde": 0.1}))
    assert all(r.values["chaos_ratio"] < 0.025 for r in result.records)
    filtered = chaos_filter(result)
    assert filtered.records == result.records
    assert filtered.best_index == result.best_index
    assert filtered.note == "argmax unchanged"


def test_chaos_filter_zero_threshold_empties_driven_sweep():
    result = run_sweep(_spec())
    with pytest.raises(NoFeasiblePoint):
        chaos_filter(result, threshold=0.0)


def test_chaos_filter_can_move_argmax():
    spec = _spec(grids={"phi_e": (TWO_PI * 0.36,), "pi_tilde": (0.3, 0.6, 0.9, 1.2)})
    result = run_sweep(spec)
    sizes = [r.objective for r in result.records]
    assert result.best.params["pi_tilde"] == max(
        r.params["pi_tilde"] for r in result.records if r.objective == max(sizes)
    )
    ratios = [r.values["chaos_ratio"] for r in result.records]
    assert ratios == sorted(ratios)  # ratio grows with drive here

    threshold = 0.5 * (ratios[-2] + ratios[-1])
    filtered = chaos_filter(result, threshold=threshold)
    assert len(filtered.records) == len(result.records) - 1
    assert filtered.note == "argmax moved"
    assert filtered.best.params["pi_tilde"] == result.records[-2].params["pi_tilde"]


@pytest.mark.filterwarnings("ignore::RuntimeWarning")  # coarse s_max on purpose
def test_stray_inductance_impedes_cat_growth():
    # Matched scans that differ only in how much of the inductance is
    # geometric: the best attainable cat size ranks with the junction share.
    best = []
    for x_j in (0.5, 2.0, 50.0):
        spec = SweepSpec(
            family="snail_strayl",
            fixed={**FIXED, "x_j": x_j},
            grids={"phi_e": _flux_grid(0.28, 0.42, 8)},
            constraints=(Constraint("kerr_abs_min_mhz", 1.0),),
            objective="cat_size",
            s_max=8,
        )
        best.append(run_sweep(spec).best.objective)
    assert best[0] < best[1] < best[2]


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_beamsplitter_task_smoke():
    from drivejj.configs import BS_DESIGN

    d = BS_DESIGN
    spec = SweepSpec(
        family="snail_strayl",
        task="beamsplitter",
        fixed={
            "m": d.m,
            "n": d.n_stack,
            "alpha_s": d.alpha_s,
            "e_j": d.e_j,
            "x_j": d.x_j,
            "e_c": d.e_c,
            "omega_b": d.omega_b,
            "omega_c": d.omega_c,
            "g_b": d.g_b,
            "g_c": d.g_c,
            "phi_e": TWO_PI * d.flux_without_feature,
        },
        grids={"pi_tilde": (0.5, 1.0)},
        constraints=(Constraint("bs_ratio_max", 0.25),),
        objective="g_bs_abs_mhz",
        s_max=9,
    )
    result = run_sweep(spec)
    assert len(result.records) == 2
    assert set(result.records[0].values) == {
        "g_BS_MHz",
        "chi_bc_Hz",
        "g_ab_MHz",
        "g_ac_MHz",
        "Delta_a_MHz",
        "delta_tilde_MHz",
        "omega_d_GHz",
        "pi_tilde",
        "flag_ab",
        "flag_ac",
    }
    assert result.best.feasible
    assert abs(result.best.values["g_BS_MHz"]) >= abs(
        result.records[0].values["g_BS_MHz"]
    )
