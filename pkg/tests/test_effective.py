"""Effective-parameter assembly: Kerr-cat, chaos heuristics, beam splitter.

The first-order correction sums are checked against an independent
time-averaging oracle built here from truncated ladder matrices: the
driven Hamiltonian is decomposed into harmonics H_m in the frame rotating
at half the drive frequency and the first-order static correction is the
standard commutator sum Σ_{m>0} [H_m, H_{-m}]/(m ω'). The oracle knows
nothing about the transcribed formulas — it only consumes the same raw
amplitude values.
"""

import math

import numpy as np
import pytest

from drivejj.circuits import SnailArray, SnailArrayStrayL, SquidArray, mode_frame, squid_statics
from drivejj.effective import (
    BS_CORRECTION_TERMS,
    BeamSplitterParams,
    ChaosAssessment,
    KerrCatParams,
    beam_splitter,
    chaos_ratio,
    classify_ratio,
    detect_downturn,
    first_order_corrections,
    kerr_cat,
    weak_drive_squid_check,
)
from drivejj.errors import DispersiveViolated, ResonanceTooClose
from drivejj.supercoef import CapacitiveDrive, ScIndex, sc_closed, sc_series

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="module")
def snail():
    model = SnailArray(M=1, N=3, alpha_s=0.12, e_j=TWO_PI * 100.0, phi_e=TWO_PI * 0.35)
    return model, mode_frame(model, e_c=TWO_PI * 0.17)


# ---------------------------------------------------------------------------
# time-averaging oracle for the first-order corrections
# ---------------------------------------------------------------------------


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def _harmonics_from_amplitudes(c, omega_d: float, dim: int):
    """Harmonic decomposition H_m of the driven mode Hamiltonian.

    Index (n, l, p) contributes a†ⁿaⁿ⁺ˡ at m = -l±2p and its transpose at
    m = +l±2p, each weighted by the assembler's halving convention — the
    p = 0 double-count reproduces the (e^{i·0}+e^{-i·0}) = 2 factor.
    Indices run over the same truncation window as the transcribed sums:
    2n + l + p ≤ 4 with p ≤ 2.
    """
    a = _ladder(dim)
    ad = a.T
    h_m = {}
    for n in range(0, 3):
        for l in range(0, 5 - 2 * n):
            if n == 0 and l == 0:
                continue
            for p in range(0, min(2, 4 - 2 * n - l) + 1):
                val = c(n, l, p)
                if val == 0.0:
                    continue
                half = 0.5 if l == 0 else 1.0
                half *= 0.5 if p == 0 else 1.0
                lower = np.linalg.matrix_power(ad, n) @ np.linalg.matrix_power(a, n + l)
                raise_ = lower.T
                for sign in (+1, -1):
                    m = -l + sign * 2 * p
                    h_m[m] = h_m.get(m, 0.0) + half * val * lower
                    m = l + sign * 2 * p
                    h_m[m] = h_m.get(m, 0.0) + half * val * raise_
    return h_m


def _first_order_oracle(c, omega_d: float, dim: int = 64):
    """(delta1, k1, eps21) from Σ_{m>0}[H_m, H_{-m}]/(m ω_d/2)."""
    h_m = _harmonics_from_amplitudes(c, omega_d, dim)
    h1 = np.zeros((dim, dim))
    for m in range(1, 9):
        if m in h_m and -m in h_m:
            h1 += (h_m[m] @ h_m[-m] - h_m[-m] @ h_m[m]) * (2.0 / (m * omega_d))
    d = np.diag(h1)
    delta1 = d[1] - d[0]
    quartic = 0.5 * (d[2] - 2.0 * d[1] + d[0])
    eps21 = h1[2, 0] / math.sqrt(2.0)
    assert abs(h1[0, 2] - h1[2, 0]) < 1e-12 * max(abs(h1[2, 0]), 1.0)
    return delta1, -quartic, eps21


def test_commutator_oracle_anchor():
    # H = λ(a† e^{iνt} + a e^{-iνt}) shifts every level by exactly -λ²/ν.
    dim = 40
    lam, omega_d = 0.37, 2.9
    a = _ladder(dim)
    h_m = {1: lam * a.T, -1: lam * a}
    h1 = (h_m[1] @ h_m[-1] - h_m[-1] @ h_m[1]) * (2.0 / omega_d)
    shift = -lam**2 / (0.5 * omega_d)
    d = np.diag(h1)[:-1]  # last level is truncated
    assert np.allclose(d, shift, rtol=1e-14, atol=1e-15)


def test_first_order_corrections_match_commutator_oracle(snail):
    model, frame = snail
    omega_d = 2.0 * frame.omega0 + 0.21
    pi_tilde = 0.6

    cache = {}

    def c(n, l, p):
        key = (n, l, p)
        if key not in cache:
            cache[key] = sc_closed(model, frame, pi_tilde, ScIndex(n, l, p)).value
        return cache[key]

    corr = first_order_corrections(c, omega_d)
    delta1, k1, eps21 = _first_order_oracle(c, omega_d)
    assert corr.delta1 == pytest.approx(delta1, rel=1e-12)
    assert corr.k1 == pytest.approx(k1, rel=1e-12)
    assert corr.eps21 == pytest.approx(eps21, rel=1e-12)


def test_corrections_oracle_on_squid():
    model = SquidArray(M=2, alpha_s=0.4, e_j=TWO_PI * 75.0, phi_dc=TWO_PI * 0.18)
    frame = mode_frame(model, e_c=TWO_PI * 0.15)
    omega_d = 2.0 * frame.omega0 - 0.17

    def c(n, l, p):
        return sc_closed(model, frame, 0.45, ScIndex(n, l, p)).value

    corr = first_order_corrections(c, omega_d)
    delta1, k1, eps21 = _first_order_oracle(c, omega_d)
    assert corr.delta1 == pytest.approx(delta1, rel=1e-12)
    assert corr.k1 == pytest.approx(k1, rel=1e-12)
    assert corr.eps21 == pytest.approx(eps21, rel=1e-12)


# ---------------------------------------------------------------------------
# Kerr-cat assembly
# ---------------------------------------------------------------------------


def test_rotating_wave_values_are_exact(snail):
    model, frame = snail
    omega_d = 2.0 * frame.omega0 + 0.1
    pi_tilde = 0.8
    params = kerr_cat(frame, pi_tilde, omega_d=omega_d, include_corrections=False)
    assert params.omega_q == frame.omega0 + sc_closed(model, frame, pi_tilde, ScIndex(1, 0, 0)).value
    assert params.kerr == -sc_closed(model, frame, pi_tilde, ScIndex(2, 0, 0)).value
    assert params.eps2 == sc_closed(model, frame, pi_tilde, ScIndex(0, 2, 1)).value
    assert params.delta == params.omega_q - 0.5 * omega_d


def test_full_assembly_wires_corrections(snail):
    model, frame = snail
    omega_d = 2.0 * frame.omega0 + 0.1
    pi_tilde = 0.8
    params = kerr_cat(frame, pi_tilde, omega_d=omega_d)

    def c(n, l, p):
        return sc_closed(model, frame, pi_tilde, ScIndex(n, l, p)).value

    corr = first_order_corrections(c, omega_d)
    assert params.omega_q == frame.omega0 + c(1, 0, 0) + corr.delta1
    assert params.kerr == -c(2, 0, 0) + corr.k1
    assert params.eps2 == c(0, 2, 1) + corr.eps21
    assert params.cat_size == abs(params.eps2) / abs(params.kerr)


def test_zero_drive_kills_squeezing(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.0, omega_d=2.0 * frame.omega0 + 0.1)
    assert params.eps2 == 0.0
    assert params.cat_size == 0.0


def test_detuning_lock(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.5, omega_d=2.0 * frame.omega0 + 0.4, fix_detuning_zero=True)
    assert abs(params.delta) < 1e-10 * frame.omega0
    assert params.omega_d == pytest.approx(2.0 * params.omega_q, rel=1e-9)


def test_detuning_lock_through_capacitive_descriptor(snail):
    _, frame = snail
    drive = CapacitiveDrive(omega_amp=TWO_PI * 0.4, omega_d=2.0 * frame.omega0 + 0.3)
    params = kerr_cat(frame, drive, fix_detuning_zero=True)
    assert abs(params.delta) < 1e-10 * frame.omega0
    # the displacement must track the converged drive frequency
    locked = CapacitiveDrive(omega_amp=TWO_PI * 0.4, omega_d=params.omega_d)
    assert params.pi_tilde == locked.pi_tilde(frame)


def test_raw_drive_requires_frequency(snail):
    _, frame = snail
    with pytest.raises(ValueError, match="omega_d"):
        kerr_cat(frame, 0.5)


def test_gamma_follows_kerr_sign(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.3, omega_d=2.0 * frame.omega0 + 0.1)
    assert params.gamma == (0.0 if params.kerr > 0 else math.pi)


def test_record_fields(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.3, omega_d=2.0 * frame.omega0 + 0.1)
    rec = params.to_record()
    for key in ("omega_q_GHz", "K_MHz", "eps2_MHz", "cat_size", "chaos_ratio", "gamma_rad"):
        assert key in rec
    assert rec["eps2_MHz"] >= 0.0
    assert rec["omega_q_GHz"] == pytest.approx(params.omega_q / TWO_PI)


# ---------------------------------------------------------------------------
# lowest-shell reduction to the cubic/quartic mode couplings
# ---------------------------------------------------------------------------


def _lowest_shell_filter(frame, pi_tilde):
    """Amplitudes kept to leading order: odd-order SCs at their lowest shell.

    Zeroing every even-total-order amplitude inside the correction sums
    drops exactly the product terms that are beyond O(φ_zpf⁴) in the
    effective parameters, with no knowledge of the sums' structure.
    """

    def c(n, l, p):
        if (2 * n + l + p) % 2 == 0 or 2 * n + l + p > 3:
            return 0.0
        return sc_series(frame, pi_tilde, ScIndex(n, l, p), s_max=3).value

    return c


@pytest.mark.filterwarnings("ignore::RuntimeWarning")  # truncation is the point
def test_lowest_order_kerr_and_squeezing(snail):
    model, frame = snail
    omega_d = 2.0 * frame.omega0 + 0.15
    pi_tilde = 0.37
    phi = frame.phi_zpf
    g3 = frame.c(3) * frame.e_j * phi**3 / 2.0
    g4 = frame.c(4) * frame.e_j * phi**4 / 6.0
    big_pi = frame.n_zpf * pi_tilde

    c = _lowest_shell_filter(frame, pi_tilde)
    corr = first_order_corrections(c, omega_d)
    kerr = -sc_series(frame, pi_tilde, ScIndex(2, 0, 0), s_max=4).value + corr.k1
    eps2 = sc_series(frame, pi_tilde, ScIndex(0, 2, 1), s_max=3).value + corr.eps21

    assert corr.eps21 == 0.0  # every second-order squeezing product is higher order
    assert kerr == pytest.approx(-1.5 * g4 + 20.0 * g3**2 / (3.0 * omega_d), rel=1e-12)
    assert eps2 == pytest.approx(g3 * big_pi, rel=1e-12)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")  # truncation is the point
def test_lowest_order_stark_shift(snail):
    # Drive-induced frequency pull at leading order: the static piece of
    # the same assembly equals -2K, so the total shift is the two Stark
    # terms minus twice the Kerr.
    model, frame = snail
    omega_d = 2.0 * frame.omega0 + 0.15
    pi_tilde = 0.37
    phi = frame.phi_zpf
    g3 = frame.c(3) * frame.e_j * phi**3 / 2.0
    g4 = frame.c(4) * frame.e_j * phi**4 / 6.0
    big_pi = frame.n_zpf * pi_tilde

    def shift(pt):
        c = _lowest_shell_filter(frame, pt)
        corr = first_order_corrections(c, omega_d)
        return sc_series(frame, pt, ScIndex(1, 0, 0), s_max=4).value + corr.delta1

    c0 = _lowest_shell_filter(frame, pi_tilde)
    kerr = (
        -sc_series(frame, pi_tilde, ScIndex(2, 0, 0), s_max=4).value
        + first_order_corrections(c0, omega_d).k1
    )
    total = shift(pi_tilde)
    expected = 6.0 * g4 * big_pi**2 - 18.0 * g3**2 * big_pi**2 / omega_d - 2.0 * kerr
    assert total == pytest.approx(expected, rel=1e-12)
    # and the static part alone is exactly -2K
    assert shift(0.0) == pytest.approx(-2.0 * kerr, rel=1e-12)


# ---------------------------------------------------------------------------
# chaos heuristics
# ---------------------------------------------------------------------------


def test_classification_bands():
    assert classify_ratio(0.0) == "regular"
    assert classify_ratio(0.0199) == "regular"
    assert classify_ratio(0.02) == "onset"
    assert classify_ratio(0.025) == "onset"
    assert classify_ratio(0.03) == "onset"
    assert classify_ratio(0.0301) == "chaotic"


def test_chaos_ratio_zero_drive(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.0, omega_d=2.0 * frame.omega0 + 0.1)
    assessment = chaos_ratio(params)
    assert assessment.ratio == 0.0
    assert assessment.classification == "regular"
    assert assessment.layer_width == 0.0


def test_chaos_layer_width(snail):
    _, frame = snail
    params = kerr_cat(frame, 0.6, omega_d=2.0 * frame.omega0 + 0.1)
    assessment = chaos_ratio(params)
    x = params.omega_q / (4.0 * abs(params.eps2))
    assert assessment.layer_width == pytest.approx(x * math.exp(-x), rel=1e-14)
    assert assessment.ratio == pytest.approx(abs(params.eps2) / params.omega_q, rel=1e-14)


def test_chaos_requires_positive_frequency():
    bad = KerrCatParams(
        omega_q=-1.0, kerr=0.1, eps2=0.01, delta=0.0, cat_size=0.1, chaos_ratio=0.0
    )
    with pytest.raises(ValueError):
        chaos_ratio(bad)


# ---------------------------------------------------------------------------
# weak-pump loop-array closed forms
# ---------------------------------------------------------------------------


def test_weak_drive_balanced_loop_has_no_squeezing():
    model = SquidArray(M=1, alpha_s=1.0, e_j=TWO_PI * 50.0, phi_dc=0.0)
    frame = mode_frame(model, e_c=TWO_PI * 0.2)
    k_wd, eps2_wd = weak_drive_squid_check(model, frame, 1e-3)
    assert eps2_wd == 0.0
    assert k_wd > 0.0


def test_weak_drive_junction_energy_derivative_matches_finite_difference():
    e_j = TWO_PI * 60.0
    for alpha_s, phi_dc in ((0.3, 0.7), (0.8, 1.9), (0.55, 2.6)):
        model = SquidArray(M=2, alpha_s=alpha_s, e_j=e_j, phi_dc=phi_dc)
        frame = mode_frame(model, e_c=TWO_PI * 0.15)
        _, eps2_wd = weak_drive_squid_check(model, frame, 1e-3)
        h = 1e-6
        up, _ = squid_statics(SquidArray(M=2, alpha_s=alpha_s, e_j=e_j, phi_dc=phi_dc + h))
        dn, _ = squid_statics(SquidArray(M=2, alpha_s=alpha_s, e_j=e_j, phi_dc=phi_dc - h))
        de_fd = (up - dn) / (2.0 * h)
        e_tilde, _ = squid_statics(model)
        damp = math.exp(-frame.phi_zpf**2 / (2.0 * model.M**2))
        expected = 0.5e-3 * math.sqrt(2.0 * frame.e_c / (model.M * e_tilde)) * damp * de_fd
        assert eps2_wd == pytest.approx(expected, rel=1e-8)


def test_weak_drive_kerr_large_array_limit():
    # e^{-φ²/2M²} → 1, so K·2M²/E_C → 1 from below as M grows.
    e_j = TWO_PI * 80.0
    vals = []
    for m in (1, 4, 16):
        model = SquidArray(M=m, alpha_s=0.7, e_j=e_j, phi_dc=0.9)
        frame = mode_frame(model, e_c=TWO_PI * 0.18)
        k_wd, _ = weak_drive_squid_check(model, frame, 1e-3)
        vals.append(k_wd * 2.0 * m * m / frame.e_c)
    assert vals[0] < vals[1] < vals[2] < 1.0
    assert vals[2] == pytest.approx(1.0, abs=1e-3)


# ---------------------------------------------------------------------------
# beam splitter
# ---------------------------------------------------------------------------

BS_KW = dict(
    omega_b=TWO_PI * 2.976,
    omega_c=TWO_PI * 6.915,
    g_b=TWO_PI * 0.0756,
    g_c=TWO_PI * 0.1349,
)


@pytest.fixture(scope="module")
def coupler_frame():
    model = SnailArrayStrayL(
        M=1, N=3, alpha_s=0.15, e_j=TWO_PI * 86.0, phi_e=TWO_PI * 0.36, x_j=0.711
    )
    return mode_frame(model, e_c=TWO_PI * 0.177)


def test_bs_zero_drive_is_exactly_off(coupler_frame):
    bs = beam_splitter(coupler_frame, omega_amp=0.0, engine="series", **BS_KW)
    assert bs.g_bs == 0.0
    assert bs.g_ab == 0.0 and bs.g_ac == 0.0
    assert bs.chi_bc != 0.0  # static cross-Kerr survives
    assert bs.delta_a != 0.0


def test_bs_dressed_frequencies(coupler_frame):
    bs = beam_splitter(coupler_frame, omega_amp=0.0, engine="series", **BS_KW)
    wa, wb, wc = coupler_frame.omega0, BS_KW["omega_b"], BS_KW["omega_c"]
    gb, gc = BS_KW["g_b"], BS_KW["g_c"]
    assert bs.omega_a_dressed == wa + gb**2 / (wa - wb) + gc**2 / (wa - wc)
    assert bs.omega_b_dressed == wb - gb**2 / (wa - wb)
    assert bs.omega_c_dressed == wc - gc**2 / (wa - wc)
    assert bs.omega_d == bs.omega_c_dressed - bs.omega_b_dressed
    assert bs.xi_b == 2.0 * gb * wb / (wb**2 - wa**2)
    assert bs.xi_c == 2.0 * gc * wc / (wc**2 - wa**2)
    assert bs.delta_tilde == pytest.approx(
        bs.omega_a_dressed + bs.omega_b_dressed - 2.0 * bs.omega_d + bs.delta_a
    )


def test_bs_small_drive_linearity(coupler_frame):
    # the bare conversion amplitude dominates: linear in the displacement
    # to within 2% for Π = n_zpf·Π̃ up to 0.05
    wd_probe = beam_splitter(coupler_frame, omega_amp=0.0, engine="series", **BS_KW)
    wd, wa = wd_probe.omega_d, wd_probe.omega_a_dressed

    def at_pi(big_pi):
        pt = big_pi / coupler_frame.n_zpf
        om = abs(pt * (wd * wd - wa * wa) / wd)
        return beam_splitter(coupler_frame, omega_amp=om, engine="series", **BS_KW)

    slope = at_pi(1e-7).g_bs / 1e-7
    for big_pi in (0.01, 0.03, 0.05):
        g = at_pi(big_pi).g_bs
        assert g == pytest.approx(slope * big_pi, rel=2e-2)


def test_bs_correction_terms_structure():
    def cavity_weight(idx):
        return 2 * idx[2] + idx[3] + 2 * idx[4] + idx[5]

    for name in ("g_ab", "g_ac"):
        for _, idx1, idx2, _ in BS_CORRECTION_TERMS[name]:
            weights = sorted((cavity_weight(idx1), cavity_weight(idx2)))
            assert weights == [0, 1]
            one = idx1 if cavity_weight(idx1) == 1 else idx2
            if name == "g_ab":
                assert one[3] == 1 and one[5] == 0  # single b-cavity quantum
            else:
                assert one[5] == 1 and one[3] == 0  # single c-cavity quantum
    for _, idx1, idx2, _ in BS_CORRECTION_TERMS["delta_a"]:
        assert cavity_weight(idx1) == 0 and cavity_weight(idx2) == 0
    for _, idx1, idx2, _ in BS_CORRECTION_TERMS["chi_bc"]:
        # cross-Kerr channel: one b quantum and one c quantum in and out
        assert idx1[2] * 2 + idx1[3] + idx2[2] * 2 + idx2[3] == 2
        assert idx1[4] * 2 + idx1[5] + idx2[4] * 2 + idx2[5] == 2


def test_bs_dispersive_guard(coupler_frame):
    with pytest.raises(DispersiveViolated):
        beam_splitter(
            coupler_frame,
            omega_b=TWO_PI * 2.976,
            omega_c=coupler_frame.omega0 + TWO_PI * 0.1,
            g_b=TWO_PI * 0.0756,
            g_c=TWO_PI * 0.1349,
            omega_amp=0.0,
            engine="series",
        )


def test_bs_resonance_guard(coupler_frame):
    probe = beam_splitter(coupler_frame, omega_amp=0.0, engine="series", **BS_KW)
    with pytest.raises(ResonanceTooClose):
        beam_splitter(
            coupler_frame,
            omega_amp=0.0,
            engine="series",
            min_detuning=2.0 * abs(probe.delta_tilde),
            **BS_KW,
        )


def test_bs_record_fields(coupler_frame):
    bs = beam_splitter(coupler_frame, omega_amp=TWO_PI * 1.0, engine="series", **BS_KW)
    rec = bs.to_record()
    for key in ("g_BS_MHz", "chi_bc_Hz", "g_ab_MHz", "g_ac_MHz", "Delta_a_MHz", "delta_tilde_MHz"):
        assert key in rec
    assert rec["g_BS_MHz"] == pytest.approx(1e3 * bs.g_bs / TWO_PI)
    assert rec["chi_bc_Hz"] == pytest.approx(1e9 * bs.chi_bc / TWO_PI)


# ---------------------------------------------------------------------------
# downturn detection
# ---------------------------------------------------------------------------


def test_downturn_monotone_is_clean():
    x = np.linspace(0.0, 2.0, 40)
    y = -0.5 * x - 0.05 * x**2
    assert not detect_downturn(x, y).found


def test_downturn_sign_change():
    x = np.linspace(0.0, 2.0, 40)
    y = np.where(x < 1.0, 0.8, -0.8)  # abrupt flip with material values on both sides
    rep = detect_downturn(x, y)
    assert rep.found and rep.kind == "sign-change"
    assert 0.9 < rep.position < 1.2


def test_downturn_collapse():
    x = np.linspace(0.0, 1.0, 30)
    y = np.where(x < 0.6, x, 0.6 - 4.0 * (x - 0.6))
    y = np.clip(y, 0.05, None)
    rep = detect_downturn(x, y)
    assert rep.found and rep.kind in ("collapse", "sign-change")


def test_downturn_ignores_noise_near_zero():
    x = np.linspace(0.0, 1.0, 30)
    rng = np.random.default_rng(7)
    y = np.concatenate([1e-4 * rng.standard_normal(15), np.linspace(0.1, 1.0, 15)])
    assert not detect_downturn(x, y).found


def test_downturn_needs_samples():
    with pytest.raises(ValueError):
        detect_downturn([0.0, 1.0], [1.0, 2.0])
