"""Exact-eigenstate basis: renormalized diagonalization and amplitudes."""

import math

import numpy as np
import pytest
from scipy.special import jn_zeros, jv

from drivejj.circuits import SnailArray, SquidArray, TwoCosine, mode_frame
from drivejj.eigenbasis import EigenIndex, diagonalize_static, sc_eigen
from drivejj.errors import BasisMismatch
from drivejj.supercoef import CapacitiveDrive, FluxDrive, ScIndex, sc_closed

TWO_PI = 2.0 * math.pi
J0_FIRST_ZERO = jn_zeros(0, 1)[0]


def transmon(e_j):
    return TwoCosine(a_energy=-e_j, b_energy=0.0, a1=1.0)


def test_transmon_anharmonicity_is_negative():
    e_c = TWO_PI * 0.25
    frame = diagonalize_static(transmon(50.0 * e_c), e_c=e_c)
    assert frame.basis == "charge"
    plasma = math.sqrt(8.0 * 50.0) * e_c
    assert frame.energies[1] - frame.energies[0] < plasma


def test_eigenframe_invariants():
    e_c = TWO_PI * 0.2
    drive = CapacitiveDrive(omega_amp=0.35 * TWO_PI * 30.0, omega_d=TWO_PI * 30.0)
    for frame in (
        diagonalize_static(transmon(30.0 * e_c), e_c=e_c, drive=drive),
        diagonalize_static(
            SnailArray(M=2, N=3, alpha_s=0.1, e_j=TWO_PI * 90.0, phi_e=2.0), e_c=e_c
        ),
    ):
        assert np.all(np.diff(frame.energies) >= -1e-12)
        gram = frame.states.conj().T @ frame.states
        assert np.max(np.abs(gram - np.eye(gram.shape[0]))) < 1e-10


def test_bessel_zero_drive_gives_free_rotor():
    # at the first J0 zero the renormalized cosine vanishes and the
    # spectrum must be the rotor ladder 4E_C (q - n_g)^2
    e_c = TWO_PI * 0.3
    n_g = 0.3
    omega_d = TWO_PI * 12.0
    drive = CapacitiveDrive(omega_amp=J0_FIRST_ZERO * omega_d, omega_d=omega_d)
    frame = diagonalize_static(transmon(40.0 * e_c), e_c=e_c, drive=drive, n_g=n_g)
    q = np.arange(-(frame.dim // 2), frame.dim // 2 + 1)
    rotor = np.sort(4.0 * e_c * (q - n_g) ** 2)
    got = frame.energies[:12]
    assert np.max(np.abs(got - rotor[:12])) < 1e-8 * max(abs(rotor[11]), e_c)


def test_flux_drive_bessel_zero_on_balanced_squid():
    # both branches carry flux coefficient 1/2, so phi_ac0 at the J0 zero
    # kills the whole potential regardless of the dc working point
    e_c = TWO_PI * 0.22
    model = SquidArray(M=1, alpha_s=1.0, e_j=TWO_PI * 8.0, phi_dc=1.1, r_a=0.5, r_b=0.5)
    drive = FluxDrive(phi_ac0=J0_FIRST_ZERO, omega_d=TWO_PI * 9.0)
    frame = diagonalize_static(model, e_c=e_c, drive=drive)
    q = np.arange(-(frame.dim // 2), frame.dim // 2 + 1)
    rotor = np.sort(4.0 * e_c * q.astype(float) ** 2)
    assert np.max(np.abs(frame.energies[:10] - rotor[:10])) < 1e-8 * max(rotor[9], e_c)


def test_grid_matches_charge_basis_when_both_apply():
    e_c = TWO_PI * 0.15
    e_j = 100.0 * e_c
    omega_d = TWO_PI * 25.0
    drive = CapacitiveDrive(omega_amp=0.7 * omega_d, omega_d=omega_d)
    charge = diagonalize_static(transmon(e_j), e_c=e_c, drive=drive, basis="charge")
    grid = diagonalize_static(transmon(e_j), e_c=e_c, drive=drive, basis="grid")
    scale = abs(charge.energies[6] - charge.energies[0])
    for j in range(6):
        gap_c = charge.energies[j] - charge.energies[0]
        gap_g = grid.energies[j] - grid.energies[0]
        assert abs(gap_c - gap_g) < 1e-8 * scale
    # amplitudes agree too, including the sine-element gauge
    for idx in ((0, 2, 0), (0, 1, 1), (1, 2, 1), (0, 2, 2)):
        vc = sc_eigen(charge, idx).value
        vg = sc_eigen(grid, idx).value
        assert vc == pytest.approx(vg, rel=1e-7, abs=1e-10 * e_j)


def test_charge_basis_rejects_fractional_frequencies():
    model = SnailArray(M=2, N=3, alpha_s=0.1, e_j=TWO_PI * 90.0, phi_e=2.0)
    with pytest.raises(BasisMismatch):
        diagonalize_static(model, e_c=TWO_PI * 0.2, basis="charge")
    frame = diagonalize_static(model, e_c=TWO_PI * 0.2)
    assert frame.basis == "grid"


def test_undriven_harmonics_vanish():
    e_c = TWO_PI * 0.25
    frame = diagonalize_static(transmon(50.0 * e_c), e_c=e_c)
    for p in (1, 2, 3):
        assert sc_eigen(frame, (0, 1, p)).value == 0.0


def test_parity_selection():
    e_c = TWO_PI * 0.25
    e_j = 50.0 * e_c
    omega_d = TWO_PI * 14.0
    drive = CapacitiveDrive(omega_amp=0.6 * omega_d, omega_d=omega_d)
    frame = diagonalize_static(transmon(e_j), e_c=e_c, drive=drive)
    # sine between like-parity states and cosine across parity both vanish
    assert abs(sc_eigen(frame, (0, 0, 1)).value) < 1e-10 * e_j
    assert abs(sc_eigen(frame, (0, 2, 1)).value) < 1e-10 * e_j
    assert abs(sc_eigen(frame, (0, 1, 0)).value) < 1e-10 * e_j
    assert abs(sc_eigen(frame, (0, 1, 2)).value) < 1e-10 * e_j
    assert abs(sc_eigen(frame, (0, 1, 1)).value) > 1e-4 * e_j


def test_cos_element_matches_quadrature_oracle():
    # synthesize charge-basis wavefunctions on a fine phase grid and do the
    # integral directly; the operator-algebra route must agree
    e_c = TWO_PI * 0.25
    e_j = 50.0 * e_c
    omega_d = TWO_PI * 14.0
    drive = CapacitiveDrive(omega_amp=0.7 * omega_d, omega_d=omega_d)
    frame = diagonalize_static(transmon(e_j), e_c=e_c, drive=drive)
    q = np.arange(-(frame.dim // 2), frame.dim // 2 + 1)
    phi = np.linspace(-math.pi, math.pi, 8192, endpoint=False)
    basis = np.exp(1j * np.outer(q, phi)) / math.sqrt(2.0 * math.pi)
    psi0 = frame.states[:, 0] @ basis
    psi2 = frame.states[:, 2] @ basis
    integral = np.sum(np.conj(psi0) * np.cos(phi) * psi2) * (phi[1] - phi[0])
    assert abs(integral.imag) < 1e-10
    expected = -e_j * jv(0, 0.7) * integral.real
    got = sc_eigen(frame, (0, 2, 0)).value
    assert got == pytest.approx(expected, rel=1e-8)
    assert abs(got) > 1e-3 * e_j


def test_stored_amplitudes_are_symmetric():
    e_c = TWO_PI * 0.2
    omega_d = TWO_PI * 11.0
    drive = CapacitiveDrive(omega_amp=0.5 * omega_d, omega_d=omega_d)
    model = SquidArray(M=1, alpha_s=0.6, e_j=TWO_PI * 12.0, phi_dc=0.9, r_a=0.5, r_b=0.5)
    frame = diagonalize_static(model, e_c=e_c, drive=drive)
    for j, k, p in ((0, 1, 1), (0, 2, 1), (1, 3, 2), (0, 2, 0)):
        assert sc_eigen(frame, (j, k, p)).value == pytest.approx(
            sc_eigen(frame, (k, j, p)).value, rel=1e-12, abs=1e-14 * TWO_PI
        )


def test_cosine_row_is_normalized():
    e_c = TWO_PI * 0.25
    frame = diagonalize_static(transmon(50.0 * e_c), e_c=e_c)
    total = sum(
        abs(frame.element(0, j, 0, odd=False)) ** 2 for j in range(frame.states.shape[1])
    )
    assert total <= 1.0 + 1e-12


def test_harmonic_limit_matches_oscillator_amplitudes():
    # stiff circuit driven far above the mode: the eigen amplitudes must
    # approach the oscillator-frame ones with the ladder normalization
    # <0|a^k|k> = sqrt(k!). Only total order 2n+l+p >= 3 is comparable:
    # below that the oscillator frame absorbs the drive response into the
    # displacement and subtracts it, which the compact route keeps.
    e_c = TWO_PI * 0.2
    e_j = 150.0 * e_c
    model = transmon(e_j)
    osc = mode_frame(model, e_c=e_c)
    omega_d = 10.0 * osc.omega0
    drive = CapacitiveDrive(omega_amp=0.3 * omega_d, omega_d=omega_d)
    frame = diagonalize_static(model, e_c=e_c, drive=drive)
    pi_tilde = drive.pi_tilde(osc)
    # comparable pairs within the lowest three states: parity-allowed and
    # total order >= 3; higher states pick up O(1) quartic dressing and are
    # out of scope. Magnitudes only: the two frames time-stamp harmonics
    # with different phase conventions ((-i)^p vs i^{p mod 2}).
    for k, p in ((2, 2), (1, 3)):
        eig = sc_eigen(frame, (0, k, p)).value
        osc_val = sc_closed(model, osc, pi_tilde, ScIndex(0, k, p)).value
        expected = math.sqrt(math.factorial(k)) * osc_val
        assert abs(expected) > 0.0
        assert abs(eig) == pytest.approx(abs(expected), rel=5e-2)


def test_index_validation():
    e_c = TWO_PI * 0.25
    frame = diagonalize_static(transmon(50.0 * e_c), e_c=e_c, dim=21)
    with pytest.raises(ValueError):
        sc_eigen(frame, (0, frame.dim + 3, 1))
    with pytest.raises(ValueError):
        sc_eigen(frame, EigenIndex(0, 1, -1))
