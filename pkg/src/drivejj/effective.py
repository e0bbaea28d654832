"""Effective-Hamiltonian parameters assembled from drive amplitudes.

Everything here consumes raw (unhalved) amplitudes C_{nl,p}; the halving
conventions are already folded into the correction coefficients below.
First-order beyond-rotating-wave corrections are transcribed term by term
as explicit products over explicit denominators — no generic
transformation engine is involved, so each sum can be audited directly
against an independent commutator evaluation (see the test suite).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from .circuits import ModeFrame, SnailArrayStrayL, SquidArray, squid_statics
from .errors import (
    DispersiveViolated,
    FixedPointDiverged,
    ResonanceTooClose,
)
from .supercoef import (
    DEFAULT_S_MAX,
    CapacitiveDrive,
    FluxDrive,
    ScIndex,
    ScIndex3,
    sc_closed,
    sc_series,
    sc_three_mode,
)

__all__ = [
    "KerrCatParams",
    "KerrCorrections",
    "BeamSplitterParams",
    "ChaosAssessment",
    "DownturnReport",
    "kerr_cat",
    "first_order_corrections",
    "chaos_ratio",
    "classify_ratio",
    "weak_drive_squid_check",
    "beam_splitter",
    "detect_downturn",
    "BS_CORRECTION_TERMS",
]

TWO_PI = 2.0 * math.pi

CHAOS_ONSET_LOW = 0.02
CHAOS_ONSET_HIGH = 0.03


# ---------------------------------------------------------------------------
# Kerr-cat
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KerrCorrections:
    """First-order frequency-division corrections (all ∝ 1/ω_d)."""

    delta1: float
    k1: float
    eps21: float


def first_order_corrections(
    c: Callable[[int, int, int], float], omega_d: float
) -> KerrCorrections:
    """Explicit first-order sums of amplitude products over ω_d.

    ``c(n, l, p)`` must return the raw amplitude for that index; the three
    sums below are fixed data of the single-mode problem at the
    half-harmonic working point and are audited against a commutator
    oracle in the tests. Each factor is truncated at combined order
    2n + l + p ≤ 4 with p ≤ 2, so callers never see indices outside that
    window.
    """
    delta1 = (
        -4.0 * c(0, 2, 0) ** 2
        - 2.0 * c(0, 2, 1) ** 2
        + (8.0 / 3.0) * c(0, 2, 2) ** 2
        - 12.0 * c(0, 3, 0) ** 2
        - (216.0 / 5.0) * c(0, 3, 1) ** 2
        - 48.0 * c(0, 4, 0) ** 2
        - 8.0 * c(0, 1, 0) * c(1, 1, 0)
        - 4.0 * c(1, 1, 0) ** 2
        + (16.0 / 3.0) * c(0, 1, 1) * c(1, 1, 1)
        + (8.0 / 3.0) * c(1, 1, 1) ** 2
        - 12.0 * c(0, 2, 0) * c(1, 2, 0)
        - 6.0 * c(1, 2, 0) ** 2
    ) / omega_d
    k1 = (
        -(
            -6.0 * c(0, 3, 0) ** 2
            - (108.0 / 5.0) * c(0, 3, 1) ** 2
            - 36.0 * c(0, 4, 0) ** 2
            - 6.0 * c(1, 1, 0) ** 2
            + 4.0 * c(1, 1, 1) ** 2
            - 12.0 * c(0, 2, 0) * c(1, 2, 0)
            - 18.0 * c(1, 2, 0) ** 2
        )
        / omega_d
    )
    eps21 = (
        -2.0 * c(0, 1, 1) * c(0, 3, 0)
        - 6.0 * c(0, 1, 0) * c(0, 3, 1)
        - (6.0 / 5.0) * c(0, 1, 2) * c(0, 3, 1)
        - 6.0 * c(0, 2, 1) * c(0, 4, 0)
        - 2.0 * c(0, 2, 0) * c(1, 0, 1)
        + 2.0 * c(0, 2, 2) * c(1, 0, 1)
        - c(0, 2, 1) * c(1, 0, 2)
        + 2.0 * c(0, 1, 1) * c(1, 1, 0)
        - 12.0 * c(0, 3, 1) * c(1, 1, 0)
        - 2.0 * c(0, 1, 0) * c(1, 1, 1)
        + (2.0 / 3.0) * c(0, 1, 2) * c(1, 1, 1)
        - 4.0 * c(0, 3, 0) * c(1, 1, 1)
    ) / omega_d
    return KerrCorrections(delta1=delta1, k1=k1, eps21=eps21)


@dataclass(frozen=True)
class KerrCatParams:
    """Squeezing-drive working point of a single nonlinear mode.

    ``eps2`` keeps its assembled sign; ``gamma`` ∈ {0, π} is the drive-phase
    choice that makes the reported squeezing amplitude non-negative while
    keeping the double-well orientation tied to the sign of ``kerr``
    (records emitted downstream carry |eps2|).
    """

    omega_q: float
    kerr: float
    eps2: float
    delta: float
    cat_size: float
    chaos_ratio: float
    gamma: float = 0.0
    omega_d: float = 0.0
    pi_tilde: float = 0.0
    corrections: Optional[KerrCorrections] = None

    def to_record(self) -> Dict[str, float]:
        """Flat record with fixed field names and display units."""
        return {
            "omega_q_GHz": self.omega_q / TWO_PI,
            "omega_d_GHz": self.omega_d / TWO_PI,
            "K_MHz": 1e3 * self.kerr / TWO_PI,
            "eps2_MHz": 1e3 * abs(self.eps2) / TWO_PI,
            "delta_MHz": 1e3 * self.delta / TWO_PI,
            "cat_size": self.cat_size,
            "chaos_ratio": self.chaos_ratio,
            "gamma_rad": self.gamma,
            "pi_tilde": self.pi_tilde,
        }


def _kerr_cat_amplitudes(frame, drive, omega_d):
    """(per-engine drive argument, scalar Π̃ for records) at this ω_d."""
    model = frame.model
    if isinstance(drive, CapacitiveDrive):
        drive = dataclasses.replace(drive, omega_d=omega_d)
        amps = drive.amplitudes(model, frame)
        return amps, float(amps)
    if isinstance(drive, FluxDrive):
        drive = dataclasses.replace(drive, omega_d=omega_d)
        pi_a, pi_b = drive.amplitudes(model, frame)
        return (pi_a, pi_b), pi_b - pi_a
    return drive, float(drive)


def kerr_cat(
    frame: ModeFrame,
    drive,
    *,
    omega_d: Optional[float] = None,
    fix_detuning_zero: bool = False,
    s_max: int = DEFAULT_S_MAX,
    include_corrections: bool = True,
    engine: Optional[str] = None,
) -> KerrCatParams:
    """Effective parameters of a mode squeezed near half the drive frequency.

    Parameters
    ----------
    frame:
        Mode frame; the circuit model rides along on it.
    drive:
        CapacitiveDrive, FluxDrive, or a raw displacement Π̃ (scalar or
        per-branch pair). Raw displacements need ``omega_d``.
    omega_d:
        Drive frequency override; defaults to the descriptor's.
    fix_detuning_zero:
        Iterate ω_d until the mode sits exactly at half of it,
        |ω_q − ω_d/2| < 1e-10·ω₀ (damped fixed point, relaxation 0.5).
    s_max:
        Series truncation (ignored by the closed engine).
    include_corrections:
        Assemble the first-order 1/ω_d corrections; switch off for the
        plain rotating-wave values.
    engine:
        "series" or "closed"; default picks closed where a branch
        decomposition exists.
    """
    model = frame.model
    if engine is None:
        engine = "series" if isinstance(model, SnailArrayStrayL) else "closed"
    if omega_d is None:
        if not isinstance(drive, (CapacitiveDrive, FluxDrive)):
            raise ValueError("raw displacement drives need an explicit omega_d")
        omega_d = drive.omega_d

    def assemble(w_d: float) -> KerrCatParams:
        amps, pi_scalar = _kerr_cat_amplitudes(frame, drive, w_d)
        cache: Dict[Tuple[int, int, int], float] = {}

        def c(n: int, l: int, p: int) -> float:
            key = (n, l, p)
            if key not in cache:
                idx = ScIndex(n, l, p)
                if engine == "series":
                    cache[key] = sc_series(frame, amps, idx, s_max=s_max).value
                else:
                    cache[key] = sc_closed(model, frame, amps, idx).value
            return cache[key]

        corr = (
            first_order_corrections(c, w_d)
            if include_corrections
            else KerrCorrections(0.0, 0.0, 0.0)
        )
        omega_q = frame.omega0 + c(1, 0, 0) + corr.delta1
        kerr = -c(2, 0, 0) + corr.k1
        eps2 = c(0, 2, 1) + corr.eps21
        delta = omega_q - 0.5 * w_d
        cat_size = abs(eps2) / abs(kerr) if kerr != 0.0 else math.inf
        return KerrCatParams(
            omega_q=omega_q,
            kerr=kerr,
            eps2=eps2,
            delta=delta,
            cat_size=cat_size,
            chaos_ratio=abs(eps2) / omega_q,
            gamma=0.0 if kerr > 0.0 else math.pi,
            omega_d=w_d,
            pi_tilde=pi_scalar,
            corrections=corr,
        )

    if not fix_detuning_zero:
        return assemble(omega_d)

    w_d = float(omega_d)
    for _ in range(200):
        params = assemble(w_d)
        if abs(params.delta) < 1e-10 * frame.omega0:
            return params
        w_d = w_d + 0.5 * (2.0 * params.omega_q - w_d)
    raise FixedPointDiverged(
        f"detuning lock not reached after 200 iterations (|delta| = {abs(params.delta):.3e})"
    )


# ---------------------------------------------------------------------------
# Chaos heuristics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChaosAssessment:
    ratio: float
    classification: str
    layer_width: float


def classify_ratio(ratio: float) -> str:
    if ratio < CHAOS_ONSET_LOW:
        return "regular"
    if ratio <= CHAOS_ONSET_HIGH:
        return "onset"
    return "chaotic"


def chaos_ratio(params: KerrCatParams) -> ChaosAssessment:
    """Squeezing-to-frequency ratio with its heuristic classification.

    The layer width x·e^{−x} with x = ω_q/(4ε₂) estimates the phase-space
    fraction occupied by the stochastic layer around the separatrix.
    """
    if params.omega_q <= 0.0:
        raise ValueError("chaos ratio needs a positive mode frequency")
    eps2 = abs(params.eps2)
    ratio = eps2 / params.omega_q
    if eps2 == 0.0:
        width = 0.0
    else:
        x = params.omega_q / (4.0 * eps2)
        width = x * math.exp(-x)
    return ChaosAssessment(ratio=ratio, classification=classify_ratio(ratio), layer_width=width)


# ---------------------------------------------------------------------------
# Weak-drive asymmetric-loop closed forms
# ---------------------------------------------------------------------------


def weak_drive_squid_check(
    model: SquidArray, frame: ModeFrame, phi_ac0: float
) -> Tuple[float, float]:
    """Closed-form (K, ε₂) of a flux-pumped loop array in the weak-pump limit.

    K = E_C e^{−φ_zpf²/(2M²)}/(2M²) and
    ε₂ = (φ_ac0/2)·√(2E_C/(M·Ẽ_J))·e^{−φ_zpf²/(2M²)}·∂Ẽ_J/∂φ_dc,
    with Ẽ_J the bias-dependent effective junction energy.
    """
    m = model.M
    damp = math.exp(-frame.phi_zpf**2 / (2.0 * m * m))
    k_wd = frame.e_c * damp / (2.0 * m * m)
    e_tilde, _ = squid_statics(model)
    root = 1.0 + model.alpha_s**2 + 2.0 * model.alpha_s * math.cos(model.phi_dc)
    de_dphi = -model.e_j * model.alpha_s * math.sin(model.phi_dc) / math.sqrt(root)
    eps2_wd = 0.5 * phi_ac0 * math.sqrt(2.0 * frame.e_c / (m * e_tilde)) * damp * de_dphi
    return k_wd, eps2_wd


# ---------------------------------------------------------------------------
# Beam splitter between two detuned cavities through a driven coupler
# ---------------------------------------------------------------------------

# Index shorthand: (n_a, l_a, n_b, l_b, n_c, l_c, p).
_I = lambda *a: a  # noqa: E731 - compact literal for the large tables below

# Each entry: (coefficient, first index, second index, denominator as
# (multiple of dressed coupler frequency, multiple of drive frequency)).
_G_AB_TERMS = (
    (-1.0, _I(0, 1, 0, 1, 0, 0, 2), _I(0, 2, 0, 0, 0, 0, 0), (1, 0)),
    (-2.0, _I(0, 1, 0, 1, 0, 0, 1), _I(0, 2, 0, 0, 0, 0, 1), (2, -1)),
    (-1.0, _I(0, 1, 0, 1, 0, 0, 0), _I(0, 2, 0, 0, 0, 0, 2), (1, -2)),
    (-2.0, _I(0, 1, 0, 0, 0, 0, 2), _I(0, 2, 0, 1, 0, 0, 0), (1, 2)),
    (-2.0, _I(0, 1, 0, 0, 0, 0, 1), _I(0, 2, 0, 1, 0, 0, 1), (1, 1)),
    (-1.0, _I(0, 1, 0, 1, 0, 0, 1), _I(1, 0, 0, 0, 0, 0, 1), (0, 1)),
    (-1.0, _I(0, 1, 0, 0, 0, 0, 2), _I(1, 0, 0, 1, 0, 0, 0), (1, -2)),
    (-1.0, _I(0, 1, 0, 0, 0, 0, 1), _I(1, 0, 0, 1, 0, 0, 1), (1, -1)),
)

_G_AC_TERMS = (
    (-2.0, _I(0, 1, 0, 0, 0, 1, 2), _I(0, 2, 0, 0, 0, 0, 1), (2, -1)),
    (-1.0, _I(0, 1, 0, 0, 0, 1, 1), _I(0, 2, 0, 0, 0, 0, 2), (1, -1)),
    (-2.0, _I(0, 1, 0, 0, 0, 0, 3), _I(0, 2, 0, 0, 0, 1, 0), (1, 3)),
    (-2.0, _I(0, 1, 0, 0, 0, 0, 2), _I(0, 2, 0, 0, 0, 1, 1), (1, 2)),
    (-1.0, _I(0, 1, 0, 0, 0, 1, 2), _I(1, 0, 0, 0, 0, 0, 1), (0, 1)),
    (-1.0, _I(0, 1, 0, 0, 0, 1, 1), _I(1, 0, 0, 0, 0, 0, 2), (0, 2)),
    (-1.0, _I(0, 1, 0, 0, 0, 0, 3), _I(1, 0, 0, 0, 0, 1, 0), (1, -3)),
    (-1.0, _I(0, 1, 0, 0, 0, 0, 2), _I(1, 0, 0, 0, 0, 1, 1), (1, -2)),
)

_DELTA_A_TERMS = (
    (-4.0, _I(0, 1, 0, 0, 0, 0, 0), _I(1, 1, 0, 0, 0, 0, 0), (1, 0)),
    (-2.0, _I(1, 1, 0, 0, 0, 0, 0), _I(1, 1, 0, 0, 0, 0, 0), (1, 0)),
    (-4.0, _I(0, 1, 0, 0, 0, 0, 1), _I(1, 1, 0, 0, 0, 0, 1), (1, -1)),
    (-4.0, _I(0, 1, 0, 0, 0, 0, 1), _I(1, 1, 0, 0, 0, 0, 1), (1, 1)),
    (-2.0, _I(1, 1, 0, 0, 0, 0, 1), _I(1, 1, 0, 0, 0, 0, 1), (1, -1)),
    (-2.0, _I(1, 1, 0, 0, 0, 0, 1), _I(1, 1, 0, 0, 0, 0, 1), (1, 1)),
)

_CHI_BC_TERMS = (
    (1.0, _I(0, 1, 0, 1, 0, 1, 0), _I(0, 1, 0, 1, 0, 1, 0), (1, -5)),
    (-1.0, _I(0, 1, 0, 1, 0, 1, 0), _I(0, 1, 0, 1, 0, 1, 0), (3, -5)),
    (-1.0, _I(0, 1, 0, 1, 0, 1, 0), _I(0, 1, 0, 1, 0, 1, 0), (1, -1)),
    (-1.0, _I(0, 1, 0, 1, 0, 1, 0), _I(0, 1, 0, 1, 0, 1, 0), (1, 1)),
    (-2.0, _I(0, 1, 0, 0, 0, 1, 0), _I(0, 1, 1, 0, 0, 1, 0), (2, -3)),
    (-2.0, _I(0, 1, 0, 0, 0, 1, 0), _I(0, 1, 1, 0, 0, 1, 0), (0, 3)),
    (1.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (1, -6)),
    (-2.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (1, 0)),
    (1.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (1, -4)),
    (-1.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (3, -4)),
    (-4.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (3, -6)),
    (-1.0, _I(0, 1, 0, 1, 0, 1, 1), _I(0, 1, 0, 1, 0, 1, 1), (1, 2)),
    (-1.0, _I(0, 1, 0, 1, 0, 0, 0), _I(0, 1, 0, 1, 1, 0, 0), (1, -1)),
    (-1.0, _I(0, 1, 0, 1, 0, 0, 0), _I(0, 1, 0, 1, 1, 0, 0), (0, 1)),
    (-2.0, _I(0, 1, 0, 0, 1, 0, 0), _I(0, 1, 1, 0, 0, 0, 0), (1, 0)),
    (-2.0, _I(0, 1, 0, 0, 1, 0, 1), _I(0, 1, 1, 0, 0, 0, 1), (1, -1)),
    (-2.0, _I(0, 1, 0, 0, 1, 0, 1), _I(0, 1, 1, 0, 0, 0, 1), (1, 1)),
)

BS_CORRECTION_TERMS = {
    "g_ab": _G_AB_TERMS,
    "g_ac": _G_AC_TERMS,
    "delta_a": _DELTA_A_TERMS,
    "chi_bc": _CHI_BC_TERMS,
}


def _eval_terms(terms, c3, omega_a_dressed: float, omega_d: float) -> float:
    total = 0.0
    for coef, idx1, idx2, (mult_a, mult_d) in terms:
        denom = mult_a * omega_a_dressed + mult_d * omega_d
        if abs(denom) < 1e-9 * omega_d:
            raise ResonanceTooClose(
                f"correction denominator {mult_a}·ω_a' + {mult_d}·ω_d vanishes"
            )
        total += coef * c3(idx1) * c3(idx2) / denom
    return total


@dataclass(frozen=True)
class BeamSplitterParams:
    """Drive-activated exchange coupling between two far-detuned cavities."""

    g_bs: float
    chi_bc: float
    g_ab: float
    g_ac: float
    delta_a: float
    delta_tilde: float
    flag_ab: bool
    flag_ac: bool
    omega_d: float = 0.0
    pi_tilde: float = 0.0
    g_bc: float = 0.0
    xi_b: float = 0.0
    xi_c: float = 0.0
    omega_a_dressed: float = 0.0
    omega_b_dressed: float = 0.0
    omega_c_dressed: float = 0.0

    def to_record(self) -> Dict[str, float]:
        return {
            "g_BS_MHz": 1e3 * self.g_bs / TWO_PI,
            "chi_bc_Hz": 1e9 * self.chi_bc / TWO_PI,
            "g_ab_MHz": 1e3 * self.g_ab / TWO_PI,
            "g_ac_MHz": 1e3 * self.g_ac / TWO_PI,
            "Delta_a_MHz": 1e3 * self.delta_a / TWO_PI,
            "delta_tilde_MHz": 1e3 * self.delta_tilde / TWO_PI,
            "omega_d_GHz": self.omega_d / TWO_PI,
            "pi_tilde": self.pi_tilde,
            "flag_ab": float(self.flag_ab),
            "flag_ac": float(self.flag_ac),
        }


def beam_splitter(
    frame: ModeFrame,
    *,
    omega_b: float,
    omega_c: float,
    g_b: float,
    g_c: float,
    omega_amp: float,
    s_max: int = DEFAULT_S_MAX,
    engine: str = "closed",
    include_corrections: bool = True,
    flag_threshold: float = 0.25,
    min_detuning: Optional[float] = None,
    dispersive_limit: float = 0.3,
) -> BeamSplitterParams:
    """Exchange coupling activated by driving the coupler at ω_c' − ω_b'.

    The coupler mode (frame) hybridizes weakly with both cavities; its
    nonlinearity, displaced by the charge drive, generates the exchange
    g_BS = g_bc − 2·g_ab·g_ac/δ̃ where δ̃ = ω_a' + ω_b' − 2ω_d + Δ_a is the
    Stark-shifted distance to the nearest parasitic resonance.

    Parameters are rad/ns; ``omega_amp`` is the charge-drive strength Ω_d.
    """
    model = frame.model
    omega_a = frame.omega0
    for g, omega, name in ((g_b, omega_b, "b"), (g_c, omega_c, "c")):
        if abs(g / (omega - omega_a)) > dispersive_limit:
            raise DispersiveViolated(
                f"cavity {name} hybridization g/Δ = {abs(g / (omega - omega_a)):.3f} "
                f"exceeds {dispersive_limit}"
            )

    omega_a_d = omega_a + g_b**2 / (omega_a - omega_b) + g_c**2 / (omega_a - omega_c)
    omega_b_d = omega_b - g_b**2 / (omega_a - omega_b)
    omega_c_d = omega_c - g_c**2 / (omega_a - omega_c)
    xi_b = 2.0 * g_b * omega_b / (omega_b**2 - omega_a**2)
    xi_c = 2.0 * g_c * omega_c / (omega_c**2 - omega_a**2)

    omega_d = omega_c_d - omega_b_d
    pi_tilde = omega_amp * omega_d / (omega_d**2 - omega_a_d**2)

    cache: Dict[Tuple[int, ...], float] = {}

    def c3(idx_tuple) -> float:
        if idx_tuple not in cache:
            idx = ScIndex3(*idx_tuple)
            cache[idx_tuple] = sc_three_mode(
                model, frame, xi_b, xi_c, pi_tilde, idx, engine=engine, s_max=s_max
            ).value
        return cache[idx_tuple]

    g_bc = c3((0, 0, 0, 1, 0, 1, 1))
    g_ab = c3((0, 1, 0, 1, 0, 0, 2))
    g_ac = c3((0, 1, 0, 0, 0, 1, 3))
    delta_a = c3((1, 0, 0, 0, 0, 0, 0))
    chi_bc = c3((0, 0, 0, 1, 0, 1, 0))
    if include_corrections:
        g_ab += _eval_terms(_G_AB_TERMS, c3, omega_a_d, omega_d)
        g_ac += _eval_terms(_G_AC_TERMS, c3, omega_a_d, omega_d)
        delta_a += _eval_terms(_DELTA_A_TERMS, c3, omega_a_d, omega_d)
        chi_bc += _eval_terms(_CHI_BC_TERMS, c3, omega_a_d, omega_d)

    delta = omega_a_d + omega_b_d - 2.0 * omega_d
    delta_tilde = delta + delta_a
    floor = min_detuning if min_detuning is not None else 1e-9 * omega_d
    if abs(delta_tilde) < floor:
        raise ResonanceTooClose(
            f"parasitic detuning |δ̃| = {abs(delta_tilde):.3e} below {floor:.3e}"
        )
    g_bs = g_bc - 2.0 * g_ab * g_ac / delta_tilde

    return BeamSplitterParams(
        g_bs=g_bs,
        chi_bc=chi_bc,
        g_ab=g_ab,
        g_ac=g_ac,
        delta_a=delta_a,
        delta_tilde=delta_tilde,
        flag_ab=abs(g_ab / delta_tilde) > flag_threshold,
        flag_ac=abs(g_ac / delta_tilde) > flag_threshold,
        omega_d=omega_d,
        pi_tilde=pi_tilde,
        g_bc=g_bc,
        xi_b=xi_b,
        xi_c=xi_c,
        omega_a_dressed=omega_a_d,
        omega_b_dressed=omega_b_d,
        omega_c_dressed=omega_c_d,
    )


# ---------------------------------------------------------------------------
# Feature detection on swept curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DownturnReport:
    found: bool
    position: Optional[float] = None
    kind: Optional[str] = None


def detect_downturn(
    x_values, y_values, *, drop_fraction: float = 0.3, floor_fraction: float = 0.05
) -> DownturnReport:
    """Detect a sign change or a sharp collapse along a swept curve.

    A sign change between consecutive material samples, or a fall below
    (1 − drop_fraction) of the running peak magnitude, counts as a feature.
    Samples below ``floor_fraction`` of the global magnitude scale cannot
    by themselves flag either.
    """
    xs = [float(v) for v in x_values]
    ys = [float(v) for v in y_values]
    if len(xs) != len(ys) or len(xs) < 3:
        raise ValueError("need at least three aligned samples")
    scale = max(abs(v) for v in ys)
    if scale == 0.0:
        return DownturnReport(found=False)
    floor = floor_fraction * scale
    peak = abs(ys[0])
    for i in range(1, len(ys)):
        if abs(ys[i - 1]) > floor and abs(ys[i]) > floor and ys[i - 1] * ys[i] < 0.0:
            return DownturnReport(found=True, position=xs[i], kind="sign-change")
        if peak > floor and abs(ys[i]) < (1.0 - drop_fraction) * peak:
            return DownturnReport(found=True, position=xs[i], kind="collapse")
        peak = max(peak, abs(ys[i]))
    return DownturnReport(found=False)
