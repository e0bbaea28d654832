"""Supercoefficient engines.

A supercoefficient C_{nl,p} is the amplitude of the normal-ordered process
``(a†^n a^{n+l} + a†^{n+l} a^n)(e^{ip(ω_d t+γ)} + e^{-ip(ω_d t+γ)})`` in the
displaced-frame Hamiltonian of a driven Josephson circuit. Two independent
engines are provided:

* :func:`sc_series` — truncated Taylor-shell sum over the potential
  expansion, valid for every circuit family (including stray inductors);
* :func:`sc_closed` — Bessel/Gaussian closed form per cosine branch, valid
  for branch-sum circuits.

Conventions
-----------
Both engines return the *unhalved* amplitude. When assembling a Hamiltonian,
multiply by 1/2 if l = 0 and independently by 1/2 if p = 0 (see
:func:`hamiltonian_halving`); formulas for effective parameters in
:mod:`drivejj.effective` consume the raw values directly.

Drives are passed as effective displacement amplitudes: a scalar Π̃ (same
displacement through every branch, the capacitive case) or a pair
(Π_a, Π_b) of per-branch-family amplitudes (the flux-drive case, see
:func:`flux_drive_amplitudes`). Phases (γ) never affect the amplitude itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import _kernels as K
from .circuits import (
    CircuitModel,
    HigherHarmonics,
    ModeFrame,
    SnailArray,
    SnailArrayStrayL,
    SquidArray,
    TwoCosine,
)
from .errors import NotConverged, OnResonance, UnsupportedModel

__all__ = [
    "ScIndex",
    "ScIndex3",
    "ScIndexMulti",
    "ScValue",
    "CapacitiveDrive",
    "FluxDrive",
    "MultiDrive",
    "flux_drive_amplitudes",
    "sc_series",
    "sc_closed",
    "sc_higher_harmonics",
    "sc_multidrive",
    "sc_three_mode",
    "squid_compact_amplitude",
    "sc_closed_squid_compact",
    "sc_table",
    "hamiltonian_halving",
    "DEFAULT_S_MAX",
]

DEFAULT_S_MAX = 13

_CONV_WARN = 1e-6


@dataclass(frozen=True)
class ScIndex:
    """Single-mode index (n, l, p); the minimal Taylor order is 2n+l+p."""

    n: int
    l: int
    p: int

    def __post_init__(self):
        if self.n < 0 or self.l < 0 or self.p < 0:
            raise ValueError(f"negative index component in {self}")

    @property
    def q0(self) -> int:
        return 2 * self.n + self.l + self.p


@dataclass(frozen=True)
class ScIndex3:
    """Three-mode index (n_a, l_a, n_b, l_b, n_c, l_c, p)."""

    n_a: int
    l_a: int
    n_b: int
    l_b: int
    n_c: int
    l_c: int
    p: int

    def __post_init__(self):
        for v in (self.n_a, self.l_a, self.n_b, self.l_b, self.n_c, self.l_c, self.p):
            if v < 0:
                raise ValueError(f"negative index component in {self}")

    @property
    def weight_a(self) -> int:
        return 2 * self.n_a + self.l_a

    @property
    def weight_b(self) -> int:
        return 2 * self.n_b + self.l_b

    @property
    def weight_c(self) -> int:
        return 2 * self.n_c + self.l_c

    @property
    def q0(self) -> int:
        return self.weight_a + self.weight_b + self.weight_c + self.p


@dataclass(frozen=True)
class ScIndexMulti:
    """Single-mode index with one harmonic index per drive."""

    n: int
    l: int
    ps: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or self.l < 0 or any(p < 0 for p in self.ps):
            raise ValueError(f"negative index component in {self}")

    @property
    def q0(self) -> int:
        return 2 * self.n + self.l + sum(self.ps)


@dataclass(frozen=True)
class ScValue:
    """A supercoefficient with its provenance.

    ``convergence`` is |last included shell| / |value| for series results and
    None for closed-form results.
    """

    value: float
    index: Union[ScIndex, ScIndex3, ScIndexMulti]
    engine: str
    convergence: Optional[float] = None


def hamiltonian_halving(idx) -> float:
    """Multiplier owed by the Hamiltonian assembler for a raw SC value.

    1/2 when every ladder imbalance l is zero (the two normal-ordered
    operators coincide), and independently 1/2 when p = 0 (the two drive
    phases coincide).
    """
    if isinstance(idx, ScIndex3):
        all_l_zero = idx.l_a == 0 and idx.l_b == 0 and idx.l_c == 0
        p = idx.p
    elif isinstance(idx, ScIndexMulti):
        all_l_zero = idx.l == 0
        p = sum(idx.ps)
    else:
        all_l_zero = idx.l == 0
        p = idx.p
    factor = 1.0
    if all_l_zero:
        factor *= 0.5
    if p == 0:
        factor *= 0.5
    return factor


# ---------------------------------------------------------------------------
# Drive configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CapacitiveDrive:
    """Charge drive Ω_d(a+a†)cos(ω_d t + θ) in linear response."""

    omega_amp: float
    omega_d: float
    theta: float = 0.0

    def pi_tilde(self, frame: ModeFrame) -> float:
        det = self.omega_d**2 - frame.omega0**2
        if abs(det) < 1e-9 * frame.omega0**2:
            raise OnResonance(
                f"drive at ω_d={self.omega_d:.6g} within linear-response "
                f"divergence of ω0={frame.omega0:.6g}"
            )
        return self.omega_amp * self.omega_d / det

    @property
    def gamma(self) -> float:
        return self.theta - math.pi / 2.0

    def amplitudes(self, model, frame):
        return self.pi_tilde(frame)


@dataclass(frozen=True)
class FluxDrive:
    """External-flux modulation φ_e(t) = φ_e + 2φ_ac0 cos(ω_d t + γ)."""

    phi_ac0: float
    omega_d: float
    gamma: float = 0.0

    def amplitudes(self, model, frame) -> Tuple[float, float]:
        return flux_drive_amplitudes(model, frame, self.phi_ac0, self.omega_d)


@dataclass(frozen=True)
class MultiDrive:
    """Several simultaneous drives; at most one may modulate the flux."""

    drives: Tuple[Union[CapacitiveDrive, FluxDrive], ...]

    def __post_init__(self):
        n_flux = sum(isinstance(d, FluxDrive) for d in self.drives)
        if n_flux > 1:
            raise ValueError("at most one flux drive is supported")
        if not self.drives:
            raise ValueError("MultiDrive needs at least one drive")


def flux_drive_amplitudes(
    model: CircuitModel, frame: ModeFrame, phi_ac0: float, omega_d: float
) -> Tuple[float, float]:
    """Effective per-branch displacement amplitudes for a flux drive.

    Includes the linear-response correction from the mode being dragged by
    the modulated flux: with X_i = E_J c₂^(i) φ_zpf² ω₀ / (2(ω_d² − ω₀²)),

        Π_a = 2φ_ac0 (ρ_a (1 − X_a) − ρ_b X_b)
        Π_b = 2φ_ac0 (ρ_b (1 − X_b) − ρ_a X_a)

    where ρ_i is the flux-to-phase ratio (flux coefficient / branch
    frequency) of family i. The J Bessel argument downstream is f_T·Π_T.
    """
    x = flux_mode_corrections(model, frame, omega_d)
    freqs, fluxc = model.flux_coeffs()
    rho = np.where(freqs != 0.0, fluxc / freqs, 0.0)
    pi_a = 2.0 * phi_ac0 * (rho[0] * (1.0 - x[0]) - rho[1] * x[1])
    pi_b = 2.0 * phi_ac0 * (rho[1] * (1.0 - x[1]) - rho[0] * x[0])
    return float(pi_a), float(pi_b)


def flux_mode_corrections(
    model: CircuitModel, frame: ModeFrame, omega_d: float
) -> np.ndarray:
    """Per-branch-family drag factors X_i = E_J c₂^(i) φ_zpf² ω₀ / (2(ω_d²−ω₀²)).

    Since the family curvatures c₂^(i) sum to c₂ and E_J c₂ φ_zpf² = ω₀/2,
    the total correction obeys |ΣX_i| ≤ 1/(4((ω_d/ω₀)²−1)) whenever every
    family curves upward at the minimum.
    """
    if not isinstance(model, (SquidArray, TwoCosine, SnailArray)) or isinstance(
        model, SnailArrayStrayL
    ):
        raise UnsupportedModel(f"flux drive not defined for {type(model).__name__}")
    det = omega_d**2 - frame.omega0**2
    if abs(det) < 1e-9 * frame.omega0**2:
        raise OnResonance("flux drive resonant with the mode")
    energies, b_freqs, offsets = model.branches()
    psis = b_freqs * frame.phi0 + offsets
    # per-family curvature at the minimum, in units of E_J
    c2 = np.array(
        [
            energies[t] * b_freqs[t] ** 2 * (-math.cos(psis[t])) / frame.e_j
            for t in range(len(energies))
        ]
    )
    return frame.e_j * c2 * frame.phi_zpf**2 * frame.omega0 / (2.0 * det)


# ---------------------------------------------------------------------------
# Engine plumbing
# ---------------------------------------------------------------------------


def _series_rows_and_xs(frame: ModeFrame, drive, s_max: int):
    """Taylor rows d[t,s] and halved per-row drive amplitudes.

    Scalar drives use the single row d[0,s] = c_s E_J, which is exact for
    every model because f_T^S carries all branch-frequency powers. Pair
    drives need explicit per-branch rows.
    """
    if np.isscalar(drive):
        fr = frame.with_c_order(s_max)
        rows = (fr.c_list[: s_max + 1] * fr.e_j)[None, :]
        xs = np.array([0.5 * float(drive)])
        return rows, xs
    if frame.branch_energies is None:
        raise UnsupportedModel(
            "per-branch drive amplitudes require a cosine-branch circuit"
        )
    if len(drive) != len(frame.branch_energies):
        raise ValueError(
            f"{len(drive)} drive amplitudes for {len(frame.branch_energies)} branches"
        )
    rows = K.branch_rows(frame.branch_energies, frame.branch_freqs, frame.branch_psis, s_max)
    xs = 0.5 * np.asarray(drive, dtype=float)
    return rows, xs


def _closed_pis(frame: ModeFrame, drive) -> np.ndarray:
    if np.isscalar(drive):
        return np.full(len(frame.branch_energies), float(drive))
    if len(drive) != len(frame.branch_energies):
        raise ValueError(
            f"{len(drive)} drive amplitudes for {len(frame.branch_energies)} branches"
        )
    return np.asarray(drive, dtype=float)


def _check_limits(q0: int, p_max: int, s_max: int):
    limit = len(K.FACT) - 1
    # largest factorial argument is k+p with k ≤ (s_max − q0)/2
    k_top = max(s_max - q0, 0) // 2
    if s_max < 3 or s_max > limit or k_top + p_max > limit:
        raise ValueError(
            f"S_max={s_max} with p={p_max} exceeds the factorial table (max {limit})"
        )


def _shell_scan(rows, xs, y, q0, p, s_max) -> Tuple[float, list]:
    start = K._series_start(q0, 3)
    shells = []
    for s in range(start, s_max + 1, 2):
        shells.append(K.series_sum(rows, xs, y, q0, p, s, s))
    return float(sum(shells)), shells


def _convergence(value: float, shells: list) -> float:
    if not shells:
        return 0.0
    last = abs(shells[-1])
    if value == 0.0:
        return 0.0 if last == 0.0 else math.inf
    return last / abs(value)


def _warn_convergence(
    conv: float,
    shells: list,
    pis,
    phi_zpf: float,
    tail_abs: float = math.inf,
    floor: float = 0.0,
):
    if tail_abs <= floor:
        # The neglected tail sits below the resolution floor; relative ratios
        # carry no signal for amplitudes this far under the energy scale.
        return
    if conv > _CONV_WARN:
        warnings.warn(
            f"series tail ratio {conv:.2e} above {_CONV_WARN:.0e}; "
            "consider raising S_max",
            RuntimeWarning,
            stacklevel=3,
        )
    # Only shells that still matter can flag a suspicious truncation; tiny
    # tail members trade places freely as signs alternate.
    floor = _CONV_WARN * max((abs(s) for s in shells), default=0.0)
    mags = [abs(s) for s in shells if abs(s) > floor]
    if (
        len(mags) >= 2
        and phi_zpf <= 0.5
        and np.max(np.abs(pis)) <= 2.0
        and any(b > a for a, b in zip(mags, mags[1:]))
    ):
        warnings.warn(
            "shell magnitudes not monotone inside the nominal convergence "
            "region; the truncation may be unreliable",
            RuntimeWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------


def sc_series(
    frame: ModeFrame,
    drive,
    idx: ScIndex,
    s_max: int = DEFAULT_S_MAX,
    rel_tol: Optional[float] = None,
) -> ScValue:
    """Supercoefficient via the truncated Taylor-shell series.

    Parameters
    ----------
    frame:
        Mode frame of the circuit.
    drive:
        Scalar Π̃, or a per-branch pair (Π_a, Π_b) from
        :func:`flux_drive_amplitudes`.
    idx:
        (n, l, p) index.
    s_max:
        Highest Taylor order of the potential retained (shells S with
        max(3, 2n+l+p) ≤ S ≤ S_max and matching parity contribute).
    rel_tol:
        If given, raise NotConverged when the last shell exceeds this
        fraction of the value.
    """
    _check_limits(idx.q0, idx.p, s_max)
    rows, xs = _series_rows_and_xs(frame, drive, s_max)
    y = 0.5 * frame.phi_zpf**2
    total, shells = _shell_scan(rows, xs, y, idx.q0, idx.p, s_max)
    pref = frame.phi_zpf ** (2 * idx.n + idx.l) / (K.FACT[idx.n] * K.FACT[idx.n + idx.l])
    value = pref * total
    conv = _convergence(value, shells)
    tail_abs = pref * abs(shells[-1]) if shells else 0.0
    _warn_convergence(conv, shells, 2.0 * xs, frame.phi_zpf, tail_abs, 1e-12 * frame.e_j)
    if rel_tol is not None and conv > rel_tol:
        raise NotConverged(
            f"last shell ratio {conv:.3e} exceeds rel_tol={rel_tol:.3e} for {idx}"
        )
    return ScValue(value=value, index=idx, engine="series", convergence=conv)


def _closed_core(frame, drive, q0, pow_nl, p, odd, pref, gauss2, idx, engine_name):
    if frame.branch_energies is None:
        raise UnsupportedModel("closed form requires a cosine-branch circuit")
    pis = _closed_pis(frame, drive)
    sign = -1.0 if (q0 // 2) % 2 else 1.0
    total = K.closed_branch(
        frame.branch_energies, frame.branch_freqs, frame.branch_psis, pis, gauss2, pow_nl, p, odd
    )
    value = sign * total
    if q0 <= 2:
        # remove the Taylor orders S ≤ 2 absorbed by the harmonic frame
        rows = K.branch_rows(frame.branch_energies, frame.branch_freqs, frame.branch_psis, 2)
        value -= K.series_sum(rows, 0.5 * pis, gauss2, q0, p, 0, 2)
    return ScValue(value=float(pref * value), index=idx, engine=engine_name)


def sc_closed(model: CircuitModel, frame: ModeFrame, drive, idx: ScIndex) -> ScValue:
    """Supercoefficient via the Bessel/Gaussian closed form.

    Evaluates, per cosine branch T with energy A_T, frequency f_T and static
    phase ψ_T,

        C = (−1)^⌊q0/2⌋ φ^{2n+l}/(n!(n+l)!) Σ_T A_T f_T^{2n+l}
            · J_p(f_T Π_T) e^{−φ² f_T²/2} · {cos ψ_T | −sin ψ_T}

    with cos for even l+p and −sin for odd, q0 = 2n+l+p. For q0 ≤ 2 the
    Taylor orders S < 3 (absorbed into the harmonic frame) are subtracted
    exactly.
    """
    if isinstance(model, SnailArrayStrayL):
        raise UnsupportedModel("closed form undefined with a stray inductor; use sc_series")
    odd = (idx.l + idx.p) % 2 == 1
    pref = frame.phi_zpf ** (2 * idx.n + idx.l) / (K.FACT[idx.n] * K.FACT[idx.n + idx.l])
    gauss2 = 0.5 * frame.phi_zpf**2
    return _closed_core(
        frame, drive, idx.q0, 2 * idx.n + idx.l, idx.p, odd, pref, gauss2, idx, "closed"
    )


def sc_higher_harmonics(
    model: HigherHarmonics, frame: ModeFrame, drive, idx: ScIndex
) -> ScValue:
    """Closed form for junction potentials with higher harmonics.

    Each harmonic m contributes a branch with frequency m·a₁, so the Bessel
    arguments become m·a₁·Π̃ and the Gaussian factors e^{−φ² a₁² m²/2}; this
    is the ordinary closed form over the harmonic branch list.
    """
    if not isinstance(model, HigherHarmonics):
        raise UnsupportedModel("sc_higher_harmonics expects a HigherHarmonics model")
    if not np.isscalar(drive):
        raise UnsupportedModel("per-branch flux amplitudes not defined for harmonic stacks")
    return sc_closed(model, frame, drive, idx)


def squid_compact_amplitude(
    model: SquidArray, frame: ModeFrame, drive, p: int
) -> Tuple[float, float]:
    """Drive-dressed SQUID amplitude (𝒜_p, λ'_p).

    The two equal-frequency branches combine into a single effective cosine:
    𝒜_p e^{−iλ'_p} = α_s J_p(Π_a/M) e^{−i r_a φ_dc} + J_p(Π_b/M) e^{i r_b φ_dc}.
    """
    pis = _closed_pis(frame, drive)
    j_a = K.bessel_jn(p, pis[0] / model.M)
    j_b = K.bessel_jn(p, pis[1] / model.M)
    re = model.alpha_s * j_a * math.cos(model.r_a * model.phi_dc) + j_b * math.cos(
        model.r_b * model.phi_dc
    )
    im = model.alpha_s * j_a * math.sin(model.r_a * model.phi_dc) - j_b * math.sin(
        model.r_b * model.phi_dc
    )
    return math.hypot(re, im), math.atan2(im, re)


def sc_closed_squid_compact(
    model: SquidArray, frame: ModeFrame, drive, idx: ScIndex
) -> ScValue:
    """Alternate SQUID closed form through the compact (𝒜_p, λ'_p) combination.

    Only the generic branch q0 = 2n+l+p ≥ 3 is provided here; the primary
    :func:`sc_closed` covers low orders.
    """
    if idx.q0 <= 2:
        raise ValueError("compact SQUID form only covers 2n+l+p >= 3")
    amp, lam_p = squid_compact_amplitude(model, frame, drive, idx.p)
    m = model.M
    pow_nl = 2 * idx.n + idx.l
    mag = (
        frame.e_j
        * frame.phi_zpf**pow_nl
        * math.exp(-frame.phi_zpf**2 / (2.0 * m * m))
        * amp
        / (K.FACT[idx.n] * K.FACT[idx.n + idx.l] * float(m) ** (pow_nl - 1))
    )
    angle = frame.phi0 / m - lam_p
    if (idx.l + idx.p) % 2 == 0:
        sign = -1.0 if (idx.q0 // 2) % 2 == 0 else 1.0  # (−1)^{⌊q0/2⌋+1}
        value = sign * mag * math.cos(angle)
    else:
        sign = -1.0 if (idx.q0 // 2) % 2 else 1.0  # (−1)^{⌊q0/2⌋}
        value = sign * mag * math.sin(angle)
    return ScValue(value=value, index=idx, engine="closed")


def sc_multidrive(
    frame: ModeFrame,
    drives,
    idx: ScIndexMulti,
    s_max: int = DEFAULT_S_MAX,
    engine: str = "series",
    model: Optional[CircuitModel] = None,
    rel_tol: Optional[float] = None,
) -> ScValue:
    """Supercoefficient with several simultaneous drives.

    ``drives`` is a MultiDrive (amplitudes derived per drive via the frame
    and, for a flux drive, the model) or a plain sequence of amplitudes —
    scalars for capacitive drives, a pair for the flux drive. Each drive i
    carries its own harmonic index idx.ps[i]; the series acquires a product
    over per-drive shell indices and the closed form a product of Bessel
    factors.
    """
    if isinstance(drives, MultiDrive):
        amps = []
        for d in drives.drives:
            if isinstance(d, FluxDrive):
                if model is None:
                    raise ValueError("flux drive amplitudes need the circuit model")
                amps.append(d.amplitudes(model, frame))
            else:
                amps.append(d.amplitudes(None, frame))
    else:
        amps = list(drives)
    if len(amps) != len(idx.ps):
        raise ValueError(f"{len(amps)} drives but {len(idx.ps)} harmonic indices")

    q0 = idx.q0
    _check_limits(q0, sum(idx.ps), s_max)
    pref = frame.phi_zpf ** (2 * idx.n + idx.l) / (K.FACT[idx.n] * K.FACT[idx.n + idx.l])

    if engine == "closed":
        if frame.branch_energies is None:
            raise UnsupportedModel("closed form requires a cosine-branch circuit")
        pis = np.array([_closed_pis(frame, a) for a in amps])  # (drives, branches)
        sign = -1.0 if (q0 // 2) % 2 else 1.0
        odd = (idx.l + sum(idx.ps)) % 2 == 1
        total = 0.0
        f = frame.branch_freqs
        for t in range(len(f)):
            bes = 1.0
            for i, p in enumerate(idx.ps):
                bes *= K.bessel_jn(p, f[t] * pis[i, t])
            trig = -math.sin(frame.branch_psis[t]) if odd else math.cos(frame.branch_psis[t])
            total += (
                frame.branch_energies[t]
                * f[t] ** (2 * idx.n + idx.l)
                * bes
                * math.exp(-0.5 * frame.phi_zpf**2 * f[t] ** 2)
                * trig
            )
        value = sign * total
        if q0 <= 2:
            rows = K.branch_rows(frame.branch_energies, f, frame.branch_psis, 2)
            value -= K.series_sum_multi(
                rows, [0.5 * pis[i] for i in range(len(amps))], 0.5 * frame.phi_zpf**2,
                q0, list(idx.ps), 0, 2,
            )
        return ScValue(value=pref * value, index=idx, engine="closed")

    if engine != "series":
        raise ValueError(f"unknown engine {engine!r}")

    # build rows once at the widest order, then sum shell by shell
    scalar = all(np.isscalar(a) for a in amps)
    if scalar:
        fr = frame.with_c_order(s_max)
        rows = (fr.c_list[: s_max + 1] * fr.e_j)[None, :]
        xs = [np.array([0.5 * float(a)]) for a in amps]
    else:
        if frame.branch_energies is None:
            raise UnsupportedModel("per-branch drive amplitudes require cosine branches")
        rows = K.branch_rows(frame.branch_energies, frame.branch_freqs, frame.branch_psis, s_max)
        xs = [0.5 * _closed_pis(frame, a) for a in amps]
    y = 0.5 * frame.phi_zpf**2
    start = K._series_start(q0, 3)
    shells = []
    for s in range(start, s_max + 1, 2):
        if len(amps) == 2:
            shells.append(
                K.series_sum2(rows, xs[0], xs[1], y, q0, idx.ps[0], idx.ps[1], s, s)
            )
        elif len(amps) == 1:
            shells.append(K.series_sum(rows, xs[0], y, q0, idx.ps[0], s, s))
        else:
            shells.append(K.series_sum_multi(rows, xs, y, q0, list(idx.ps), s, s))
    value = pref * float(sum(shells))
    conv = _convergence(value, shells)
    if rel_tol is not None and conv > rel_tol:
        raise NotConverged(f"multidrive series tail {conv:.3e} > {rel_tol:.3e}")
    return ScValue(value=value, index=idx, engine="series", convergence=conv)


def sc_three_mode(
    model: CircuitModel,
    frame: ModeFrame,
    xi_b: float,
    xi_c: float,
    drive,
    idx: ScIndex3,
    engine: str = "closed",
    s_max: int = DEFAULT_S_MAX,
) -> ScValue:
    """Three-mode supercoefficient with hybridization weights ξ_b, ξ_c.

    The coupler phase acquires ξ_b(b+b†) + ξ_c(c+c†) admixtures, so indices
    factorize into per-mode ladder weights with a shared Gaussian carrying
    1 + ξ_b² + ξ_c². Series and closed engines mirror the single-mode ones.
    """
    pref = (
        frame.phi_zpf ** (idx.weight_a + idx.weight_b + idx.weight_c)
        * xi_b**idx.weight_b
        * xi_c**idx.weight_c
        / (
            K.FACT[idx.n_a] * K.FACT[idx.n_a + idx.l_a]
            * K.FACT[idx.n_b] * K.FACT[idx.n_b + idx.l_b]
            * K.FACT[idx.n_c] * K.FACT[idx.n_c + idx.l_c]
        )
    )
    gauss2 = 0.5 * frame.phi_zpf**2 * (1.0 + xi_b**2 + xi_c**2)
    q0 = idx.q0
    pow_nl = idx.weight_a + idx.weight_b + idx.weight_c
    l_tot = idx.l_a + idx.l_b + idx.l_c

    if engine == "closed":
        if isinstance(model, SnailArrayStrayL):
            raise UnsupportedModel("closed form undefined with a stray inductor")
        odd = (l_tot + idx.p) % 2 == 1
        return _closed_core(
            frame, drive, q0, pow_nl, idx.p, odd, pref, gauss2, idx, "closed"
        )
    if engine != "series":
        raise ValueError(f"unknown engine {engine!r}")

    _check_limits(q0, idx.p, s_max)
    rows, xs = _series_rows_and_xs(frame, drive, s_max)
    total, shells = _shell_scan(rows, xs, gauss2, q0, idx.p, s_max)
    value = pref * total
    return ScValue(
        value=value, index=idx, engine="series", convergence=_convergence(value, shells)
    )


def sc_table(
    model: CircuitModel,
    frame: ModeFrame,
    drive,
    max_2nl: int,
    max_p: int,
    engine: str = "series",
    s_max: int = DEFAULT_S_MAX,
) -> list:
    """Batch-evaluate SCs for all (n, l, p) with 2n+l ≤ max_2nl, p ≤ max_p.

    Rows are ordered by (2n+l, l, p). Deterministic and free of shared
    mutable state, so index sets may be split across workers freely.
    """
    out = []
    for w in range(0, max_2nl + 1):
        for l in range(w % 2, w + 1, 2):
            n = (w - l) // 2
            for p in range(0, max_p + 1):
                idx = ScIndex(n=n, l=l, p=p)
                if engine == "series":
                    out.append(sc_series(frame, drive, idx, s_max=s_max))
                elif engine == "closed":
                    out.append(sc_closed(model, frame, drive, idx))
                else:
                    raise ValueError(f"unknown engine {engine!r}")
    return out
