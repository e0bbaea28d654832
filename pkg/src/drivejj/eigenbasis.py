"""Exact-eigenstate amplitudes for symmetric circuits.

The drive is folded into the potential argument, the time-independent part
is renormalized by J₀ factors per branch and diagonalized, and transition
amplitudes between the resulting eigenstates carry J_p factors times cosine
or sine matrix elements. This route keeps the phase variable compact, so it
supports charge offsets and multi-minima potentials that the oscillator
frame cannot represent.

Two bases are available. The charge basis requires every branch frequency
to be an integer (compact 2π-periodic potential) and supports a charge
offset; the grid basis handles fractional branch frequencies
pseudospectrally on the potential's full period and always works at zero
charge offset. Odd-p amplitudes multiply sine matrix elements and carry an
overall factor of i in the Hamiltonian; the stored value is the real
coefficient with that i factored out.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import jv

from .circuits import CircuitModel, _principal_period, mode_frame
from .errors import BasisMismatch
from .supercoef import CapacitiveDrive, FluxDrive, ScValue

DEFAULT_CHARGE_DIM = 61
DEFAULT_GRID_DIM = 512

#: domains longer than this fall back to the confined-state window even if
#: the potential has a finite (but absurdly long) exact period
_MAX_PERIOD = 200.0


@dataclass(frozen=True)
class EigenIndex:
    """States (j, k) coupled at the p-th drive harmonic."""

    j: int
    k: int
    p: int


@dataclass(frozen=True, eq=False)
class EigenFrame:
    """Diagonalized drive-renormalized circuit, ready for amplitude queries.

    ``states`` holds eigenvectors as columns in the real-wavefunction
    gauge (ψ real and positive on its first material lobe), so cosine and
    sine matrix elements carry no basis-dependent phases. ``bessel_args`` are
    the per-branch renormalization arguments (Ω_d/ω_d scaled by the branch
    frequency for charge drives, 2φ_ac0 times the branch flux coefficient
    for flux drives).
    """

    basis: str
    dim: int
    e_c: float
    n_g: float
    energies: np.ndarray
    states: np.ndarray
    branch_energies: np.ndarray
    branch_freqs: np.ndarray
    branch_offsets: np.ndarray
    bessel_args: np.ndarray
    renormalized_energies: np.ndarray
    _cos_ops: Tuple[np.ndarray, ...] = field(repr=False, default=())
    _sin_ops: Tuple[np.ndarray, ...] = field(repr=False, default=())

    def element(self, branch: int, j: int, k: int, odd: bool) -> complex:
        """⟨j|cos or sin of the branch argument|k⟩ in the eigenbasis."""
        op = (self._sin_ops if odd else self._cos_ops)[branch]
        vj, vk = self.states[:, j], self.states[:, k]
        if op.ndim == 1:  # grid: potential-like operators are diagonal
            return complex(np.dot(vj.conj(), op * vk))
        return complex(np.dot(vj.conj(), op @ vk))


def _aligned_flux_coeffs(model, freqs: np.ndarray) -> np.ndarray:
    """Per-retained-branch flux coefficients, matched by branch frequency."""
    f_all, c_all = model.flux_coeffs()
    if len(f_all) == len(freqs):
        return np.asarray(c_all, dtype=float)
    picked, start = [], 0
    for f in freqs:
        for i in range(start, len(f_all)):
            if abs(f_all[i] - f) <= 1e-12 * max(abs(f), 1.0):
                picked.append(c_all[i])
                start = i + 1
                break
        else:
            raise ValueError("flux coefficients do not align with branches")
    return np.asarray(picked, dtype=float)


def _drive_args(model, freqs: np.ndarray, drive) -> np.ndarray:
    if drive is None:
        return np.zeros_like(freqs)
    if isinstance(drive, CapacitiveDrive):
        return freqs * (drive.omega_amp / drive.omega_d)
    if isinstance(drive, FluxDrive):
        return 2.0 * drive.phi_ac0 * _aligned_flux_coeffs(model, freqs)
    raise TypeError(f"unsupported drive descriptor {type(drive).__name__}")


def _first_lobe_phase(psi: np.ndarray) -> complex:
    """Phase of the first wavefunction sample that exceeds half the peak.

    Odd states have two mirror lobes of equal magnitude, so the peak itself
    is ambiguous between discretizations; anchoring on the first material
    lobe in φ-order keeps the gauge identical across bases.
    """
    threshold = 0.5 * np.max(np.abs(psi))
    pivot = psi[np.argmax(np.abs(psi) >= threshold)]
    return np.conj(pivot) / abs(pivot)


def _gauge_fix(states: np.ndarray) -> np.ndarray:
    out = states.copy()
    for col in range(out.shape[1]):
        out[:, col] *= _first_lobe_phase(out[:, col])
    return out


def _gauge_fix_wavefunction(states: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Rotate charge-basis eigenvectors into the real-wavefunction gauge.

    eigh returns real vectors; for odd-parity states those encode i times a
    real wavefunction, which would flip the sign bookkeeping of sine
    elements relative to the grid basis. Rotating each state so ψ(φ) is
    real and positive on its first material lobe makes both bases agree.
    """
    probe = np.linspace(-math.pi, math.pi, 4 * q.size, endpoint=False)
    synth = np.exp(1j * np.outer(q, probe))
    out = states.astype(complex, copy=True)
    for col in range(out.shape[1]):
        out[:, col] *= _first_lobe_phase(out[:, col] @ synth)
    return out


def _charge_frame(e_c, n_g, energies, freqs, offsets, args, dim) -> EigenFrame:
    steps = np.rint(freqs).astype(int)
    if np.any(np.abs(freqs - steps) > 1e-9) or np.any(steps < 1):
        raise BasisMismatch(
            f"charge basis needs integer branch frequencies, got {freqs.tolist()}"
        )
    half = max(dim // 2, max(steps) + 2)
    q = np.arange(-half, half + 1)
    size = q.size
    renorm = energies * jv(0, args)

    cos_ops, sin_ops = [], []
    h = np.diag(4.0 * e_c * (q - n_g) ** 2).astype(complex)
    for a, chi in zip(steps, offsets):
        shift = np.zeros((size, size), dtype=complex)
        idx = np.arange(size - a)
        shift[idx + a, idx] = 1.0
        phase = np.exp(1j * chi)
        cos_ops.append(0.5 * (phase * shift + np.conj(phase) * shift.conj().T))
        sin_ops.append(-0.5j * (phase * shift - np.conj(phase) * shift.conj().T))
    for e_r, cop in zip(renorm, cos_ops):
        h += e_r * cop
    vals, vecs = np.linalg.eigh(h)
    return EigenFrame(
        basis="charge",
        dim=size,
        e_c=e_c,
        n_g=n_g,
        energies=vals,
        states=_gauge_fix_wavefunction(vecs, q),
        branch_energies=np.asarray(energies, dtype=float),
        branch_freqs=np.asarray(freqs, dtype=float),
        branch_offsets=np.asarray(offsets, dtype=float),
        bessel_args=np.asarray(args, dtype=float),
        renormalized_energies=renorm,
        _cos_ops=tuple(cos_ops),
        _sin_ops=tuple(sin_ops),
    )


def _grid_domain(model, e_c, freqs) -> float:
    period = _principal_period(freqs)
    if period <= _MAX_PERIOD:
        return period
    phi_zpf = mode_frame(model, e_c=e_c).phi_zpf
    return 2.0 * 8.0 * max(1.0, 6.0 * phi_zpf)


def _grid_frame(model, e_c, energies, freqs, offsets, args, dim) -> EigenFrame:
    # charge offset is a compact-phase concept; the grid path works at n_g=0
    span = _grid_domain(model, e_c, freqs)
    dx = span / dim
    phi = -0.5 * span + dx * np.arange(dim)
    k = 2.0 * math.pi * np.fft.fftfreq(dim, d=dx)
    kinetic = np.fft.ifft(
        (4.0 * e_c * k**2)[:, None] * np.fft.fft(np.eye(dim), axis=0), axis=0
    ).real
    kinetic = 0.5 * (kinetic + kinetic.T)
    renorm = energies * jv(0, args)

    cos_ops, sin_ops = [], []
    potential = np.zeros(dim)
    for e_r, f, chi in zip(renorm, freqs, offsets):
        cos_ops.append(np.cos(f * phi + chi))
        sin_ops.append(np.sin(f * phi + chi))
        potential += e_r * cos_ops[-1]
    vals, vecs = np.linalg.eigh(kinetic + np.diag(potential))
    return EigenFrame(
        basis="grid",
        dim=dim,
        e_c=e_c,
        n_g=0.0,
        energies=vals,
        states=_gauge_fix(vecs.astype(complex)),
        branch_energies=np.asarray(energies, dtype=float),
        branch_freqs=np.asarray(freqs, dtype=float),
        branch_offsets=np.asarray(offsets, dtype=float),
        bessel_args=np.asarray(args, dtype=float),
        renormalized_energies=renorm,
        _cos_ops=tuple(cos_ops),
        _sin_ops=tuple(sin_ops),
    )


def diagonalize_static(
    model: CircuitModel,
    *,
    e_c: float,
    drive: Optional[Union[CapacitiveDrive, FluxDrive]] = None,
    n_g: float = 0.0,
    basis: str = "auto",
    dim: Optional[int] = None,
) -> EigenFrame:
    """Diagonalize kinetic term plus J₀-renormalized branch cosines.

    ``basis="auto"`` picks the charge basis when every branch frequency is
    an integer and the grid basis otherwise. The grid basis ignores ``n_g``
    (the offset is a compact-phase quantity and the grid treats the phase
    on its full period at zero offset); pass ``basis="charge"`` to resolve
    offset physics.
    """
    if not hasattr(model, "branches"):
        raise TypeError(f"{type(model).__name__} does not expose branch cosines")
    energies, freqs, offsets = model.branches()
    energies = np.asarray(energies, dtype=float)
    freqs = np.asarray(freqs, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    args = _drive_args(model, freqs, drive)

    integral = bool(
        np.all(np.abs(freqs - np.rint(freqs)) <= 1e-9) and np.all(np.rint(freqs) >= 1)
    )
    if basis == "auto":
        basis = "charge" if integral else "grid"
    if basis == "charge":
        return _charge_frame(e_c, n_g, energies, freqs, offsets, args, dim or DEFAULT_CHARGE_DIM)
    if basis == "grid":
        return _grid_frame(model, e_c, energies, freqs, offsets, args, dim or DEFAULT_GRID_DIM)
    raise ValueError(f"unknown basis {basis!r}")


def sc_eigen(frame: EigenFrame, idx: Union[EigenIndex, Tuple[int, int, int]]) -> ScValue:
    """Amplitude coupling eigenstates j and k at the p-th drive harmonic.

    Even p selects the cosine matrix element, odd p the sine one (stored
    with the overall i factored out, see the module docstring). Complex
    residue after gauge fixing only occurs for broken-parity charge-offset
    cases; the stored number is the dominant quadrature.
    """
    if not isinstance(idx, EigenIndex):
        idx = EigenIndex(*idx)
    n_states = frame.states.shape[1]
    if not (0 <= idx.j < n_states and 0 <= idx.k < n_states):
        raise ValueError(f"states {(idx.j, idx.k)} outside computed dimension {n_states}")
    if idx.p < 0:
        raise ValueError(f"harmonic p must be nonnegative, got {idx.p}")
    odd = bool(idx.p % 2)
    total = 0.0 + 0.0j
    for b, (e_b, arg) in enumerate(zip(frame.branch_energies, frame.bessel_args)):
        total += e_b * jv(idx.p, arg) * frame.element(b, idx.j, idx.k, odd)
    value = total.real if abs(total.real) >= abs(total.imag) else total.imag
    return ScValue(value=value, index=idx, engine=f"eigen-{frame.basis}", convergence=None)
