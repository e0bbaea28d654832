"""Driven-circuit Hamiltonians on a truncated Fock space, built from scratch.

Everything here is assembled from the raw circuit description (branch
energies, frequencies, static offsets) and the harmonic-frame scalars; none
of the series/closed-form machinery is imported. The construction:

1. Diagonalize the position quadrature ``X = a + a†`` once per dimension.
2. Evaluate the potential minus its own Taylor expansion through second
   order at each quadrature node (the harmonic part lives in ω0·a†a, so
   only the genuinely anharmonic remainder enters).
3. Rotate back to the number basis.

Amplitudes are recovered from the phase dependence by discrete Fourier
analysis and a per-(l, p) linear solve against exact normal-ordering
matrix elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from ..circuits import CircuitModel, ModeFrame, SnailArrayStrayL
from ..errors import IllConditioned, UnsupportedModel

__all__ = ["ExtractionResult", "build_driven_hamiltonian", "extract_sc"]


@lru_cache(maxsize=8)
def _quadrature(dim: int) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition (nodes, vectors) of X = a + a† at dimension dim."""
    off = np.sqrt(np.arange(1.0, dim))
    x = np.diag(off, 1) + np.diag(off, -1)
    nodes, vectors = np.linalg.eigh(x)
    return nodes, vectors


def _cos_defect(z: np.ndarray) -> np.ndarray:
    """cos(z) - 1 + z²/2, evaluated without cancellation for small z."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-2
    zs = z[small] ** 2
    out[small] = zs * zs / 24.0 * (1.0 - zs / 30.0 * (1.0 - zs / 56.0))
    zb = z[~small]
    out[~small] = np.cos(zb) - 1.0 + 0.5 * zb * zb
    return out


def _sin_defect(z: np.ndarray) -> np.ndarray:
    """sin(z) - z, evaluated without cancellation for small z."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-2
    zs = z[small] ** 2
    out[small] = -z[small] * zs / 6.0 * (1.0 - zs / 20.0 * (1.0 - zs / 42.0))
    zb = z[~small]
    out[~small] = np.sin(zb) - zb
    return out


def _branch_arrays(model: CircuitModel):
    if isinstance(model, SnailArrayStrayL):
        raise UnsupportedModel(
            "the Fock oracle needs an explicit cosine-branch potential; "
            "series-inductor circuits define theirs implicitly"
        )
    energies, freqs, offsets = model.branches()
    return (
        np.asarray(energies, dtype=float),
        np.asarray(freqs, dtype=float),
        np.asarray(offsets, dtype=float),
    )


def build_driven_hamiltonian(
    model: CircuitModel,
    frame: ModeFrame,
    pi_tilde,
    phase: float,
    dim: int,
) -> np.ndarray:
    """Exact (up to truncation) driven Hamiltonian at a frozen drive phase.

    Parameters
    ----------
    model:
        Cosine-branch circuit (anything except the stray-inductor family).
    frame:
        Harmonic frame; supplies φ0, ω0 and φ_zpf.
    pi_tilde:
        Drive displacement amplitude: a scalar applied to every branch
        (charge drive) or one amplitude per branch (flux drive).
    phase:
        Drive phase; the displacement enters as Π·cos(phase).
    dim:
        Fock-space dimension.

    Returns
    -------
    Dense symmetric array ``ω0 a†a + Σ_T E_T [cos(f_T(φ0+s_T)+χ_T) −
    (Taylor ≤ 2)]`` with ``s_T = φ_zpf X + Π_T cos(phase)``. Removing each
    branch's Taylor expansion through second order keeps exactly the content
    that the normal-ordered amplitude expansion describes: the static
    constant, the vanishing gradient and the harmonic part are all absorbed
    by the frame.
    """
    energies, freqs, offsets = _branch_arrays(model)
    pis = np.broadcast_to(np.asarray(pi_tilde, dtype=float), energies.shape)
    nodes, vectors = _quadrature(dim)

    values = np.zeros(dim)
    cosp = math.cos(phase)
    for e_t, f_t, chi_t, pi_t in zip(energies, freqs, offsets, pis):
        psi = f_t * frame.phi0 + chi_t
        z = f_t * (frame.phi_zpf * nodes + pi_t * cosp)
        values += e_t * (math.cos(psi) * _cos_defect(z) - math.sin(psi) * _sin_defect(z))

    h = (vectors * values) @ vectors.T
    h += np.diag(frame.omega0 * np.arange(dim))
    return 0.5 * (h + h.T)


def _normal_order_matrix(l: int, m_rows: int) -> np.ndarray:
    """Square ladder matrix G[m, n] = √(m!(m+l)!)/(m−n)! = ⟨m|a†ⁿ aⁿ⁺ˡ|m+l⟩.

    Keeping as many columns as rows makes the system exactly determined on
    the sampled ladder: row m couples to no n beyond m, so the orders
    inside the reporting window take no bias from the ones just above it.
    """
    g = np.zeros((m_rows, m_rows))
    for m in range(m_rows):
        root = math.sqrt(math.factorial(m) * math.factorial(m + l))
        for n in range(m + 1):
            g[m, n] = root / math.factorial(m - n)
    return g


@dataclass(frozen=True)
class ExtractionResult:
    """Recovered amplitudes plus per-(l, p) solve diagnostics."""

    values: Dict[Tuple[int, int, int], float]
    residuals: Dict[Tuple[int, int], float]
    conditions: Dict[Tuple[int, int], float]

    def __getitem__(self, idx: Tuple[int, int, int]) -> float:
        return self.values[idx]


def extract_sc(
    model: CircuitModel,
    frame: ModeFrame,
    pi_tilde,
    *,
    l_max: int = 4,
    p_max: int = 3,
    dim: int = 60,
    n_phase: int = 64,
) -> ExtractionResult:
    """Recover every amplitude with 2n+l ≤ l_max, p ≤ p_max from brute force.

    The Hamiltonian is sampled on a uniform phase grid, each harmonic p is
    isolated by discrete cosine projection, and for each (l, p) the ladder
    of matrix elements ⟨m|H_p|m+l⟩ is solved against the exact
    normal-ordering coefficients. The solve carries all n the sampled rows
    couple to, so reported orders take no aliasing bias from the ones just
    above the window.
    """
    if n_phase < 2 * p_max + 2:
        raise ValueError(f"n_phase={n_phase} cannot resolve p_max={p_max}")
    if dim < 4 * l_max:
        raise ValueError(f"dim={dim} too small for l_max={l_max}")

    thetas = 2.0 * math.pi * np.arange(n_phase) / n_phase
    harmonics = np.zeros((p_max + 1, dim, dim))
    for theta in thetas:
        h = build_driven_hamiltonian(model, frame, pi_tilde, theta, dim)
        for p in range(p_max + 1):
            weight = (2.0 - (p == 0)) / n_phase * math.cos(p * theta)
            harmonics[p] += weight * h

    values: Dict[Tuple[int, int, int], float] = {}
    residuals: Dict[Tuple[int, int], float] = {}
    conditions: Dict[Tuple[int, int], float] = {}
    for l in range(l_max + 1):
        n_top = (l_max - l) // 2
        m_rows = 2 * n_top + 4
        if m_rows + l > dim:
            raise ValueError(f"dim={dim} too small for l={l} ladder of {m_rows} rows")
        base = _normal_order_matrix(l, m_rows)
        scale = np.abs(base).max(axis=0)
        design = base / scale
        cond = float(np.linalg.cond(design))
        if cond > 1e10:
            raise IllConditioned(
                f"normal-ordering solve for l={l} has condition {cond:.3g}; "
                "reduce l_max or raise dim"
            )
        rows = np.arange(m_rows)
        for p in range(p_max + 1):
            # H carries w_p·C on these elements: both e^{±ipθ} exponentials
            # project onto cos pθ for p ≥ 1, while the assembled operator
            # halves the static harmonic instead.
            w = 2.0 if p >= 1 else 1.0
            b = harmonics[p][rows, rows + l].astype(float) / w
            if l == 0 and p == 0:
                b = b - frame.omega0 * rows
            sol, res, *_ = np.linalg.lstsq(design, b, rcond=None)
            sol = sol / scale
            fit = design @ (sol * scale)
            residuals[(l, p)] = float(np.linalg.norm(fit - b))
            for n in range(n_top + 1):
                values[(n, l, p)] = float(sol[n])
            conditions[(l, p)] = cond

    return ExtractionResult(values=values, residuals=residuals, conditions=conditions)
