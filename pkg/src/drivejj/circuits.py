"""Circuit potential families, minima, nonlinear coefficients, and mode frames.

Every model is a sum of cosine branches ``U(φ) = Σ_i E_i cos(f_i φ + χ_i)``
except :class:`SnailArrayStrayL`, whose potential is defined implicitly
through a current-conservation constraint on the internal array phase.

All energies are angular frequencies in rad/ns (hbar = 1); all phases are in
radians. Use :mod:`drivejj.units` to convert lab quantities at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegenerateMinimum,
    NoMinimumFound,
    RootNotConverged,
    UnsupportedModel,
)

__all__ = [
    "TwoCosine",
    "SnailArray",
    "SnailArrayStrayL",
    "SquidArray",
    "HigherHarmonics",
    "CircuitModel",
    "ModeFrame",
    "cos_derivative",
    "potential",
    "potential_derivative",
    "find_minimum",
    "nonlinear_coeffs",
    "stray_inductor_coeffs",
    "squid_statics",
    "mode_frame",
]

_GRID_POINTS = 4096
_NEWTON_MAX_ITER = 60


def cos_derivative(psi: float, order: int) -> float:
    """q-th derivative of cos evaluated at ``psi``.

    Uses the exact four-cycle ``[cos, -sin, -cos, sin]`` rather than
    ``cos(psi + q*pi/2)`` so that parity zeros are exact floats.
    """
    r = order % 4
    if r == 0:
        return math.cos(psi)
    if r == 1:
        return -math.sin(psi)
    if r == 2:
        return -math.cos(psi)
    return math.sin(psi)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoCosine:
    """Potential ``A cos(a1 φ + a2 φ_e) + B cos(b1 φ + b2 φ_e)``.

    Parameters
    ----------
    a_energy, b_energy:
        Branch energies A, B in rad/ns (may be negative; the conventional
        Josephson branch is ``-E_J cos``).
    a1, b1:
        Dimensionless frequencies of the phase argument.
    a2, b2:
        Dimensionless placement of the external flux in each branch.
    phi_e:
        External flux phase in radians.
    e_j:
        Optional normalization scale for the dimensionless coefficients
        ``c_n = U^(n)(φ0)/E_J``; defaults to ``max(|A|, |B|)``.
    """

    a_energy: float
    b_energy: float
    a1: float
    b1: float = 1.0
    a2: float = 0.0
    b2: float = 0.0
    phi_e: float = 0.0
    e_j: Optional[float] = None

    def energy_scale(self) -> float:
        if self.e_j is not None:
            return self.e_j
        scale = max(abs(self.a_energy), abs(self.b_energy))
        if scale == 0.0:
            raise ValueError("TwoCosine model with both branch energies zero")
        return scale

    def branches(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(energies, frequencies, static offsets χ_i = flux_coeff·φ_e)."""
        energies = [self.a_energy]
        freqs = [self.a1]
        offsets = [self.a2 * self.phi_e]
        if self.b_energy != 0.0:
            energies.append(self.b_energy)
            freqs.append(self.b1)
            offsets.append(self.b2 * self.phi_e)
        return (np.asarray(energies), np.asarray(freqs), np.asarray(offsets))

    def flux_coeffs(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-branch (frequency, flux coefficient) for flux-drive response."""
        return (np.asarray([self.a1, self.b1]), np.asarray([self.a2, self.b2]))


@dataclass(frozen=True)
class SnailArray:
    """M-fold array of N-large-junction SNAILs, no stray inductance.

    ``U(φ) = -M α_s E_J cos(φ/M) - M N E_J cos(φ/(MN) - φ_e/N)``
    """

    M: int
    N: int
    alpha_s: float
    e_j: float
    phi_e: float = 0.0

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be positive counts")
        if not 0.0 < self.alpha_s < 1.0 / self.N:
            raise ValueError(
                f"alpha_s={self.alpha_s} outside (0, 1/N={1.0 / self.N:.4f}); "
                "single-minimum regime required"
            )
        if self.e_j <= 0.0:
            raise ValueError("e_j must be positive")

    def energy_scale(self) -> float:
        return self.e_j

    def branches(self):
        energies = np.asarray([-self.M * self.alpha_s * self.e_j, -self.M * self.N * self.e_j])
        freqs = np.asarray([1.0 / self.M, 1.0 / (self.M * self.N)])
        offsets = np.asarray([0.0, -self.phi_e / self.N])
        return energies, freqs, offsets

    def flux_coeffs(self):
        return (
            np.asarray([1.0 / self.M, 1.0 / (self.M * self.N)]),
            np.asarray([0.0, -1.0 / self.N]),
        )


@dataclass(frozen=True)
class SnailArrayStrayL(SnailArray):
    """SNAIL array in series with a stray (geometric) inductor.

    ``x_J = L_J/L`` is the inductance participation; the potential is
    ``U(φ) = M U_N(φ_s[φ]) + (E_L/2)(φ - M φ_s[φ])²`` with ``E_L = x_J E_J``
    and φ_s[φ] fixed by current conservation
    ``α_s sin φ_s + sin((φ_s - φ_e)/N) + x_J (M φ_s - φ) = 0``.
    """

    x_j: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if self.x_j <= 0.0:
            raise ValueError("x_j must be positive")

    def snail_section(self) -> SnailArray:
        """The array potential U_N of a single section (M=1 branch set)."""
        return SnailArray(M=1, N=self.N, alpha_s=self.alpha_s, e_j=self.e_j, phi_e=self.phi_e)


@dataclass(frozen=True)
class SquidArray:
    """M-fold array of asymmetric dc SQUIDs, flux-biased by φ_dc.

    ``U(φ) = -M α_s E_J cos(φ/M - r_a φ_dc) - M E_J cos(φ/M + r_b φ_dc)``
    with the gauge split ``r_a + r_b = 1``.
    """

    M: int
    alpha_s: float
    e_j: float
    r_a: float = 0.5
    r_b: float = 0.5
    phi_dc: float = 0.0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be a positive count")
        if not 0.0 < self.alpha_s <= 1.0:
            raise ValueError("alpha_s must lie in (0, 1]")
        if abs(self.r_a + self.r_b - 1.0) > 1e-12:
            raise ValueError(f"r_a + r_b must equal 1, got {self.r_a + self.r_b}")
        if self.e_j <= 0.0:
            raise ValueError("e_j must be positive")

    @property
    def phi_e(self) -> float:
        return self.phi_dc

    def energy_scale(self) -> float:
        return self.e_j

    def branches(self):
        energies = np.asarray([-self.M * self.alpha_s * self.e_j, -self.M * self.e_j])
        freqs = np.asarray([1.0 / self.M, 1.0 / self.M])
        offsets = np.asarray([-self.r_a * self.phi_dc, self.r_b * self.phi_dc])
        return energies, freqs, offsets

    def flux_coeffs(self):
        return (
            np.asarray([1.0 / self.M, 1.0 / self.M]),
            np.asarray([-self.r_a, self.r_b]),
        )


@dataclass(frozen=True)
class HigherHarmonics:
    """Two branch families with higher junction harmonics.

    ``U(φ) = Σ_m A_m cos(m a1 φ + a2 φ_e) + Σ_m B_m cos(m b1 φ + b2 φ_e)``

    The external flux enters through the loop, not the harmonic order, so the
    offsets are not multiplied by m.
    """

    a_energies: Tuple[float, ...]
    b_energies: Tuple[float, ...] = ()
    a1: float = 1.0
    b1: float = 1.0
    a2: float = 0.0
    b2: float = 0.0
    phi_e: float = 0.0
    e_j: Optional[float] = None

    def energy_scale(self) -> float:
        if self.e_j is not None:
            return self.e_j
        mags = [abs(x) for x in self.a_energies] + [abs(x) for x in self.b_energies]
        scale = max(mags) if mags else 0.0
        if scale == 0.0:
            raise ValueError("HigherHarmonics model with all amplitudes zero")
        return scale

    def branches(self):
        energies, freqs, offsets = [], [], []
        for m, amp in enumerate(self.a_energies, start=1):
            if amp != 0.0:
                energies.append(amp)
                freqs.append(m * self.a1)
                offsets.append(self.a2 * self.phi_e)
        for m, amp in enumerate(self.b_energies, start=1):
            if amp != 0.0:
                energies.append(amp)
                freqs.append(m * self.b1)
                offsets.append(self.b2 * self.phi_e)
        if not energies:
            raise ValueError("HigherHarmonics model with all amplitudes zero")
        return (np.asarray(energies), np.asarray(freqs), np.asarray(offsets))


CircuitModel = Union[TwoCosine, SnailArray, SnailArrayStrayL, SquidArray, HigherHarmonics]


def _is_branch_model(model: CircuitModel) -> bool:
    return not isinstance(model, SnailArrayStrayL)


# ---------------------------------------------------------------------------
# Potential evaluation
# ---------------------------------------------------------------------------


def _branch_potential(energies, freqs, offsets, phi):
    phi = np.asarray(phi, dtype=float)
    args = np.multiply.outer(phi, freqs) + offsets
    return np.cos(args) @ energies


def _phi_s_of_phi(model: SnailArrayStrayL, phi):
    """Solve current conservation for the array phase φ_s at each φ.

    The constraint ``U_N'(φ_s)/E_J + x_J (M φ_s - φ) = 0`` is solved by
    Newton iteration with a bisection fallback on the guaranteed bracket
    ``M φ_s ∈ [φ - (α_s+1)/x_J, φ + (α_s+1)/x_J]``.
    """
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    alpha, N, xj, M = model.alpha_s, model.N, model.x_j, model.M
    phi_e = model.phi_e

    def g(s, f):
        return alpha * np.sin(s) + np.sin((s - phi_e) / N) + xj * (M * s - f)

    def gp(s):
        return alpha * np.cos(s) + np.cos((s - phi_e) / N) / N + xj * M

    s = phi_arr / M  # warm start at the no-drop solution
    converged = np.zeros(phi_arr.shape, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        res = g(s, phi_arr)
        converged = np.abs(res) < 1e-14 * max(1.0, xj)
        if converged.all():
            break
        step = res / gp(s)
        step = np.clip(step, -0.5, 0.5)
        s = s - np.where(converged, 0.0, step)
    else:
        # Newton stalled somewhere; fall back to bisection per point.
        from scipy.optimize import brentq

        slack = (alpha + 1.0) / xj
        for i in np.ndindex(phi_arr.shape):
            if not converged[i]:
                f = phi_arr[i]
                lo, hi = (f - slack) / M, (f + slack) / M
                try:
                    s[i] = brentq(lambda ss: g(ss, f), lo, hi, xtol=1e-15, rtol=1e-15)
                except ValueError as exc:
                    raise RootNotConverged(
                        f"current-conservation solve failed at phi={f}"
                    ) from exc
    return s if np.ndim(phi) else float(s[0])


def potential(model: CircuitModel, phi):
    """Potential energy U(φ) in rad/ns; accepts scalars or arrays."""
    if isinstance(model, SnailArrayStrayL):
        section = model.snail_section()
        energies, freqs, offsets = section.branches()
        phi_s = _phi_s_of_phi(model, phi)
        u_n = _branch_potential(energies, freqs, offsets, phi_s)
        e_l = model.x_j * model.e_j
        return model.M * u_n + 0.5 * e_l * (np.asarray(phi) - model.M * phi_s) ** 2
    energies, freqs, offsets = model.branches()
    return _branch_potential(energies, freqs, offsets, phi)


def potential_derivative(model: CircuitModel, phi):
    """First derivative ∂U/∂φ in rad/ns."""
    if isinstance(model, SnailArrayStrayL):
        phi_s = _phi_s_of_phi(model, phi)
        e_l = model.x_j * model.e_j
        return e_l * (np.asarray(phi) - model.M * phi_s)
    energies, freqs, offsets = model.branches()
    phi_arr = np.asarray(phi, dtype=float)
    args = np.multiply.outer(phi_arr, freqs) + offsets
    return -np.sin(args) @ (energies * freqs)


# ---------------------------------------------------------------------------
# Minima
# ---------------------------------------------------------------------------


def _principal_period(freqs: Sequence[float]) -> float:
    """Fundamental period of a sum of cosines with the given frequencies."""
    period = None  # period in units of 2π, as an exact fraction
    for f in freqs:
        if f == 0.0:
            continue
        frac = Fraction(abs(float(f))).limit_denominator(4096)
        if frac == 0 or abs(float(frac) - abs(f)) > 1e-9 * abs(f):
            # Not a small-denominator rational; the float may still be an
            # exact modest dyadic (e.g. 2^-22), which has an exact period.
            frac = Fraction(abs(float(f)))
            if frac.numerator > 1 << 20 or frac.denominator > 1 << 26:
                # Irrational frequency ratio: no exact period; wide window.
                return 64.0 * math.pi / min(abs(ff) for ff in freqs if ff != 0.0)
        p = Fraction(frac.denominator, frac.numerator)
        if period is None:
            period = p
        else:
            num = math.lcm(period.numerator, p.numerator)
            den = math.gcd(period.denominator, p.denominator)
            period = Fraction(num, den)
    if period is None:
        raise NoMinimumFound("potential has no oscillatory branch")
    return 2.0 * math.pi * float(period)


def _newton_refine(model: CircuitModel, phi0: float, scale: float) -> float:
    energies, freqs, offsets = model.branches()
    x = phi0
    for _ in range(_NEWTON_MAX_ITER):
        args = freqs * x + offsets
        d1 = float(-np.sin(args) @ (energies * freqs))
        if abs(d1) < 1e-12 * scale:
            return x
        d2 = float(-np.cos(args) @ (energies * freqs**2))
        if d2 <= 0.0:
            break
        x = x - d1 / d2
    raise NoMinimumFound(f"Newton refinement failed near phi={phi0:.6f}")


def find_minimum(model: CircuitModel) -> float:
    """Global potential minimum φ0 within one fundamental period.

    SQUID arrays are handled analytically (the two equal-frequency branches
    combine into a single shifted cosine); other models use a dense grid scan
    followed by Newton refinement of every candidate well.
    """
    if isinstance(model, SquidArray):
        e_j_tilde, lam = squid_statics(model)
        if e_j_tilde <= 1e-12 * model.e_j:
            raise DegenerateMinimum("SQUID branches cancel: flat potential")
        return model.M * lam
    if isinstance(model, SnailArrayStrayL):
        # The inductor term vanishes at the minimum: φ0 = M·argmin U_N.
        section = model.snail_section()
        return model.M * find_minimum(section)

    energies, freqs, offsets = model.branches()
    scale = model.energy_scale()
    period = _principal_period(freqs)
    grid = np.linspace(-0.5 * period, 0.5 * period, _GRID_POINTS, endpoint=False)
    u = _branch_potential(energies, freqs, offsets, grid)

    # Candidate wells: local minima on the periodic grid.
    lower = np.roll(u, 1) >= u
    upper = np.roll(u, -1) >= u
    candidates = np.flatnonzero(lower & upper)
    if candidates.size == 0:
        raise NoMinimumFound("no local minimum located on the search grid")

    refined = []
    for i in candidates:
        try:
            x = _newton_refine(model, float(grid[i]), scale)
        except NoMinimumFound:
            continue
        refined.append((float(potential(model, x)), x))
    if not refined:
        raise NoMinimumFound("no grid candidate survived Newton refinement")

    refined.sort(key=lambda t: (t[0], t[1]))
    u_best, phi_best = refined[0]
    # Degeneracy check among distinct wells (identify periodic images).
    for u_val, x in refined[1:]:
        if u_val - u_best > 1e-9 * scale:
            break
        sep = abs(x - phi_best) % period
        sep = min(sep, period - sep)
        if sep > 1e-6 * period:
            raise DegenerateMinimum(
                f"two global minima within tolerance: phi={phi_best:.9f}, {x:.9f}"
            )
    return phi_best


def squid_statics(model: SquidArray) -> Tuple[float, float]:
    """Effective junction energy and phase of the combined SQUID cosine.

    Returns ``(Ẽ_J, λ)`` such that the static potential equals
    ``-M Ẽ_J cos(φ/M - λ)``.
    """
    a, phi = model.alpha_s, model.phi_dc
    e_j_tilde = model.e_j * math.sqrt(1.0 + a * a + 2.0 * a * math.cos(phi))
    lam = math.atan2(
        a * math.sin(model.r_a * phi) - math.sin(model.r_b * phi),
        a * math.cos(model.r_a * phi) + math.cos(model.r_b * phi),
    )
    return e_j_tilde, lam


# ---------------------------------------------------------------------------
# Nonlinear coefficients
# ---------------------------------------------------------------------------


def nonlinear_coeffs(model: CircuitModel, phi0: float, n_max: int) -> np.ndarray:
    """Dimensionless coefficients ``c_q = U^(q)(φ0)/E_J`` for q = 0..n_max.

    Analytic for cosine-branch models; implicit-function derivatives for
    stray-inductor models (see :func:`stray_inductor_coeffs`).
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if isinstance(model, SnailArrayStrayL):
        phi_s_star = float(_phi_s_of_phi(model, phi0))
        return _strayl_coeffs_at(model, float(phi0), phi_s_star, n_max)
    energies, freqs, offsets = model.branches()
    scale = model.energy_scale()
    psis = freqs * phi0 + offsets
    c = np.empty(n_max + 1)
    for q in range(n_max + 1):
        c[q] = sum(
            energies[t] * freqs[t] ** q * cos_derivative(psis[t], q) for t in range(len(energies))
        ) / scale
    return c


def _series_reversion(g: np.ndarray, order: int) -> np.ndarray:
    """Coefficients r_1..r_order of the inverse series of ``G(s)=Σ g_j s^j``.

    ``g[j]`` holds the coefficient of ``s^j`` (g[0] ignored, g[1] ≠ 0).
    Returns array r with r[j] the coefficient of ``u^j`` in ``s(u)``,
    satisfying G(s(u)) = u.
    """
    if g[1] == 0.0:
        raise RootNotConverged("series reversion with vanishing linear term")
    r = np.zeros(order + 1)
    r[1] = 1.0 / g[1]
    # s_pows[k] holds the coefficients of s(u)^k, updated as r grows.
    for j in range(2, order + 1):
        # coefficient of u^j in Σ_{k=2..j} g_k s(u)^k using r_1..r_{j-1}
        acc = 0.0
        s_trunc = r[: j]  # r[0] = 0
        pow_k = s_trunc.copy()  # s(u)^1
        for k in range(2, j + 1):
            pow_k = np.convolve(pow_k, s_trunc)[: j + 1]
            if k < len(g) and g[k] != 0.0 and len(pow_k) > j:
                acc += g[k] * pow_k[j]
        r[j] = -acc / g[1]
    return r


def _strayl_coeffs_at(
    model: SnailArrayStrayL, phi_star: float, phi_s_star: float, n_max: int
) -> np.ndarray:
    """Derivatives of the stray-inductor potential at an arbitrary point.

    Power-series reversion of the current-conservation identity: with
    ``G(s) = [U_N'(φ_s*+s) - U_N'(φ_s*)]/E_J + x_J M s = x_J (φ - φ*)`` and
    ``s(u) = Σ r_j u^j``, the array-phase derivatives are
    ``φ_s^(n) = n! r_n x_J^n`` and, since ``U'(φ) = x_J E_J (φ - M φ_s[φ])``
    identically, ``c_n = -x_J M φ_s^(n-1)`` for n ≥ 3. The products
    ``r_j x_J^j`` stay O(M^-j), so the scheme is stable for large x_J.
    """
    section = model.snail_section()
    xj, M = model.x_j, model.M

    # u_j = U_N^(j)(φ_s*)/E_J
    u = nonlinear_coeffs(section, phi_s_star, n_max + 2)

    order = max(n_max - 1, 1)
    g = np.zeros(order + 2)
    for j in range(1, order + 2):
        if j + 1 < len(u):
            g[j] = u[j + 1] / math.factorial(j)
    g[1] += xj * M

    r = _series_reversion(g, order)

    c = np.zeros(n_max + 1)
    drop = phi_star - M * phi_s_star
    c[0] = M * u[0] + 0.5 * xj * drop**2
    c[1] = xj * drop
    if n_max >= 2:
        c[2] = u[2] / (M + u[2] / xj)
    for n in range(3, n_max + 1):
        c[n] = -xj * M * math.factorial(n - 1) * r[n - 1] * xj ** (n - 1)
    return c


def stray_inductor_coeffs(model: SnailArrayStrayL, n_max: int) -> np.ndarray:
    """c_0..c_n_max for the stray-inductor SNAIL array at its minimum.

    At the minimum the inductor drop vanishes (φ0 = M φ_s,min), so c_1 is
    exactly zero by construction.
    """
    section = model.snail_section()
    phi_s_min = find_minimum(section)
    c = _strayl_coeffs_at(model, model.M * phi_s_min, phi_s_min, n_max)
    c[1] = 0.0
    return c


# ---------------------------------------------------------------------------
# Mode frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModeFrame:
    """Harmonic frame about the potential minimum.

    Fields follow the usual definitions: ``ω0 = sqrt(8 E_C E_J c2)``,
    ``φ_zpf = (2 E_C/(E_J c2))^(1/4)``, ``n_zpf = 1/(2 φ_zpf)``.
    ``branch_*`` arrays are None for stray-inductor models (series engine
    only); ``c_list[q]`` holds c_q with c_1 = 0 at the minimum.
    """

    model: CircuitModel
    phi0: float
    c_list: np.ndarray
    e_j: float
    e_c: float
    omega0: float
    phi_zpf: float
    n_zpf: float
    branch_energies: Optional[np.ndarray]
    branch_freqs: Optional[np.ndarray]
    branch_psis: Optional[np.ndarray]

    def c(self, q: int) -> float:
        return float(self.c_list[q])

    def with_c_order(self, n_max: int) -> "ModeFrame":
        """Return a frame whose c table extends at least to order ``n_max``."""
        if n_max <= len(self.c_list) - 1:
            return self
        c_list = nonlinear_coeffs(self.model, self.phi0, n_max)
        object.__setattr__(self, "c_list", c_list)
        return self


def mode_frame(model: CircuitModel, e_c: float, n_max: Optional[int] = None) -> ModeFrame:
    """Assemble the mode frame (φ0, c list, ω0, φ_zpf, n_zpf) for a model.

    Parameters
    ----------
    model:
        Circuit model; its energy fields are rad/ns.
    e_c:
        Charging energy in rad/ns.
    n_max:
        Highest c index to tabulate; defaults to 26 (twice the default
        series order).
    """
    if e_c <= 0.0:
        raise ValueError("E_C must be positive")
    if n_max is None:
        n_max = 26
    phi0 = find_minimum(model)
    c_list = nonlinear_coeffs(model, phi0, n_max)
    c2 = float(c_list[2])
    e_j = model.energy_scale()
    if c2 <= 1e-12:
        raise DegenerateMinimum(f"c2={c2:.3e} at the located minimum")
    omega0 = math.sqrt(8.0 * e_c * e_j * c2)
    phi_zpf = (2.0 * e_c / (e_j * c2)) ** 0.25
    if _is_branch_model(model):
        energies, freqs, offsets = model.branches()
        psis = freqs * phi0 + offsets
    else:
        energies = freqs = psis = None
    return ModeFrame(
        model=model,
        phi0=phi0,
        c_list=c_list,
        e_j=e_j,
        e_c=e_c,
        omega0=omega0,
        phi_zpf=phi_zpf,
        n_zpf=0.5 / phi_zpf,
        branch_energies=energies,
        branch_freqs=freqs,
        branch_psis=psis,
    )
