"""Unit conversions at the package boundary.

Internal quantities are angular frequencies in rad/ns (hbar = 1). All I/O is
in ordinary frequency (GHz), junction inductance (nH), capacitance (fF or pF),
and external flux as a fraction of the flux quantum.
"""

import math

import scipy.constants as cst

TWO_PI = 2.0 * math.pi

#: Josephson energy scale: E_J/h in GHz for L_J = 1 nH.
EJ_GHZ_NH = (cst.h / (2.0 * cst.e) / TWO_PI) ** 2 / (1e-9 * cst.h) / 1e9

#: Charging energy scale: E_C/h in GHz for C = 1 fF.
EC_GHZ_FF = cst.e**2 / (2.0 * 1e-15 * cst.h) / 1e9


def radns_from_ghz(f_ghz: float) -> float:
    """Angular frequency in rad/ns from ordinary frequency in GHz."""
    return TWO_PI * f_ghz


def ghz_from_radns(omega: float) -> float:
    """Ordinary frequency in GHz from angular frequency in rad/ns."""
    return omega / TWO_PI


def ej_radns_from_lj_nh(l_j_nh: float) -> float:
    """Josephson energy (rad/ns) of a junction with inductance L_J in nH."""
    if l_j_nh <= 0.0:
        raise ValueError(f"L_J must be positive, got {l_j_nh}")
    return radns_from_ghz(EJ_GHZ_NH / l_j_nh)


def ec_radns_from_c_ff(c_ff: float) -> float:
    """Charging energy (rad/ns) of a capacitance given in fF."""
    if c_ff <= 0.0:
        raise ValueError(f"C must be positive, got {c_ff}")
    return radns_from_ghz(EC_GHZ_FF / c_ff)


def ec_radns_from_c_pf(c_pf: float) -> float:
    """Charging energy (rad/ns) of a capacitance given in pF."""
    return ec_radns_from_c_ff(1e3 * c_pf)


def phase_from_flux_quantum_fraction(frac: float) -> float:
    """Reduced flux phase (radians) from a flux given in units of Phi_0."""
    return TWO_PI * frac
