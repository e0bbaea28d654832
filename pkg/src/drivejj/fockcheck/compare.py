"""Cross-validation harness: brute-force extraction against the closed form.

This is the comparison layer only; the extraction code in
:mod:`drivejj.fockcheck.oracle` never touches the engines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..circuits import CircuitModel, SnailArray, SquidArray, TwoCosine, mode_frame
from ..supercoef import ScIndex, sc_closed
from .oracle import extract_sc

__all__ = ["VerifyRow", "VerifyReport", "default_matrix", "verify_engines"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class VerifyRow:
    """Worst-case comparison for one (circuit, drive amplitude) cell."""

    label: str
    pi_tilde: float
    worst_idx: Tuple[int, int, int]
    closed: float
    oracle: float
    error: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.error <= self.tolerance


@dataclass(frozen=True)
class VerifyReport:
    rows: List[VerifyRow]

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)


def default_matrix() -> List[Tuple[str, CircuitModel, float]]:
    """(label, model, E_C) cells covering one-, two- and equal-branch circuits."""
    return [
        ("transmon", TwoCosine(a_energy=-TWO_PI * 50.0, b_energy=0.0, a1=1.0), TWO_PI * 0.2),
        (
            "snail-M1",
            SnailArray(M=1, N=3, alpha_s=0.1, e_j=TWO_PI * 90.0, phi_e=TWO_PI * 0.35),
            TWO_PI * 0.18,
        ),
        (
            "snail-M2",
            SnailArray(M=2, N=3, alpha_s=0.1, e_j=TWO_PI * 90.0, phi_e=TWO_PI * 0.35),
            TWO_PI * 0.18,
        ),
        (
            "squid-M1",
            SquidArray(M=1, alpha_s=0.4, e_j=TWO_PI * 60.0, phi_dc=TWO_PI * 0.2),
            TWO_PI * 0.15,
        ),
        (
            "squid-M3",
            SquidArray(M=3, alpha_s=0.4, e_j=TWO_PI * 60.0, phi_dc=TWO_PI * 0.2),
            TWO_PI * 0.15,
        ),
    ]


def verify_engines(
    *,
    pi_values: Sequence[float] = (0.0, 0.5, 1.5),
    l_max: int = 4,
    p_max: int = 3,
    dim: int = 60,
    n_phase: int = 64,
    rel_tol: float = 1e-6,
    matrix: Optional[List[Tuple[str, CircuitModel, float]]] = None,
) -> VerifyReport:
    """Compare every amplitude in the window against the closed form.

    The tolerance per index is ``max(rel_tol·|closed|, 1e-12·E_J)`` —
    relative where the value is meaningful, with an absolute floor deep
    below the energy scale for the exact parity zeros.
    """
    rows: List[VerifyRow] = []
    for label, model, e_c in matrix if matrix is not None else default_matrix():
        frame = mode_frame(model, e_c)
        floor = 1e-12 * frame.e_j
        for pi_tilde in pi_values:
            extraction = extract_sc(
                model, frame, pi_tilde, l_max=l_max, p_max=p_max, dim=dim, n_phase=n_phase
            )
            worst = None
            for (n, l, p), got in extraction.values.items():
                want = sc_closed(model, frame, pi_tilde, ScIndex(n, l, p)).value
                tol = max(rel_tol * abs(want), floor)
                badness = abs(got - want) / tol
                if worst is None or badness > worst[0]:
                    worst = (badness, (n, l, p), want, got, tol)
            badness, idx, want, got, tol = worst
            rows.append(
                VerifyRow(
                    label=label,
                    pi_tilde=float(pi_tilde),
                    worst_idx=idx,
                    closed=want,
                    oracle=got,
                    error=abs(got - want),
                    tolerance=tol,
                )
            )
    return VerifyReport(rows=rows)
