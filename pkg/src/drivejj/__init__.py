"""drivejj: exact amplitudes of parametric processes in driven Josephson circuits."""

from . import circuits, configs, effective, eigenbasis, errors, sweep, units
from .circuits import (
    HigherHarmonics,
    ModeFrame,
    SnailArray,
    SnailArrayStrayL,
    SquidArray,
    TwoCosine,
    find_minimum,
    mode_frame,
    nonlinear_coeffs,
    stray_inductor_coeffs,
)
from .configs import BS_DESIGN, KERR_CAT_DESIGNS
from .effective import (
    BeamSplitterParams,
    ChaosAssessment,
    DownturnReport,
    KerrCatParams,
    beam_splitter,
    chaos_ratio,
    classify_ratio,
    detect_downturn,
    first_order_corrections,
    kerr_cat,
    weak_drive_squid_check,
)
from .eigenbasis import EigenFrame, EigenIndex, diagonalize_static, sc_eigen
from .supercoef import (
    DEFAULT_S_MAX,
    CapacitiveDrive,
    FluxDrive,
    MultiDrive,
    ScIndex,
    ScValue,
    flux_mode_corrections,
    hamiltonian_halving,
    sc_closed,
    sc_series,
)
from .sweep import Constraint, SweepResult, SweepSpec, chaos_filter, run_sweep

__version__ = "0.1.0"
