"""Constrained grid scans over circuit designs.

A sweep is a cartesian grid over free circuit parameters, a list of named
constraints evaluated cheapest-first, and a named objective. Infeasible
points stay in the output with their constraint flags; the argmax is the
first feasible point (in grid declaration order) attaining the best
objective, so reruns and worker pools reproduce results byte for byte.
"""

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from .circuits import SnailArray, SnailArrayStrayL, SquidArray, mode_frame
from .effective import beam_splitter, kerr_cat
from .errors import DriveJJError, NoFeasiblePoint
from .supercoef import DEFAULT_S_MAX

TWO_PI = 2.0 * math.pi

#: default drive budget, the series engine's trusted displacement range
DEFAULT_PI_TILDE_MAX = 2.0

CSV_SCHEMA = "drivejj.sweep.v1"

KERRCAT_VALUE_COLUMNS = (
    "omega_q_GHz",
    "omega_d_GHz",
    "K_MHz",
    "eps2_MHz",
    "delta_MHz",
    "cat_size",
    "chaos_ratio",
    "gamma_rad",
    "pi_tilde",
)
BS_VALUE_COLUMNS = (
    "g_BS_MHz",
    "chi_bc_Hz",
    "g_ab_MHz",
    "g_ac_MHz",
    "Delta_a_MHz",
    "delta_tilde_MHz",
    "omega_d_GHz",
    "pi_tilde",
    "flag_ab",
    "flag_ac",
)

OBJECTIVES = {
    "cat_size": lambda values: values["cat_size"],
    "kerr_abs_mhz": lambda values: abs(values["K_MHz"]),
    "eps2_mhz": lambda values: values["eps2_MHz"],
    "g_bs_abs_mhz": lambda values: abs(values["g_BS_MHz"]),
    "chi_bc_hz": lambda values: values["chi_bc_Hz"],
}

#: constraint name → (stage, predicate(stage_data, threshold)); stages are
#: 0 = raw parameters, 1 = mode frame, 2 = effective parameters
CONSTRAINTS = {
    "drive_budget": (0, lambda params, t: params["pi_tilde"] <= t),
    "omega0_band_ghz": (1, lambda frame, t: t[0] <= frame.omega0 / TWO_PI <= t[1]),
    "kerr_abs_min_mhz": (2, lambda values, t: abs(values["K_MHz"]) >= t),
    "chaos_ratio_max": (2, lambda values, t: values["chaos_ratio"] <= t),
    "cat_size_min": (2, lambda values, t: values["cat_size"] >= t),
    "bs_ratio_max": (
        2,
        lambda values, t: not (values["flag_ab"] or values["flag_ac"]),
    ),
    "chi_bc_min_hz": (2, lambda values, t: values["chi_bc_Hz"] >= t),
}


@dataclass(frozen=True)
class Constraint:
    name: str
    threshold: Any = None

    def stage(self) -> int:
        return CONSTRAINTS[self.name][0]

    def check(self, data) -> bool:
        return bool(CONSTRAINTS[self.name][1](data, self.threshold))


@dataclass(frozen=True)
class SweepSpec:
    """Grid-scan declaration.

    ``grids`` maps free-parameter names to finite value sequences; the
    declaration order defines the lexicographic grid order used for
    tie-breaks. Recognized free parameters: phi_e, m, n, alpha_s, x_j,
    pi_tilde. ``fixed`` supplies whatever the family still needs (e_j,
    e_c, and for beam-splitter tasks omega_b/omega_c/g_b/g_c).
    """

    family: str  # snail | snail_strayl | squid
    task: str = "kerrcat"  # kerrcat | beamsplitter
    fixed: Mapping[str, float] = field(default_factory=dict)
    grids: Mapping[str, Sequence[float]] = field(default_factory=dict)
    constraints: Tuple[Constraint, ...] = ()
    objective: str = "cat_size"
    s_max: int = DEFAULT_S_MAX
    pi_tilde_max: float = DEFAULT_PI_TILDE_MAX

    def validate(self) -> None:
        if self.family not in ("snail", "snail_strayl", "squid"):
            raise ValueError(f"unknown circuit family {self.family!r}")
        if self.task not in ("kerrcat", "beamsplitter"):
            raise ValueError(f"unknown sweep task {self.task!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        for c in self.constraints:
            if c.name not in CONSTRAINTS:
                raise ValueError(f"unknown constraint {c.name!r}")
        for key, grid in self.grids.items():
            if key not in ("phi_e", "m", "n", "alpha_s", "x_j", "pi_tilde"):
                raise ValueError(f"unknown free parameter {key!r}")
            if len(grid) == 0:
                raise ValueError(f"empty grid for {key!r}")


@dataclass(frozen=True)
class SweepRecord:
    params: Dict[str, float]
    values: Dict[str, float]
    flags: Dict[str, Optional[bool]]
    feasible: bool
    objective: float
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: Tuple[SweepRecord, ...]
    best_index: int
    note: str = ""

    @property
    def best(self) -> SweepRecord:
        return self.records[self.best_index]

    def to_csv(self) -> str:
        param_cols = list(self.spec.grids.keys())
        value_cols = KERRCAT_VALUE_COLUMNS if self.spec.task == "kerrcat" else BS_VALUE_COLUMNS
        flag_cols = [c.name for c in self.spec.constraints]
        header = param_cols + list(value_cols) + flag_cols + ["feasible", "objective", "note"]
        lines = [f"# schema: {CSV_SCHEMA}", ",".join(header)]
        for rec in self.records:
            row = [f"{rec.params[c]:.12g}" for c in param_cols]
            row += [f"{rec.values.get(c, math.nan):.12g}" for c in value_cols]
            for name in flag_cols:
                flag = rec.flags.get(name)
                row.append("" if flag is None else str(int(flag)))
            row.append(str(int(rec.feasible)))
            row.append(f"{rec.objective:.12g}")
            row.append(rec.note)
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def _build_model(spec: SweepSpec, params: Mapping[str, float]):
    def pick(key, default=None):
        if key in params:
            return params[key]
        if key in spec.fixed:
            return spec.fixed[key]
        if default is not None:
            return default
        raise ValueError(f"parameter {key!r} is neither swept nor fixed")

    m = int(pick("m", 1))
    alpha_s = pick("alpha_s")
    e_j = pick("e_j")
    flux = pick("phi_e")
    if spec.family == "squid":
        return SquidArray(
            M=m,
            alpha_s=alpha_s,
            e_j=e_j,
            phi_dc=flux,
            r_a=spec.fixed.get("r_a", 0.5),
            r_b=spec.fixed.get("r_b", 0.5),
        )
    n = int(pick("n", 3))
    if spec.family == "snail":
        return SnailArray(M=m, N=n, alpha_s=alpha_s, e_j=e_j, phi_e=flux)
    return SnailArrayStrayL(M=m, N=n, alpha_s=alpha_s, e_j=e_j, phi_e=flux, x_j=pick("x_j"))


def _stage_flags(constraints, stage, data, flags) -> bool:
    ok = True
    for c in constraints:
        if c.stage() == stage:
            flags[c.name] = c.check(data)
            ok = ok and flags[c.name]
    return ok


def _evaluate_point(spec: SweepSpec, params: Dict[str, float]) -> SweepRecord:
    flags: Dict[str, Optional[bool]] = {c.name: None for c in spec.constraints}
    pi_tilde = params.get("pi_tilde", spec.fixed.get("pi_tilde", 0.0))
    stage0 = dict(params)
    stage0["pi_tilde"] = pi_tilde
    budget_ok = pi_tilde <= spec.pi_tilde_max
    if not _stage_flags(spec.constraints, 0, stage0, flags) or not budget_ok:
        note = "" if budget_ok else "over drive budget"
        return SweepRecord(dict(params), {}, flags, False, math.nan, note)

    try:
        model = _build_model(spec, params)
        frame = mode_frame(model, e_c=spec.fixed["e_c"])
        if not _stage_flags(spec.constraints, 1, frame, flags):
            return SweepRecord(dict(params), {}, flags, False, math.nan, "")
        if spec.task == "kerrcat":
            eff = kerr_cat(
                frame,
                pi_tilde,
                omega_d=2.0 * frame.omega0,
                fix_detuning_zero=True,
                s_max=spec.s_max,
            )
        else:
            from .configs import drive_amplitude_for_displacement

            probe = beam_splitter(
                frame,
                omega_b=spec.fixed["omega_b"],
                omega_c=spec.fixed["omega_c"],
                g_b=spec.fixed["g_b"],
                g_c=spec.fixed["g_c"],
                omega_amp=0.0,
                s_max=spec.s_max,
                engine="series" if spec.family == "snail_strayl" else "closed",
            )
            omega_amp = drive_amplitude_for_displacement(
                pi_tilde, probe.omega_d, probe.omega_a_dressed
            )
            eff = beam_splitter(
                frame,
                omega_b=spec.fixed["omega_b"],
                omega_c=spec.fixed["omega_c"],
                g_b=spec.fixed["g_b"],
                g_c=spec.fixed["g_c"],
                omega_amp=omega_amp,
                s_max=spec.s_max,
                engine="series" if spec.family == "snail_strayl" else "closed",
            )
    except DriveJJError as err:
        return SweepRecord(dict(params), {}, flags, False, math.nan, type(err).__name__)

    values = eff.to_record()
    feasible = _stage_flags(spec.constraints, 2, values, flags)
    objective = OBJECTIVES[spec.objective](values)
    return SweepRecord(dict(params), values, flags, feasible, objective, "")


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("DRIVEJJ_THREADS", "1")))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the grid, flag constraints, and locate the best feasible point.

    Points are generated as the cartesian product of the grids in their
    declaration order; results are gathered in that same order regardless
    of the worker count (DRIVEJJ_THREADS), so equal specs produce equal
    CSV bytes.
    """
    spec.validate()
    names = list(spec.grids.keys())
    points = [
        dict(zip(names, combo)) for combo in itertools.product(*spec.grids.values())
    ]
    if not points:
        raise ValueError("sweep has no grid points")

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(lambda p: _evaluate_point(spec, p), points))
    else:
        records = tuple(_evaluate_point(spec, p) for p in points)

    best_index = _argmax(records)
    return SweepResult(spec=spec, records=records, best_index=best_index)


def _argmax(records: Sequence[SweepRecord]) -> int:
    best, best_val = -1, -math.inf
    for i, rec in enumerate(records):
        if rec.feasible and rec.objective > best_val:
            best, best_val = i, rec.objective
    if best < 0:
        raise NoFeasiblePoint("no grid point satisfies all constraints")
    return best


def chaos_filter(result: SweepResult, threshold: float = 0.025) -> SweepResult:
    """Drop points whose chaos ratio exceeds the threshold.

    Points without a computed ratio (already infeasible) are kept as-is;
    the note records whether the argmax moved.
    """
    kept = tuple(
        rec
        for rec in result.records
        if not (
            "chaos_ratio" in rec.values
            and math.isfinite(rec.values["chaos_ratio"])
            and rec.values["chaos_ratio"] > threshold
        )
    )
    old_best = result.best
    best_index = _argmax(kept)
    moved = kept[best_index].params != old_best.params
    note = "argmax moved" if moved else "argmax unchanged"
    return SweepResult(spec=result.spec, records=kept, best_index=best_index, note=note)
