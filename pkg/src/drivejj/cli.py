"""TOML-configured command line front end.

Subcommands map one-to-one onto the library surface: ``sc`` tabulates
drive amplitudes, ``kerrcat``/``beamsplitter`` assemble effective
parameters, ``eigen`` works in the exact eigenbasis, ``sweep`` runs a
constrained grid scan, ``verify`` cross-checks the independent
computation routes, and ``examples`` prints built-in configurations.

Exit codes: 0 success, 1 configuration or feasibility failure, 2
verification failure.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Tuple

try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python < 3.11
    import tomli

from .circuits import SnailArray, SnailArrayStrayL, SquidArray, TwoCosine, mode_frame
from .effective import beam_splitter, kerr_cat, weak_drive_squid_check
from .eigenbasis import EigenIndex, diagonalize_static, sc_eigen
from .errors import ConfigError, DriveJJError
from .sweep import Constraint, SweepSpec, run_sweep
from .supercoef import (
    DEFAULT_S_MAX,
    CapacitiveDrive,
    FluxDrive,
    ScIndex,
    hamiltonian_halving,
    sc_closed,
    sc_series,
)
from .units import (
    TWO_PI,
    ec_radns_from_c_ff,
    ec_radns_from_c_pf,
    ej_radns_from_lj_nh,
    phase_from_flux_quantum_fraction,
    radns_from_ghz,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2

_SECTION_KEYS = {
    "circuit": {
        "family", "m", "n", "alpha_s", "x_j", "l_j_nh", "e_j_ghz",
        "c_ff", "c_pf", "e_c_ghz", "flux_phi0", "r_a", "r_b",
    },
    "drive": {"kind", "pi_tilde", "omega_amp_ghz", "phi_ac0", "omega_d_ghz"},
    "task": {
        "name", "nmax", "lmax", "pmax",
        "omega_b_ghz", "omega_c_ghz", "g_b_ghz", "g_c_ghz",
        "basis", "dim", "n_g", "jmax",
    },
    "numerics": {"s_max", "pi_tilde_max", "engine", "fix_detuning_zero"},
    "output": {"format", "path"},
}

_SWEEP_KEYS = {"family", "task", "objective", "s_max", "pi_tilde_max"}
_SWEEP_FREE = ("flux_phi0", "m", "n", "alpha_s", "x_j", "pi_tilde")


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _round12(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _check_keys(section: Dict[str, Any], allowed, where: str) -> None:
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(
            f"[{where}] unknown key(s) {', '.join(unknown)}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )


def load_config(path: str) -> Dict[str, Any]:
    """Parse and validate a TOML run configuration."""
    try:
        with open(path, "rb") as fh:
            cfg = tomli.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    except tomli.TOMLDecodeError as err:
        raise ConfigError(f"config {path}: {err}") from err

    for name, section in cfg.items():
        if name == "sweep":
            _validate_sweep_section(section)
            continue
        if name not in _SECTION_KEYS:
            raise ConfigError(
                f"unknown section [{name}]; allowed: "
                f"{', '.join(sorted(_SECTION_KEYS))}, sweep"
            )
        if not isinstance(section, dict):
            raise ConfigError(f"[{name}] must be a table")
        _check_keys(section, _SECTION_KEYS[name], name)
    return cfg


def _validate_sweep_section(section: Dict[str, Any]) -> None:
    if not isinstance(section, dict):
        raise ConfigError("[sweep] must be a table")
    allowed = _SWEEP_KEYS | {"fixed", "grids", "constraint"}
    _check_keys(section, allowed, "sweep")
    fixed = section.get("fixed", {})
    _check_keys(fixed, _SECTION_KEYS["circuit"] | {"pi_tilde"} | {
        "omega_b_ghz", "omega_c_ghz", "g_b_ghz", "g_c_ghz"
    }, "sweep.fixed")
    grids = section.get("grids", {})
    _check_keys(grids, _SWEEP_FREE, "sweep.grids")
    for entry in section.get("constraint", []):
        _check_keys(entry, {"name", "threshold"}, "sweep.constraint")
        if "name" not in entry:
            raise ConfigError("[sweep.constraint] entries need a name")


# ---------------------------------------------------------------------------
# Builders: config tables → library objects
# ---------------------------------------------------------------------------


def _energy_scales(circ: Dict[str, Any], where: str) -> Tuple[float, float]:
    ej_keys = [k for k in ("e_j_ghz", "l_j_nh") if k in circ]
    ec_keys = [k for k in ("e_c_ghz", "c_ff", "c_pf") if k in circ]
    if len(ej_keys) != 1:
        raise ConfigError(f"[{where}] needs exactly one of e_j_ghz / l_j_nh")
    if len(ec_keys) != 1:
        raise ConfigError(f"[{where}] needs exactly one of e_c_ghz / c_ff / c_pf")
    e_j = (
        radns_from_ghz(circ["e_j_ghz"])
        if ej_keys[0] == "e_j_ghz"
        else ej_radns_from_lj_nh(circ["l_j_nh"])
    )
    if ec_keys[0] == "e_c_ghz":
        e_c = radns_from_ghz(circ["e_c_ghz"])
    elif ec_keys[0] == "c_ff":
        e_c = ec_radns_from_c_ff(circ["c_ff"])
    else:
        e_c = ec_radns_from_c_pf(circ["c_pf"])
    return e_j, e_c


def build_model(circ: Dict[str, Any], where: str = "circuit"):
    """(model, e_c) from a [circuit]-shaped table."""
    family = circ.get("family")
    if family not in ("transmon", "snail", "snail_strayl", "squid"):
        raise ConfigError(f"[{where}] unknown family {family!r}")
    e_j, e_c = _energy_scales(circ, where)
    flux = phase_from_flux_quantum_fraction(circ.get("flux_phi0", 0.0))
    m = int(circ.get("m", 1))
    alpha_s = circ.get("alpha_s", 0.0)
    if family == "transmon":
        return TwoCosine(a_energy=-e_j, b_energy=0.0, a1=1.0), e_c
    if family == "squid":
        return (
            SquidArray(
                M=m,
                alpha_s=alpha_s,
                e_j=e_j,
                phi_dc=flux,
                r_a=circ.get("r_a", 0.5),
                r_b=circ.get("r_b", 0.5),
            ),
            e_c,
        )
    n = int(circ.get("n", 3))
    if family == "snail":
        return SnailArray(M=m, N=n, alpha_s=alpha_s, e_j=e_j, phi_e=flux), e_c
    if "x_j" not in circ:
        raise ConfigError(f"[{where}] family snail_strayl needs x_j")
    return (
        SnailArrayStrayL(M=m, N=n, alpha_s=alpha_s, e_j=e_j, phi_e=flux, x_j=circ["x_j"]),
        e_c,
    )


def build_drive(drv: Dict[str, Any]):
    """Raw Π̃ scalar, CapacitiveDrive, or FluxDrive from a [drive] table."""
    kind = drv.get("kind", "raw")
    if kind == "raw":
        return float(drv.get("pi_tilde", 0.0))
    if "omega_d_ghz" not in drv:
        raise ConfigError(f"[drive] kind {kind!r} needs omega_d_ghz")
    omega_d = radns_from_ghz(drv["omega_d_ghz"])
    if kind == "capacitive":
        if "omega_amp_ghz" not in drv:
            raise ConfigError("[drive] capacitive drive needs omega_amp_ghz")
        return CapacitiveDrive(radns_from_ghz(drv["omega_amp_ghz"]), omega_d)
    if kind == "flux":
        if "phi_ac0" not in drv:
            raise ConfigError("[drive] flux drive needs phi_ac0")
        return FluxDrive(drv["phi_ac0"], omega_d)
    raise ConfigError(f"[drive] unknown kind {kind!r}")


def _pick_engine(cfg: Dict[str, Any], model) -> str:
    engine = cfg.get("numerics", {}).get("engine", "auto")
    if engine == "auto":
        return "series" if isinstance(model, SnailArrayStrayL) else "closed"
    if engine not in ("series", "closed"):
        raise ConfigError(f"[numerics] unknown engine {engine!r}")
    return engine


def _emit(args, text: str) -> None:
    path = getattr(args, "out", None)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(schema: str, cfg: Dict[str, Any], results) -> str:
    doc = {"schema": schema, "config": cfg, "results": _round12(results)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_sc(args) -> int:
    cfg = load_config(args.config)
    model, e_c = build_model(cfg.get("circuit", {}))
    frame = mode_frame(model, e_c=e_c)
    drive = build_drive(cfg.get("drive", {}))
    amps = drive if isinstance(drive, float) else drive.amplitudes(model, frame)
    engine = _pick_engine(cfg, model)
    s_max = cfg.get("numerics", {}).get("s_max", DEFAULT_S_MAX)

    task = cfg.get("task", {})
    nmax = args.nmax if args.nmax is not None else int(task.get("nmax", 2))
    lmax = args.lmax if args.lmax is not None else int(task.get("lmax", 4))
    pmax = args.pmax if args.pmax is not None else int(task.get("pmax", 3))

    rows: List[Tuple[int, int, int, float, float]] = []
    for n in range(nmax + 1):
        for l in range(lmax + 1):
            for p in range(pmax + 1):
                idx = ScIndex(n, l, p)
                if engine == "series":
                    val = sc_series(frame, amps, idx, s_max=s_max)
                else:
                    val = sc_closed(model, frame, amps, idx)
                rows.append((n, l, p, val.value, hamiltonian_halving(idx)))

    if cfg.get("output", {}).get("format", "csv") == "json":
        results = [
            {"n": n, "l": l, "p": p, "value_GHz": v / TWO_PI, "halving_weight": w}
            for n, l, p, v, w in rows
        ]
        _emit(args, _json_doc("drivejj.sc.v1", cfg, results))
        return EXIT_OK

    lines = ["# schema: drivejj.sc.v1", "n,l,p,q0,engine,value_GHz,halving_weight"]
    for n, l, p, v, w in rows:
        lines.append(
            f"{n},{l},{p},{2 * n + l + p},{engine},{_fmt(v / TWO_PI)},{_fmt(w)}"
        )
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_kerrcat(args) -> int:
    cfg = load_config(args.config)
    model, e_c = build_model(cfg.get("circuit", {}))
    frame = mode_frame(model, e_c=e_c)
    drive = build_drive(cfg.get("drive", {}))
    num = cfg.get("numerics", {})
    drv = cfg.get("drive", {})
    omega_d = None
    pinned = "omega_d_ghz" in drv
    if isinstance(drive, float):
        # raw displacements carry no frequency: start at twice the mode
        # frequency and, unless pinned, iterate the detuning to zero
        omega_d = radns_from_ghz(drv["omega_d_ghz"]) if pinned else 2.0 * frame.omega0
    params = kerr_cat(
        frame,
        drive,
        omega_d=omega_d,
        fix_detuning_zero=bool(num.get("fix_detuning_zero", not pinned)),
        s_max=num.get("s_max", DEFAULT_S_MAX),
        engine=num.get("engine") if num.get("engine", "auto") != "auto" else None,
    )
    _emit(args, _json_doc("drivejj.kerrcat.v1", cfg, params.to_record()))
    return EXIT_OK


def _cmd_beamsplitter(args) -> int:
    cfg = load_config(args.config)
    model, e_c = build_model(cfg.get("circuit", {}))
    frame = mode_frame(model, e_c=e_c)
    task = cfg.get("task", {})
    for key in ("omega_b_ghz", "omega_c_ghz", "g_b_ghz", "g_c_ghz"):
        if key not in task:
            raise ConfigError(f"[task] beam splitter needs {key}")
    num = cfg.get("numerics", {})
    engine = _pick_engine(cfg, model)
    kwargs = dict(
        omega_b=radns_from_ghz(task["omega_b_ghz"]),
        omega_c=radns_from_ghz(task["omega_c_ghz"]),
        g_b=radns_from_ghz(task["g_b_ghz"]),
        g_c=radns_from_ghz(task["g_c_ghz"]),
        s_max=num.get("s_max", DEFAULT_S_MAX),
        engine=engine,
    )
    drv = cfg.get("drive", {})
    if "omega_amp_ghz" in drv:
        omega_amp = radns_from_ghz(drv["omega_amp_ghz"])
    else:
        from .configs import drive_amplitude_for_displacement

        probe = beam_splitter(frame, omega_amp=0.0, **kwargs)
        omega_amp = drive_amplitude_for_displacement(
            float(drv.get("pi_tilde", 0.0)), probe.omega_d, probe.omega_a_dressed
        )
    params = beam_splitter(frame, omega_amp=omega_amp, **kwargs)
    _emit(args, _json_doc("drivejj.beamsplitter.v1", cfg, params.to_record()))
    return EXIT_OK


def _cmd_eigen(args) -> int:
    cfg = load_config(args.config)
    model, e_c = build_model(cfg.get("circuit", {}))
    drv = cfg.get("drive", {})
    drive = None if drv.get("kind", "raw") == "raw" else build_drive(drv)
    task = cfg.get("task", {})
    eig = diagonalize_static(
        model,
        e_c=e_c,
        drive=drive,
        n_g=task.get("n_g", 0.0),
        basis=task.get("basis", "auto"),
        dim=task.get("dim"),
    )
    jmax = int(task.get("jmax", 3))
    pmax = int(task.get("pmax", 2))
    rows = []
    for j in range(jmax + 1):
        for k in range(j, jmax + 1):
            for p in range(pmax + 1):
                val = sc_eigen(eig, EigenIndex(j, k, p))
                rows.append((j, k, p, val.value / TWO_PI))

    if cfg.get("output", {}).get("format", "csv") == "json":
        results = {
            "basis": eig.basis,
            "levels_GHz": [e / TWO_PI for e in eig.energies[: jmax + 1]],
            "elements": [
                {"j": j, "k": k, "p": p, "value_GHz": v} for j, k, p, v in rows
            ],
        }
        _emit(args, _json_doc("drivejj.eigen.v1", cfg, results))
        return EXIT_OK

    lines = ["# schema: drivejj.eigen.v1", "j,k,p,basis,value_GHz"]
    for j, k, p, v in rows:
        lines.append(f"{j},{k},{p},{eig.basis},{_fmt(v)}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if "sweep" not in cfg:
        raise ConfigError("sweep subcommand needs a [sweep] section")
    sw = cfg["sweep"]
    fixed = dict(sw.get("fixed", {}))
    grids = dict(sw.get("grids", {}))

    resolved_fixed: Dict[str, float] = {}
    if any(k in fixed for k in ("e_j_ghz", "l_j_nh")):
        e_j, e_c = _energy_scales(fixed, "sweep.fixed")
        resolved_fixed["e_j"] = e_j
        resolved_fixed["e_c"] = e_c
    for key in ("m", "n", "alpha_s", "x_j", "pi_tilde", "r_a", "r_b"):
        if key in fixed:
            resolved_fixed[key] = fixed[key]
    if "flux_phi0" in fixed:
        resolved_fixed["phi_e"] = phase_from_flux_quantum_fraction(fixed["flux_phi0"])
    for key in ("omega_b_ghz", "omega_c_ghz", "g_b_ghz", "g_c_ghz"):
        if key in fixed:
            resolved_fixed[key[:-4]] = radns_from_ghz(fixed[key])

    resolved_grids: Dict[str, tuple] = {}
    for key, values in grids.items():
        if key == "flux_phi0":
            resolved_grids["phi_e"] = tuple(
                phase_from_flux_quantum_fraction(v) for v in values
            )
        else:
            resolved_grids[key] = tuple(values)

    constraints = tuple(
        Constraint(entry["name"], entry.get("threshold"))
        for entry in sw.get("constraint", [])
    )
    spec = SweepSpec(
        family=sw.get("family", "snail"),
        task=sw.get("task", "kerrcat"),
        fixed=resolved_fixed,
        grids=resolved_grids,
        constraints=constraints,
        objective=sw.get("objective", "cat_size"),
        s_max=sw.get("s_max", DEFAULT_S_MAX),
        pi_tilde_max=sw.get("pi_tilde_max", 2.0),
    )
    result = run_sweep(spec)

    csv_text = result.to_csv()
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(csv_text)
    summary = {
        "objective": spec.objective,
        "best_index": result.best_index,
        "best_params": result.best.params,
        "best_values": result.best.values,
        "grid_points": len(result.records),
        "feasible_points": sum(r.feasible for r in result.records),
    }
    doc = _json_doc("drivejj.sweep.v1", cfg, summary)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(doc)
    if not args.csv and not args.json:
        sys.stdout.write(csv_text)
    elif not args.json:
        sys.stdout.write(doc)
    return EXIT_OK


# --- verify -----------------------------------------------------------------


def _rel(a: float, b: float, floor: float) -> float:
    return abs(a - b) / max(abs(b), floor)


def _check_series_vs_closed(model, e_c, pi_tilde, s_max=40) -> float:
    """Worst error/tolerance ratio; tolerance is relative with an absolute
    floor of 1e-12·E_J for the exact parity zeros."""
    frame = mode_frame(model, e_c=e_c)
    worst = 0.0
    for n, l, p in [(0, 0, 2), (0, 1, 1), (0, 2, 1), (1, 0, 0), (0, 3, 0), (2, 0, 0), (1, 2, 1)]:
        idx = ScIndex(n, l, p)
        ser = sc_series(frame, pi_tilde, idx, s_max=s_max).value
        clo = sc_closed(model, frame, pi_tilde, idx).value
        tol = max(1e-9 * abs(clo), 1e-12 * model.e_j)
        worst = max(worst, abs(ser - clo) / tol)
    return worst


def _check_fock_vs_closed() -> float:
    from .fockcheck import verify_engines

    report = verify_engines(pi_values=(0.5,))
    return max(row.error / row.tolerance for row in report.rows)


def _check_weak_drive() -> float:
    model = SquidArray(M=2, alpha_s=0.6, e_j=radns_from_ghz(120.0), phi_dc=TWO_PI * 0.12)
    frame = mode_frame(model, e_c=radns_from_ghz(0.15))
    k_wd, eps2_wd = weak_drive_squid_check(model, frame, 1e-3)
    drive = FluxDrive(1e-3, 2.0 * frame.omega0 + 0.3)
    amps = drive.amplitudes(model, frame)
    kerr = -sc_closed(model, frame, amps, ScIndex(2, 0, 0)).value
    eps2 = sc_closed(model, frame, amps, ScIndex(0, 2, 1)).value
    return max(_rel(kerr, k_wd, 1e-15), _rel(eps2, eps2_wd, 1e-15))


def _check_eigen_parity() -> float:
    model = SquidArray(M=1, alpha_s=1.0, e_j=radns_from_ghz(60.0), phi_dc=TWO_PI * 0.1)
    eig = diagonalize_static(model, e_c=radns_from_ghz(0.3), basis="charge")
    worst = 0.0
    for j, k, p in [(0, 0, 1), (0, 2, 1), (0, 1, 0)]:
        worst = max(worst, abs(sc_eigen(eig, EigenIndex(j, k, p)).value) / model.e_j)
    return worst


def _cmd_verify(args) -> int:
    snail = SnailArray(
        M=1, N=3, alpha_s=0.12, e_j=radns_from_ghz(100.0), phi_e=TWO_PI * 0.35
    )
    squid = SquidArray(
        M=2, alpha_s=0.4, e_j=radns_from_ghz(75.0), phi_dc=TWO_PI * 0.18
    )
    checks = [
        (
            "series-vs-closed snail (err/tol)",
            lambda: _check_series_vs_closed(snail, radns_from_ghz(0.17), 1.2),
            1.0,
        ),
        (
            "series-vs-closed squid (err/tol)",
            lambda: _check_series_vs_closed(squid, radns_from_ghz(0.19), 0.8),
            1.0,
        ),
        ("weak-drive identities", _check_weak_drive, 1e-4),
    ]
    if args.suite == "full":
        checks += [
            ("fock-vs-closed (err/tol)", _check_fock_vs_closed, 1.0),
            ("eigenbasis parity", _check_eigen_parity, 1e-10),
        ]

    failures = 0
    name_w = max(len(name) for name, _, _ in checks)
    print(f"{'check':<{name_w}}  {'worst':>12}  {'limit':>8}  status")
    for name, fn, limit in checks:
        worst = fn()
        ok = worst <= limit
        failures += 0 if ok else 1
        print(f"{name:<{name_w}}  {worst:>12.3e}  {limit:>8.0e}  {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


# --- examples ---------------------------------------------------------------


def _kerrcat_example(m, l_j_nh, x_j, c_ff, alpha_s, flux, pi_tilde_max) -> str:
    return f"""\
[circuit]
family = "snail_strayl"
m = {m}
n = 3
alpha_s = {alpha_s}
l_j_nh = {l_j_nh}
x_j = {x_j}
c_ff = {c_ff}
flux_phi0 = {flux}

[drive]
pi_tilde = 0.5

[task]
name = "kerrcat"

[numerics]
s_max = 13
pi_tilde_max = {pi_tilde_max}

[output]
format = "json"
"""


EXAMPLES = {
    "kerr-cat-configA": _kerrcat_example(1, 0.80, 100.0, 320.0, 0.11, 0.32, 1.5),
    "kerr-cat-configB": _kerrcat_example(2, 0.60, 1.0, 160.0, 0.11, 0.46, 3.0),
    "kerr-cat-configC": _kerrcat_example(1, 0.35, 10.0, 620.0, 0.05, 0.34, 2.9),
    "kerr-cat-configD": _kerrcat_example(2, 0.39, 0.27, 170.0, 0.0739, 0.25, 5.3),
    "beam-splitter": """\
[circuit]
family = "snail_strayl"
m = 1
n = 3
alpha_s = 0.15
e_j_ghz = 86.0
x_j = 0.7109
e_c_ghz = 0.177
flux_phi0 = 0.36

[drive]
pi_tilde = 1.0

[task]
name = "beamsplitter"
omega_b_ghz = 2.976
omega_c_ghz = 6.915
g_b_ghz = 0.0756
g_c_ghz = 0.1349

[numerics]
s_max = 13
engine = "series"

[output]
format = "json"
""",
}


def _cmd_examples(args) -> int:
    if args.list or args.name is None:
        for name in sorted(EXAMPLES):
            print(name)
        return EXIT_OK
    if args.name not in EXAMPLES:
        raise ConfigError(
            f"unknown example {args.name!r}; available: {', '.join(sorted(EXAMPLES))}"
        )
    _emit(args, EXAMPLES[args.name])
    return EXIT_OK


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivejj",
        description="Driven Josephson-circuit amplitudes and effective parameters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, config=True, out=True):
        p = sub.add_parser(name, help=help_text)
        if config:
            p.add_argument("--config", required=True, help="TOML run configuration")
        if out:
            p.add_argument("-o", "--out", help="output path (default stdout)")
        p.set_defaults(fn=fn)
        return p

    p_sc = add("sc", _cmd_sc, "tabulate drive-amplitude coefficients")
    p_sc.add_argument("--nmax", type=int, help="highest photon-conserving order n")
    p_sc.add_argument("--lmax", type=int, help="highest ladder imbalance l")
    p_sc.add_argument("--pmax", type=int, help="highest drive harmonic p")

    add("kerrcat", _cmd_kerrcat, "squeezing-drive effective parameters")
    add("beamsplitter", _cmd_beamsplitter, "two-cavity conversion parameters")
    add("eigen", _cmd_eigen, "exact-eigenbasis amplitudes")

    p_sw = add("sweep", _cmd_sweep, "constrained design grid scan", out=False)
    p_sw.add_argument("--csv", help="write the per-point table here")
    p_sw.add_argument("--json", help="write the argmax summary here")

    p_v = sub.add_parser("verify", help="cross-check independent computation routes")
    p_v.add_argument("--suite", choices=("fast", "full"), default="fast")
    p_v.set_defaults(fn=_cmd_verify)

    p_ex = sub.add_parser("examples", help="print a built-in configuration")
    p_ex.add_argument("name", nargs="?", help="example name")
    p_ex.add_argument("--list", action="store_true", help="list available names")
    p_ex.add_argument("-o", "--out", help="output path (default stdout)")
    p_ex.set_defaults(fn=_cmd_examples)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except DriveJJError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
