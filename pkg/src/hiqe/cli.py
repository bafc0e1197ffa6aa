"""Command-line front end.

Every flag mirrors a key of the JSON config file (``--theta-final`` is
``theta_final``) and flags override file values. Exit codes: 0 success,
2 unparsable input, 3 failed validation, 4 numerical failure. Errors are
written to stderr as a one-line JSON object.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

import numpy as np

from . import serialize
from .dynamics import IntegrationError, IntegratorConfig, propagate
from .extraction import CONVENTIONS, SOURCES, ExtractionConfig, ExtractionError, coefficient_series, path_hamiltonian
from .linalg import KET_0, KET_1, KET_MINUS, KET_PLUS, fidelity, state_vector
from .protocols import (
    DEUTSCH_MODES,
    THETA_MODES,
    BooleanFunction,
    GroverInstance,
    ProtocolError,
    deutsch_run,
    grover_full_run,
    grover_reduced_run,
    grover_target_angle,
)
from .schedules import BoundarySpec, ScheduleError, check_boundaries
from .synthesis import UnitaryPath, unitary_at, validate_path

COMMANDS = ("deutsch", "grover", "extract", "evolve", "validate")
GROVER_MODES = ("reduced", "full_register")
LABELLED_STATES = {"0": KET_0, "1": KET_1, "+": KET_PLUS, "-": KET_MINUS}
DEFAULTS = {
    "tau": 1.0,
    "steps": 4096,
    "method": "exp_midpoint",
    "record_every": 1,
    "fd_step": None,
    "f": "0,1",
    "n": 2,
    "marked": 0,
    "theta_final": "auto",
    "a": 0,
    "theta_mode": "constant",
    "samples": 101,
    "source": "finite_difference",
    "convention": "paper_literal",
    "f_convention": "corrected",
    "psi0": "0",
}
EXIT_PARSE, EXIT_VALIDATION, EXIT_NUMERIC = 2, 3, 4


class ConfigError(Exception):
    """Input could not be parsed (exit 2)."""


class ValidationFailure(Exception):
    """Input parsed but violates a precondition (exit 3)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hiqe", description="Hamiltonian inverse engineering runs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run config; flags override its keys")
    common.add_argument("--tau", type=float)
    common.add_argument("--steps", type=int)
    common.add_argument("--method", choices=("exp_midpoint", "rk4"))
    common.add_argument("--record-every", dest="record_every", type=int)
    common.add_argument("--fd-step", dest="fd_step", type=float)
    common.add_argument("--out", help="report JSON path (default stdout)")
    common.add_argument("--csv", help="trajectory or coefficient CSV path")

    p = sub.add_parser("deutsch", parents=[common], help="single-qubit Deutsch run")
    p.add_argument("--f", help="function bits, e.g. 0,1")
    p.add_argument("--mode", choices=DEUTSCH_MODES)

    p = sub.add_parser("grover", parents=[common], help="Grover search run")
    p.add_argument("--n", type=int, help="number of qubits")
    p.add_argument("--marked", type=int, help="marked basis index")
    p.add_argument("--theta-final", dest="theta_final", help="'auto' or an angle in radians")
    p.add_argument("--a", type=int, help="branch integer used with --theta-final auto")
    p.add_argument("--theta-mode", dest="theta_mode", choices=THETA_MODES)
    p.add_argument("--mode", choices=GROVER_MODES)

    p = sub.add_parser("extract", parents=[common], help="Pauli coefficients of a configured path")
    p.add_argument("--samples", type=int)
    p.add_argument("--source", choices=SOURCES)
    p.add_argument("--convention", choices=CONVENTIONS)
    p.add_argument("--f-convention", dest="f_convention", choices=CONVENTIONS)
    p.add_argument("--f")

    p = sub.add_parser("evolve", parents=[common], help="integrate the extracted Hamiltonian of a path")
    p.add_argument("--psi0", help="initial state label: 0, 1, + or -")

    p = sub.add_parser("validate", parents=[common], help="check a configured path")
    p.add_argument("--samples", type=int)
    return parser


def load_config(argv) -> dict:
    args = build_parser().parse_args(argv)
    cfg = dict(DEFAULTS)
    cfg["mode"] = {"deutsch": "phase_ramp", "grover": "reduced"}.get(args.command)
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        if file_cfg.get("command", args.command) != args.command:
            raise ConfigError(f"config is for command {file_cfg['command']!r}, not {args.command!r}")
        cfg.update(file_cfg)
    cfg.update({k: v for k, v in vars(args).items() if v is not None and k != "config"})
    cfg["command"] = args.command
    return cfg


def _integrator(cfg) -> IntegratorConfig:
    try:
        return IntegratorConfig(method=cfg["method"], steps=cfg["steps"], record_every=cfg["record_every"])
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc


def _tau(cfg) -> float:
    tau = float(cfg["tau"])
    if not (math.isfinite(tau) and tau > 0):
        raise ValidationFailure("tau must be positive")
    return tau


def _path(cfg) -> UnitaryPath:
    try:
        data = cfg["path"] if "path" in cfg else {k: cfg[k] for k in ("frame", "phase1", "phase2")}
    except KeyError as exc:
        raise ConfigError(f"config is missing path key {exc}") from exc
    try:
        path = UnitaryPath.from_dict(data, _tau(cfg))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed path: {exc}") from exc
    _check_declared_boundaries(cfg, path)
    return path


def _check_declared_boundaries(cfg, path):
    schedules = {
        "theta": path.frame.theta,
        "omega": path.frame.omega,
        "phase1": path.phase1,
        "phase2": path.phase2,
    }
    for name, spec in (cfg.get("boundaries") or {}).items():
        if name not in schedules:
            raise ConfigError(f"boundary given for unknown schedule {name!r}")
        b = BoundarySpec(float(spec["value_at_0"]), float(spec["value_at_tau"]))
        if not check_boundaries(schedules[name], b):
            s = schedules[name]
            raise ValidationFailure(
                f"schedule {name} violates its boundary spec: "
                f"({s.start!r}, {s.end!r}) != ({b.value_at_0!r}, {b.value_at_tau!r})"
            )


def _extraction(cfg) -> ExtractionConfig:
    return ExtractionConfig(fd_step=cfg["fd_step"])


def _bits(cfg) -> BooleanFunction:
    f = cfg["f"]
    return BooleanFunction.parse(",".join(str(b) for b in f) if isinstance(f, (list, tuple)) else f)


def _run_deutsch(cfg):
    tau, icfg = _tau(cfg), _integrator(cfg)
    report = deutsch_run(_bits(cfg), tau, icfg, cfg["mode"], _extraction(cfg))
    return {"command": "deutsch", "tau": tau, "steps": icfg.steps, "method": icfg.method,
            **report.to_dict()}, None


def _run_grover(cfg):
    tau, icfg = _tau(cfg), _integrator(cfg)
    inst = GroverInstance(int(cfg["n"]), int(cfg["marked"]))
    theta_final = cfg["theta_final"]
    if theta_final == "auto":
        theta_tau = grover_target_angle(inst.N, int(cfg["a"]))
    else:
        try:
            theta_tau = float(theta_final)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"theta_final must be 'auto' or a number, got {theta_final!r}") from exc
    ext = _extraction(cfg)
    if cfg["mode"] == "full_register":
        report = grover_full_run(inst, theta_tau, tau, icfg, cfg["theta_mode"], ext)
    elif cfg["mode"] == "reduced":
        report = grover_reduced_run(inst.N, theta_tau, tau, icfg, cfg["theta_mode"], ext)
    else:
        raise ConfigError(f"unknown grover mode {cfg['mode']!r}")
    data = report.to_dict()
    trajectory = data.pop("p_trajectory")
    out = {"command": "grover", "tau": tau, "steps": icfg.steps, "method": icfg.method,
           "n_qubits": inst.n_qubits, "marked_index": inst.marked_index, **data}

    def write(fh):
        if trajectory is None:
            raise ValidationFailure("p_m trajectory CSV needs --mode full_register")
        # population samples follow the integrator's record grid
        n = len(trajectory)
        idx = np.arange(0, icfg.steps + 1, icfg.record_every)
        if idx[-1] != icfg.steps:
            idx = np.append(idx, icfg.steps)
        times = tau * idx / icfg.steps
        serialize.write_csv(fh, ["t", "p_m"], zip(times[:n], trajectory))

    return out, write


def _run_extract(cfg):
    path = _path(cfg)
    options = {}
    if cfg["source"] != "finite_difference":
        options = {"convention": cfg["convention"]}
        if cfg["source"] == "closed_form_deutsch":
            bits = _bits(cfg)
            options = {"f": (bits.f0, bits.f1), "f_convention": cfg["f_convention"]}
    samples = coefficient_series(path, int(cfg["samples"]), cfg["source"], _extraction(cfg), **options)

    def write(fh):
        serialize.write_coefficients_csv(fh, samples)

    summary = {"command": "extract", "tau": path.tau, "source": cfg["source"], "samples": len(samples)}
    return summary, write


def _initial_state(value):
    if isinstance(value, str):
        if value not in LABELLED_STATES:
            raise ConfigError(f"unknown state label {value!r}")
        return np.array(LABELLED_STATES[value])
    try:
        return state_vector([complex(re, im) for re, im in value])
    except (TypeError, ValueError) as exc:
        raise ValidationFailure(f"invalid psi0: {exc}") from exc


def _run_evolve(cfg):
    path = _path(cfg)
    tau, icfg = path.tau, _integrator(cfg)
    psi0 = _initial_state(cfg["psi0"])
    traj = propagate(path_hamiltonian(path, _extraction(cfg)), psi0, tau, icfg)
    target = unitary_at(path, tau) @ unitary_at(path, 0.0).conj().T @ psi0
    summary = {
        "command": "evolve",
        "tau": tau,
        "steps": icfg.steps,
        "method": icfg.method,
        "final_state": [[float(z.real), float(z.imag)] for z in traj.final_state],
        "fidelity_to_designed": fidelity(traj.final_state, target),
        "max_norm_drift": traj.max_norm_drift,
    }

    def write(fh):
        serialize.write_trajectory_csv(fh, traj)

    return summary, write


def _run_validate(cfg):
    path = _path(cfg)
    report = validate_path(path, int(cfg["samples"]))
    if not report.is_unitary:
        raise ValidationFailure(f"unitarity check failed: max defect {report.max_unitarity_defect!r}")
    if not report.identity_at_zero:
        raise ValidationFailure(
            f"identity-at-zero check failed: max |U(0) - 1| = {report.max_identity_defect!r}"
        )
    return {"command": "validate", "tau": path.tau, "is_unitary": True, "identity_at_zero": True,
            "max_unitarity_defect": report.max_unitarity_defect,
            "max_identity_defect": report.max_identity_defect}, None


RUNNERS = {
    "deutsch": _run_deutsch,
    "grover": _run_grover,
    "extract": _run_extract,
    "evolve": _run_evolve,
    "validate": _run_validate,
}


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def run(cfg: dict) -> int:
    """Execute a parsed config; returns the process exit status."""
    summary, write_csv = RUNNERS[cfg["command"]](cfg)
    if write_csv is not None and (cfg.get("csv") or cfg["command"] == "extract"):
        with _output(cfg.get("csv")) as fh:
            write_csv(fh)
        if cfg["command"] == "extract" and not cfg.get("csv"):
            return 0
    with _output(cfg.get("out")) as fh:
        fh.write(serialize.dumps(summary))
    return 0


def _fail(kind, message, status):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_status": status}) + "\n")
    return status


def main(argv=None) -> int:
    try:
        cfg = load_config(argv)
        return run(cfg)
    except ConfigError as exc:
        return _fail("parse", str(exc), EXIT_PARSE)
    except (ValidationFailure, ProtocolError, ScheduleError, ExtractionError) as exc:
        return _fail("validation", str(exc), EXIT_VALIDATION)
    except (IntegrationError, FloatingPointError, OverflowError) as exc:
        return _fail("numeric", str(exc), EXIT_NUMERIC)
    except ValueError as exc:
        return _fail("validation", str(exc), EXIT_VALIDATION)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_VALIDATION)


if __name__ == "__main__":
    sys.exit(main())
