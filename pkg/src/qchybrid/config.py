"""Experiment configuration: flat key/value files plus CLI overrides.

Grammar
-------
One ``key = value`` pair per line.  Keys are lower-case identifiers with
dotted section prefixes (``model.omega``); values are numbers, names, or
comma-separated complex literals.  ``#`` starts a comment (full-line or
trailing); blank lines are ignored.  CLI ``--set key=value`` flags override
file values, and ``--out``/``--seed``/``--threads`` override their keys.

Keys (defaults in parentheses; R = required)
--------------------------------------------
experiment            simulate | ensemble | cool | perturb | check (set by CLI)
model.omega           oscillator angular frequency (R)
model.omega0          q-bit splitting (0.0); exclusive with model.omega0_ratio
model.omega0_ratio    q-bit splitting as a multiple of omega
model.beta            hybrid coupling (0.0, warns when omitted)
model.m               oscillator mass (1.0)
state.name            catalog state name; exclusive with state.c
state.c               four comma-separated complex amplitudes (normalized)
init.x0, init.p0      classical initial conditions (0.0, 1.0)
schedule.kind         constant (default) | gaussian_pulse
schedule.amplitude    pulse peak in units of Omega (R for gaussian_pulse)
schedule.t0           pulse center time (R for gaussian_pulse)
schedule.sigma        pulse width (R for gaussian_pulse)
pert.kind             none (default) | single_qubit | two_qubit
pert.w1/.w2/.w3       perturbation weights (0.0)
run.t_max             integration horizon (R)
run.dt                integration step (0.01)
run.stride            output decimation (100)
ensemble.m            number of trajectories (100)
ensemble.x_mean       mean initial position (0.0)
ensemble.p_mean       mean initial momentum (0.0)
ensemble.sigma        common width of both Gaussians (1.0)
ensemble.sigma_x/.sigma_p  per-variable widths (default: ensemble.sigma)
output.path           CSV output path (R unless --out given; unused by check)
seed                  ensemble RNG seed (0)
threads               worker threads, 0 = auto (0)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .dynamics import ConstantCoupling, GaussianPulseCoupling
from .errors import ValidationError
from .model import HybridState, ModelParams, QuantumAmplitudes, named_state
from .perturbations import (PerturbationMatrix, single_qubit_perturbation,
                            two_qubit_perturbation)
from .protocols import EnsembleSpec

EXPERIMENTS = ("simulate", "ensemble", "cool", "perturb", "check")

_FLOAT_KEYS = {
    "model.omega", "model.omega0", "model.omega0_ratio", "model.beta", "model.m",
    "init.x0", "init.p0",
    "schedule.amplitude", "schedule.t0", "schedule.sigma",
    "pert.w1", "pert.w2", "pert.w3",
    "run.t_max", "run.dt",
    "ensemble.x_mean", "ensemble.p_mean", "ensemble.sigma",
    "ensemble.sigma_x", "ensemble.sigma_p",
}
_INT_KEYS = {"run.stride", "ensemble.m", "seed", "threads"}
_STR_KEYS = {"experiment", "state.name", "schedule.kind", "pert.kind", "output.path"}
_LIST_KEYS = {"state.c"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _LIST_KEYS


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _LIST_KEYS:
            return tuple(complex(tok.strip().replace("i", "j")) for tok in raw.split(","))
    except ValueError:
        kindname = "a float" if key in _FLOAT_KEYS else (
            "an integer" if key in _INT_KEYS else "comma-separated complex numbers")
        raise ValidationError(f"invalid value for {key!r}: {raw!r} is not {kindname}") from None
    return raw


def _read_pairs(path):
    pairs = []
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        pairs.append((key.strip(), raw.strip()))
    return pairs


@dataclass
class RunConfig:
    """Fully validated experiment description.

    ``resolved`` holds the flat key -> value mapping actually in effect
    (defaults included), which the output module writes to the metadata
    sidecar so any run can be reproduced from it alone.
    """

    experiment: str
    params: ModelParams
    q0: QuantumAmplitudes
    x0: float
    p0: float
    schedule: object
    pert: Optional[PerturbationMatrix]
    t_max: float
    dt: float
    stride: int
    ensemble_m: int
    x_mean: float
    p_mean: float
    sigma: float
    sigma_x: Optional[float]
    sigma_p: Optional[float]
    output_path: Optional[str]
    seed: int
    threads: int
    resolved: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def ensemble_spec(self) -> EnsembleSpec:
        return EnsembleSpec(
            params=self.params, q0=self.q0, n_traj=self.ensemble_m,
            x_mean=self.x_mean, p_mean=self.p_mean, sigma=self.sigma,
            seed=self.seed, t_max=self.t_max, dt=self.dt, stride=self.stride,
            sigma_x=self.sigma_x, sigma_p=self.sigma_p,
            schedule=self.schedule, pert=self.pert,
        )

    def initial_state(self) -> HybridState:
        return HybridState(0.0, self.x0, self.p0, self.q0)


def parse_config(path=None, overrides=(), experiment=None) -> RunConfig:
    """Load and validate a config file plus inline ``key=value`` overrides.

    ``experiment`` (from the CLI subcommand) wins over any ``experiment`` key
    in the file; they must agree when both are present.
    """
    values = {}
    if path is not None:
        if not Path(path).is_file():
            raise ValidationError(f"config file not found: {path}")
        raw_pairs = _read_pairs(path)
    else:
        raw_pairs = []
    for item in overrides:
        if isinstance(item, str):
            if "=" not in item:
                raise ValidationError(f"--set expects key=value, got {item!r}")
            key, raw = item.split("=", 1)
            raw_pairs.append((key.strip(), raw.strip()))
        else:
            raw_pairs.append((item[0], str(item[1])))

    for key, raw in raw_pairs:
        if key not in KNOWN_KEYS:
            raise ValidationError(f"unknown config key {key!r}")
        values[key] = _parse_value(key, raw)

    warnings = []

    exp = values.get("experiment")
    if experiment is not None:
        if exp is not None and exp != experiment:
            raise ValidationError(
                f"config file sets experiment = {exp!r} but the {experiment!r} "
                "subcommand was invoked"
            )
        exp = experiment
    if exp is None:
        raise ValidationError("no experiment selected (use a subcommand or the experiment key)")
    if exp not in EXPERIMENTS:
        raise ValidationError(f"invalid value for 'experiment': {exp!r}; one of {EXPERIMENTS}")

    if "model.omega" not in values:
        raise ValidationError("missing required key 'model.omega'")
    if "model.omega0" in values and "model.omega0_ratio" in values:
        raise ValidationError("set either 'model.omega0' or 'model.omega0_ratio', not both")
    omega = values["model.omega"]
    omega0 = values.get("model.omega0", 0.0)
    if "model.omega0_ratio" in values:
        omega0 = values["model.omega0_ratio"] * omega
    if "model.beta" not in values:
        warnings.append("model.beta not set; defaulting to 0 (decoupled sectors)")
    params = ModelParams(omega=omega, omega0=omega0,
                         beta=values.get("model.beta", 0.0),
                         m=values.get("model.m", 1.0))

    if "state.name" in values and "state.c" in values:
        raise ValidationError("set either 'state.name' or 'state.c', not both")
    if "state.c" in values:
        q0 = named_state(values["state.c"])
    elif "state.name" in values:
        q0 = named_state(values["state.name"])
    else:
        raise ValidationError("missing initial state: set 'state.name' or 'state.c'")

    kind = values.get("schedule.kind", "constant")
    if kind == "constant":
        for k in ("schedule.amplitude", "schedule.t0", "schedule.sigma"):
            if k in values:
                raise ValidationError(f"{k!r} requires schedule.kind = gaussian_pulse")
        schedule = ConstantCoupling()
    elif kind == "gaussian_pulse":
        missing = [k for k in ("schedule.amplitude", "schedule.t0", "schedule.sigma")
                   if k not in values]
        if missing:
            raise ValidationError(f"gaussian_pulse schedule requires {missing}")
        schedule = GaussianPulseCoupling(values["schedule.amplitude"],
                                         values["schedule.t0"],
                                         values["schedule.sigma"])
    else:
        raise ValidationError(
            f"invalid value for 'schedule.kind': {kind!r}; one of constant, gaussian_pulse"
        )

    pkind = values.get("pert.kind", "none")
    w = (values.get("pert.w1", 0.0), values.get("pert.w2", 0.0), values.get("pert.w3", 0.0))
    if pkind == "none":
        if any(w):
            raise ValidationError("perturbation weights set but pert.kind is 'none'")
        pert = None
    elif pkind == "single_qubit":
        pert = single_qubit_perturbation(*w)
    elif pkind == "two_qubit":
        pert = two_qubit_perturbation(*w)
    else:
        raise ValidationError(
            f"invalid value for 'pert.kind': {pkind!r}; one of none, single_qubit, two_qubit"
        )
    if exp == "perturb" and pert is None:
        raise ValidationError("the perturb experiment requires pert.kind != none")
    if exp == "cool" and kind != "gaussian_pulse":
        raise ValidationError("the cool experiment requires schedule.kind = gaussian_pulse")

    if "run.t_max" not in values:
        raise ValidationError("missing required key 'run.t_max'")
    t_max = values["run.t_max"]
    dt = values.get("run.dt", 0.01)
    stride = values.get("run.stride", 100)
    if not (np.isfinite(t_max) and t_max > 0):
        raise ValidationError(f"invalid value for 'run.t_max': {t_max!r}; must be > 0")
    if not (np.isfinite(dt) and dt > 0):
        raise ValidationError(f"invalid value for 'run.dt': {dt!r}; must be > 0")
    if stride < 1:
        raise ValidationError(f"invalid value for 'run.stride': {stride!r}; must be >= 1")

    m_traj = values.get("ensemble.m", 100)
    if m_traj < 1:
        raise ValidationError(f"invalid value for 'ensemble.m': {m_traj!r}; must be >= 1")
    sigma = values.get("ensemble.sigma", 1.0)
    for k in ("ensemble.sigma", "ensemble.sigma_x", "ensemble.sigma_p"):
        if k in values and not (np.isfinite(values[k]) and values[k] > 0):
            raise ValidationError(f"invalid value for {k!r}: {values[k]!r}; must be > 0")

    x0 = values.get("init.x0", 0.0)
    p0 = values.get("init.p0", 1.0)
    if not (np.isfinite(x0) and np.isfinite(p0)):
        raise ValidationError(f"init.x0/init.p0 must be finite, got {x0!r}, {p0!r}")
    threads = values.get("threads", 0)
    if threads < 0:
        raise ValidationError(f"invalid value for 'threads': {threads!r}; must be >= 0")

    cfg = RunConfig(
        experiment=exp, params=params, q0=q0, x0=x0, p0=p0,
        schedule=schedule, pert=pert, t_max=t_max, dt=dt, stride=stride,
        ensemble_m=m_traj, x_mean=values.get("ensemble.x_mean", 0.0),
        p_mean=values.get("ensemble.p_mean", 0.0), sigma=sigma,
        sigma_x=values.get("ensemble.sigma_x"), sigma_p=values.get("ensemble.sigma_p"),
        output_path=values.get("output.path"), seed=values.get("seed", 0),
        threads=threads, warnings=warnings,
    )
    cfg.resolved = _resolved_mapping(cfg)
    return cfg


def _resolved_mapping(cfg: RunConfig) -> dict:
    out = {
        "experiment": cfg.experiment,
        "model.omega": cfg.params.omega,
        "model.omega0": cfg.params.omega0,
        "model.beta": cfg.params.beta,
        "model.m": cfg.params.m,
        "state.c": ",".join(repr(complex(v)) for v in cfg.q0.c),
        "init.x0": cfg.x0,
        "init.p0": cfg.p0,
        "schedule.kind": getattr(cfg.schedule, "kind", "constant"),
        "pert.kind": cfg.pert.kind if cfg.pert is not None else "none",
        "run.t_max": cfg.t_max,
        "run.dt": cfg.dt,
        "run.stride": cfg.stride,
        "seed": cfg.seed,
        "threads": cfg.threads,
    }
    if isinstance(cfg.schedule, GaussianPulseCoupling):
        out["schedule.amplitude"] = cfg.schedule.amplitude
        out["schedule.t0"] = cfg.schedule.t0
        out["schedule.sigma"] = cfg.schedule.sigma
    if cfg.pert is not None:
        out["pert.w1"], out["pert.w2"], out["pert.w3"] = cfg.pert.weights
    if cfg.experiment == "ensemble":
        sx, sp = (cfg.sigma if cfg.sigma_x is None else cfg.sigma_x,
                  cfg.sigma if cfg.sigma_p is None else cfg.sigma_p)
        out.update({
            "ensemble.m": cfg.ensemble_m,
            "ensemble.x_mean": cfg.x_mean,
            "ensemble.p_mean": cfg.p_mean,
            "ensemble.sigma_x": sx,
            "ensemble.sigma_p": sp,
        })
    if cfg.output_path is not None:
        out["output.path"] = cfg.output_path
    return out
