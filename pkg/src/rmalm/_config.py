"""Run-configuration files: parsing, validation, and instance construction.

Configs are INI files with three to four sections::

    [problem]   what to solve        (kind = qcqp | two_stage | cvar |
                                      linear_qp | scalar_demo, plus params)
    [solver]    how to solve it      (kind = rmalm | salm | pdsg | oracle)
    [output]    where results go
    [report]    optional rate/complexity report targets

Validation is fail-closed: unknown sections or keys, missing required
keys, and unparsable or out-of-range values are all collected and
reported together in one `ConfigError`.
"""

import configparser
import hashlib
import json
import os

from .exceptions import ConfigError
from .generators import (
    gen_cvar,
    gen_linear_qp,
    gen_qcqp,
    gen_returns,
    gen_two_stage,
    load_returns_csv,
    make_scalar_demo,
)
from .solvers.noise_harness import SalmConfig
from .solvers.primal_dual import PdsgConfig
from .solvers.robbins_monro import DEFAULT_BUDGET_GROWTH, RmalmConfig

_REQUIRED = object()


def _parse_int(text):
    return int(text)


def _parse_float(text):
    return float(text)


def _parse_str(text):
    return text.strip()


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_seeds(text):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of integers")
    return tuple(int(p) for p in parts)


def _parse_choice(options):
    def parse(text):
        value = text.strip()
        if value not in options:
            raise ValueError(f"expected one of {sorted(options)}, got {value!r}")
        return value
    return parse


def _parse_float_or_auto(text):
    value = text.strip()
    if value == "auto":
        return "auto"
    return float(value)


def _parse_batch_con(text):
    value = text.strip()
    if value == "full":
        return None
    parsed = int(value)
    return parsed


_PROBLEM_KINDS = ("qcqp", "two_stage", "cvar", "linear_qp", "scalar_demo")
_SOLVER_KINDS = ("rmalm", "salm", "pdsg", "oracle")

_PROBLEM_COMMON = {
    "kind": (_parse_choice(_PROBLEM_KINDS), _REQUIRED),
    "seed": (_parse_int, 0),
}

_PROBLEM_KEYS = {
    "qcqp": {
        "n": (_parse_int, _REQUIRED),
        "obs_dim": (_parse_int, _REQUIRED),
        "num_constraints": (_parse_int, _REQUIRED),
        "mode": (_parse_choice(("expectation", "finite_sum")), "finite_sum"),
        "nsamples": (_parse_int, 1000),
        "box_half": (_parse_float, 10.0),
    },
    "two_stage": {
        "n": (_parse_int, _REQUIRED),
        "nscen": (_parse_int, _REQUIRED),
        "reg": (_parse_float, 2.0),
        "radius": (_parse_float, 5.0),
    },
    "cvar": {
        "returns_csv": (_parse_str, None),
        "periods": (_parse_int, None),
        "assets": (_parse_int, None),
        "tail_level": (_parse_float, 0.95),
        "min_return": (_parse_float, None),
        "reg": (_parse_float, 0.0),
    },
    "linear_qp": {
        "n": (_parse_int, _REQUIRED),
        "num_constraints": (_parse_int, _REQUIRED),
        "eig_lo": (_parse_float, 1.0),
        "eig_hi": (_parse_float, 2.0),
        "obj_noise": (_parse_float, 0.1),
        "nsamples": (_parse_int, 64),
        "box_half": (_parse_float, 50.0),
    },
    "scalar_demo": {},
}

_SOLVER_COMMON = {
    "kind": (_parse_choice(_SOLVER_KINDS), _REQUIRED),
    "seeds": (_parse_seeds, (0,)),
    "ground_truth": (_parse_str, None),
    "eval_samples": (_parse_int, 100_000),
}

_SOLVER_KEYS = {
    "rmalm": {
        "penalty": (_parse_float, 10.0),
        "budget0": (_parse_int, 5),
        "budget_growth": (_parse_float, DEFAULT_BUDGET_GROWTH),
        "budget_exponent": (_parse_float, 1e-4),
        "tau": (_parse_float, 1.0),
        "eta": (_parse_float_or_auto, "auto"),
        "beta": (_parse_float_or_auto, "auto"),
        "batch_obj": (_parse_int, 50),
        "batch_con": (_parse_batch_con, None),
        "outer_iters": (_parse_int, 16),
        "budget_cap": (_parse_int, None),
        "total_budget_cap": (_parse_int, 10_000_000),
        "store_iterates": (_parse_bool, True),
    },
    "salm": {
        "penalty0": (_parse_float, 1.0),
        "decay_exponent": (_parse_float, 0.75),
        "noise_scale": (_parse_float, 0.1),
        "noise_law": (_parse_str, "gaussian"),
        "outer_iters": (_parse_int, 200),
        "inner_tol": (_parse_float, 1e-10),
    },
    "pdsg": {
        "step0": (_parse_float, 1.0),
        "decay": (_parse_float, 0.5),
        "batch_obj": (_parse_int, 50),
        "batch_con": (_parse_batch_con, None),
        "iters": (_parse_int, 10_000),
        "record_every": (_parse_int, None),
        "store_iterates": (_parse_bool, False),
    },
    "oracle": {
        "tol": (_parse_float, 1e-10),
        "penalty": (_parse_float, 10.0),
        "inner_tol": (_parse_float, None),
        "max_outer": (_parse_int, 10_000),
    },
}

_OUTPUT_KEYS = {
    "dir": (_parse_str, None),
}

_REPORT_KEYS = {
    "eps_coarse": (_parse_float, None),
    "eps_fine": (_parse_float, None),
    "agree_factor": (_parse_float, 2.0),
    "alpha": (_parse_float, None),
    "rate_iters": (_parse_int, None),
}

_SECTIONS = ("problem", "solver", "output", "report")


def _collect_section(parser, section, common, by_kind, errors):
    """Parse one section against its schema, appending error strings."""
    if not parser.has_section(section):
        errors.append(f"missing required section [{section}]")
        return None
    raw = dict(parser.items(section))
    values = {}
    kind_spec = common.get("kind")
    kind = None
    if kind_spec is not None:
        if "kind" not in raw:
            errors.append(f"{section}.kind: required key is missing")
            return None
        try:
            kind = kind_spec[0](raw["kind"])
        except ValueError as exc:
            errors.append(f"{section}.kind: {exc}")
            return None
        values["kind"] = kind
    schema = dict(common)
    if by_kind is not None and kind is not None:
        schema.update(by_kind[kind])
    unparsable = set()
    for key, text in raw.items():
        if key == "kind" and kind_spec is not None:
            continue
        if key not in schema:
            errors.append(f"{section}.{key}: unknown key")
            continue
        parse, _ = schema[key]
        try:
            values[key] = parse(text)
        except ValueError as exc:
            errors.append(f"{section}.{key}: {exc}")
            unparsable.add(key)
    for key, (_, default) in schema.items():
        if key in values or key in unparsable:
            continue
        if default is _REQUIRED:
            errors.append(f"{section}.{key}: required key is missing")
        else:
            values[key] = default
    return values


def load_config(path):
    """Parse and validate a run config; raises `ConfigError` on any problem."""
    if not os.path.exists(path):
        raise ConfigError([f"config file {path} does not exist"])
    parser = configparser.ConfigParser(interpolation=None)
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError([f"config file {path} could not be parsed: {exc}"]) from None
    if not read:
        raise ConfigError([f"config file {path} could not be read"])
    errors = []
    for section in parser.sections():
        if section not in _SECTIONS:
            errors.append(f"unknown section [{section}]")
    problem = _collect_section(parser, "problem", _PROBLEM_COMMON, _PROBLEM_KEYS, errors)
    solver = _collect_section(parser, "solver", _SOLVER_COMMON, _SOLVER_KEYS, errors)
    output = None
    if parser.has_section("output"):
        output = _collect_section(parser, "output", _OUTPUT_KEYS, None, errors)
    else:
        output = {key: default for key, (_, default) in _OUTPUT_KEYS.items()}
    if parser.has_section("report"):
        report = _collect_section(parser, "report", _REPORT_KEYS, None, errors)
    else:
        report = {key: default for key, (_, default) in _REPORT_KEYS.items()}
    config = {"problem": problem, "solver": solver, "output": output, "report": report}
    if problem is not None:
        errors.extend(_validate_problem(problem))
    if solver is not None:
        errors.extend(_validate_solver(solver))
    if report is not None:
        errors.extend(_validate_report(report))
    if errors:
        raise ConfigError(errors)
    return config


def _validate_problem(problem):
    errors = []
    kind = problem["kind"]
    if kind == "cvar":
        has_csv = problem.get("returns_csv") is not None
        has_synth = problem.get("periods") is not None and problem.get("assets") is not None
        if not has_csv and not has_synth:
            errors.append(
                "problem.returns_csv or both problem.periods and problem.assets "
                "are required for kind=cvar"
            )
        if has_csv and has_synth:
            errors.append("problem.returns_csv conflicts with problem.periods/assets")
    return errors


def _validate_solver(solver):
    """Deep-validate solver parameters through the config dataclasses."""
    try:
        build_solver_config(solver)
    except ConfigError as exc:
        return [f"solver.{msg}" if not msg.startswith("solver.") else msg
                for msg in exc.messages]
    return []


def _validate_report(report):
    errors = []
    coarse, fine = report.get("eps_coarse"), report.get("eps_fine")
    if (coarse is None) != (fine is None):
        errors.append("report.eps_coarse and report.eps_fine must be given together")
    if coarse is not None and fine is not None:
        if not coarse > 0 or not fine > 0:
            errors.append("report.eps_coarse and report.eps_fine must be positive")
        elif fine > coarse:
            errors.append("report.eps_fine must be <= report.eps_coarse")
    return errors


def build_solver_config(solver, seed=None, eta=None, beta=None):
    """Instantiate the validated per-solver config dataclass.

    ``eta``/``beta`` override the section values once 'auto' has been
    resolved against a concrete instance.
    """
    kind = solver["kind"]
    if kind == "rmalm":
        if eta is None:
            eta = 1.0 if solver["eta"] == "auto" else solver["eta"]
        if beta is None:
            beta = 1.0 if solver["beta"] == "auto" else solver["beta"]
        return RmalmConfig(
            penalty=solver["penalty"], budget0=solver["budget0"],
            budget_growth=solver["budget_growth"],
            budget_exponent=solver["budget_exponent"], tau=solver["tau"],
            eta=eta, beta=beta,
            batch_obj=solver["batch_obj"], batch_con=solver["batch_con"],
            outer_iters=solver["outer_iters"], seed=seed if seed is not None else 0,
            budget_cap=solver["budget_cap"],
            total_budget_cap=solver["total_budget_cap"],
            store_iterates=solver["store_iterates"],
        ).validate()
    if kind == "salm":
        return SalmConfig(
            penalty0=solver["penalty0"], decay_exponent=solver["decay_exponent"],
            noise_scale=solver["noise_scale"], noise_law=solver["noise_law"],
            outer_iters=solver["outer_iters"], inner_tol=solver["inner_tol"],
            seeds=solver["seeds"] if seed is None else (seed,),
        ).validate()
    if kind == "pdsg":
        return PdsgConfig(
            step0=solver["step0"], decay=solver["decay"],
            batch_obj=solver["batch_obj"], batch_con=solver["batch_con"],
            iters=solver["iters"], seed=seed if seed is not None else 0,
            record_every=solver["record_every"],
            store_iterates=solver["store_iterates"],
        ).validate()
    if kind == "oracle":
        errors = []
        if not solver["tol"] > 0:
            errors.append(f"tol must be positive, got {solver['tol']}")
        if not solver["penalty"] > 0:
            errors.append(f"penalty must be positive, got {solver['penalty']}")
        if solver["inner_tol"] is not None and not solver["inner_tol"] > 0:
            errors.append(f"inner_tol must be positive, got {solver['inner_tol']}")
        if not solver["max_outer"] >= 1:
            errors.append(f"max_outer must be a positive integer, got {solver['max_outer']}")
        if errors:
            raise ConfigError(errors)
        return dict(tol=solver["tol"], penalty=solver["penalty"],
                    inner_tol=solver["inner_tol"], max_outer=solver["max_outer"])
    raise ConfigError([f"kind: unknown solver kind {kind!r}"])


def instance_digest(problem_cfg) -> str:
    """Stable hash of the problem section; identifies a generated instance."""
    payload = {k: v for k, v in sorted(problem_cfg.items())}
    encoded = json.dumps(payload, sort_keys=True, default=str).encode()
    return hashlib.sha256(encoded).hexdigest()


def build_problem(problem_cfg):
    """Construct the problem instance described by a validated [problem] section."""
    kind = problem_cfg["kind"]
    seed = problem_cfg.get("seed", 0)
    if kind == "qcqp":
        return gen_qcqp(
            problem_cfg["n"], problem_cfg["obs_dim"], problem_cfg["num_constraints"],
            mode=problem_cfg["mode"], nsamples=problem_cfg["nsamples"],
            seed=seed, box_half=problem_cfg["box_half"],
        )
    if kind == "two_stage":
        return gen_two_stage(
            problem_cfg["n"], problem_cfg["nscen"], reg=problem_cfg["reg"],
            radius=problem_cfg["radius"], seed=seed,
        )
    if kind == "cvar":
        if problem_cfg.get("returns_csv"):
            returns = load_returns_csv(problem_cfg["returns_csv"])
        else:
            returns = gen_returns(problem_cfg["periods"], problem_cfg["assets"], seed=seed)
        return gen_cvar(
            returns, tail_level=problem_cfg["tail_level"],
            min_return=problem_cfg["min_return"], reg=problem_cfg["reg"],
        )
    if kind == "linear_qp":
        return gen_linear_qp(
            problem_cfg["n"], problem_cfg["num_constraints"], seed=seed,
            eig_range=(problem_cfg["eig_lo"], problem_cfg["eig_hi"]),
            obj_noise=problem_cfg["obj_noise"], nsamples=problem_cfg["nsamples"],
            box_half=problem_cfg["box_half"],
        )
    if kind == "scalar_demo":
        return make_scalar_demo()
    raise ConfigError([f"problem.kind: unknown problem kind {kind!r}"])
