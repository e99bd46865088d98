"""Run configuration: defaults, JSON round-trip, and object construction.

One JSON document drives every CLI command. Scalar fields can be overridden
by command-line flags (flag > file > default). All seeds are explicit; no
command ever consults the wall clock.
"""

import copy
import json
import os

from .baselines import VariancePreservingProcess, VarianceExplodingProcess
from .errors import ValidationError
from .forward import HeatDiffusionProcess
from .schedules import schedule_from_dict

METHODS = ("gad", "vpd", "ved")

DEFAULT_CONFIG = {
    "graph": {
        "source": "sbm",
        "nodes_per_community": 10,
        "num_communities": 2,
        "p_in": 0.6,
        "p_out": 0.1,
    },
    "dataset": {"num_train": 500, "num_test": 500, "tau": 5.0},
    "schedule": {"type": "fcps", "c_min": 0.05, "c_0": 4.0, "alpha": 2.0, "T": 1.0},
    "forward": {"sigma": 1.0, "gamma": 0.3},
    "vpd": {"beta_min": 0.1, "beta_max": 20.0},
    "ved": {"sigma_min": 0.01, "sigma_max": 10.0},
    "denoiser": {"num_layers": 3, "filter_order": 3, "hidden_width": 16},
    "train": {
        "learning_rate": 1e-3,
        "num_iterations": 5000,
        "batch_size": 16,
        "momentum": 0.9,
    },
    "sampler": {
        "num_steps": [10, 50, 250],
        "num_samples": 500,
        "final_denoise": True,
        "t_floor_frac": 1e-3,
    },
    "methods": ["gad", "vpd", "ved"],
    "method": "gad",
    "seed": 0,
    "out_dir": "runs/default",
}


def _deep_merge(base, override):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key in out and isinstance(out[key], dict) and isinstance(value, dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path=None, overrides=None):
    """Resolve a config: defaults < file < explicit overrides."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        with open(path) as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}: invalid JSON ({exc})") from None
        if not isinstance(user, dict):
            raise ValidationError(f"{path}: config root must be a JSON object")
        cfg = _deep_merge(cfg, user)
    for key, value in (overrides or {}).items():
        if value is not None:
            cfg[key] = value
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg["method"] not in METHODS:
        raise ValidationError(f"method must be one of {METHODS}, got {cfg['method']!r}")
    for m in cfg["methods"]:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r} in methods list")
    src = cfg["graph"].get("source")
    if src == "csv":
        for key in ("adjacency", "train_signals", "test_signals"):
            path = cfg["graph"].get(key)
            if not path:
                raise ValidationError(f"graph.source=csv requires graph.{key}")
            if not os.path.exists(path):
                raise ValidationError(f"graph.{key}: file not found: {path}")
        community = cfg["graph"].get("community")
        if community and not os.path.exists(community):
            raise ValidationError(f"graph.community: file not found: {community}")
    elif src != "sbm":
        raise ValidationError(f"graph.source must be 'sbm' or 'csv', got {src!r}")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ValidationError("seed must be a nonnegative integer")
    steps = cfg["sampler"]["num_steps"]
    if isinstance(steps, int):
        steps = [steps]
    if not steps or any((not isinstance(s, int)) or s < 1 for s in steps):
        raise ValidationError("sampler.num_steps must be a positive int or list of them")
    return cfg


def step_counts(cfg):
    steps = cfg["sampler"]["num_steps"]
    return [steps] if isinstance(steps, int) else list(steps)


def build_process(cfg, spectrum, method=None):
    """Instantiate the forward process for a method from the config."""
    method = method or cfg["method"]
    horizon = cfg["schedule"]["T"]
    if method == "gad":
        return HeatDiffusionProcess(
            spectrum,
            schedule_from_dict(cfg["schedule"]),
            sigma=cfg["forward"]["sigma"],
            gamma=cfg["forward"]["gamma"],
        )
    if method == "vpd":
        return VariancePreservingProcess(
            spectrum,
            beta_min=cfg["vpd"]["beta_min"],
            beta_max=cfg["vpd"]["beta_max"],
            horizon=horizon,
        )
    if method == "ved":
        return VarianceExplodingProcess(
            spectrum,
            sigma_min=cfg["ved"]["sigma_min"],
            sigma_max=cfg["ved"]["sigma_max"],
            horizon=horizon,
        )
    raise ValidationError(f"unknown method {method!r}")


def config_json(cfg):
    return json.dumps(cfg, indent=1, sort_keys=True) + "\n"
