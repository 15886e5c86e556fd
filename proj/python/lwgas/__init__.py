"""Lightweight group authentication toolkit."""

import json

from ._core import (
    CALIBRATED_COMPUTE_RATE,
    CALIBRATED_JOULES_PER_TMULQ,
    Curve,
    Group,
    LwgasError,
    attack_names,
    gm_init,
    harn_check,
    load_curve,
    per_user_cost,
    savings_ratio,
)
from . import _core


def simulate(events=False, **scenario):
    """Run one simulation; keyword arguments are scenario fields."""
    return json.loads(_core.simulate_json(json.dumps(scenario), events))


def sweep(schemes, ms, jobs=1, **base):
    """CSV text, one row per (scheme, m)."""
    return _core.sweep_csv(list(schemes), list(ms), json.dumps(base), jobs)


def preset(name):
    return [json.loads(s) for s in _core.preset_json(name)]


def attack(name, seed=1):
    return json.loads(_core.attack_json(name, seed))


__all__ = [
    "CALIBRATED_COMPUTE_RATE",
    "CALIBRATED_JOULES_PER_TMULQ",
    "Curve",
    "Group",
    "LwgasError",
    "attack",
    "attack_names",
    "gm_init",
    "harn_check",
    "load_curve",
    "per_user_cost",
    "preset",
    "savings_ratio",
    "simulate",
    "sweep",
]
