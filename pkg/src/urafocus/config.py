"""JSON experiment configuration and the figure presets.

A config document is a JSON object with a ``kind`` and kind-specific keys;
see ``docs/config.md``. Unknown keys are rejected, and errors point at the
line of the offending key when the document came from a file.
"""
from __future__ import annotations

import copy
import hashlib
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

KINDS = ("beamdepth", "ebrd", "eta-sweep", "gain-profile", "sumrate")

_ARRAY_KEYS = {"n1", "n2", "carrier_hz", "spacing_factor"}
_COMMON = {"kind", "out", "seed", "trials"}
ALLOWED_KEYS = {
    "beamdepth": _COMMON | {"array", "phi_deg", "theta_deg", "rf_m", "rf_fraction"},
    "ebrd": _COMMON | {"array", "n_bs", "etas", "carrier_hz", "phi_deg", "theta_deg"},
    "eta-sweep": _COMMON | {"n_bs", "etas", "carrier_hz", "phi_deg", "theta_deg", "rf_m", "rf_fraction"},
    "gain-profile": _COMMON | {"array", "phi_deg", "theta_deg", "rf_m", "rf_fraction", "z_min_m", "z_max_m",
                               "points"},
    "sumrate": _COMMON | {"curves", "n_users", "snr_db", "n_rf", "rings", "region", "carrier_hz",
                          "channel_model"},
}
_CURVE_KEYS = {"n1", "n2", "codebook"}
REGIONS = ("ebrd", "extended", "far")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = f"{source}:{line}: " if line else f"{source}: "
        elif line:
            where = f"line {line}: "
        super().__init__(where + message)
        self.line = line


@dataclass
class ExperimentConfig:
    kind: str
    params: dict
    out: str | None = None
    seed: int = 0
    trials: int = 0
    source: str | None = None
    text: str | None = field(default=None, repr=False)

    def digest(self) -> str:
        blob = json.dumps({"kind": self.kind, "params": self.params, "seed": self.seed, "trials": self.trials},
                          sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(message, _line_of(self.text, key), self.source)


def _line_of(text: str | None, key: str) -> int | None:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def angle_grid(spec) -> np.ndarray:
    """Degrees spec (number, list, or {start, stop, num}) -> radians array."""
    if isinstance(spec, dict):
        extra = set(spec) - {"start", "stop", "num"}
        if extra:
            raise ValueError(f"unknown grid keys {sorted(extra)}")
        deg = np.linspace(spec["start"], spec["stop"], int(spec["num"]))
    else:
        deg = np.atleast_1d(np.asarray(spec, dtype=float))
    return np.deg2rad(deg)


def _check_array(cfg: ExperimentConfig, arr) -> None:
    if not isinstance(arr, dict):
        raise cfg.error("array", "'array' must be an object with n1, n2")
    extra = set(arr) - _ARRAY_KEYS
    if extra:
        raise cfg.error("array", f"unknown array keys {sorted(extra)}")
    for key in ("n1", "n2"):
        v = arr.get(key)
        if not isinstance(v, int) or v < 1:
            raise cfg.error(key, f"array.{key} must be a positive integer, got {v!r}")
    for key in ("carrier_hz", "spacing_factor"):
        if key in arr and not (isinstance(arr[key], (int, float)) and arr[key] > 0):
            raise cfg.error(key, f"array.{key} must be positive, got {arr[key]!r}")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.kind not in KINDS:
        raise cfg.error("kind", f"unknown kind {cfg.kind!r}; expected one of {list(KINDS)}")
    p = cfg.params
    extra = set(p) - ALLOWED_KEYS[cfg.kind]
    if extra:
        key = sorted(extra)[0]
        raise cfg.error(key, f"unknown key {key!r} for kind {cfg.kind!r}")
    if "array" in p:
        _check_array(cfg, p["array"])
    elif cfg.kind in ("beamdepth", "gain-profile"):
        raise cfg.error("kind", f"kind {cfg.kind!r} needs an 'array'")
    if cfg.kind in ("eta-sweep",) or (cfg.kind == "ebrd" and "array" not in p):
        if not isinstance(p.get("n_bs"), int) or p["n_bs"] < 1:
            raise cfg.error("n_bs", "'n_bs' must be a positive integer")
    for key in ("phi_deg", "theta_deg"):
        if key in p:
            try:
                grid = angle_grid(p[key])
            except (TypeError, ValueError, KeyError) as exc:
                raise cfg.error(key, f"bad angle grid: {exc}") from None
            if key == "phi_deg" and np.any(np.abs(grid) > math.pi / 2 + 1e-12):
                raise cfg.error(key, "azimuth must lie in [-90, 90] degrees")
            if key == "theta_deg" and np.any((grid <= 0) | (grid >= math.pi)):
                raise cfg.error(key, "elevation must lie in (0, 180) degrees")
    if cfg.kind in ("beamdepth", "eta-sweep", "gain-profile"):
        if ("rf_m" in p) == ("rf_fraction" in p):
            raise cfg.error("kind", "give exactly one of 'rf_m' or 'rf_fraction'")
        for key in ("rf_m", "rf_fraction"):
            if key in p and not np.all(np.asarray(p[key], dtype=float) > 0):
                raise cfg.error(key, f"'{key}' must be positive")
    if cfg.kind == "sumrate":
        curves = p.get("curves")
        if not isinstance(curves, list) or not curves:
            raise cfg.error("curves", "'curves' must be a non-empty list")
        for c in curves:
            if not isinstance(c, dict) or set(c) - _CURVE_KEYS or not {"n1", "n2", "codebook"} <= set(c):
                raise cfg.error("curves", f"each curve needs exactly n1, n2, codebook; got {c!r}")
            if not all(isinstance(c[k], int) and c[k] >= 1 for k in ("n1", "n2")):
                raise cfg.error("curves", f"curve n1, n2 must be positive integers; got {c!r}")
            if c["codebook"] not in ("polar", "dft"):
                raise cfg.error("codebook", f"codebook must be 'polar' or 'dft', got {c['codebook']!r}")
        if not isinstance(p.get("n_users"), int) or p["n_users"] < 1:
            raise cfg.error("n_users", "'n_users' must be a positive integer")
        if not isinstance(p.get("snr_db"), list) or not p["snr_db"]:
            raise cfg.error("snr_db", "'snr_db' must be a non-empty list")
        region = p.get("region", "ebrd")
        name = region.get("name") if isinstance(region, dict) else region
        if isinstance(region, dict):
            if set(region) - {"name", "of"} or "name" not in region:
                raise cfg.error("region", "region object needs 'name' and optional 'of': [n1, n2]")
            of = region.get("of", [1, 1])
            if not (isinstance(of, list) and len(of) == 2 and all(isinstance(v, int) and v >= 1 for v in of)):
                raise cfg.error("of", f"'of' must be [n1, n2] with positive integers, got {of!r}")
        if isinstance(region, list):
            if not (len(region) == 2 and all(isinstance(v, (int, float)) for v in region)
                    and 0 < region[0] < region[1]):
                raise cfg.error("region", f"range interval must be [r_min, r_max] with 0 < r_min < r_max, "
                                          f"got {region!r}")
        elif name not in REGIONS:
            raise cfg.error("region", f"region must be one of {list(REGIONS)}, [r_min, r_max] or {{name, of}}; "
                                      f"got {region!r}")
    if not isinstance(cfg.seed, int) or cfg.seed < 0:
        raise cfg.error("seed", "'seed' must be a non-negative integer")
    if not isinstance(cfg.trials, int) or cfg.trials < 0:
        raise cfg.error("trials", "'trials' must be a non-negative integer")
    return cfg


def from_dict(doc: dict, source: str | None = None, text: str | None = None) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object", 1, source)
    doc = copy.deepcopy(doc)
    kind = doc.pop("kind", None)
    out = doc.pop("out", None)
    seed = doc.pop("seed", 0)
    trials = doc.pop("trials", 0)
    cfg = ExperimentConfig(kind, doc, out, seed, trials, source, text)
    if kind is None:
        raise ConfigError("missing 'kind'", None, source)
    return validate(cfg)


def load(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", exc.lineno, path) from None
    return from_dict(doc, path, text)


SNR_GRID_DB = list(range(-30, 1, 5))

PRESETS = {
    # square 16x16: beamdepth against azimuth at three focus ranges
    "fig3": {"kind": "beamdepth", "array": {"n1": 16, "n2": 16, "carrier_hz": 28e9},
             "phi_deg": {"start": 0, "stop": 60, "num": 31}, "theta_deg": 90, "rf_m": [0.15, 0.2, 0.25]},
    "fig4": {"kind": "eta-sweep", "n_bs": 4096, "carrier_hz": 28e9, "phi_deg": 0, "theta_deg": 90,
             "rf_fraction": 0.02},
    "fig5": {"kind": "ebrd", "n_bs": 4096, "carrier_hz": 28e9, "etas": [1, 4, 16, 0.016, 0.004],
             "phi_deg": {"start": 0, "stop": 85, "num": 18}, "theta_deg": [90, 60]},
    "fig6": {"kind": "sumrate", "carrier_hz": 28e9, "n_users": 5, "n_rf": 4, "rings": 8, "region": "ebrd",
             "curves": [{"n1": 64, "n2": 8, "codebook": "polar"}, {"n1": 64, "n2": 8, "codebook": "dft"}],
             "snr_db": SNR_GRID_DB, "trials": 200, "seed": 2025},
    "fig7": {"kind": "sumrate", "carrier_hz": 28e9, "n_users": 6, "n_rf": 4, "rings": 8,
             "region": {"name": "ebrd", "of": [128, 8]},
             "curves": [{"n1": 32, "n2": 32, "codebook": "polar"}, {"n1": 128, "n2": 8, "codebook": "polar"}],
             "snr_db": SNR_GRID_DB, "trials": 200, "seed": 2025},
    "gain": {"kind": "gain-profile", "array": {"n1": 64, "n2": 64, "carrier_hz": 28e9}, "phi_deg": 0,
             "theta_deg": 90, "rf_fraction": 0.05, "points": 1024},
}


def preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    return from_dict(PRESETS[name], f"preset:{name}")
