"""
Experiment configuration: defaults, file loading and validation.

Precedence is built-in defaults < JSON config file < flags. Every problem
is raised as a ConfigError naming the offending key.
"""

import json
import math
from typing import Any, Mapping, Optional

from adialab.errors import ConfigError, MatrixValidationError
from adialab.state import ExperimentConfig
from foliations.semiclassical_reference import named_potential
from foliations.sol_foliation import MISMATCH_LIMIT, sol_matrix_validate
from foliations.torus_foliation import GOLDEN, SQRT2

GEOMETRIES = ("torus", "heisenberg", "sol", "weyl-ref")

COMPATIBLE_MODES = {
    "torus": ("counting", "heat", "symbol", "compare"),
    "heisenberg": ("symbol", "compare", "heat"),
    "sol": ("counting", "symbol", "compare", "mismatch"),
    "weyl-ref": ("counting", "heat", "compare"),
}

CODIMENSION = {"torus": 1, "heisenberg": 2, "sol": 2, "weyl-ref": 1}

NAMED_ALPHAS = {"sqrt2": SQRT2, "golden": GOLDEN}

_COMMON_DEFAULTS: ExperimentConfig = {
    "name": "",
    "alpha": None,
    "alpha_name": None,
    "rational": None,
    "a": 1.0,
    "mu": 1.0,
    "matrix": [2, 1, 1, 1],
    "eps": [0.04, 0.02, 0.01],
    "t": [1.0],
    "lambda": [],
    "omega": [0.5, 1.0, 2.0],
    "tolerance": None,
    "mismatch_margin": 0.0,
    "potential": "flat",
    "amplitude": 1.0,
    "n_points": 1000,
    "out_csv": None,
    "out_json": None,
    "report": None,
}

GEOMETRY_DEFAULTS: dict[str, ExperimentConfig] = {
    "torus": {"mode": "counting", "alpha_name": "sqrt2", "lambda": [1e4]},
    "heisenberg": {"mode": "compare", "eps": [0.1], "t": [0.1, 0.5, 1.0, 2.0, 5.0]},
    "sol": {"mode": "mismatch", "alpha": 1.0, "eps": [0.01], "t": [0.5, 1.0, 2.0], "lambda": [5.0]},
    "weyl-ref": {"mode": "counting", "eps": [0.01], "lambda": [1.0]},
}

CONFIG_KEYS = frozenset(_COMMON_DEFAULTS) | {"geometry", "mode", "q_codim"}

# Grid axes each mode iterates over.
_REQUIRED_LISTS = {
    "counting": ("eps", "lambda"),
    "heat": ("eps", "t"),
    "symbol": ("t",),
    "compare": ("eps", "t"),
    "mismatch": ("eps", "t"),
}


def default_config(geometry: str) -> ExperimentConfig:
    if geometry not in GEOMETRIES:
        raise ConfigError("geometry", f"unknown geometry {geometry!r}; expected one of {', '.join(GEOMETRIES)}")
    config: ExperimentConfig = {**_COMMON_DEFAULTS, **GEOMETRY_DEFAULTS[geometry]}
    config["geometry"] = geometry
    config["q_codim"] = CODIMENSION[geometry]
    return config


def load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError("config", f"config file {path} does not exist")
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"config file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ConfigError("config", f"config file {path} must hold a JSON object")
    return data


def parse_config(
    geometry: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    path: Optional[str] = None,
) -> ExperimentConfig:
    """Build a validated ExperimentConfig.

    Args:
        geometry: One of torus, heisenberg, sol, weyl-ref. May be omitted when
            the config file names it.
        overrides: Flag values; entries that are None are ignored.
        path: Optional JSON config file.

    Returns:
        The merged config with every default filled in.
    """
    file_values = load_config_file(path) if path else {}
    for key in list(file_values) + list(overrides or {}):
        if key not in CONFIG_KEYS:
            raise ConfigError(key, f"unknown configuration key {key!r}")

    file_geometry = file_values.get("geometry")
    if geometry is not None and file_geometry is not None and file_geometry != geometry:
        raise ConfigError("geometry", f"config file is for {file_geometry!r}, command is {geometry!r}")
    geometry = geometry or file_geometry
    if geometry is None:
        raise ConfigError("geometry", "no geometry given")

    config = default_config(geometry)
    flags = {key: value for key, value in (overrides or {}).items() if value is not None}
    # an explicit slope from either source replaces the default named irrational
    if any(key in source for source in (file_values, flags) for key in ("alpha", "rational")):
        config["alpha_name"] = None
    config.update(file_values)
    config.update(flags)
    return validate_config(config)


def _positive_list(config: ExperimentConfig, key: str) -> list[float]:
    raw = config.get(key) or []
    if not isinstance(raw, (list, tuple)):
        raw = [raw]
    try:
        values = [float(v) for v in raw]
    except (TypeError, ValueError):
        raise ConfigError(key, f"{key} must be a list of numbers, got {raw!r}")
    for v in values:
        if not (v > 0 and math.isfinite(v)):
            raise ConfigError(key, f"{key} must be positive, got {v}")
    return values


def _parse_rational(raw) -> Optional[list[int]]:
    if raw is None:
        return None
    try:
        if isinstance(raw, str):
            p_text, q_text = raw.split("/")
            p, q_den = int(p_text), int(q_text)
        else:
            p, q_den = (int(v) for v in raw)
    except (TypeError, ValueError):
        raise ConfigError("rational", f"rational must look like p/q, got {raw!r}")
    if q_den < 1:
        raise ConfigError("rational", f"rational denominator must be positive, got {q_den}")
    if math.gcd(p, q_den) != 1:
        raise ConfigError("rational", f"rational {p}/{q_den} is not in lowest terms")
    return [p, q_den]


def _resolve_alpha(config: ExperimentConfig) -> None:
    name = config.get("alpha_name")
    rational = _parse_rational(config.get("rational"))
    alpha = config.get("alpha")

    if name is not None:
        if name not in NAMED_ALPHAS:
            raise ConfigError("alpha_name", f"unknown named irrational {name!r}; expected sqrt2 or golden")
        if rational is not None:
            raise ConfigError("rational", "a named irrational slope cannot also be rational")
        alpha = NAMED_ALPHAS[name]
    elif rational is not None:
        exact = rational[0] / rational[1]
        if alpha is not None and float(alpha) != exact:
            raise ConfigError("alpha", f"alpha={alpha} does not equal {rational[0]}/{rational[1]}")
        alpha = exact
    if alpha is not None:
        try:
            alpha = float(alpha)
        except (TypeError, ValueError):
            raise ConfigError("alpha", f"alpha must be a number, got {alpha!r}")
        if not math.isfinite(alpha):
            raise ConfigError("alpha", f"alpha must be finite, got {alpha}")
    config["alpha"] = alpha
    config["rational"] = rational


def validate_config(config: ExperimentConfig) -> ExperimentConfig:
    geometry = config.get("geometry")
    if geometry not in GEOMETRIES:
        raise ConfigError("geometry", f"unknown geometry {geometry!r}; expected one of {', '.join(GEOMETRIES)}")
    mode = config.get("mode")
    if mode not in COMPATIBLE_MODES[geometry]:
        raise ConfigError(
            "mode",
            f"mode {mode!r} is not available for {geometry}; expected one of {', '.join(COMPATIBLE_MODES[geometry])}",
        )
    if config.get("q_codim", CODIMENSION[geometry]) != CODIMENSION[geometry]:
        raise ConfigError("q_codim", f"{geometry} has codimension {CODIMENSION[geometry]}, got {config['q_codim']}")

    for key in ("eps", "t", "lambda", "omega"):
        config[key] = _positive_list(config, key)
    for key in _REQUIRED_LISTS[mode]:
        if geometry == "weyl-ref" and mode == "compare" and key != "lambda":
            continue
        if not config[key]:
            raise ConfigError(key, f"{key} must not be empty in {mode} mode")
    if geometry == "weyl-ref" and mode == "compare" and not config["lambda"]:
        raise ConfigError("lambda", "lambda must not be empty in compare mode")
    if geometry == "heisenberg" and mode == "heat" and not config["omega"]:
        raise ConfigError("omega", "omega must not be empty in heat mode")

    _resolve_alpha(config)
    if geometry in ("torus", "sol") and config["alpha"] is None:
        raise ConfigError("alpha", f"{geometry} needs a slope: alpha, alpha_name or rational")
    if geometry == "torus" and mode == "symbol" and config["rational"] is not None:
        raise ConfigError("rational", "symbol mode is only defined for an irrational slope")
    if geometry == "sol" and mode == "mismatch" and config["alpha"] == 0:
        raise ConfigError("alpha", "mismatch mode requires alpha != 0")

    for key in ("a", "mu", "amplitude"):
        try:
            config[key] = float(config[key])
        except (TypeError, ValueError):
            raise ConfigError(key, f"{key} must be a number, got {config[key]!r}")
    for key in ("a", "mu"):
        if not config[key] > 0:
            raise ConfigError(key, f"{key} must be positive, got {config[key]}")
    if geometry == "sol":
        matrix = config.get("matrix")
        if not isinstance(matrix, (list, tuple)) or len(matrix) != 4:
            raise ConfigError("matrix", f"matrix must have four entries a11,a12,a21,a22, got {matrix!r}")
        try:
            entries = [int(v) for v in matrix]
            if any(float(v) != e for v, e in zip(matrix, entries)):
                raise ValueError
            sol_matrix_validate([entries[:2], entries[2:]])
        except ValueError as e:
            condition = e.condition if isinstance(e, MatrixValidationError) else "integer entries"
            raise ConfigError("matrix", f"matrix violates {condition}")
        config["matrix"] = entries

    try:
        named_potential(config["potential"], config["amplitude"])
    except ValueError as e:
        raise ConfigError("potential", str(e))
    if int(config["n_points"]) != config["n_points"] or config["n_points"] < 3:
        raise ConfigError("n_points", f"n_points must be an integer >= 3, got {config['n_points']}")
    config["n_points"] = int(config["n_points"])

    tolerance = config.get("tolerance")
    if tolerance is not None:
        tolerance = float(tolerance)
        if not tolerance > 0:
            raise ConfigError("tolerance", f"tolerance must be positive, got {tolerance}")
        config["tolerance"] = tolerance

    try:
        margin = float(config.get("mismatch_margin", 0.0))
    except (TypeError, ValueError):
        raise ConfigError("mismatch_margin", f"mismatch_margin must be a number, got {config.get('mismatch_margin')!r}")
    if not 0.0 <= margin < MISMATCH_LIMIT:
        raise ConfigError("mismatch_margin", f"mismatch_margin must lie in [0, 2/3), got {margin}")
    config["mismatch_margin"] = margin
    return config
