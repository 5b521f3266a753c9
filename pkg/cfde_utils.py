import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

ENV_PREFIX = "CFDE_"

# Built-in defaults, overridable through CFDE_<NAME> environment variables
DEFAULTS = {
    "degree": 24,
    "n_theta": 16,
    "n_rad": 12,
    "n_quad": 48,
    "tol": 1e-10,
    "max_iter": 200,
    "damping": 1.0,
    "threads": 1,
    "grid": None,
}

SPEC_KEYS = {"q", "b", "f", "F", "h", "R", "r", "solver", "grids", "exact", "description"}
SOLVER_KEYS = {"degree", "n_theta", "n_rad", "n_quad", "tol", "max_iter", "damping"}
GRID_KEYS = {"torus", "verify", "unit_disc", "schwarz"}


class SpecFileError(ValueError):
    """Malformed problem-spec file or configuration value."""


def load_json_config(config_filename):
    """
    Load a JSON configuration file.

    Args:
        config_filename (str): Path to the JSON configuration file

    Returns:
        dict: The loaded configuration, or None if the file doesn't exist or is invalid
    """
    try:
        if not os.path.isfile(config_filename):
            print(f"Configuration file not found: {config_filename}", file=sys.stderr)
            return None

        with open(config_filename, 'r', encoding='utf-8') as file:
            return json.load(file)

    except json.JSONDecodeError as e:
        print(f"Error parsing JSON configuration: {e}", file=sys.stderr)
        return None
    except OSError as e:
        print(f"Unexpected error loading configuration: {e}", file=sys.stderr)
        return None


def env_default(name):
    """
    Default for a configuration key, taking CFDE_<NAME> into account.

    Example:
        CFDE_TOL=1e-8  ->  env_default("tol") == 1e-8
    """
    default = DEFAULTS[name]
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None or raw.strip() == "":
        return default
    try:
        if default is None or isinstance(default, str):
            parse_grid(raw)
            return raw.strip()
        return type(default)(raw)
    except ValueError:
        raise SpecFileError(f"invalid value for {ENV_PREFIX + name.upper()}: {raw!r}")


def parse_grid(text):
    """
    Parse an "NxM" grid size.

    Example:
        parse_grid("24x48") -> (24, 48)
    """
    try:
        n, m = (int(part) for part in str(text).lower().split("x"))
    except ValueError:
        raise SpecFileError(f"grid size must look like NxM, got {text!r}")
    if n < 1 or m < 1:
        raise SpecFileError(f"grid sizes must be positive, got {text!r}")
    return n, m


def parse_complex(value, key="b"):
    """A complex number from a JSON number or a [re, im] pair."""
    if isinstance(value, bool):
        raise SpecFileError(f"'{key}' must be a number or a [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise SpecFileError(f"'{key}' must be a number or a [re, im] pair, got {value!r}")


def _positive_number(config, key):
    value = config[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise SpecFileError(f"'{key}' must be a positive number, got {value!r}")
    return float(value)


def validate_spec(config):
    """
    Validate a problem-spec dictionary and return a normalised copy.

    Exactly one of f, F, h must be present. R and r are required for f and F
    problems; h problems live on the unit disc with b = 0.

    Raises:
        SpecFileError: on unknown keys, missing keys or malformed values
    """
    if not isinstance(config, dict):
        raise SpecFileError("a problem spec must be a JSON object")

    unknown = set(config) - SPEC_KEYS
    if unknown:
        raise SpecFileError(f"unknown keys in problem spec: {', '.join(sorted(unknown))}")

    forms = [k for k in ("f", "F", "h") if k in config]
    if len(forms) != 1:
        raise SpecFileError("a problem spec needs exactly one of 'f', 'F' or 'h'")
    form = forms[0]
    if not isinstance(config[form], str):
        raise SpecFileError(f"'{form}' must be an expression string")

    if "q" not in config:
        raise SpecFileError("missing key 'q'")
    spec = {"form": form, "expr": config[form], "q": _positive_number(config, "q")}

    if form == "h":
        spec["b"] = parse_complex(config.get("b", 0.0))
        if spec["b"] != 0:
            raise SpecFileError("h problems have u(0) = 0, so 'b' must be 0")
        spec["R"] = _positive_number(config, "R") if "R" in config else 1.0
        spec["r"] = _positive_number(config, "r") if "r" in config else 1.0
    else:
        for key in ("b", "R", "r"):
            if key not in config:
                raise SpecFileError(f"missing key '{key}'")
        spec["b"] = parse_complex(config["b"])
        spec["R"] = _positive_number(config, "R")
        spec["r"] = _positive_number(config, "r")

    solver = config.get("solver", {})
    if not isinstance(solver, dict) or set(solver) - SOLVER_KEYS:
        raise SpecFileError(f"'solver' accepts only {', '.join(sorted(SOLVER_KEYS))}")
    spec["solver"] = dict(solver)

    grids = config.get("grids", {})
    if not isinstance(grids, dict) or set(grids) - GRID_KEYS:
        raise SpecFileError(f"'grids' accepts only {', '.join(sorted(GRID_KEYS))}")
    spec["grids"] = {key: parse_grid(value) for key, value in grids.items()}

    exact = config.get("exact")
    if exact is not None and not isinstance(exact, str):
        raise SpecFileError("'exact' must be an expression string")
    spec["exact"] = exact
    spec["description"] = str(config.get("description", ""))
    return spec


def load_spec_file(path):
    """
    Load and validate a JSON problem-spec file.

    Example file:
        {"q": 0.5, "b": [1, 0], "R": 1, "r": 1,
         "f": "z^(-q)*(t + (q/(1-q))*z)/gamma(1-q)", "exact": "1+z"}

    Raises:
        SpecFileError: when the file is missing, not JSON or invalid
    """
    config = load_json_config(path)
    if config is None:
        raise SpecFileError(f"could not read problem spec {path}")
    return validate_spec(config)


def map_points(fn, *arrays, threads=1):
    """
    Evaluate fn on point arrays, split into contiguous chunks across threads.

    All arrays share one shape and are flattened; chunk results are
    concatenated in order, so the output does not depend on the thread count
    as long as fn acts point by point.

    Example:
        map_points(lambda z: z**2, np.arange(4), threads=2) -> array([0, 1, 4, 9])
    """
    flat = [np.asarray(a).ravel() for a in arrays]
    shape = np.shape(arrays[0])
    threads = max(1, int(threads))
    if threads == 1 or flat[0].size < 2 * threads:
        return np.asarray(fn(*flat)).reshape(shape)

    bounds = np.linspace(0, flat[0].size, threads + 1).astype(int)
    chunks = [tuple(a[lo:hi] for a in flat) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda args: np.asarray(fn(*args)), chunks))
    return np.concatenate(parts).reshape(shape)
