"""
Hardy utils
"""

import os
import math
import random
from logging import getLogger
from dataclasses import dataclass, fields, is_dataclass
from enum import Enum
from pathlib import Path

import toml
from tqdm import tqdm
import numpy as np

from hardy.errors import DomainError


__dir__ = Path(__file__).parent

SCHEMA_VERSION = "1.0"
DEFAULT_NODES = 512
MIN_CLASSIFY_NODES = 64
# config keys spelled like a flag alias, mapped to the argument they set
CONFIG_ALIASES = {"lambda": "lam", "eps_list": "epsilon"}
DEFAULT_HORIZON = 1e8


logger = getLogger('hardy')


def init(seed):
    """
    Seed the random libs and return a numpy generator for `seed`.
    """
    random.seed(seed)
    np.random.seed(seed % 2**32)
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class GridSpec:
    """
    Geometric sampling grid, uniform in log r.

    `rmax` bounds the grid when the annulus is unbounded.
    """
    nodes: int = DEFAULT_NODES
    rmax: float = 1e6

    def __post_init__(self):
        if self.nodes < 2:
            raise DomainError(f"a grid needs at least 2 nodes, got {self.nodes}")
        if not self.rmax > 0:
            raise DomainError(f"rmax must be positive, got {self.rmax}")


def geometric_grid(r0, r1, nodes=DEFAULT_NODES):
    """
    `nodes` radii from `r0` to `r1` equally spaced in log r.
    """
    if not 0 < r0 < r1:
        raise DomainError(f"a grid needs 0 < r0 < r1, got r0={r0}, r1={r1}")
    return np.geomspace(r0, r1, nodes)


def relative_dead_band(residual, scale, tol=1e-9):
    """
    Signs of `residual` with everything inside tol * scale mapped to 0.
    """
    residual = np.asarray(residual, dtype=float)
    band = tol * (np.asarray(scale, dtype=float) + 1e-300)
    return np.where(residual > band, 1, np.where(residual < -band, -1, 0))


def _decode_value(value):
    """
    Decode a single config value with toml, keeping bare words as strings.
    """
    try:
        return toml.loads(f"v = {value}")["v"]
    except toml.TomlDecodeError:
        return value.strip().strip('"').strip("'")


def load_config(filename):
    """
    Load a `key = value` config file.

    Valid TOML is loaded as is (a table named after a subcommand is flattened
    into the top level by the caller). Otherwise every non comment line is
    split on the first `=` and its value decoded with toml where possible.
    """
    filename = Path(filename)
    if not filename.is_file():
        raise FileNotFoundError(f"no config file at {filename}")
    try:
        return toml.load(filename)
    except toml.TomlDecodeError:
        pass

    config = {}
    for lineno, line in enumerate(filename.read_text().splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line: continue
        if '=' not in line:
            raise DomainError(f"{filename}:{lineno}: expected 'key = value', got '{line}'")
        key, value = line.split('=', 1)
        config[key.strip()] = _decode_value(value.strip())
    return config


def config_defaults(config, command):
    """
    Argparse defaults from a loaded config: top level keys plus the table named
    after `command`, with dashes mapped to underscores and values as strings so
    each argument's `type` converts them.
    """
    flat = {k: v for k, v in config.items() if not isinstance(v, dict)}
    for section in (command, command.replace('-', '_')):
        flat.update(config.get(section, {}))

    defaults = {}
    for key, value in flat.items():
        key = key.replace('-', '_')
        key = CONFIG_ALIASES.get(key, key)
        if isinstance(value, bool):
            defaults[key] = value
        elif isinstance(value, list):
            defaults[key] = ",".join(str(v) for v in value)
        else:
            defaults[key] = str(value)
    return defaults


def dump_config(config, filename):
    with open(filename, 'w') as f:
        toml.dump(to_jsonable(config), f)


def to_jsonable(obj):
    """
    Convert reports (dataclasses, enums, numpy and non-finite floats) into
    plain json types.
    """
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj) if f.repr}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        if math.isfinite(obj): return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, Path):
        return str(obj)
    return obj


def tqdm_environ():
    """Get tqdm settings from environment variables"""
    kwargs = {}
    try:
        interval = os.getenv("HARDY_PBAR_INTERVAL", None)
        if interval is not None:
            kwargs.update(dict(mininterval=float(interval), maxinterval=float(interval)))
    except ValueError as exc:
        logger.warning(f"Couldn't parse HARDY_PBAR_INTERVAL as float - {exc}")

    try:
        disable = os.getenv("HARDY_PBAR_DISABLE", None)
        if disable is not None:
            kwargs.update(dict(disable=bool(int(disable))))
    except ValueError as exc:
        logger.warning(f"couldn't parse HARDY_PBAR_DISABLE as bool - {exc}")

    return kwargs


def progress(iterable, total=None, desc=None, unit=" it", enabled=True):
    """
    Wrap `iterable` in a stderr progress bar honouring `tqdm_environ`.
    """
    settings = dict(disable=not enabled, ascii=True, ncols=100, smoothing=0, leave=False)
    settings.update(tqdm_environ())
    return tqdm(iterable, total=total, desc=desc, unit=unit, **settings)
