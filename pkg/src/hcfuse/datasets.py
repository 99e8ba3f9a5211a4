"""Dataset loading and synthetic generators.

CSV loading accepts an optional single header row (auto-detected when the
first row has any non-numeric field) and a label policy saying which column
to strip before clustering: labels never reach the numeric pipeline.
Policies: ``none``, ``drop-first``, ``drop-last``, ``drop-named:<column>``
(needs a header). Optional min-max scaling maps each feature to [0, 1].

A registry JSON file lists benchmark datasets:
    [{"name": ..., "path": ..., "label_policy": ..., "scale": false}, ...]
relative paths resolve against the registry file's directory.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError
from .hierarchy import validate_data_matrix

LABEL_POLICIES = ("none", "drop-first", "drop-last")


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_dataset(path: str, label_policy: str = "none", scale: bool = False) -> np.ndarray:
    """Read a numeric CSV into an (n, m) float matrix."""
    named = None
    if label_policy.startswith("drop-named:"):
        named = label_policy.split(":", 1)[1]
        if not named:
            raise ConfigError("drop-named policy needs a column name, e.g. drop-named:class")
    elif label_policy not in LABEL_POLICIES:
        raise ConfigError(
            f"unknown label policy {label_policy!r}; use none, drop-first, drop-last "
            "or drop-named:<column>"
        )
    if not os.path.exists(path):
        raise DataError(f"dataset file not found: {path}")
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
    rows = [row for row in rows if not row[0].lstrip().startswith("#")]
    if not rows:
        raise DataError(f"{path}: no data rows")
    header = None
    if any(not _is_number(cell) for cell in rows[0]):
        header = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
    drop_col = None
    if named is not None:
        if header is None:
            raise DataError(f"{path}: drop-named:{named} needs a header row")
        if named not in header:
            raise DataError(f"{path}: no column named {named!r} in header")
        drop_col = header.index(named)
    elif label_policy == "drop-first":
        drop_col = 0
    elif label_policy == "drop-last":
        drop_col = -1
    data = []
    for r, row in enumerate(rows):
        if drop_col is not None:
            cut = drop_col if drop_col >= 0 else len(row) + drop_col
            row = row[:cut] + row[cut + 1:]
        values = []
        for c, cell in enumerate(row):
            cell = cell.strip()
            if not _is_number(cell):
                line = r + 1 + (1 if header is not None else 0)
                raise DataError(
                    f"{path}: non-numeric value {cell!r} at row {line}, column {c + 1}"
                )
            values.append(float(cell))
        data.append(values)
    widths = {len(row) for row in data}
    if len(widths) != 1:
        raise DataError(f"{path}: inconsistent column counts {sorted(widths)}")
    if len(data) < 3:
        raise DataError(f"{path}: need at least 3 rows, got {len(data)}")
    x = np.asarray(data, dtype=np.float64)
    x = validate_data_matrix(x)
    if scale:
        x = minmax_scale(x)
    return x


def minmax_scale(x: np.ndarray) -> np.ndarray:
    """Map each feature to [0, 1]; constant features become 0."""
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    span = np.where(span > 0.0, span, 1.0)
    return (x - lo) / span


# -- synthetic generators ---------------------------------------------------


def gaussian_blobs(
    n: int, centers: int = 3, features: int = 2, spread: float = 0.5, seed: int = 0
) -> np.ndarray:
    """n points split across well-separated Gaussian clusters."""
    if n < 3 or centers < 1:
        raise ConfigError("gaussian_blobs needs n >= 3 and centers >= 1")
    rng = np.random.default_rng(seed)
    middles = rng.uniform(-10.0, 10.0, size=(centers, features))
    assign = np.arange(n) % centers
    return middles[assign] + rng.normal(0.0, spread, size=(n, features))


def concentric_rings(n: int, rings: int = 2, noise: float = 0.05, seed: int = 0) -> np.ndarray:
    """n points on concentric circles with radial jitter."""
    if n < 3 or rings < 1:
        raise ConfigError("concentric_rings needs n >= 3 and rings >= 1")
    rng = np.random.default_rng(seed)
    assign = np.arange(n) % rings
    radius = (assign + 1.0) + rng.normal(0.0, noise, size=n)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


# -- registry ---------------------------------------------------------------


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    path: str
    label_policy: str = "none"
    scale: bool = False


def load_registry(path: str) -> list[RegistryEntry]:
    if not os.path.exists(path):
        raise DataError(f"registry file not found: {path}")
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list) or not raw:
        raise DataError(f"{path}: registry must be a non-empty JSON list")
    base = os.path.dirname(os.path.abspath(path))
    entries = []
    for item in raw:
        try:
            entry = RegistryEntry(**item)
        except TypeError as exc:
            raise DataError(f"{path}: bad registry entry {item!r}: {exc}") from None
        resolved = entry.path
        if not os.path.isabs(resolved):
            resolved = os.path.join(base, resolved)
        entries.append(RegistryEntry(entry.name, resolved, entry.label_policy, entry.scale))
    return entries
