"""Schema-validating reader for the self-describing CSV exports.

Every input file starts with comment lines `# key=value`, one of which
declares `schema=NAME/VERSION`, followed by a CSV header row and data.
The reader checks the declared schema against the consumer contract below
and reports missing or unknown columns by name.
"""

from __future__ import annotations

import csv
import io
import os

import numpy as np


class SchemaError(Exception):
    """Input file does not match its declared CSV schema."""


# consumer contract: schema name -> (version, required columns)
SCHEMAS = {
    "trajectory": (1, ["t", "x", "y", "rho", "kappa", "zone"]),
    "events": (1, ["t", "kind", "x", "y"]),
    "orbit": (1, ["normalized_t", "t", "x", "y", "rho", "kappa", "zone"]),
    "branch": (1, ["mu", "x", "y", "rho", "stability", "detJ", "trJ"]),
    "branch_markers": (1, ["kind", "mu", "x", "y"]),
    "curve": (1, ["kind", "mu", "eta", "aux1", "aux2"]),
    "special_points": (1, ["kind", "mu", "eta"]),
    "scan": (1, ["mu", "eta", "tag", "rho_min", "rho_max"]),
    "scan_boundaries": (1, ["tag", "polyline", "mu", "eta"]),
    "drift": (1, ["t", "mu", "x", "y", "rho", "kappa", "zone"]),
    "exchange_profile": (1, ["rho", "kappa"]),
    "zones_vs_epsilon": (1, ["epsilon", "rho_minus", "rho_plus", "L_minus", "L_plus"]),
    "orbit_family": (1, ["mu", "rho_min", "rho_max", "period", "tag"]),
}

_NUMERIC_EXCEPTIONS = {"zone", "kind", "stability", "tag", "polyline"}


class Dataset:
    """One parsed CSV: header metadata plus named columns."""

    def __init__(self, schema: str, header: dict, columns: dict):
        self.schema = schema
        self.header = header
        self.columns = columns

    def __getitem__(self, name):
        if name not in self.columns:
            raise SchemaError(f"column '{name}' not present in {self.schema} data")
        return self.columns[name]

    def __len__(self):
        first = next(iter(self.columns.values()), np.array([]))
        return len(first)


def read_dataset(path: str, expect: str | None = None) -> Dataset:
    """Read and validate one CSV export; optionally require a schema name."""
    if not os.path.exists(path):
        raise SchemaError(f"input file not found: {path}")
    header = {}
    body = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key.strip()] = value.strip()
            else:
                body.append(line)
    declared = header.get("schema")
    if declared is None or "/" not in declared:
        raise SchemaError(f"{path}: missing or malformed 'schema' header")
    name, _, version = declared.partition("/")
    if expect is not None and name != expect:
        raise SchemaError(f"{path}: expected schema '{expect}', found '{name}'")
    if name not in SCHEMAS:
        raise SchemaError(f"{path}: unknown schema '{name}'")
    want_version, want_cols = SCHEMAS[name]
    if int(version) != want_version:
        raise SchemaError(
            f"{path}: schema {name} version {version}, reader supports {want_version}"
        )
    rows = list(csv.DictReader(body))
    if not rows:
        raise SchemaError(f"{path}: schema {name} contains no data rows")
    present = list(rows[0])
    for col in want_cols:
        if col not in present:
            raise SchemaError(f"{path}: schema {name} is missing column '{col}'")
    columns = {}
    for col in present:
        raw = [r[col] for r in rows]
        if col in _NUMERIC_EXCEPTIONS:
            columns[col] = np.array(raw, dtype=object)
        else:
            try:
                columns[col] = np.array([float(v) for v in raw])
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: non-numeric value in column '{col}': {exc}"
                ) from exc
    return Dataset(name, header, columns)
