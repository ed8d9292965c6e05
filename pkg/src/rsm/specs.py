"""JSON schemas and loaders for correlation spec files and experiment manifests."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import builtins
from .arith import ArithmeticFunction, function_from_table
from .correlations import CorrelationSpec

_NUMBER = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_SPARSE = {"type": "object", "propertyNames": {"pattern": r"^[1-9]\d*$"}, "additionalProperties": _NUMBER}

CORRELATION_SCHEMA = {
    "type": "object",
    "required": ["f", "g_prime", "Q", "N"],
    "properties": {
        "description": {"type": "string"},
        "f": {
            "oneOf": [
                {"type": "string"},
                {"type": "object", "required": ["builtin"], "properties": {"builtin": {"type": "string"}}, "additionalProperties": False},
                {"type": "object", "required": ["values"], "properties": {"values": {"type": "array", "items": _NUMBER}}, "additionalProperties": False},
                {"type": "object", "required": ["support"], "properties": {"support": _SPARSE}, "additionalProperties": False},
            ]
        },
        "g_prime": {
            "oneOf": [
                _SPARSE,
                {"type": "object", "required": ["builtin"], "properties": {"builtin": {"type": "string"}}, "additionalProperties": False},
            ]
        },
        "Q": {"type": "integer", "minimum": 1},
        "N": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

SUBCOMMANDS = (
    "csum", "wintner", "carmichael", "hypotheses", "smoothsum", "irr", "decomp", "fai", "reef",
    "correlate", "error", "singular", "hl", "chars", "gauss", "theorem5", "error-chars", "counterexample",
)

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["subcommand", "parameters"],
    "properties": {
        "subcommand": {"enum": list(SUBCOMMANDS)},
        "parameters": {"type": "object"},
        "seed": {"type": "integer"},
        "cutoffs": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 3},
        "outputs": {
            "type": "object",
            "properties": {"csv": {"type": "string"}, "json": {"type": "string"}},
            "additionalProperties": False,
        },
        "version": {"type": "string"},
    },
    "additionalProperties": False,
}


class SchemaError(ValueError):
    """A spec file or manifest does not match its schema."""


def validate(doc, schema) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{path}: {e.message}") from None


def parse_number(v):
    """int, Fraction from "p/q", or float."""
    if isinstance(v, str):
        return Fraction(v) if "/" in v else int(v)
    return v


def _all_exact(vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _sparse_function(entries: dict, name: str) -> ArithmeticFunction:
    table = {int(k): parse_number(v) for k, v in entries.items()}
    top = max(table, default=0)
    vals = [table.get(n, 0) for n in range(1, top + 1)]
    return function_from_table(vals, name=name, exact=_all_exact(vals))


def _builtin_f(name: str, which: str) -> ArithmeticFunction:
    b = builtins.get(name)
    return b.F if which == "f" else b.Fp


def correlation_spec_from_dict(doc: dict) -> CorrelationSpec:
    validate(doc, CORRELATION_SCHEMA)
    f = doc["f"]
    if isinstance(f, str):
        f_fn = _builtin_f(f, "f")
    elif "builtin" in f:
        f_fn = _builtin_f(f["builtin"], "f")
    elif "values" in f:
        vals = [parse_number(v) for v in f["values"]]
        f_fn = function_from_table(vals, name="f", exact=_all_exact(vals))
    else:
        f_fn = _sparse_function(f["support"], "f")
    g = doc["g_prime"]
    g_fn = _builtin_f(g["builtin"], "g_prime") if "builtin" in g else _sparse_function(g, "g'")
    return CorrelationSpec(f_fn, g_fn, doc["Q"], doc["N"])


def load_correlation_spec(path: str | Path) -> CorrelationSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from None
    return correlation_spec_from_dict(doc)


def random_spec_dict(rng: np.random.Generator, Q_max: int = 12, N_max: int = 500) -> dict:
    """Random small integer spec with Q <= Q_max and N <= N_max."""
    N = int(rng.integers(Q_max, N_max + 1))
    Q = int(rng.integers(1, Q_max + 1))
    f = rng.integers(-3, 4, size=N).tolist()
    qs = sorted(set(rng.integers(1, Q + 1, size=int(rng.integers(1, Q + 1))).tolist()))
    g = {str(q): int(rng.integers(-3, 4)) or 1 for q in qs}
    return {"f": {"values": f}, "g_prime": g, "Q": Q, "N": N}


def load_manifest(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from None
    validate(doc, MANIFEST_SCHEMA)
    return doc
