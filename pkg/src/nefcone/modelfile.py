"""JSON model documents.

Layout::

    {
      "base": {"rank": 1, "dim": 1, "nef_generators": [["1"]],
               "canonical": ["2"], "nef_equals_psef": true},
      "fibers": [["0"], ["2"], ["2"]],
      "classes": {"alpha": {"beta": ["-1"], "lambda": "1"}}
    }

``nef_facets`` may replace ``nef_generators``.  Numbers are integers or
``"p/q"`` strings; decimals are rejected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .bundle_model import BaseGeometry, BundleClass, BundleModel, ModelError
from .polycone import Cone, ConeError
from .ratlp import as_rational

__all__ = [
    "ModelFileError",
    "ModelValidationError",
    "parse_model",
    "load_model",
    "serialize_model",
    "dumps",
    "rat",
]


class ModelFileError(ValueError):
    """Unreadable or structurally malformed document (exit code 1)."""


class ModelValidationError(ValueError):
    """Well-formed document describing an invalid model (exit code 2)."""


def rat(value: Fraction) -> str:
    return str(value)


def _rational(value, where):
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ModelFileError(f"{where}: {exc}") from None


def _vector(value, where):
    if not isinstance(value, list):
        raise ModelFileError(f"{where}: expected a list of rationals")
    return tuple(_rational(v, f"{where}[{i}]") for i, v in enumerate(value))


def _section(doc, key, kind):
    if key not in doc:
        raise ModelFileError(f'missing section "{key}"')
    if not isinstance(doc[key], kind):
        raise ModelFileError(f'section "{key}" has the wrong type')
    return doc[key]


def parse_model(source) -> tuple[BundleModel, dict[str, BundleClass]]:
    """Parse a document given as a path, JSON text or an already-loaded dict."""
    if isinstance(source, dict):
        doc = source
    else:
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            try:
                text = Path(source).read_text()
            except OSError as exc:
                raise ModelFileError(f"cannot read {source}: {exc.strerror}") from None
        else:
            text = source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ModelFileError("top level must be an object")

    base = _section(doc, "base", dict)
    fibers_raw = _section(doc, "fibers", list)
    classes_raw = doc.get("classes", {})
    if not isinstance(classes_raw, dict):
        raise ModelFileError('section "classes" has the wrong type')

    for key in ("rank", "dim"):
        if not isinstance(base.get(key), int) or isinstance(base.get(key), bool):
            raise ModelFileError(f'base.{key} must be an integer')
    rank, dim = base["rank"], base["dim"]
    has_g, has_f = "nef_generators" in base, "nef_facets" in base
    if has_g == has_f:
        raise ModelFileError("base needs exactly one of nef_generators or nef_facets")
    key = "nef_generators" if has_g else "nef_facets"
    if not isinstance(base[key], list):
        raise ModelFileError(f"base.{key} must be a list")
    vectors = [_vector(v, f"base.{key}[{i}]") for i, v in enumerate(base[key])]
    flag = base.get("nef_equals_psef", True)
    if not isinstance(flag, bool):
        raise ModelFileError("base.nef_equals_psef must be a boolean")
    canonical = None
    if base.get("canonical") is not None:
        canonical = _vector(base["canonical"], "base.canonical")
    fibers = [_vector(v, f"fibers[{i}]") for i, v in enumerate(fibers_raw)]

    classes = {}
    for name in sorted(classes_raw):
        entry = classes_raw[name]
        if not isinstance(entry, dict) or "beta" not in entry or "lambda" not in entry:
            raise ModelFileError(f'class "{name}" needs "beta" and "lambda"')
        classes[name] = (
            _vector(entry["beta"], f"classes.{name}.beta"),
            _rational(entry["lambda"], f"classes.{name}.lambda"),
        )

    try:
        cone = Cone.from_generators(rank, vectors) if has_g else Cone.from_facets(rank, vectors)
        model = BundleModel(BaseGeometry(rank, dim, cone, flag, canonical), fibers)
        out = {}
        for name, (beta, lam) in classes.items():
            alpha = BundleClass(beta, lam)
            model.check_class(alpha)
            out[name] = alpha
    except (ModelError, ConeError) as exc:
        raise ModelValidationError(str(exc)) from None
    return model, out


load_model = parse_model


def serialize_model(model: BundleModel, classes: dict[str, BundleClass] | None = None) -> dict:
    base = {
        "rank": model.base.rank,
        "dim": model.base.dim,
        "nef_generators": [[rat(e) for e in g] for g in model.base.nef_cone.generators],
        "nef_equals_psef": model.base.nef_equals_psef,
    }
    if model.base.canonical is not None:
        base["canonical"] = [rat(e) for e in model.base.canonical]
    return {
        "base": base,
        "fibers": [[rat(e) for e in l] for l in model.fibers],
        "classes": {
            name: {"beta": [rat(e) for e in a.beta], "lambda": rat(a.lam)}
            for name, a in sorted((classes or {}).items())
        },
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
