"""JSON spec files for original and reduced systems.

An original system::

    {"k": 2, "alpha": [0, 0], "beta": [[1, 2], [3, 4]],
     "A": [0, 0], "B": [[1, 1], [2, 1]], "x0": [1, 1], "labels": ["x", "y"]}

A reduced system carries its kind tag and pivot::

    {"kind": "LinearReduced", "pivot": 2, "k": 2,
     "components": [{"numA": {"c": 0, "coeffs": [1]}, "numB": ..., "denA": ..., "denB": ...}],
     "x0": [1.5]}

``x0`` and ``labels`` are optional. Floats are written with ``repr`` so a
written file reads back bit for bit.
"""

import json
import math
from typing import Optional, Union

import numpy as np

from .core import SystemSpec, validate
from .errors import ProjectiveSystemError
from .reduce import AffineForm, ReducedComponent, ReducedKind, ReducedSystem

_SLOTS = ("numA", "numB", "denA", "denB")


class SpecFileError(ProjectiveSystemError, ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _reject_constant(name):
    raise SpecFileError(name, "non-finite numbers are not allowed")


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecFileError(field, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise SpecFileError(field, "must be finite")
    if value < 0:
        raise SpecFileError(field, f"must be nonnegative, got {value!r}")
    return value


def _vector(doc: dict, field: str, n: int) -> list:
    if field not in doc:
        raise SpecFileError(field, "missing")
    value = doc[field]
    if not isinstance(value, list) or len(value) != n:
        raise SpecFileError(field, f"expected an array of length {n}")
    return [_number(v, f"{field}[{i + 1}]") for i, v in enumerate(value)]


def _matrix(doc: dict, field: str, n: int) -> list:
    if field not in doc:
        raise SpecFileError(field, "missing")
    value = doc[field]
    if not isinstance(value, list) or len(value) != n:
        raise SpecFileError(field, f"expected {n} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n:
            raise SpecFileError(field, f"row {i + 1} must have length {n}, expected a {n}x{n} array")
        rows.append([_number(v, f"{field}[{i + 1}][{j + 1}]") for j, v in enumerate(row)])
    return rows


def _x0(doc: dict, n: int) -> Optional[np.ndarray]:
    if doc.get("x0") is None:
        return None
    x0 = _vector(doc, "x0", n)
    if min(x0, default=1) <= 0:
        raise SpecFileError("x0", "initial state must be strictly positive")
    return np.array(x0)


def _dimension(doc: dict) -> int:
    k = doc.get("k")
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise SpecFileError("k", f"expected an integer >= 1, got {k!r}")
    return k


def parse_spec(text: str):
    """Parse spec text into ``(system, x0)``; ``x0`` is None when absent."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecFileError("document", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecFileError("document", "top level must be an object")
    k = _dimension(doc)
    if "kind" in doc:
        return _parse_reduced(doc, k)

    spec = SystemSpec(
        alpha=_vector(doc, "alpha", k), beta=_matrix(doc, "beta", k),
        A=_vector(doc, "A", k), B=_matrix(doc, "B", k),
        labels=_labels(doc, k))
    report = validate(spec)
    if not report:
        issue = report.issues[0]
        field = {"zero_numerator": "alpha/beta", "zero_denominator": "A/B"}.get(issue.check, "document")
        raise SpecFileError(field, issue.message)
    return spec, _x0(doc, k)


def _labels(doc: dict, k: int):
    labels = doc.get("labels")
    if labels is None:
        return None
    if not isinstance(labels, list) or len(labels) != k or not all(isinstance(s, str) for s in labels):
        raise SpecFileError("labels", f"expected {k} strings")
    return tuple(labels)


def _parse_reduced(doc: dict, k: int):
    try:
        kind = ReducedKind(doc["kind"])
    except ValueError:
        raise SpecFileError("kind", f"unknown reduced kind {doc['kind']!r}") from None
    if k < 2:
        raise SpecFileError("k", "a reduced system needs k >= 2")
    pivot = doc.get("pivot")
    if isinstance(pivot, bool) or not isinstance(pivot, int) or not 1 <= pivot <= k:
        raise SpecFileError("pivot", f"expected an integer in 1..{k}")
    comps = doc.get("components")
    if not isinstance(comps, list) or len(comps) != k - 1:
        raise SpecFileError("components", f"expected {k - 1} components")
    components = []
    for j, comp in enumerate(comps):
        forms = {}
        for slot in _SLOTS:
            name = f"components[{j + 1}].{slot}"
            form = comp.get(slot) if isinstance(comp, dict) else None
            if not isinstance(form, dict) or "c" not in form:
                raise SpecFileError(name, "missing affine form")
            forms[slot] = _form(form, name, k - 1)
        components.append(ReducedComponent(**forms))
    red = ReducedSystem(kind, pivot, k, tuple(components))
    return red, _x0(doc, k - 1)


def _form(form: dict, name: str, m: int) -> AffineForm:
    coeffs = form.get("coeffs")
    if not isinstance(coeffs, list) or len(coeffs) != m:
        raise SpecFileError(name + ".coeffs", f"expected an array of length {m}")
    return AffineForm(_number(form["c"], name + ".c"),
                      [_number(v, f"{name}.coeffs[{i + 1}]") for i, v in enumerate(coeffs)])


def _form_doc(form: AffineForm) -> dict:
    return {"c": form.c, "coeffs": list(form.coeffs)}


def spec_to_dict(system: Union[SystemSpec, ReducedSystem], x0=None) -> dict:
    if isinstance(system, ReducedSystem):
        doc = {"kind": system.kind.value, "pivot": system.pivot, "k": system.k,
               "components": [{slot: _form_doc(getattr(c, slot)) for slot in _SLOTS}
                              for c in system.components]}
    else:
        doc = {"k": system.k, "alpha": system.alpha.tolist(), "beta": system.beta.tolist(),
               "A": system.A.tolist(), "B": system.B.tolist()}
        if system.labels is not None:
            doc["labels"] = list(system.labels)
    if x0 is not None:
        doc["x0"] = [float(v) for v in x0]
    return doc


def dump_spec(system: Union[SystemSpec, ReducedSystem], x0=None) -> str:
    return json.dumps(spec_to_dict(system, x0), indent=2) + "\n"


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def write_spec(path, system, x0=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_spec(system, x0))
