"""Strict JSON input parsing and canonical report output."""
from __future__ import annotations

import dataclasses
import json
import math
import os
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from . import __version__
from .cubical import FiniteCategorySpec, discrete_category, one_object_group, trivial_category
from .errors import ParseError
from .finprob import FiniteProbability, StochasticMorphism, validate

SCHEMA = "probgamma.report/1"


# output -----------------------------------------------------------------------

def _real(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = float(f"{x:.12g}")
    return 0.0 if r == 0 else r


def to_jsonable(obj: Any) -> Any:
    """Fractions as "p/q", reals at 12 significant digits, complex as {re, im}."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return _real(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _real(obj.real), "im": _real(obj.imag)}
    if hasattr(obj, "re") and hasattr(obj, "im") and hasattr(obj, "abs2"):
        return {"re": str(obj.re), "im": str(obj.im)}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable({f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)})
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(command: str, result: Any) -> str:
    body = {"schema": SCHEMA, "version": __version__, "command": command, "result": to_jsonable(result)}
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


def emit_error(command: str, err) -> str:
    body = {"schema": SCHEMA, "version": __version__, "command": command, "error": to_jsonable(err.to_json())}
    return json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


# input ------------------------------------------------------------------------

def load_input(source: str) -> Any:
    """Inline JSON (starting with '{' or '[') or a path to a JSON file."""
    text = source.strip()
    if not text.startswith(("{", "[")):
        if not os.path.exists(source):
            raise ParseError(f"no such file: {source}", location=source)
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", location=f"line {exc.lineno} column {exc.colno}") from exc


def _fields(d: Any, loc: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(d, dict):
        raise ParseError("expected an object", location=loc)
    unknown = sorted(set(d) - required - set(optional))
    if unknown:
        raise ParseError(f"unknown fields {unknown}", location=loc)
    missing = sorted(required - set(d))
    if missing:
        raise ParseError(f"missing fields {missing}", location=loc)
    return d


def _list(v: Any, loc: str) -> list:
    if not isinstance(v, list):
        raise ParseError("expected a list", location=loc)
    return v


def parse_rational(v: Any, loc: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ParseError("floats are not accepted where a rational is required; use \"p/q\"", location=loc)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if any(c in s for c in ".eE") or not s:
            raise ParseError(f"not a rational: {v!r}", location=loc)
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {v!r}", location=loc) from exc
    raise ParseError(f"not a rational: {v!r}", location=loc)


def parse_real(v: Any, loc: str) -> float:
    if isinstance(v, bool):
        raise ParseError("expected a number", location=loc)
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a number: {v!r}", location=loc) from exc
    raise ParseError("expected a number", location=loc)


def parse_complex(v: Any, loc: str) -> complex:
    if isinstance(v, dict):
        d = _fields(v, loc, {"re"}, {"im"})
        return complex(parse_real(d["re"], f"{loc}.re"), parse_real(d.get("im", 0), f"{loc}.im"))
    return complex(parse_real(v, loc))


def parse_rational_matrix(rows: Any, loc: str) -> tuple[tuple[Fraction, ...], ...]:
    rows = _list(rows, loc)
    out = tuple(tuple(parse_rational(x, f"{loc}[{i}][{j}]") for j, x in enumerate(_list(r, f"{loc}[{i}]")))
                for i, r in enumerate(rows))
    if len({len(r) for r in out}) > 1:
        raise ParseError("ragged matrix", location=loc)
    return out


def parse_complex_matrix(rows: Any, loc: str) -> np.ndarray:
    rows = _list(rows, loc)
    out = [[parse_complex(x, f"{loc}[{i}][{j}]") for j, x in enumerate(_list(r, f"{loc}[{i}]"))]
           for i, r in enumerate(rows)]
    if len({len(r) for r in out}) > 1:
        raise ParseError("ragged matrix", location=loc)
    return np.array(out, dtype=complex)


def parse_fp(d: Any, loc: str = "$") -> FiniteProbability:
    d = _fields(d, loc, {"probs"}, {"labels", "type"})
    probs = tuple(parse_rational(x, f"{loc}.probs[{i}]") for i, x in enumerate(_list(d["probs"], f"{loc}.probs")))
    labels = d.get("labels")
    if labels is None:
        return FiniteProbability.from_probs(probs)
    labels = _list(labels, f"{loc}.labels")
    if not all(isinstance(x, str) for x in labels):
        raise ParseError("labels must be strings", location=f"{loc}.labels")
    return FiniteProbability(tuple(labels), probs)


def parse_morphism(d: Any, loc: str = "$") -> StochasticMorphism:
    """Validated: domain errors from the stochastic check surface unchanged."""
    d = _fields(d, loc, {"source", "target", "matrix"}, {"type"})
    src = parse_fp(d["source"], f"{loc}.source")
    tgt = parse_fp(d["target"], f"{loc}.target")
    return validate(parse_rational_matrix(d["matrix"], f"{loc}.matrix"), src, tgt)


BUILTIN_CATEGORIES = {"z2": lambda: one_object_group(2), "z3": lambda: one_object_group(3),
                      "disc2": lambda: discrete_category(2), "trivial": trivial_category}


def parse_category(d: Any, loc: str = "$") -> FiniteCategorySpec:
    """Either {"builtin": name} or an explicit table of objects, morphisms and composites."""
    if isinstance(d, dict) and "builtin" in d:
        _fields(d, loc, {"builtin"}, {"type"})
        name = d["builtin"]
        if name not in BUILTIN_CATEGORIES:
            raise ParseError(f"unknown builtin category {name!r}; known: {sorted(BUILTIN_CATEGORIES)}",
                             location=f"{loc}.builtin")
        return BUILTIN_CATEGORIES[name]()
    d = _fields(d, loc, {"objects", "morphisms", "identity", "compose"}, {"basepoint", "type"})
    objs = tuple(str(x) for x in _list(d["objects"], f"{loc}.objects"))
    names, src, tgt = [], {}, {}
    for i, m in enumerate(_list(d["morphisms"], f"{loc}.morphisms")):
        m = _fields(m, f"{loc}.morphisms[{i}]", {"name", "source", "target"})
        names.append(str(m["name"]))
        src[m["name"]], tgt[m["name"]] = str(m["source"]), str(m["target"])
    ident = d["identity"]
    if not isinstance(ident, dict):
        raise ParseError("identity must map objects to morphisms", location=f"{loc}.identity")
    comp = {}
    for i, row in enumerate(_list(d["compose"], f"{loc}.compose")):
        row = _list(row, f"{loc}.compose[{i}]")
        if len(row) != 3:
            raise ParseError("composites are [g, f, g o f]", location=f"{loc}.compose[{i}]")
        comp[(row[0], row[1])] = row[2]
    return FiniteCategorySpec(objs, tuple(names), src, tgt, dict(ident), comp, d.get("basepoint")).validate()


def parse_channel(d: Any, loc: str = "$"):
    from .quantum import from_choi, from_kraus

    d = _fields(d, loc, set(), {"dims", "choi", "kraus", "type"})
    if "kraus" in d:
        ops = [parse_complex_matrix(a, f"{loc}.kraus[{i}]") for i, a in enumerate(_list(d["kraus"], f"{loc}.kraus"))]
        return from_kraus(ops)
    if "choi" in d and "dims" in d:
        dims = _list(d["dims"], f"{loc}.dims")
        if len(dims) != 2 or not all(isinstance(x, int) and x > 0 for x in dims):
            raise ParseError("dims must be [din, dout]", location=f"{loc}.dims")
        return from_choi(parse_complex_matrix(d["choi"], f"{loc}.choi"), dims[0], dims[1])
    raise ParseError("a channel needs either kraus or dims with choi", location=loc)
