"""INI serialization of calibrated-set specs.

A spec lives in a ``[set]`` section with a ``variant`` key.  Scalar profiles
of the monotone and f-g-K families are breakpoint tables in their own
sections::

    [set]
    variant = fgk
    K = 1.0

    [f]
    x = 0, 1
    y = 0, 1
    extrapolate = linear

    [g]
    x = 0, 0
    y = 0, -1

Half-spaces take ``normal = n1, n2, n3, n4`` and ``offset``.  ``CustomG``
wraps arbitrary code and cannot be serialized.
"""

from __future__ import annotations

import configparser
import io
from pathlib import Path

from .functions import PiecewiseLinear
from .specs import FGK, Cone, CustomG, HalfSpace, MonotoneG


class ConfigError(ValueError):
    pass


def _floats(text: str, key: str) -> list[float]:
    try:
        return [float(s) for s in text.replace(";", ",").split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a comma-separated list of numbers, got {text!r}") from exc


def _table(cp: configparser.ConfigParser, section: str) -> PiecewiseLinear:
    if not cp.has_section(section):
        raise ConfigError(f"missing section [{section}]")
    sec = cp[section]
    if "x" not in sec or "y" not in sec:
        raise ConfigError(f"[{section}] needs keys x and y")
    try:
        return PiecewiseLinear(
            _floats(sec["x"], f"{section}.x"),
            _floats(sec["y"], f"{section}.y"),
            extrapolate=sec.get("extrapolate", "constant").strip(),
        )
    except ValueError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def spec_from_parser(cp: configparser.ConfigParser):
    if not cp.has_section("set"):
        raise ConfigError("missing section [set]")
    sec = cp["set"]
    variant = sec.get("variant", "").strip().lower()
    try:
        if variant == "cone":
            return Cone()
        if variant == "halfspace":
            normal = _floats(sec.get("normal", "0, 1, 0, 0"), "set.normal")
            return HalfSpace(tuple(normal), float(sec.get("offset", "0")))
        if variant == "monotone":
            return MonotoneG(_table(cp, "g"))
        if variant == "fgk":
            if "K" not in sec:
                raise ConfigError("fgk needs K")
            return FGK(_table(cp, "f"), _table(cp, "g"), float(sec["K"]))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown variant {variant!r}; expected cone, halfspace, monotone or fgk")


def loads(text: str):
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep K upper-case
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    return spec_from_parser(cp)


def load(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def _fmt(values) -> str:
    return ", ".join(repr(float(v)) for v in values)


def _put_table(cp: configparser.ConfigParser, section: str, fn) -> None:
    if not isinstance(fn, PiecewiseLinear):
        raise ConfigError(f"profile {section} is not a piecewise-linear table")
    t = fn.to_table()
    cp[section] = {"x": _fmt(t["x"]), "y": _fmt(t["y"]), "extrapolate": t["extrapolate"]}


def to_parser(spec) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    if isinstance(spec, Cone):
        cp["set"] = {"variant": "cone"}
    elif isinstance(spec, HalfSpace):
        cp["set"] = {"variant": "halfspace", "normal": _fmt(spec.normal), "offset": repr(float(spec.offset))}
    elif isinstance(spec, MonotoneG):
        cp["set"] = {"variant": "monotone"}
        _put_table(cp, "g", spec.g)
    elif isinstance(spec, FGK):
        cp["set"] = {"variant": "fgk", "K": repr(float(spec.K))}
        _put_table(cp, "f", spec.f)
        _put_table(cp, "g", spec.g)
    elif isinstance(spec, CustomG):
        raise ConfigError("CustomG wraps code and has no text form")
    else:
        raise ConfigError(f"unsupported spec {type(spec).__name__}")
    return cp


def dumps(spec) -> str:
    buf = io.StringIO()
    to_parser(spec).write(buf)
    return buf.getvalue()
