"""Fan documents: JSON with integer or ``"p/q"`` entries.

A document looks like::

    {
      "name": "F1",
      "rank": 2,
      "rays": [[1, 0], [0, 1], [-1, -1], [0, -1]],
      "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]],
      "divisors": [[0, 0, 2, 1]]
    }

``name`` and ``divisors`` are optional.  Rays that are not primitive are
rescaled to their primitive representative and reported in ``warnings``.
"""

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .bundles import TDivisor
from .errors import InvalidFanError, ParseError, UnknownFanError
from .fans import Fan, LIBRARY_NAMES, library_fan
from .kernel.linalg import primitive


SHIPPED = LIBRARY_NAMES + ("F4", "F5")


@dataclass
class FanDocument:
    fan: Fan
    divisors: list = None
    name: str = None
    warnings: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.fan, self.divisors))


def _number(value, where):
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a number, got {value!r}", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot read {value!r} as p/q", where) from None
    raise ParseError(f"{where}: expected an integer or \"p/q\" string, got {value!r}", where)


def _integer(value, where):
    x = _number(value, where)
    if x.denominator != 1:
        raise ParseError(f"{where}: expected an integer, got {value!r}", where)
    return int(x)


def _list(doc, key, where=None):
    where = where or key
    value = doc[key] if isinstance(doc, dict) else doc
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list", where)
    return value


def parse_fan_spec(text):
    """Parse and validate a fan document; returns a :class:`FanDocument`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    for key in ("rays", "max_cones"):
        if key not in doc:
            raise ParseError(f"missing required field {key!r}", key)
    warnings = []
    rays = []
    for i, r in enumerate(_list(doc, "rays")):
        where = f"rays[{i}]"
        entries = [_number(x, f"{where}[{j}]") for j, x in enumerate(_list(r, None, where))]
        if not any(entries):
            raise ParseError(f"{where}: zero ray", where)
        p = primitive(entries)
        if list(p) != entries:
            warnings.append(f"{where}: {[str(x) for x in entries]} reduced to primitive {list(p)}")
        rays.append(p)
    rank_ = doc.get("rank")
    if rank_ is not None:
        rank_ = _integer(rank_, "rank")
    elif rays:
        rank_ = len(rays[0])
    else:
        raise ParseError("rank is required when there are no rays", "rank")
    for i, r in enumerate(rays):
        if len(r) != rank_:
            raise ParseError(f"rays[{i}]: length {len(r)} does not match rank {rank_}", f"rays[{i}]")
    cones = []
    for i, c in enumerate(_list(doc, "max_cones")):
        where = f"max_cones[{i}]"
        cones.append([_integer(x, f"{where}[{j}]") for j, x in enumerate(_list(c, None, where))])
    try:
        fan = Fan(rays, cones, rank_)
    except InvalidFanError as exc:
        raise ParseError(f"invalid fan: {exc}", "max_cones") from exc
    divisors = None
    if "divisors" in doc:
        divisors = []
        for i, d in enumerate(_list(doc, "divisors")):
            where = f"divisors[{i}]"
            coeffs = [_integer(x, f"{where}[{j}]") for j, x in enumerate(_list(d, None, where))]
            if len(coeffs) != len(rays):
                raise ParseError(f"{where}: needs {len(rays)} coefficients", where)
            divisors.append(TDivisor(coeffs))
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("name must be a string", "name")
    return FanDocument(fan, divisors, name, warnings)


def serialize_fan(fan, divisors=None, name=None):
    """Canonical document text; stable under parse/serialize round trips."""
    def row(values):
        return json.dumps([int(x) for x in values])

    lines = ["{"]
    if name is not None:
        lines.append(f"  \"name\": {json.dumps(name)},")
    lines.append(f"  \"rank\": {fan.rank},")
    lines.append("  \"rays\": [" + ", ".join(row(r) for r in fan.rays) + "],")
    cones = "  \"max_cones\": [" + ", ".join(row(sorted(c)) for c in fan.max_cones) + "]"
    if divisors:
        lines.append(cones + ",")
        lines.append("  \"divisors\": [" + ", ".join(row(d.coeffs) for d in divisors) + "]")
    else:
        lines.append(cones)
    lines.append("}")
    return "\n".join(lines) + "\n"


def shipped_fan_text(name):
    """Text of a fan document bundled with the package."""
    try:
        return resources.files("toric_ccc").joinpath("data", "fans", f"{name}.json").read_text("utf-8")
    except FileNotFoundError:
        raise UnknownFanError(f"no shipped fan document {name!r}") from None


def load_fan(source):
    """A library name, a shipped document name, or a path to a document."""
    if source in LIBRARY_NAMES or (source.startswith("F") and source[1:].isdigit()):
        try:
            return parse_fan_spec(shipped_fan_text(source))
        except UnknownFanError:
            return FanDocument(library_fan(source), None, source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        # "examples/F1.json" and friends resolve to the bundled copies
        stem = os.path.splitext(os.path.basename(source))[0]
        if source.endswith(".json") and stem in SHIPPED:
            return parse_fan_spec(shipped_fan_text(stem))
        raise UnknownFanError(f"{source!r} is neither a library fan nor a readable file") from None
    return parse_fan_spec(text)
