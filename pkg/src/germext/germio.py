"""Germ files: UTF-8 JSON with ``n``, ``points`` and ``boundary``."""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import GermFormatError
from .morse import LABELS, CriticalPoint, GermComplex


def _locate(text: str, needle: str):
    """Line and column of the first match of the regex ``needle`` (1-based)."""
    m = re.search(needle, text)
    if m is None:
        return None, None
    pos = m.start()
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _fail(text, msg, needle=None):
    line, col = _locate(text, needle) if needle else (None, None)
    raise GermFormatError(msg, line, col)


def _id_at(pid) -> str:
    return r'"id"\s*:\s*' + re.escape(json.dumps(pid))


def _key(name) -> str:
    return re.escape(json.dumps(name))


def _parse_value(raw, text, pid):
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        _fail(text, f"point {pid!r}: value must be a 'p/q' string or an integer", _id_at(pid))
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        _fail(text, f"point {pid!r}: cannot read value {raw!r} as a rational", _id_at(pid))


def loads_germ(text: str) -> GermComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GermFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise GermFormatError("top level must be an object", 1, 1)
    for key in ("n", "points"):
        if key not in doc:
            _fail(text, f"missing key {key!r}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        _fail(text, "n must be an integer", _key("n"))
    if not isinstance(doc["points"], list):
        _fail(text, "points must be a list", _key("points"))

    points = []
    for pos, p in enumerate(doc["points"]):
        if not isinstance(p, dict):
            _fail(text, f"points[{pos}] must be an object", _key("points"))
        missing = [k for k in ("id", "index", "label", "value") if k not in p]
        if missing:
            needle = _id_at(p["id"]) if "id" in p else _key("points")
            _fail(text, f"points[{pos}] lacks {', '.join(missing)}", needle)
        pid = p["id"]
        if not isinstance(pid, str):
            _fail(text, f"points[{pos}]: id must be a string", _key("points"))
        if isinstance(p["index"], bool) or not isinstance(p["index"], int):
            _fail(text, f"point {pid!r}: index must be an integer", _id_at(pid))
        if p["label"] not in LABELS:
            _fail(text, f"point {pid!r}: label must be '+' or '-'", _id_at(pid))
        points.append(CriticalPoint(pid, p["index"], p["label"], _parse_value(p["value"], text, pid)))

    boundary = {}
    entries = doc.get("boundary", [])
    if not isinstance(entries, list):
        _fail(text, "boundary must be a list", _key("boundary"))
    for pos, e in enumerate(entries):
        if not isinstance(e, dict) or any(k not in e for k in ("from", "to", "coeff")):
            _fail(text, f"boundary[{pos}] needs from, to and coeff", _key("boundary"))
        src, dst, c = e["from"], e["to"], e["coeff"]
        if isinstance(c, bool) or not isinstance(c, int):
            _fail(text, f"boundary[{pos}]: coeff must be an integer", _key("boundary"))
        if (src, dst) in boundary:
            _fail(text, f"duplicate boundary entry {src!r} -> {dst!r}", _key("boundary"))
        boundary[(src, dst)] = c
    return GermComplex(n, tuple(points), boundary)


def load_germ(path) -> GermComplex:
    with open(path, encoding="utf-8") as fh:
        return loads_germ(fh.read())


def germ_to_json(G: GermComplex) -> dict:
    def val(v: Fraction) -> str:
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    pts = sorted(G.points, key=lambda p: p.value, reverse=True)
    return {
        "n": G.n,
        "points": [{"id": p.id, "index": p.index, "label": p.label, "value": val(p.value)} for p in pts],
        "boundary": [{"from": s, "to": t, "coeff": c} for (s, t), c in sorted(G.boundary.items())],
    }


def dumps_germ(G: GermComplex) -> str:
    return json.dumps(germ_to_json(G), indent=2, sort_keys=True) + "\n"
