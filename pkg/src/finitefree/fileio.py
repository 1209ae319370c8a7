"""Roots files and polynomial JSON."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .polycore import MonicPoly, from_etilde, from_roots


class ParseError(ValueError):
    pass


def parse_roots_text(text: str, exact: bool = True):
    roots = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = Fraction(line)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"line {lineno}: cannot parse {line!r}") from exc
        roots.append(value if exact else float(value))
    if not roots:
        raise ParseError("no roots found")
    return roots


def poly_to_json(p: MonicPoly) -> str:
    def fmt(c):
        if isinstance(c, Fraction):
            return str(c)
        return repr(float(c))

    return json.dumps({"degree": p.degree, "etilde": [fmt(c) for c in p.etilde]})


def poly_from_json(text: str, exact: bool = True) -> MonicPoly:
    try:
        data = json.loads(text)
        degree = int(data["degree"])
        raw = [Fraction(str(c)) for c in data["etilde"]]
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid polynomial JSON: {exc}") from exc
    if len(raw) != degree + 1:
        raise ParseError(f"etilde has {len(raw)} entries, expected {degree + 1}")
    try:
        return from_etilde(raw if exact else [float(c) for c in raw], exact=exact)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_poly(path, exact: bool = True) -> MonicPoly:
    """Read a roots file or polynomial JSON (detected by a leading ``{``)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        return poly_from_json(text, exact=exact)
    roots = parse_roots_text(text, exact=exact)
    return from_roots(roots, exact=exact)
