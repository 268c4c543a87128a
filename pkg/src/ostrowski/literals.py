"""Parsing of the textual number literals accepted by the CLI and input files.

    rat:P/Q                      exact rational (Q > 0, "/Q" optional)
    quad:(P+Q*sqrt(D))/R         element of Q(sqrt D) ("/R" optional)
    cf:[a1,a2,...]               purely periodic partial quotients [0; a1, a2, ... repeated]
    cf:[a1,...;b1,...]           preperiod a1.. followed by the repeating block b1..
"""

from __future__ import annotations

import re
from typing import Union

from .cfrac import CFLiteral, describe
from .errors import LiteralError
from .exactreal import Real

_INT = r"[+-]?\d+"
_RAT = re.compile(rf"^rat:\s*({_INT})\s*(?:/\s*(\d+))?\s*$")
_QUAD = re.compile(
    rf"^quad:\s*\(\s*({_INT})\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(\d+))?\s*$")
_CF = re.compile(r"^cf:\s*\[([^\]]*)\]\s*$")


def _digit_list(text: str, literal: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        digits = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise LiteralError(f"bad digit list in {literal!r}", operation="parse_literal") from None
    if any(a < 1 for a in digits):
        raise LiteralError(f"partial quotients must be >= 1 in {literal!r}",
                           operation="parse_literal")
    return digits


def parse_literal(text: str) -> Union[Real, CFLiteral]:
    """Parse one literal; raises :class:`LiteralError` on anything malformed."""
    s = text.strip()
    m = _RAT.match(s)
    if m:
        den = int(m.group(2) or 1)
        if den == 0:
            raise LiteralError(f"zero denominator in {text!r}", operation="parse_literal")
        return Real(int(m.group(1)), 0, 0, den)
    m = _QUAD.match(s)
    if m:
        p, sgn, q, d, r = m.groups()
        r = int(r or 1)
        if r == 0:
            raise LiteralError(f"zero denominator in {text!r}", operation="parse_literal")
        q = int(q) if sgn == "+" else -int(q)
        return Real(int(p), q, int(d), r)
    m = _CF.match(s)
    if m:
        body = m.group(1)
        if ";" in body:
            pre, block = body.split(";", 1)
            pre, block = _digit_list(pre, text), _digit_list(block, text)
        else:
            pre, block = [], _digit_list(body, text)
        if not block:
            raise LiteralError(f"empty repeating block in {text!r}", operation="parse_literal")
        return CFLiteral(pre, block)
    raise LiteralError(f"unrecognised literal {text!r}; expected rat:, quad: or cf:",
                       operation="parse_literal")


def format_literal(x) -> str:
    return describe(x)
