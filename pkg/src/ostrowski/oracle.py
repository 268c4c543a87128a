"""Brute-force enumeration of admissible digit sequences.

Certifies the range and uniqueness claims independently of the greedy
expansions: every short admissible sequence is evaluated exactly, values
are compared pairwise (by hashing exact values), and each value is fed back
through the expansion algorithm, which must return the sequence itself.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional

from .cfrac import AlphaContext
from .errors import CapExceeded
from .exactreal import DEFAULT_DECIMALS, render
from .ostrowski_abs import AbsDigits, abs_evaluate, abs_expand
from .ostrowski_alt import THEOREM_PROOF, DEFINITION, AltDigits, alt_evaluate, alt_expand

DEPTH_CAP = 12
SEQUENCE_BUDGET = 10**6
BUDGET_ENV = "OSTROWSKI_MAX_BUDGET"


def sequence_budget(requested: Optional[int] = None) -> int:
    budget = SEQUENCE_BUDGET if requested is None else requested
    env = os.environ.get(BUDGET_ENV)
    if env:
        budget = min(budget, int(env))
    return budget


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.n = 0

    def tick(self, depth):
        self.n += 1
        if self.n > self.budget:
            raise CapExceeded(f"enumeration exceeded the budget of {self.budget} sequences",
                              operation="enumerate", index=depth)


def _check_depth(depth: int, cap: int) -> None:
    if depth < 1:
        raise ValueError("depth must be positive")
    if depth > cap:
        raise CapExceeded(f"depth {depth} exceeds the cap {cap}", operation="enumerate",
                          index=depth)


def enumerate_abs(cf, depth: int, *, cap: int = DEPTH_CAP,
                  budget: Optional[int] = None) -> list[AbsDigits]:
    """All alpha-admissible finite sequences of length ``<= depth`` (last digit >= 1)."""
    _check_depth(depth, cap)
    counter = _Counter(sequence_budget(budget))
    found: list[tuple[int, ...]] = []

    def grow(prefix: tuple[int, ...], saturated: bool):
        k = len(prefix) + 1
        if k > depth:
            return
        a = cf.digit(k)
        for b in ((0,) if saturated else range(a + 1)):
            seq = prefix + (b,)
            counter.tick(k)
            if b:
                found.append(seq)
            grow(seq, b == a)

    grow((), False)
    return [AbsDigits(s) for s in sorted(found)]


def count_abs(cf, depth: int) -> int:
    """Number of sequences :func:`enumerate_abs` should return, by a transfer count.

    Track strings by whether the last digit is saturated (``b = a``): a
    saturated position forces a zero, otherwise ``a_k`` unsaturated choices
    and one saturated one.  Sequences of length ``m`` ending in a nonzero
    digit number ``free_{m-1} * a_m``.
    """
    free, sat = 1, 0
    total = 0
    for m in range(1, depth + 1):
        a = cf.digit(m)
        total += free * a
        free, sat = free * a + sat, free
    return total


def enumerate_alt(cf, depth: int, strictness: str = THEOREM_PROOF, *, cap: int = DEPTH_CAP,
                  budget: Optional[int] = None) -> list[AltDigits]:
    """All (-alpha)-admissible finite sequences of length ``<= depth``, the empty one included."""
    _check_depth(depth, cap)
    counter = _Counter(sequence_budget(budget))
    found: list[tuple[int, ...]] = [()]

    def grow(prefix: tuple[int, ...]):
        k = len(prefix) + 1
        if k > depth:
            return
        a = cf.digit(k)
        for c in range(a + 1):
            if prefix:
                prev_saturated = prefix[-1] == cf.digit(k - 1)
                if c == 0 and not prev_saturated:
                    continue
                if strictness == DEFINITION and prev_saturated and c != 0:
                    continue
            seq = prefix + (c,)
            counter.tick(k)
            if c:
                found.append(seq)
            grow(seq)

    grow(())
    return [AltDigits(s, 0, True, None, strictness) for s in sorted(found)]


@dataclass
class EnumerationReport:
    alpha: str
    variant: str
    depth: int
    strictness: Optional[str]
    count: int = 0
    min_value: object = None
    max_value: object = None
    duplicates: list = field(default_factory=list)
    range_failures: list = field(default_factory=list)
    roundtrip_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.duplicates or self.range_failures or self.roundtrip_failures)

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        def val(v):
            return None if v is None else render(v, digits)
        return {
            "alpha": self.alpha,
            "variant": self.variant,
            "depth": self.depth,
            "strictness": self.strictness,
            "count": self.count,
            "min_value": val(self.min_value),
            "max_value": val(self.max_value),
            "ok": self.ok,
            "duplicates": [{"digits": [list(a), list(b)], "value": val(v)}
                           for a, b, v in self.duplicates],
            "range_failures": [{"digits": list(s), "value": val(v)}
                               for s, v in self.range_failures],
            "roundtrip_failures": [{"digits": list(s), "recovered": list(g),
                                    "terminated": t} for s, g, t in self.roundtrip_failures],
        }


def _certify(ctx, variant, depth, strictness, seqs, evaluate, expand, low) -> EnumerationReport:
    report = EnumerationReport(ctx.describe(), variant, depth, strictness, len(seqs))
    by_value = defaultdict(list)
    values = []
    for s in seqs:
        v = evaluate(ctx, s).value
        values.append(v)
        by_value[v].append(s.digits)
        if not (ctx.sign(v - low) > 0 and ctx.sign(v - 1) < 0):
            report.range_failures.append((s.digits, v))
            continue
        got, _ = expand(ctx, v, depth + 2)
        if got.digits != s.digits or got.terminated is not True:
            report.roundtrip_failures.append((s.digits, got.digits, got.terminated))
    for v, group in by_value.items():
        for other in group[1:]:
            report.duplicates.append((group[0], other, v))
    if values:
        ordered = sorted(values, key=_order_key(ctx))
        report.min_value, report.max_value = ordered[0], ordered[-1]
    return report


def _order_key(ctx):
    return cmp_to_key(lambda x, y: ctx.sign(x - y))


def certify_uniqueness_abs(ctx: AlphaContext, depth: int, **kw) -> EnumerationReport:
    """Evaluate every admissible depth-limited sequence; values must be distinct,
    inside (0, 1) and expand back to the same digits."""
    seqs = enumerate_abs(ctx, depth, **kw)
    return _certify(ctx, "absolute", depth, None, seqs,
                    lambda c, s: abs_evaluate(c, s, check=False), abs_expand, ctx.coerce(0))


def certify_uniqueness_alt(ctx: AlphaContext, depth: int, strictness: str = THEOREM_PROOF,
                           **kw) -> EnumerationReport:
    """As :func:`certify_uniqueness_abs` with range (-alpha, 1); the empty sequence maps to 0."""
    seqs = enumerate_alt(ctx, depth, strictness, **kw)
    return _certify(ctx, "alternating", depth, strictness, seqs,
                    lambda c, s: alt_evaluate(c, s, check=False),
                    lambda c, v, n: alt_expand(c, v, n, strictness), -ctx.alpha)
