"""Absolute (base-alpha) Ostrowski expansion.

Every beta in (0, 1) is uniquely ``sum b_k |theta_{k-1}|`` over digit
sequences obeying the Markov conditions

    (i)   0 <= b_k <= a_k, not all zero
    (ii)  b_k = a_k  implies  b_{k+1} = 0
    (iii) b_k <= a_k - 1 for infinitely many odd and infinitely many even k

(finite sequences are tested after padding with zeros).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .cfrac import AlphaContext, CFExpansion, CFLiteral
from .errors import InadmissibleDigits, SeedOutOfRange
from .exactreal import (
    DEFAULT_DECIMALS, AffineForm, Real, Value, floor_exact, floor_quotient, is_zero,
    render, to_json_value,
)

DEFAULT_MAX_DIGITS = 64


class Status(str, Enum):
    ADMISSIBLE = "admissible"
    INADMISSIBLE = "inadmissible"
    ADMISSIBLE_SO_FAR = "admissible_so_far"


@dataclass(frozen=True)
class Verdict:
    status: Status
    condition: Optional[str] = None
    index: Optional[int] = None

    def __bool__(self):
        return self.status is not Status.INADMISSIBLE

    def to_json(self) -> dict:
        return {"status": self.status.value, "condition": self.condition, "index": self.index}


ADMISSIBLE = Verdict(Status.ADMISSIBLE)
SO_FAR = Verdict(Status.ADMISSIBLE_SO_FAR)


@dataclass(frozen=True)
class AbsDigits:
    """Digits ``b_1..b_m`` plus the integer digit ``b0``.

    ``terminated=True`` means the expansion is finite with ``l = len(digits)``;
    ``False`` means an infinite expansion of which only a prefix is given;
    ``None`` means the length was not determined.  ``period`` (a repeating
    block after ``digits``) describes an eventually periodic infinite sequence.
    """

    digits: tuple[int, ...]
    b0: int = 0
    terminated: Optional[bool] = True
    period: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(b) for b in self.digits))
        if self.period is not None:
            object.__setattr__(self, "period", tuple(int(b) for b in self.period))
            object.__setattr__(self, "terminated", False)
            if not self.period:
                raise ValueError("period block must be non-empty")

    @property
    def limit(self) -> Optional[int | float]:
        if self.terminated:
            return len(self.digits)
        if self.period is not None:
            return math.inf
        return None

    def digit(self, k: int) -> Optional[int]:
        """``b_k`` for ``k >= 1``; zero past a finite end, ``None`` past a bare prefix."""
        if k <= len(self.digits):
            return self.digits[k - 1]
        if self.period is not None:
            return self.period[(k - len(self.digits) - 1) % len(self.period)]
        if self.terminated:
            return 0
        return None


@dataclass
class AbsTrace:
    """Residuals ``beta_0 .. beta_m`` aligned with the digits (``beta_k`` follows ``b_k``)."""
    residuals: list = field(default_factory=list)


@dataclass
class Evaluation:
    """Partial sum with a certified enclosure ``[lower, upper]`` of the true value."""
    value: Value
    lower: Value
    upper: Value
    bound: Value
    exact: bool
    depth: int

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        return {"value": to_json_value(self.value, digits), "exact": self.exact,
                "depth": self.depth, "error_bound": to_json_value(self.bound, digits),
                "lower": render(self.lower, digits), "upper": render(self.upper, digits)}


# ---------------------------------------------------------------------------
# helpers shared with the alternating module

def cf_period(cf) -> Optional[tuple[int, tuple[int, ...]]]:
    """``(preperiod length, block)`` of a base's partial quotients, if known."""
    if isinstance(cf, AlphaContext):
        cf = cf.literal if not cf.exact else cf.cf
    if isinstance(cf, CFLiteral):
        return len(cf.preperiod), cf.block
    if isinstance(cf, CFExpansion) and cf.period is not None:
        return len(cf.period[0]), cf.period[1]
    return None


def periodic_window(cf, digits) -> Optional[tuple[int, int]]:
    """``(start, length)`` of an even-length window after which both the base
    digits and a period-annotated digit sequence repeat, or ``None``."""
    per = cf_period(cf)
    if per is None or digits.period is None:
        return None
    pre_a, block_a = per
    start = max(pre_a, len(digits.digits))
    length = math.lcm(len(block_a), len(digits.period))
    if length % 2:
        length *= 2
    return start, length


def check_span(cf, digits) -> tuple[int, Optional[tuple[int, int]]]:
    """How far local conditions are checked, and the periodic window if any."""
    window = periodic_window(cf, digits)
    if window is not None:
        return window[0] + window[1] + 1, window
    if digits.period is not None:
        # periodic digits over a base without a known period: a long finite look
        return len(digits.digits) + 4 * len(digits.period), None
    return len(digits.digits), None


def floor_value(ctx: AlphaContext, x) -> int:
    if isinstance(x, AffineForm):
        return floor_quotient(x, 1, ctx.budget)
    return floor_exact(x)


# ---------------------------------------------------------------------------
# validation

def abs_validate(cf, digits: AbsDigits) -> Verdict:
    """Test the Markov conditions; ``cf`` is anything with a ``digit(k)`` method.

    Finite sequences are decided after zero padding; period-annotated
    sequences are decided exactly when the base's digits are periodic too;
    a bare prefix of an infinite sequence can at best be admissible so far.
    """
    seq = digits.digits
    if digits.terminated and seq and seq[-1] == 0:
        return Verdict(Status.INADMISSIBLE, "terminal", len(seq))
    span, window = check_span(cf, digits)
    nonzero = False
    for k in range(1, span + 1):
        b = digits.digit(k)
        a = cf.digit(k)
        if not 0 <= b <= a:
            return Verdict(Status.INADMISSIBLE, "i", k)
        nonzero = nonzero or b > 0
        if b == a and k + 1 <= span:
            nxt = digits.digit(k + 1)
            if nxt is not None and nxt != 0:
                return Verdict(Status.INADMISSIBLE, "ii", k)
    if digits.terminated:
        # the zero tail supplies slack at every index, so (iii) holds; the empty
        # sequence is the vacuous expansion of an integer
        return ADMISSIBLE
    if window is None:
        return SO_FAR
    start, length = window
    if not nonzero:
        return Verdict(Status.INADMISSIBLE, "i", None)
    slack = {0: False, 1: False}
    for k in range(start + 1, start + length + 1):
        if digits.digit(k) <= cf.digit(k) - 1:
            slack[k % 2] = True
    if not (slack[0] and slack[1]):
        return Verdict(Status.INADMISSIBLE, "iii", start + 1)
    return ADMISSIBLE


# ---------------------------------------------------------------------------
# expansion

def _check_unit_interval(ctx: AlphaContext, beta: Value, op: str) -> None:
    if ctx.sign(beta) <= 0 or ctx.sign(beta - 1) >= 0:
        raise SeedOutOfRange(f"seed {render(beta, 20)} is not inside (0, 1)", operation=op)


def abs_expand(ctx: AlphaContext, beta, max_digits: int = DEFAULT_MAX_DIGITS
               ) -> tuple[AbsDigits, AbsTrace]:
    """Greedy quotient/remainder expansion of ``beta`` in (0, 1).

    ``b_k = floor(beta_{k-1} / |theta_{k-1}|)``, ``beta_k = beta_{k-1} - b_k |theta_{k-1}|``;
    stops at an exactly zero remainder (finite ``l``) or after ``max_digits``.
    """
    if max_digits < 1:
        raise ValueError("max_digits must be positive")
    beta = ctx.coerce(beta)
    _check_unit_interval(ctx, beta, "abs_expand")
    res = beta
    residuals = [res]
    out: list[int] = []
    for k in range(1, max_digits + 1):
        b = ctx.floor_over_abs_theta(res, k - 1)
        res = res - ctx.abs_theta(k - 1) * b
        out.append(b)
        residuals.append(res)
        if is_zero(res):
            break
    return AbsDigits(tuple(out), 0, is_zero(res)), AbsTrace(residuals)


def abs_expand_line(ctx: AlphaContext, r, max_digits: int = DEFAULT_MAX_DIGITS
                    ) -> tuple[AbsDigits, AbsTrace]:
    """Base-alpha expansion of any real: ``b0 = floor(r)`` then the fractional part."""
    r = ctx.coerce(r)
    b0 = floor_value(ctx, r)
    frac = r - b0
    if is_zero(frac):
        return AbsDigits((), b0, True), AbsTrace([frac])
    digits, trace = abs_expand(ctx, frac, max_digits)
    return AbsDigits(digits.digits, b0, digits.terminated), trace


# ---------------------------------------------------------------------------
# evaluation

def _depth_for(digits, depth: Optional[int]) -> tuple[int, bool]:
    """Number of terms to sum, and whether that sum is the whole expansion."""
    if digits.terminated:
        ell = len(digits.digits)
        n = ell if depth is None else min(depth, ell)
        return n, n == ell
    if digits.period is not None:
        return (DEFAULT_MAX_DIGITS if depth is None else depth), False
    n = len(digits.digits) if depth is None else min(depth, len(digits.digits))
    return n, False


def abs_evaluate(ctx: AlphaContext, digits: AbsDigits, depth: Optional[int] = None, *,
                 check: bool = True) -> Evaluation:
    """``b0 + sum_{k<=N} b_k |theta_{k-1}|`` with the true value in ``[S, S + |theta_{N-1}| + |theta_N|]``."""
    if check:
        verdict = abs_validate(ctx, digits)
        if not verdict:
            raise InadmissibleDigits(
                f"digits violate condition ({verdict.condition})", operation="abs_evaluate",
                index=verdict.index, condition=verdict.condition)
    n, exact = _depth_for(digits, depth)
    total = ctx.coerce(digits.b0)
    for k in range(1, n + 1):
        b = digits.digit(k)
        if b:
            total = total + ctx.abs_theta(k - 1) * b
    if exact:
        zero = ctx.coerce(0)
        return Evaluation(total, total, total, zero, True, n)
    bound = ctx.abs_theta(n - 1) + ctx.abs_theta(n)
    return Evaluation(total, total, total + bound, bound, False, n)


# ---------------------------------------------------------------------------
# post hoc audit

def audit_abs_trace(ctx: AlphaContext, digits: AbsDigits, trace: AbsTrace) -> list[tuple[str, int]]:
    """Re-check every emitted step; returns ``(property, index)`` failures."""
    sgn = ctx.sign
    bad = []
    res = trace.residuals
    for k, b in enumerate(digits.digits, start=1):
        th = ctx.abs_theta(k - 1)
        if res[k] != res[k - 1] - th * b:
            bad.append(("residual_update", k))
        # quotient/remainder by sign tests rather than a floor
        if sgn(res[k - 1] - th * b) < 0 or sgn(th * (b + 1) - res[k - 1]) <= 0:
            bad.append(("quotient", k))
        if sgn(res[k]) < 0 or sgn(th - res[k]) <= 0:
            bad.append(("remainder_range", k))
        if b == ctx.digit(k) and k < len(digits.digits) and digits.digits[k] != 0:
            bad.append(("markov_ii", k))
    return bad


def abs_to_json(ctx: AlphaContext, digits: AbsDigits, trace: Optional[AbsTrace] = None,
                precision: int = DEFAULT_DECIMALS) -> dict:
    n = len(digits.digits)
    if digits.terminated:
        bound = ctx.coerce(0)
    else:
        bound = ctx.abs_theta(n - 1) + ctx.abs_theta(n)
    terminated = digits.terminated
    out = {
        "variant": "absolute",
        "alpha": ctx.describe(),
        "b0": digits.b0,
        "digits": list(digits.digits),
        "terminated": terminated,
        "residual_bound": to_json_value(bound, precision),
    }
    if trace is not None:
        out["residual"] = to_json_value(trace.residuals[-1], precision)
    return out
