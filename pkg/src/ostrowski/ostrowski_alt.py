"""Alternating (base minus alpha) Ostrowski expansion.

Every gamma in (-alpha, 1) is ``sum c_k theta_{k-1}`` with the signed thetas.
The digit rule ``c_k = min(ceil(gamma_{k-1} / theta_{k-1}), a_k)`` keeps each
residual inside the parity interval ``(-theta_{k-rho(k)}, -theta_{k-1+rho(k)})``.

Two validation modes are offered.  ``theorem-proof`` checks the conditions
the algorithm provably satisfies:

    0 <= c_k <= a_k;  c_{k+1} = 0 implies c_k = a_k;
    an infinite sequence has c_k >= 1 for infinitely many odd and even k;
    a finite one ends in a nonzero digit.

``definition`` additionally demands the Markov conditions of the absolute
expansion, which the algorithm's own output can violate (alpha = golden
section, gamma = 1 - alpha yields all ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cfrac import AlphaContext
from .errors import InadmissibleDigits, SeedOutOfRange
from .exactreal import DEFAULT_DECIMALS, Value, is_zero, render, to_json_value
from .ostrowski_abs import (
    ADMISSIBLE, DEFAULT_MAX_DIGITS, SO_FAR, AbsDigits, Evaluation, Status, Verdict,
    _depth_for, abs_evaluate, abs_validate, check_span, floor_value,
)

THEOREM_PROOF = "theorem-proof"
DEFINITION = "definition"
STRICTNESS_MODES = (THEOREM_PROOF, DEFINITION)


def parity(k: int) -> int:
    """1 for odd ``k``, 0 for even: ``ceil(k/2) - floor(k/2)``."""
    if k < 0:
        raise ValueError("parity is defined for non-negative k")
    return -(-k // 2) - k // 2


@dataclass(frozen=True)
class AltDigits(AbsDigits):
    """Digits ``c_1..c_m`` with integer digit ``c0`` (stored as ``b0``: the
    full-line value is ``-c0 + sum c_k theta_{k-1}``)."""

    strictness: str = THEOREM_PROOF

    @property
    def c0(self) -> int:
        return self.b0

    @classmethod
    def make(cls, digits, c0: int = 0, terminated: Optional[bool] = True,
             period=None, strictness: str = THEOREM_PROOF) -> "AltDigits":
        return cls(tuple(digits), c0, terminated, period, strictness)


@dataclass
class AltTrace:
    residuals: list = field(default_factory=list)
    parities: list = field(default_factory=list)


def _check_strictness(strictness: str) -> None:
    if strictness not in STRICTNESS_MODES:
        raise ValueError(f"strictness must be one of {STRICTNESS_MODES}, got {strictness!r}")


def alt_validate(cf, digits: AltDigits, strictness: Optional[str] = None) -> Verdict:
    """Verdict for a (-alpha)-admissibility test in the chosen strictness mode."""
    strictness = strictness or digits.strictness
    _check_strictness(strictness)
    seq = digits.digits
    if digits.terminated and seq and seq[-1] == 0:
        return Verdict(Status.INADMISSIBLE, "terminal", len(seq))
    span, window = check_span(cf, digits)
    for k in range(1, span + 1):
        c = digits.digit(k)
        if not 0 <= c <= cf.digit(k):
            return Verdict(Status.INADMISSIBLE, "range", k)
    # c_{k+1} = 0 => c_k = a_k, only where both digits were emitted
    last = span if not digits.terminated else len(seq)
    for k in range(1, last):
        if digits.digit(k + 1) == 0 and digits.digit(k) != cf.digit(k):
            return Verdict(Status.INADMISSIBLE, "zero_successor", k)
    verdict = ADMISSIBLE
    if not digits.terminated:
        if window is None:
            verdict = SO_FAR
        else:
            start, length = window
            hit = {0: False, 1: False}
            for k in range(start + 1, start + length + 1):
                if digits.digit(k) >= 1:
                    hit[k % 2] = True
            if not (hit[0] and hit[1]):
                return Verdict(Status.INADMISSIBLE, "infinitely_often", start + 1)
    if strictness == DEFINITION and (seq or not digits.terminated):
        markov = abs_validate(cf, AbsDigits(seq, 0, digits.terminated, digits.period))
        if not markov:
            return Verdict(Status.INADMISSIBLE, f"alpha_{markov.condition}", markov.index)
        if markov.status is Status.ADMISSIBLE_SO_FAR:
            verdict = SO_FAR
    return verdict


def _check_range(ctx: AlphaContext, gamma: Value, op: str) -> None:
    if ctx.sign(gamma + ctx.alpha) <= 0 or ctx.sign(gamma - 1) >= 0:
        raise SeedOutOfRange(f"seed {render(gamma, 20)} is not inside (-alpha, 1)", operation=op)


def alt_expand(ctx: AlphaContext, gamma, max_digits: int = DEFAULT_MAX_DIGITS,
               strictness: str = THEOREM_PROOF) -> tuple[AltDigits, AltTrace]:
    """Digits of ``gamma`` in (-alpha, 1); ``gamma = 0`` gives the empty expansion."""
    if max_digits < 1:
        raise ValueError("max_digits must be positive")
    _check_strictness(strictness)
    gamma = ctx.coerce(gamma)
    _check_range(ctx, gamma, "alt_expand")
    res = gamma
    residuals, parities = [res], [0]
    out: list[int] = []
    for k in range(1, max_digits + 1):
        if is_zero(res):
            break
        c = min(ctx.ceil_over_theta(res, k - 1), ctx.digit(k))
        res = res - ctx.theta(k - 1) * c
        out.append(c)
        residuals.append(res)
        parities.append(parity(k))
    return (AltDigits(tuple(out), 0, is_zero(res), None, strictness),
            AltTrace(residuals, parities))


def alt_expand_line(ctx: AlphaContext, r, max_digits: int = DEFAULT_MAX_DIGITS,
                    strictness: str = THEOREM_PROOF) -> tuple[AltDigits, AltTrace]:
    """Base minus alpha expansion of any real: ``c0 = -floor(r)`` then the fractional part."""
    r = ctx.coerce(r)
    n = floor_value(ctx, r)
    frac = r - n
    if is_zero(frac):
        return AltDigits((), -n, True, None, strictness), AltTrace([frac], [0])
    digits, trace = alt_expand(ctx, frac, max_digits, strictness)
    return AltDigits(digits.digits, -n, digits.terminated, None, strictness), trace


def alt_evaluate(ctx: AlphaContext, digits: AltDigits, depth: Optional[int] = None, *,
                 check: bool = True) -> Evaluation:
    """``-c0 + sum_{k<=N} c_k theta_{k-1}``; the signed tail is at most ``|theta_{N-1}| + |theta_N|``."""
    if check:
        verdict = alt_validate(ctx, digits)
        if not verdict:
            raise InadmissibleDigits(
                f"digits violate condition ({verdict.condition})", operation="alt_evaluate",
                index=verdict.index, condition=verdict.condition)
    n, exact = _depth_for(digits, depth)
    total = ctx.coerce(-digits.c0)
    for k in range(1, n + 1):
        c = digits.digit(k)
        if c:
            total = total + ctx.theta(k - 1) * c
    if exact:
        zero = ctx.coerce(0)
        return Evaluation(total, total, total, zero, True, n)
    bound = ctx.abs_theta(n - 1) + ctx.abs_theta(n)
    return Evaluation(total, total - bound, total + bound, bound, False, n)


def parity_interval(ctx: AlphaContext, k: int) -> tuple[Value, Value]:
    """Open interval ``(-theta_{k-rho(k)}, -theta_{k-1+rho(k)})`` that holds ``gamma_k``."""
    rho = parity(k)
    return -ctx.theta(k - rho), -ctx.theta(k - 1 + rho)


def audit_alt_trace(ctx: AlphaContext, digits: AltDigits, trace: AltTrace) -> list[tuple[str, int]]:
    """Exact re-check of each emitted step; returns ``(property, index)`` failures."""
    sgn = ctx.sign
    bad = []
    res = trace.residuals
    m = len(digits.digits)
    for k in range(0, m + 1):
        if k >= 1:
            c = digits.digits[k - 1]
            if res[k] != res[k - 1] - ctx.theta(k - 1) * c:
                bad.append(("residual_update", k))
            if not 0 <= c <= ctx.digit(k):
                bad.append(("range", k))
            if k >= 2 and c == 0 and digits.digits[k - 2] != ctx.digit(k - 1):
                bad.append(("zero_successor", k - 1))
        if k == m and is_zero(res[k]):
            break  # gamma_l = 0 closes the expansion, no interval claim
        lo, hi = parity_interval(ctx, k)
        if not (sgn(res[k] - lo) > 0 and sgn(hi - res[k]) > 0):
            bad.append(("parity_interval", k))
    return bad


def split_by_parity(digits: AltDigits) -> tuple[AbsDigits, AbsDigits]:
    """Odd-indexed and even-indexed digits with the other positions zeroed.

    With ``gamma = sum c_k theta_{k-1}`` the odd part evaluates (absolutely)
    to the positive part of gamma and the even part to the negative part.
    """
    seq = digits.digits
    odd = tuple(c if k % 2 else 0 for k, c in enumerate(seq, start=1))
    even = tuple(0 if k % 2 else c for k, c in enumerate(seq, start=1))

    def trimmed(s):
        if digits.terminated:
            while s and s[-1] == 0:
                s = s[:-1]
        return AbsDigits(s, 0, digits.terminated)

    return trimmed(odd), trimmed(even)


def alt_to_json(ctx: AlphaContext, digits: AltDigits, trace: Optional[AltTrace] = None,
                precision: int = DEFAULT_DECIMALS) -> dict:
    n = len(digits.digits)
    if digits.terminated:
        bound = ctx.coerce(0)
    else:
        bound = ctx.abs_theta(n - 1) + ctx.abs_theta(n)
    out = {
        "variant": "alternating",
        "alpha": ctx.describe(),
        "c0": digits.c0,
        "digits": list(digits.digits),
        "terminated": digits.terminated,
        "residual_bound": to_json_value(bound, precision),
        "strictness": digits.strictness,
    }
    if trace is not None:
        out["residual"] = to_json_value(trace.residuals[-1], precision)
    return out
