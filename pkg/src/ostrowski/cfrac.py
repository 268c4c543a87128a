"""Continued fractions, convergents and the theta coefficients of a base.

For a base ``alpha`` in (0, 1) irrational with partial quotients ``a_k`` and
convergents ``p_k/q_k`` (seeded ``p_-1 = q_0 = 1``, ``q_-1 = p_0 = 0``), the
coefficients ``theta_k = q_k*alpha - p_k`` drive both Ostrowski expansions.
:class:`AlphaContext` bundles the three sequences and extends them lazily.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DigitsExhausted, IdentityViolation, InvalidBase, MixedFields, RationalBase
from .exactreal import (
    DEFAULT_BUDGET, DEFAULT_DECIMALS, AffineForm, Real, Value, ceil_quotient,
    floor_exact, floor_quotient, sign_of, to_json_value,
)

PERIOD_SEARCH_DEPTH = 10_000
DEFAULT_MAX_DIGITS = 64


@dataclass(frozen=True)
class CFExpansion:
    """Integer part, partial quotients and limit of a continued fraction.

    ``digits`` holds the computed prefix ``a_1..a_m``.  ``limit`` is the true
    length ``l`` for rationals and ``math.inf`` otherwise.  When the expansion
    is eventually periodic, ``period = (preperiod, block)`` and :meth:`digit`
    answers for every index.
    """

    a0: int
    digits: tuple[int, ...]
    limit: Union[int, float]
    period: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None
    residuals: tuple = field(default=(), repr=False, compare=False)

    @property
    def finite(self) -> bool:
        return self.limit != math.inf

    def digit(self, k: int) -> int:
        if k < 1:
            raise IndexError(f"partial quotients start at index 1, got {k}")
        if k <= len(self.digits):
            return self.digits[k - 1]
        if self.period is not None:
            pre, block = self.period
            if k <= len(pre):
                return pre[k - 1]
            return block[(k - len(pre) - 1) % len(block)]
        if self.finite:
            raise DigitsExhausted(f"expansion has only {self.limit} digits", index=k,
                                  operation="digit")
        raise DigitsExhausted(f"only {len(self.digits)} digits were computed", index=k,
                              operation="digit")

    def to_json(self) -> dict:
        out = {
            "a0": self.a0,
            "digits": list(self.digits),
            "limit": "inf" if not self.finite else self.limit,
            "period": None,
        }
        if self.period is not None:
            pre, block = self.period
            out["period"] = {"preperiod_length": len(pre), "preperiod": list(pre),
                             "block": list(block)}
        return out


def cf_expand(r, max_digits: int = DEFAULT_MAX_DIGITS,
              period_search: int = PERIOD_SEARCH_DEPTH) -> CFExpansion:
    """Expand an exact number as a regular continued fraction.

    Rationals run to termination (the digits shown are capped at
    ``max_digits``).  Quadratic irrationals run until a complete quotient
    repeats, which fixes the period, or until ``period_search`` steps; in the
    latter case only the plain digit prefix is returned.
    """
    if max_digits < 1:
        raise ValueError("max_digits must be positive")
    if not isinstance(r, Real):
        r = Real.rational(Fraction(r))
    a0 = floor_exact(r)
    res = r - a0
    digits: list[int] = []
    residuals = [res]
    rational = r.is_rational()
    if rational:
        while not res.is_zero():
            inv = Real(res.r, 0, 0, res.p)
            a = floor_exact(inv)
            res = inv - a
            digits.append(a)
            if len(residuals) <= max_digits:
                residuals.append(res)
        return CFExpansion(a0, tuple(digits[:max_digits]), len(digits), None, tuple(residuals))

    seen = {res.canonical(): 0}
    period = None
    steps = max(max_digits, period_search)
    for k in range(1, steps + 1):
        inv = res.inverse()
        a = floor_exact(inv)
        res = inv - a
        digits.append(a)
        residuals.append(res)
        key = res.canonical()
        if key in seen:
            i = seen[key]
            period = (tuple(digits[:i]), tuple(digits[i:k]))
            break
        seen[key] = k
    expansion = CFExpansion(a0, tuple(digits), math.inf, period, tuple(residuals))
    if period is not None:
        shown = tuple(expansion.digit(k) for k in range(1, max_digits + 1))
        return CFExpansion(a0, shown, math.inf, period, tuple(residuals))
    return CFExpansion(a0, tuple(digits[:max_digits]), math.inf, None,
                       tuple(residuals[:max_digits + 1]))


def euclid_quotients(num: int, den: int) -> list[int]:
    """Quotients of the Euclidean algorithm on ``num/den`` (floor division)."""
    out = []
    while den:
        a, rem = divmod(num, den)
        out.append(a)
        num, den = den, rem
    return out


class CFLiteral:
    """A base given by its partial quotients ``[0; preperiod, block, block, ...]``.

    This is the interval-mode source: the value itself is only known through
    the enclosures between consecutive convergents.
    """

    def __init__(self, preperiod: Sequence[int], block: Sequence[int]):
        self.preperiod = tuple(int(a) for a in preperiod)
        self.block = tuple(int(a) for a in block)
        if not self.block:
            raise InvalidBase("a digit-list base needs a non-empty repeating block",
                              operation="cf_literal")
        if any(a < 1 for a in self.preperiod + self.block):
            raise InvalidBase("partial quotients must be >= 1", operation="cf_literal")
        self._p = [1, 0]
        self._q = [0, 1]
        self._lock = threading.Lock()

    def digit(self, k: int) -> int:
        if k < 1:
            raise IndexError(f"partial quotients start at index 1, got {k}")
        if k <= len(self.preperiod):
            return self.preperiod[k - 1]
        return self.block[(k - len(self.preperiod) - 1) % len(self.block)]

    def convergent(self, k: int) -> tuple[int, int]:
        with self._lock:
            while len(self._p) < k + 2:
                n = len(self._p) - 1
                a = self.digit(n)
                self._p.append(a * self._p[-1] + self._p[-2])
                self._q.append(a * self._q[-1] + self._q[-2])
        return self._p[k + 1], self._q[k + 1]

    def enclosure(self, level: int) -> tuple[Fraction, Fraction]:
        """The base lies strictly between convergents ``n`` and ``n+1``, ``n = 2**(level+5)``."""
        n = 2 ** (level + 5)
        p0, q0 = self.convergent(n)
        p1, q1 = self.convergent(n + 1)
        a, b = Fraction(p0, q0), Fraction(p1, q1)
        return (a, b) if a < b else (b, a)

    def expansion(self, max_digits: int = DEFAULT_MAX_DIGITS) -> CFExpansion:
        digits = tuple(self.digit(k) for k in range(1, max_digits + 1))
        return CFExpansion(0, digits, math.inf, (self.preperiod, self.block))

    def to_real(self) -> Real:
        """The exact quadratic irrational with these partial quotients."""
        # x = [b1; b2, ..., bm, x] gives Q_m x^2 + (Q_{m-1} - P_m) x - P_{m-1} = 0
        P = [1, self.block[0]]
        Q = [0, 1]
        for b in self.block[1:]:
            P.append(b * P[-1] + P[-2])
            Q.append(b * Q[-1] + Q[-2])
        A, B, C = Q[-1], Q[-2] - P[-1], -P[-2]
        x = Real(-B, 1, B * B - 4 * A * C, 2 * A)
        for a in reversed(self.preperiod):
            x = a + 1 / x
        return 1 / x

    def describe(self) -> str:
        pre = ",".join(map(str, self.preperiod))
        block = ",".join(map(str, self.block))
        return f"cf:[{pre};{block}]" if self.preperiod else f"cf:[{block}]"

    def __repr__(self):
        return f"CFLiteral({self.preperiod}, {self.block})"


def describe(alpha) -> str:
    if isinstance(alpha, CFLiteral):
        return alpha.describe()
    if isinstance(alpha, Real):
        if alpha.is_rational():
            f = alpha.as_fraction()
            return f"rat:{f.numerator}/{f.denominator}"
        return f"quad:({alpha.p}{'+' if alpha.q >= 0 else '-'}{abs(alpha.q)}*sqrt({alpha.d}))/{alpha.r}"
    return str(alpha)


class AlphaContext:
    """The base together with its digits, convergents and thetas.

    Exact mode takes a quadratic :class:`Real`; interval mode takes a
    :class:`CFLiteral` and represents every theta as an :class:`AffineForm`.
    Sequences grow append-only under a lock, so expansions on several threads
    may share one context.
    """

    def __init__(self, alpha: Union[Real, CFLiteral], *, budget: int = DEFAULT_BUDGET,
                 period_search: int = PERIOD_SEARCH_DEPTH):
        self.budget = budget
        self._lock = threading.RLock()
        if isinstance(alpha, CFLiteral):
            self.exact = False
            self.literal = alpha
            self.alpha: Value = AffineForm(0, 1, alpha)
            self.cf = alpha.expansion(DEFAULT_MAX_DIGITS)
        else:
            if isinstance(alpha, (int, Fraction)):
                alpha = Real.rational(alpha)
            if alpha.is_rational():
                raise RationalBase(f"base must be irrational, got {alpha.as_fraction()}",
                                   operation="AlphaContext")
            if not (alpha > 0 and alpha < 1):
                raise InvalidBase(f"base must lie in (0, 1), got {alpha.to_decimal(10)}",
                                  operation="AlphaContext")
            self.exact = True
            self.literal = None
            self.alpha = alpha
            self.cf = cf_expand(alpha, DEFAULT_MAX_DIGITS, period_search)
        self._digits: list[int] = []
        self._residuals: list = list(self.cf.residuals)
        self._p = [1, 0]
        self._q = [0, 1]
        self._theta: list[Value] = [self._const(-1), self.alpha]
        self._inv_abs: dict[int, Real] = {}

    # -- construction helpers ---------------------------------------------

    def _const(self, x) -> Value:
        if self.exact:
            return Real.rational(x)
        return AffineForm(x, 0, self.literal)

    def coerce(self, x) -> Value:
        """Bring a seed into this context's number system."""
        if isinstance(x, (int, Fraction)):
            return self._const(x)
        if isinstance(x, AffineForm):
            if self.exact or x.source is not self.literal:
                raise MixedFields("seed was built over a different base", operation="coerce")
            return x
        if not isinstance(x, Real):
            raise TypeError(f"cannot use {x!r} as an exact seed")
        if self.exact:
            if not x.is_rational():
                self.alpha + x  # raises MixedFields on a foreign radicand
            return x
        if not x.is_rational():
            raise MixedFields(f"quadratic seed {x} cannot be combined with the digit-list base "
                              f"{self.describe()}", operation="coerce")
        return self._const(x.as_fraction())

    def describe(self) -> str:
        return describe(self.literal if not self.exact else self.alpha)

    # -- lazily extended sequences ---------------------------------------

    def digit(self, k: int) -> int:
        """Partial quotient ``a_k`` for ``k >= 1``."""
        if k < 1:
            raise IndexError(f"partial quotients start at index 1, got {k}")
        if not self.exact:
            return self.literal.digit(k)
        if self.cf.period is not None or k <= len(self.cf.digits):
            return self.cf.digit(k)
        with self._lock:
            # no period found: keep expanding from the last complete quotient
            while len(self._residuals) <= k:
                inv = self._residuals[-1].inverse()
                self._digits.append(floor_exact(inv))
                self._residuals.append(inv - self._digits[-1])
            return self._digits[k - len(self.cf.digits) - 1]

    def residual(self, k: int) -> Real:
        """Complete-quotient remainder ``alpha_k`` (exact mode only)."""
        if not self.exact:
            raise TypeError("residuals alpha_k are only tracked in exact mode")
        if k < len(self._residuals):
            return self._residuals[k]
        if self.cf.period is not None:
            pre, block = self.cf.period
            j = len(pre) + (k - len(pre)) % len(block)
            return self._residuals[j]
        self.digit(k)
        return self._residuals[k]

    def _extend(self, n: int) -> None:
        with self._lock:
            while len(self._p) < n + 2:
                k = len(self._p) - 1
                a = self.digit(k)
                self._p.append(a * self._p[-1] + self._p[-2])
                self._q.append(a * self._q[-1] + self._q[-2])
                theta = self._theta[-2] + self._theta[-1] * a
                check = self.alpha * self._q[-1] - self._p[-1]
                if theta != check:
                    raise IdentityViolation(
                        f"theta recursion disagrees with q_k*alpha - p_k at k={k}",
                        operation="theta_seq", index=k, identity="theta_definition")
                self._theta.append(theta)

    def convergent(self, k: int) -> tuple[int, int]:
        if k < -1:
            raise IndexError(f"convergents start at index -1, got {k}")
        self._extend(k)
        return self._p[k + 1], self._q[k + 1]

    def theta(self, k: int) -> Value:
        if k < -1:
            raise IndexError(f"thetas start at index -1, got {k}")
        self._extend(k)
        return self._theta[k + 1]

    def abs_theta(self, k: int) -> Value:
        """``|theta_k| = (-1)**k * theta_k``."""
        t = self.theta(k)
        return -t if k % 2 else t

    # -- certified decisions ---------------------------------------------

    def sign(self, x) -> int:
        return sign_of(x, self.budget)

    def floor_over_abs_theta(self, x: Value, k: int) -> int:
        """``floor(x / |theta_k|)``."""
        if self.exact:
            inv = self._inv_abs.get(k)
            if inv is None:
                inv = self._inv_abs[k] = self.abs_theta(k).inverse()
            return floor_exact(x * inv)
        return floor_quotient(x, self.abs_theta(k), self.budget)

    def ceil_over_theta(self, x: Value, k: int) -> int:
        """``ceil(x / theta_k)`` with the signed theta."""
        if self.exact:
            inv = self._inv_abs.get(k)
            if inv is None:
                inv = self._inv_abs[k] = self.abs_theta(k).inverse()
            return -floor_exact(-x * inv) if k % 2 == 0 else -floor_exact(x * inv)
        return ceil_quotient(x, self.theta(k), self.budget)

    def __repr__(self):
        mode = "exact" if self.exact else "interval"
        return f"AlphaContext({self.describe()}, {mode})"


def convergents(ctx: AlphaContext, n: int) -> dict[int, tuple[int, int]]:
    """Convergents ``(p_k, q_k)`` for ``k = -1..n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return {k: ctx.convergent(k) for k in range(-1, n + 1)}


def theta_seq(ctx: AlphaContext, n: int) -> dict[int, Value]:
    """Thetas for ``k = -1..n``; each was checked against ``q_k*alpha - p_k`` on the way."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return {k: ctx.theta(k) for k in range(-1, n + 1)}


def _violation(name: str, k: int, detail: str = ""):
    raise IdentityViolation(f"{name} fails at k={k}{': ' + detail if detail else ''}",
                            operation="audit_thetas", index=k, identity=name)


def audit_thetas(ctx: AlphaContext, n: int) -> list[str]:
    """Check every structural theta/convergent property through index ``n``.

    Returns the names of the properties checked; raises
    :class:`IdentityViolation` with the first failing index otherwise.
    """
    sgn = ctx.sign
    names = ["definition", "recursion", "abs_recursion", "alternation", "decay",
             "convergent_bound", "sandwich", "determinant"]
    for k in range(-1, n + 1):
        p, q = ctx.convergent(k)
        t, at = ctx.theta(k), ctx.abs_theta(k)
        if t != ctx.alpha * q - p:
            _violation("definition", k)
        if sgn(t) != (-1) ** (k % 2):
            _violation("alternation", k)
        if k >= 0:
            pp, qq = ctx.convergent(k - 1)
            if p * qq - pp * q != (-1) ** ((k + 1) % 2):
                _violation("determinant", k)
            if sgn(ctx.abs_theta(k - 1) - at) <= 0:
                _violation("decay", k)
            if sgn(Fraction(1, q) - at) <= 0:
                _violation("convergent_bound", k)
            a_next = ctx.digit(k + 1)
            prev = ctx.abs_theta(k - 1)
            if not (sgn(prev - at * a_next) > 0 and sgn(at * (a_next + 1) - prev) > 0):
                _violation("sandwich", k)
        if k >= 1:
            a = ctx.digit(k)
            if t != ctx.theta(k - 2) + ctx.theta(k - 1) * a:
                _violation("recursion", k)
            if at != ctx.abs_theta(k - 2) - ctx.abs_theta(k - 1) * a:
                _violation("abs_recursion", k)
    if ctx.exact:
        names.append("product_form")
        prod = Real(1)
        for k in range(0, n + 1):
            prod = prod * ctx.residual(k)
            if ctx.theta(k) != (prod if k % 2 == 0 else -prod):
                _violation("product_form", k)
    return names


# ---------------------------------------------------------------------------
# identity checker

@dataclass
class IdentityResult:
    name: str
    partial: Value
    closed_form: Value
    tail_bound: Value
    discrepancy: Value
    passed: bool
    witness_index: Optional[int] = None

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "partial": to_json_value(self.partial, digits),
            "closed_form": to_json_value(self.closed_form, digits),
            "tail_bound": to_json_value(self.tail_bound, digits),
            "discrepancy": to_json_value(self.discrepancy, digits),
        }


@dataclass
class IdentityReport:
    alpha: str
    depth: int
    mode: str
    results: list[IdentityResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        return {"alpha": self.alpha, "depth": self.depth, "mode": self.mode,
                "passed": self.passed, "identities": [r.to_json(digits) for r in self.results]}


def _within(ctx: AlphaContext, discrepancy: Value, bound: Value) -> bool:
    return ctx.sign(bound - discrepancy) >= 0 and ctx.sign(bound + discrepancy) >= 0


def check_identities(ctx: AlphaContext, depth: int, *, raise_on_failure: bool = True) -> IdentityReport:
    """Partial sums through ``k = depth - 1`` of the four series identities,
    certified against the telescoped tail ``|theta_{depth-2}| + |theta_{depth-1}|``,
    plus the finite telescoping identity checked exactly for every start index.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    N = depth - 1
    alpha = ctx.alpha
    one = ctx._const(1)
    zero = ctx._const(0)
    tail = ctx.abs_theta(N - 1) + ctx.abs_theta(N)

    abs_sum, signed_sum, even_sum, odd_sum = zero, zero, zero, zero
    for k in range(1, N + 1):
        a = ctx.digit(k)
        abs_sum = abs_sum + ctx.abs_theta(k - 1) * a
        signed_sum = signed_sum + ctx.theta(k - 1) * a
        if k % 2 == 0:
            even_sum = even_sum + ctx.abs_theta(k - 1) * a
        else:
            odd_sum = odd_sum + ctx.abs_theta(k - 1) * a

    results = []
    for name, partial, closed in (
        ("absolute_sum", abs_sum, one + alpha),
        ("signed_sum", signed_sum, one - alpha),
        ("self_representation", even_sum, alpha),
        ("unity", odd_sum, one),
    ):
        diff = partial - closed
        results.append(IdentityResult(name, partial, closed, tail, diff, _within(ctx, diff, tail)))

    # finite telescoping, exact for every start m; m = 1 is the 1 + alpha evaluation
    ok, witness = True, None
    running = tail
    tele_at_one = None
    for m in range(N, 0, -1):
        running = running + ctx.abs_theta(m - 1) * ctx.digit(m)
        expected = ctx.abs_theta(m - 2) + ctx.abs_theta(m - 1)
        if running != expected:
            ok, witness = False, m
        if m == 1:
            tele_at_one = running
    if expected != one + alpha:
        ok, witness = False, 1
    results.append(IdentityResult("telescoped_tail", tele_at_one, one + alpha, zero,
                                  tele_at_one - (one + alpha), ok, witness))

    report = IdentityReport(ctx.describe(), depth, "exact" if ctx.exact else "interval", results)
    if raise_on_failure:
        for r in results:
            if not r.passed:
                raise IdentityViolation(f"identity {r.name} violated at depth {depth}",
                                        operation="check_identities", index=r.witness_index,
                                        identity=r.name)
    return report


def telescoped_tail(ctx: AlphaContext, n: int, N: int) -> tuple[Value, Value]:
    """``(sum_{k=n}^{N} a_k |theta_{k-1}|, |theta_{n-2}| + |theta_{n-1}| - |theta_{N-1}| - |theta_N|)``."""
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    total = ctx._const(0)
    for k in range(n, N + 1):
        total = total + ctx.abs_theta(k - 1) * ctx.digit(k)
    closed = ctx.abs_theta(n - 2) + ctx.abs_theta(n - 1) - ctx.abs_theta(N - 1) - ctx.abs_theta(N)
    return total, closed
