"""Exact arithmetic over Q and real quadratic fields Q(sqrt d).

Three number types live here:

* :class:`Real` -- an exact element ``(p + q*sqrt(d)) / r``.  Closed under the
  four field operations, with exact sign, floor and ceiling decided by integer
  tests only.
* :class:`IntervalReal` -- a rational enclosure ``[lower, upper]`` together
  with a refiner that can shrink it on demand.
* :class:`AffineForm` -- an exact value ``u + v*x`` where ``x`` is an
  irrational known only through rational enclosures (a base given by its
  continued fraction digits).  Zero tests and exact-ratio tests on it are
  symbolic; everything else goes through :class:`IntervalReal`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Protocol, Union

from .errors import DivisionByZero, MixedFields, PrecisionExhausted

SQUAREFREE_BOUND = 10**6
DEFAULT_BUDGET = 12
DEFAULT_DECIMALS = 50


@lru_cache(maxsize=4096)
def squarefree_split(d: int, bound: int = SQUAREFREE_BOUND) -> tuple[int, int]:
    """Return ``(s, core)`` with ``d == s*s*core``.

    Square factors are removed by trial division up to ``bound``; whatever is
    left above the bound is kept as is, so ``core`` may not be square-free for
    radicands with large repeated prime factors.
    """
    if d < 0:
        raise ValueError(f"radicand must be non-negative, got {d}")
    s, core = 1, 1
    n = d
    i = 2
    while i * i <= n and i <= bound:
        if n % i == 0:
            e = 0
            while n % i == 0:
                n //= i
                e += 1
            s *= i ** (e // 2)
            if e % 2:
                core *= i
        i += 1 if i == 2 else 2
    core *= n
    # a leftover square above the bound is still detectable directly
    root = math.isqrt(core)
    if root * root == core:
        s *= root
        core = 1
    return s, core


def _sign(n) -> int:
    return (n > 0) - (n < 0)


Number = Union[int, Fraction, "Real"]


class Real:
    """Exact value ``(p + q*sqrt(d)) / r`` in canonical form.

    Canonical form: ``r >= 1``, ``gcd(p, q, r) == 1``, ``d`` stripped of square
    factors (up to :data:`SQUAREFREE_BOUND`), and ``q == 0`` exactly when
    ``d == 0``.  Instances are immutable and hashable.
    """

    __slots__ = ("_p", "_q", "_d", "_r")

    def __init__(self, p: int, q: int = 0, d: int = 0, r: int = 1):
        if r == 0:
            raise DivisionByZero("zero denominator", operation="canonical")
        if r < 0:
            p, q, r = -p, -q, -r
        if q == 0 or d == 0:
            q, d = 0, 0
        else:
            s, core = squarefree_split(d)
            q *= s
            d = core
            if d == 1:
                p, q, d = p + q, 0, 0
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self._p, self._q, self._d, self._r = p, q, d, r

    # -- construction -----------------------------------------------------

    @classmethod
    def rational(cls, x) -> "Real":
        x = Fraction(x)
        return cls(x.numerator, 0, 0, x.denominator)

    @classmethod
    def sqrt(cls, d: int) -> "Real":
        return cls(0, 1, d, 1)

    # -- fields -----------------------------------------------------------

    @property
    def p(self) -> int:
        return self._p

    @property
    def q(self) -> int:
        return self._q

    @property
    def d(self) -> int:
        return self._d

    @property
    def r(self) -> int:
        return self._r

    def canonical(self) -> tuple[int, int, int, int]:
        return (self._p, self._q, self._d, self._r)

    def is_rational(self) -> bool:
        return self._q == 0

    def as_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._p, self._r)

    def conjugate(self) -> "Real":
        return Real(self._p, -self._q, self._d, self._r)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> Optional["Real"]:
        if isinstance(other, Real):
            return other
        if isinstance(other, (int, Fraction)):
            return Real.rational(other)
        return None

    def _binary(self, other, fn):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        x, y, d = _align_pair(self, o)
        return fn(x, y, d)

    def __add__(self, other):
        return self._binary(other, lambda x, y, d: Real(
            x._p * y._r + y._p * x._r, x._q * y._r + y._q * x._r, d, x._r * y._r))

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y, d: Real(
            x._p * y._r - y._p * x._r, x._q * y._r - y._q * x._r, d, x._r * y._r))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        return self._binary(other, lambda x, y, d: Real(
            x._p * y._p + x._q * y._q * d, x._p * y._q + x._q * y._p, d, x._r * y._r))

    __rmul__ = __mul__

    def inverse(self) -> "Real":
        p, q, d, r = self.canonical()
        norm = p * p - q * q * d
        if norm == 0:
            raise DivisionByZero("division by zero", operation="field_arith")
        return Real(r * p, -r * q, d, norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "Real":
        return Real(-self._p, -self._q, self._d, self._r)

    def __pos__(self) -> "Real":
        return self

    def __abs__(self) -> "Real":
        return -self if self.sign() < 0 else self

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``p + q*sqrt(d)``: case split on signs, then one squaring."""
        p, q, d = self._p, self._q, self._d
        sp, sq = _sign(p), _sign(q)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # opposite signs; d is not a perfect square so this is never zero
        return sp if p * p > q * q * d else sq

    def is_zero(self) -> bool:
        return self._p == 0 and self._q == 0

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.canonical() == o.canonical():
            return True
        try:
            return (self - o).is_zero()
        except MixedFields:
            return False

    def __hash__(self):
        if self._q == 0:
            return hash(Fraction(self._p, self._r))
        return hash(self.canonical())

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __bool__(self):
        return not self.is_zero()

    # -- rounding ---------------------------------------------------------

    def floor(self) -> int:
        return floor_exact(self)

    def ceil(self) -> int:
        return ceil_exact(self)

    def __floor__(self):
        return floor_exact(self)

    def __ceil__(self):
        return ceil_exact(self)

    def __float__(self):
        return float(Fraction(self.to_decimal(30)))

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational bounds of width at most ``2**-bits`` (times a small constant)."""
        if self._q == 0:
            v = Fraction(self._p, self._r)
            return v, v
        scale = 1 << bits
        lo = floor_exact(self * scale)
        return Fraction(lo, scale), Fraction(lo + 1, scale)

    def to_decimal(self, digits: int = DEFAULT_DECIMALS) -> str:
        """Decimal string truncated toward zero after ``digits`` places."""
        neg = self.sign() < 0
        scaled = floor_exact(abs(self) * 10**digits)
        return _format_scaled(scaled, digits, neg)

    def __repr__(self):
        return f"Real({self._p}, {self._q}, {self._d}, {self._r})"

    def __str__(self):
        if self._q == 0:
            return str(Fraction(self._p, self._r))
        sgn = "+" if self._q > 0 else "-"
        body = f"{self._p}{sgn}{abs(self._q)}*sqrt({self._d})"
        return f"({body})/{self._r}" if self._r != 1 else f"({body})"

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        return {"p": str(self._p), "q": str(self._q), "d": str(self._d),
                "r": str(self._r), "decimal": self.to_decimal(digits)}


def _align_pair(x: Real, y: Real) -> tuple[Real, Real, int]:
    if x._q == 0:
        return x, y, y._d
    if y._q == 0 or x._d == y._d:
        return x, y, x._d
    prod = x._d * y._d
    root = math.isqrt(prod)
    if root * root == prod:
        # same field under un-normalized radicands: sqrt(dx) = root/dy * sqrt(dy)
        x = Real(x._p * y._d, x._q * root, y._d, x._r * y._d)
        return x, y, y._d
    raise MixedFields(f"operands lie in Q(sqrt {x._d}) and Q(sqrt {y._d})",
                      operation="field_arith")


def _format_scaled(scaled: int, digits: int, neg: bool) -> str:
    whole, frac = divmod(scaled, 10**digits)
    sign = "-" if neg else ""
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def decimal_string(x, digits: int = DEFAULT_DECIMALS) -> str:
    """Round-toward-zero decimal rendering of a rational or :class:`Real`."""
    if isinstance(x, Real):
        return x.to_decimal(digits)
    x = Fraction(x)
    scaled = (abs(x.numerator) * 10**digits) // x.denominator
    return _format_scaled(scaled, digits, x < 0)


def floor_exact(x: Real) -> int:
    """Largest integer ``n`` with ``n <= x``.

    With ``s = isqrt(q*q*d)`` we have ``s < |q|*sqrt(d) < s + 1`` (strict,
    since ``d`` is not a square), which pins the floor of the numerator; the
    floor of a real divided by a positive integer is the floor of its floor
    divided by that integer.
    """
    if isinstance(x, (int, Fraction)):
        return math.floor(x)
    p, q, d, r = x.canonical()
    if q == 0:
        return p // r
    s = math.isqrt(q * q * d)
    num_floor = p + s if q > 0 else p - s - 1
    return num_floor // r


def ceil_exact(x: Real) -> int:
    """Smallest integer ``n`` with ``x <= n``."""
    if isinstance(x, (int, Fraction)):
        return math.ceil(x)
    return -floor_exact(-x)


# ---------------------------------------------------------------------------
# certified intervals

Refiner = Callable[[int], Optional[tuple[Fraction, Fraction]]]


class IntervalReal:
    """A closed rational enclosure that can be narrowed on demand.

    ``refiner(level)`` returns an enclosure valid at that precision level (or
    ``None`` when it has nothing better).  :meth:`refine` moves one level up
    and intersects, so the enclosure never widens.  One owner at a time.
    """

    __slots__ = ("lower", "upper", "level", "_refiner")

    def __init__(self, lower, upper, refiner: Refiner | None = None, level: int = 0):
        lower, upper = Fraction(lower), Fraction(upper)
        if lower > upper:
            raise ValueError(f"empty enclosure [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.level = level
        self._refiner = refiner

    @classmethod
    def point(cls, x) -> "IntervalReal":
        return cls(x, x)

    @classmethod
    def from_refiner(cls, refiner: Refiner, budget: int = DEFAULT_BUDGET,
                     start: int = 0) -> "IntervalReal":
        """Open an enclosure at the first level in ``[start, start+budget]`` that yields one."""
        for level in range(start, start + budget + 1):
            enc = refiner(level)
            if enc is not None:
                return cls(enc[0], enc[1], refiner, level)
        raise PrecisionExhausted("refiner produced no enclosure within budget",
                                 operation="interval")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def at(self, level: int) -> tuple[Fraction, Fraction]:
        """Enclosure at ``level`` without mutating; falls back to the current bounds."""
        if self._refiner is not None and level > self.level:
            enc = self._refiner(level)
            if enc is not None:
                return max(enc[0], self.lower), min(enc[1], self.upper)
        return self.lower, self.upper

    def refine(self) -> bool:
        """Advance one level. Returns False when the width did not shrink (exhausted)."""
        if self._refiner is None:
            return False
        self.level += 1
        enc = self._refiner(self.level)
        if enc is None:
            return False
        lo, hi = max(self.lower, enc[0]), min(self.upper, enc[1])
        if lo > hi:
            raise ArithmeticError("refiner returned an enclosure disjoint from the current one")
        shrank = hi - lo < self.upper - self.lower
        self.lower, self.upper = lo, hi
        return shrank

    def contains(self, x) -> bool:
        if isinstance(x, Real):
            return x >= self.lower and x <= self.upper
        return self.lower <= Fraction(x) <= self.upper

    def excludes_zero(self) -> bool:
        return self.lower > 0 or self.upper < 0

    def _combine(self, other, fn) -> "IntervalReal":
        if not isinstance(other, IntervalReal):
            other = IntervalReal.point(Fraction(other))
        a, b = self, other

        def refiner(level):
            return fn(a.at(level), b.at(level))

        lo, hi = fn((a.lower, a.upper), (b.lower, b.upper))
        return IntervalReal(lo, hi, refiner if (a._refiner or b._refiner) else None)

    def __add__(self, other):
        return self._combine(other, lambda x, y: (x[0] + y[0], x[1] + y[1]))

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda x, y: (x[0] - y[1], x[1] - y[0]))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        src = self
        return IntervalReal(-self.upper, -self.lower,
                            (lambda level: tuple(-v for v in reversed(src.at(level))))
                            if self._refiner else None)

    def __mul__(self, other):
        def prod(x, y):
            c = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
            return min(c), max(c)
        return self._combine(other, prod)

    __rmul__ = __mul__

    def __repr__(self):
        return f"IntervalReal([{self.lower}, {self.upper}], level={self.level})"


def interval_floor(x: IntervalReal, budget: int = DEFAULT_BUDGET) -> Optional[int]:
    """Certified floor of an enclosure, or ``None`` (undecided) after ``budget`` refinements."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    used = 0
    while True:
        lo = math.floor(x.lower)
        if lo == math.floor(x.upper):
            return lo
        if used >= budget or not x.refine():
            return None
        used += 1


def _quotient(x: tuple[Fraction, Fraction], y: tuple[Fraction, Fraction]):
    if y[0] <= 0 <= y[1]:
        return None
    c = (x[0] / y[0], x[0] / y[1], x[1] / y[0], x[1] / y[1])
    return min(c), max(c)


# ---------------------------------------------------------------------------
# affine forms over an irrational known by enclosures

class EnclosureSource(Protocol):
    def enclosure(self, level: int) -> tuple[Fraction, Fraction]: ...


class AffineForm:
    """Exact value ``u + v*x`` for an irrational ``x`` supplied by ``source``.

    Since ``1`` and ``x`` are linearly independent over Q, the form is zero
    iff ``u == v == 0``, and a ratio of two forms is rational iff they are
    proportional; both tests are exact.  Order and floors are certified via
    :class:`IntervalReal` refinement.
    """

    __slots__ = ("u", "v", "source")

    def __init__(self, u, v, source: EnclosureSource):
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.source = source

    def _lift(self, other) -> Optional["AffineForm"]:
        if isinstance(other, AffineForm):
            if other.source is not self.source:
                raise MixedFields("affine forms over different bases", operation="field_arith")
            return other
        if isinstance(other, (int, Fraction)):
            return AffineForm(other, 0, self.source)
        if isinstance(other, Real):
            if not other.is_rational():
                raise MixedFields(f"quadratic value {other} mixed with a digit-list base",
                                  operation="field_arith")
            return AffineForm(other.as_fraction(), 0, self.source)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AffineForm(self.u + o.u, self.v + o.v, self.source)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AffineForm(self.u - o.u, self.v - o.v, self.source)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return AffineForm(-self.u, -self.v, self.source)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __mul__(self, other):
        if isinstance(other, Real) and other.is_rational():
            other = other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return AffineForm(self.u * other, self.v * other, self.source)
        if isinstance(other, AffineForm) and (other.v == 0 or self.v == 0):
            a, b = (self, other) if other.v == 0 else (other, self)
            return a * b.u
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real) and other.is_rational():
            other = other.as_fraction()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero", operation="field_arith")
            return AffineForm(self.u / other, self.v / other, self.source)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except MixedFields:
            return False
        if o is None:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, id(self.source)))

    def enclosure(self, level: int) -> tuple[Fraction, Fraction]:
        lo, hi = self.source.enclosure(level)
        a, b = self.u + self.v * lo, self.u + self.v * hi
        return (a, b) if a <= b else (b, a)

    def interval(self, level: int = 0) -> IntervalReal:
        lo, hi = self.enclosure(level)
        return IntervalReal(lo, hi, self.enclosure if self.v else None, level)

    def ratio_to(self, other: "AffineForm") -> Optional[Fraction]:
        """The rational ``t`` with ``self == t*other``, if there is one."""
        if other.v != 0:
            t = self.v / other.v
            return t if self.u == t * other.u else None
        if other.u == 0:
            raise DivisionByZero("division by zero", operation="field_arith")
        return self.u / other.u if self.v == 0 else None

    def sign(self, budget: int = DEFAULT_BUDGET) -> int:
        if self.v == 0:
            return _sign(self.u)
        if self.u == 0:
            return _sign(self.v)  # the base is positive
        for level in range(budget + 1):
            lo, hi = self.enclosure(level)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        raise PrecisionExhausted(f"sign of {self} undecided within budget {budget}",
                                 operation="sign")

    def _cmp(self, other) -> int:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def to_decimal(self, digits: int = DEFAULT_DECIMALS, budget: int = DEFAULT_BUDGET) -> str:
        """Truncated decimal, refined until both enclosure ends agree on every digit shown."""
        scale = 10**digits
        for level in range(budget + 1):
            lo, hi = self.enclosure(level)
            if lo.numerator * hi.numerator < 0:
                continue
            a = (abs(lo) * scale).__floor__()
            b = (abs(hi) * scale).__floor__()
            if a == b:
                return _format_scaled(a, digits, lo < 0 or hi < 0)
        lo, hi = self.enclosure(budget)
        return decimal_string((lo + hi) / 2, digits)

    def __repr__(self):
        return f"AffineForm({self.u}, {self.v})"

    def to_json(self, digits: int = DEFAULT_DECIMALS) -> dict:
        lo, hi = self.enclosure(4)
        return {"u": str(self.u), "v": str(self.v), "decimal": self.to_decimal(digits),
                "lower": decimal_string(lo, digits), "upper": decimal_string(hi, digits)}


# ---------------------------------------------------------------------------
# backend-agnostic helpers used by the expansion algorithms

Value = Union[Real, AffineForm]


def sign_of(x, budget: int = DEFAULT_BUDGET) -> int:
    if isinstance(x, AffineForm):
        return x.sign(budget)
    if isinstance(x, Real):
        return x.sign()
    return _sign(x)


def is_zero(x) -> bool:
    if isinstance(x, (Real, AffineForm)):
        return x.is_zero()
    return x == 0


def floor_quotient(x, y, budget: int = DEFAULT_BUDGET) -> int:
    """Exact ``floor(x / y)`` for Reals, certified for affine forms."""
    if not isinstance(x, AffineForm) and not isinstance(y, AffineForm):
        if isinstance(y, Real) and y.is_zero() or y == 0:
            raise DivisionByZero("division by zero", operation="floor_quotient")
        return floor_exact(Real._coerce(x) / Real._coerce(y))
    if not isinstance(x, AffineForm):
        x = y._lift(x)
    if not isinstance(y, AffineForm):
        y = x._lift(y)
    t = x.ratio_to(y)
    if t is not None:
        return math.floor(t)

    def refiner(level):
        return _quotient(x.enclosure(level), y.enclosure(level))

    ratio = IntervalReal.from_refiner(refiner, budget)
    n = interval_floor(ratio, budget)
    if n is None:
        raise PrecisionExhausted("digit could not be certified within the refinement budget",
                                 operation="floor_quotient")
    return n


def ceil_quotient(x, y, budget: int = DEFAULT_BUDGET) -> int:
    return -floor_quotient(-x, y, budget)


def to_json_value(x, digits: int = DEFAULT_DECIMALS) -> dict:
    if isinstance(x, (Real, AffineForm)):
        return x.to_json(digits)
    return Real.rational(x).to_json(digits)


def render(x, digits: int = DEFAULT_DECIMALS) -> str:
    if isinstance(x, (Real, AffineForm)):
        return x.to_decimal(digits)
    return decimal_string(x, digits)
