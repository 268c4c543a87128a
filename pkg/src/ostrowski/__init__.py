"""Exact continued fractions and Ostrowski expansions over quadratic and digit-list bases."""

from .cfrac import (
    AlphaContext, CFExpansion, CFLiteral, audit_thetas, cf_expand, check_identities,
    convergents, euclid_quotients, telescoped_tail, theta_seq,
)
from .errors import (
    CapExceeded, DigitsExhausted, DivisionByZero, IdentityViolation, InadmissibleDigits,
    InvalidBase, LiteralError, MixedFields, OstrowskiError, PrecisionExhausted, RationalBase,
    SeedOutOfRange, UsageError,
)
from .exactreal import AffineForm, IntervalReal, Real, interval_floor
from .literals import format_literal, parse_literal
from .oracle import (
    certify_uniqueness_abs, certify_uniqueness_alt, count_abs, enumerate_abs, enumerate_alt,
)
from .ostrowski_abs import (
    AbsDigits, Status, Verdict, abs_evaluate, abs_expand, abs_expand_line, abs_validate,
    audit_abs_trace,
)
from .ostrowski_alt import (
    DEFINITION, THEOREM_PROOF, AltDigits, alt_evaluate, alt_expand, alt_expand_line,
    alt_validate, audit_alt_trace, parity, parity_interval, split_by_parity,
)

__version__ = "0.1.0"
