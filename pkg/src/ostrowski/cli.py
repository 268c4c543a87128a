"""Command-line interface: one subcommand per library operation, JSON out.

Exit codes: 0 success, 2 rejected input (an ``{"error": ...}`` object is
printed), 3 a failed certification, identity or audit.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .cfrac import AlphaContext, CFLiteral, audit_thetas, cf_expand, check_identities
from .errors import IdentityViolation, OstrowskiError, UsageError
from .exactreal import DEFAULT_DECIMALS, render, to_json_value
from .literals import parse_literal
from .oracle import certify_uniqueness_abs, certify_uniqueness_alt
from .ostrowski_abs import (
    AbsDigits, abs_evaluate, abs_expand, abs_expand_line, abs_to_json, abs_validate,
    audit_abs_trace,
)
from .ostrowski_alt import (
    STRICTNESS_MODES, THEOREM_PROOF, AltDigits, alt_evaluate, alt_expand, alt_expand_line,
    alt_to_json, alt_validate, audit_alt_trace,
)

DEFAULT_DEPTH = 64
CERTIFY_DEPTH = {"abs": 8, "alt": 6}

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, operation="parse_args")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ostrowski", description="Exact Ostrowski expansions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text, *, seed=False, digits=False, strictness=False, variant=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--alpha", required=True, help="base literal (rat:, quad: or cf:)")
        p.add_argument("--depth", type=int, default=None,
                       help=f"digits / terms to compute (default {DEFAULT_DEPTH})")
        p.add_argument("--precision", type=int, default=DEFAULT_DECIMALS,
                       help="decimal digits in rendered values")
        p.add_argument("--format", choices=("json", "table"), default="json")
        if seed:
            p.add_argument("--seed", "--beta", "--gamma", dest="seed", required=True,
                           help="seed literal, or '-' to read one per line from stdin")
        if digits:
            p.add_argument("--digits", help="comma-separated digits b_1,b_2,...")
            p.add_argument("--period", help="repeating block after --digits")
            p.add_argument("--infinite", action="store_true",
                           help="--digits is a prefix of an infinite expansion")
            p.add_argument("--b0", "--c0", dest="int_digit", type=int, default=None,
                           help="integer digit")
            p.add_argument("--input", help="expansion JSON file from *-expand ('-' for stdin)")
        if strictness:
            p.add_argument("--strictness", choices=STRICTNESS_MODES, default=THEOREM_PROOF)
        if variant:
            p.add_argument("--variant", choices=("abs", "alt"), default="abs")
        return p

    command("cf", "continued fraction expansion of alpha")
    command("theta", "convergents and thetas, with a structural audit")
    command("identities", "series identities with certified tail bounds")
    command("abs-expand", "absolute expansion of a seed in (0, 1)", seed=True)
    command("abs-eval", "evaluate absolute digits", digits=True)
    command("abs-validate", "Markov admissibility verdict", digits=True)
    command("alt-expand", "alternating expansion of a seed in (-alpha, 1)", seed=True,
            strictness=True)
    command("alt-eval", "evaluate alternating digits", digits=True, strictness=True)
    command("alt-validate", "(-alpha)-admissibility verdict", digits=True, strictness=True)
    command("certify", "brute-force uniqueness certificate", strictness=True, variant=True)
    command("line-expand", "expansion of any real with an integer digit", seed=True,
            strictness=True, variant=True)
    return parser


# ---------------------------------------------------------------------------
# argument helpers

def _int_list(text: Optional[str], flag: str) -> list[int]:
    if text is None or not text.strip():
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"{flag} must be a comma-separated list of integers",
                         operation="parse_args") from None


def _digits_from_args(args, stdin) -> tuple[tuple, int, Optional[bool], Optional[tuple]]:
    if args.input is not None:
        if args.digits is not None or args.period is not None or args.infinite:
            raise UsageError("--input cannot be combined with --digits/--period/--infinite",
                             operation="parse_args")
        try:
            if args.input == "-":
                data = json.load(stdin)
            else:
                with open(args.input) as fh:
                    data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read expansion JSON: {exc}", operation="parse_args") from None
        if not isinstance(data, dict) or "digits" not in data:
            raise UsageError("expansion JSON needs a 'digits' list", operation="parse_args")
        int_digit = data.get("b0", data.get("c0", 0))
        if args.int_digit is not None:
            int_digit = args.int_digit
        period = data.get("period")
        return (tuple(int(b) for b in data["digits"]), int(int_digit),
                data.get("terminated", True), tuple(period) if period else None)
    if args.digits is None:
        raise UsageError("give --digits or --input", operation="parse_args")
    period = _int_list(args.period, "--period") if args.period is not None else None
    if args.period is not None and not period:
        raise UsageError("--period must be non-empty", operation="parse_args")
    terminated = False if (args.infinite or period) else True
    int_digit = 0 if args.int_digit is None else args.int_digit
    return tuple(_int_list(args.digits, "--digits")), int_digit, terminated, \
        tuple(period) if period else None


def _seeds(args, stdin) -> tuple[list, bool]:
    if args.seed == "-":
        lines = [ln.strip() for ln in stdin.read().splitlines()]
        return [parse_literal(ln) for ln in lines if ln], True
    return [parse_literal(args.seed)], False


def _context(args) -> AlphaContext:
    return AlphaContext(parse_literal(args.alpha))


def _depth(args, default: int = DEFAULT_DEPTH) -> int:
    depth = default if args.depth is None else args.depth
    if depth < 1:
        raise UsageError("--depth must be positive", operation="parse_args")
    return depth


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report)

def _cmd_cf(args, stdin):
    alpha = parse_literal(args.alpha)
    depth = _depth(args)
    if isinstance(alpha, CFLiteral):
        exp = alpha.expansion(depth)
        value = alpha.to_real()
    else:
        exp = cf_expand(alpha, depth)
        value = alpha
    out = {"alpha": args.alpha.strip(), "value": render(value, args.precision)}
    out.update(exp.to_json())
    return EXIT_OK, out


def _cmd_theta(args, stdin):
    ctx = _context(args)
    depth = _depth(args)
    rows = []
    for k in range(-1, depth + 1):
        p, q = ctx.convergent(k)
        rows.append({"k": k, "a": ctx.digit(k) if k >= 1 else None, "p": str(p), "q": str(q),
                     "theta": to_json_value(ctx.theta(k), args.precision)})
    out = {"alpha": ctx.describe(), "depth": depth,
           "mode": "exact" if ctx.exact else "interval", "rows": rows}
    try:
        out["audit"] = {"passed": True, "checked": audit_thetas(ctx, depth)}
    except IdentityViolation as exc:
        out["audit"] = {"passed": False, "violation": exc.to_dict()}
        return EXIT_FAILED, out
    return EXIT_OK, out


def _cmd_identities(args, stdin):
    ctx = _context(args)
    report = check_identities(ctx, _depth(args), raise_on_failure=False)
    return (EXIT_OK if report.passed else EXIT_FAILED), report.to_json(args.precision)


def _batch(args, stdin, one):
    seeds, batch = _seeds(args, stdin)
    code = EXIT_OK
    results = []
    for seed in seeds:
        c, out = one(seed)
        code = max(code, c)
        results.append(out)
    if batch:
        return code, {"results": results}
    return code, results[0]


def _cmd_abs_expand(args, stdin):
    ctx = _context(args)
    depth = _depth(args)

    def one(seed):
        digits, trace = abs_expand(ctx, seed, depth)
        out = abs_to_json(ctx, digits, trace, args.precision)
        out["seed"] = render(ctx.coerce(seed), args.precision)
        bad = audit_abs_trace(ctx, digits, trace)
        out["audit"] = [{"property": p, "index": k} for p, k in bad]
        return (EXIT_FAILED if bad else EXIT_OK), out

    return _batch(args, stdin, one)


def _cmd_alt_expand(args, stdin):
    ctx = _context(args)
    depth = _depth(args)

    def one(seed):
        digits, trace = alt_expand(ctx, seed, depth, args.strictness)
        out = alt_to_json(ctx, digits, trace, args.precision)
        out["seed"] = render(ctx.coerce(seed), args.precision)
        bad = audit_alt_trace(ctx, digits, trace)
        out["audit"] = [{"property": p, "index": k} for p, k in bad]
        return (EXIT_FAILED if bad else EXIT_OK), out

    return _batch(args, stdin, one)


def _cmd_line_expand(args, stdin):
    ctx = _context(args)
    depth = _depth(args)

    def one(seed):
        if args.variant == "abs":
            digits, trace = abs_expand_line(ctx, seed, depth)
            out = abs_to_json(ctx, digits, trace, args.precision)
        else:
            digits, trace = alt_expand_line(ctx, seed, depth, args.strictness)
            out = alt_to_json(ctx, digits, trace, args.precision)
        out["seed"] = render(ctx.coerce(seed), args.precision)
        return EXIT_OK, out

    return _batch(args, stdin, one)


def _abs_digits(args, stdin) -> AbsDigits:
    seq, b0, terminated, period = _digits_from_args(args, stdin)
    return AbsDigits(seq, b0, terminated, period)


def _alt_digits(args, stdin) -> AltDigits:
    seq, c0, terminated, period = _digits_from_args(args, stdin)
    return AltDigits(seq, c0, terminated, period, args.strictness)


def _cmd_abs_eval(args, stdin):
    digits = _abs_digits(args, stdin)
    ctx = _context(args)
    ev = abs_evaluate(ctx, digits, args.depth)
    out = {"variant": "absolute", "alpha": ctx.describe(), "b0": digits.b0}
    out.update(ev.to_json(args.precision))
    return EXIT_OK, out


def _cmd_alt_eval(args, stdin):
    digits = _alt_digits(args, stdin)
    ctx = _context(args)
    ev = alt_evaluate(ctx, digits, args.depth)
    out = {"variant": "alternating", "alpha": ctx.describe(), "c0": digits.c0,
           "strictness": args.strictness}
    out.update(ev.to_json(args.precision))
    return EXIT_OK, out


def _cmd_abs_validate(args, stdin):
    digits = _abs_digits(args, stdin)
    ctx = _context(args)
    out = {"variant": "absolute", "alpha": ctx.describe(), "digits": list(digits.digits)}
    out.update(abs_validate(ctx, digits).to_json())
    return EXIT_OK, out


def _cmd_alt_validate(args, stdin):
    digits = _alt_digits(args, stdin)
    ctx = _context(args)
    out = {"variant": "alternating", "alpha": ctx.describe(), "digits": list(digits.digits),
           "strictness": args.strictness}
    out.update(alt_validate(ctx, digits, args.strictness).to_json())
    return EXIT_OK, out


def _cmd_certify(args, stdin):
    depth = _depth(args, CERTIFY_DEPTH[args.variant])
    ctx = _context(args)
    if args.variant == "abs":
        report = certify_uniqueness_abs(ctx, depth)
    else:
        report = certify_uniqueness_alt(ctx, depth, args.strictness)
    return (EXIT_OK if report.ok else EXIT_FAILED), report.to_json(args.precision)


COMMANDS = {
    "cf": _cmd_cf,
    "theta": _cmd_theta,
    "identities": _cmd_identities,
    "abs-expand": _cmd_abs_expand,
    "abs-eval": _cmd_abs_eval,
    "abs-validate": _cmd_abs_validate,
    "alt-expand": _cmd_alt_expand,
    "alt-eval": _cmd_alt_eval,
    "alt-validate": _cmd_alt_validate,
    "certify": _cmd_certify,
    "line-expand": _cmd_line_expand,
}


# ---------------------------------------------------------------------------
# output

def _table_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for key, value in obj.items():
            yield from _table_lines(value, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, value in enumerate(obj):
            yield from _table_lines(value, f"{prefix}[{i}]")
    elif isinstance(obj, list):
        yield f"{prefix}\t{','.join(str(v) for v in obj)}"
    else:
        yield f"{prefix}\t{json.dumps(obj) if isinstance(obj, bool) or obj is None else obj}"


def format_report(report: dict, fmt: str = "json") -> str:
    if fmt == "table":
        return "\n".join(_table_lines(report))
    return json.dumps(report, indent=2)


def run(argv: Optional[list[str]] = None, stdin=None) -> tuple[int, dict, str]:
    """Parse and dispatch; returns ``(exit code, report, output format)``."""
    stdin = sys.stdin if stdin is None else stdin
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        return (*COMMANDS[args.command](args, stdin), fmt)
    except OstrowskiError as exc:
        code = EXIT_FAILED if isinstance(exc, IdentityViolation) else EXIT_REJECTED
        return code, {"error": exc.to_dict()}, fmt
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        return EXIT_REJECTED, {"error": {"type": type(exc).__name__, "message": str(exc),
                                         "module": "cli", "operation": None,
                                         "index": None}}, fmt


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None and len(sys.argv) < 2:
        build_parser().print_help()
        return EXIT_REJECTED
    code, report, fmt = run(argv)
    print(format_report(report, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
