import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ostrowski.cfrac import AlphaContext, CFLiteral
from ostrowski.errors import CapExceeded
from ostrowski.exactreal import Real
from ostrowski.oracle import (
    DEPTH_CAP, certify_uniqueness_abs, certify_uniqueness_alt, count_abs, enumerate_abs,
    enumerate_alt,
)
from ostrowski.ostrowski_abs import abs_evaluate
from ostrowski.ostrowski_alt import DEFINITION, alt_evaluate

PHI = Real(-1, 1, 5, 2)
SQRT2M1 = Real(-1, 1, 2)


def brute_abs(a: list[int], depth: int) -> list[tuple[int, ...]]:
    """Filter every digit string by conditions (i)-(ii) directly."""
    out = []
    for n in range(1, depth + 1):
        for s in itertools.product(*(range(a[k] + 1) for k in range(n))):
            if s[-1] == 0:
                continue
            if any(s[k] == a[k] and s[k + 1] != 0 for k in range(n - 1)):
                continue
            out.append(s)
    return sorted(out)


def brute_alt(a: list[int], depth: int) -> list[tuple[int, ...]]:
    out = [()]
    for n in range(1, depth + 1):
        for s in itertools.product(*(range(a[k] + 1) for k in range(n))):
            if s[-1] == 0:
                continue
            if any(s[k + 1] == 0 and s[k] != a[k] for k in range(n - 1)):
                continue
            out.append(s)
    return sorted(out)


def test_golden_depth_three():
    seqs = [s.digits for s in enumerate_abs(AlphaContext(PHI), 3)]
    assert sorted(seqs) == sorted([(1,), (0, 1), (0, 0, 1), (1, 0, 1)])


def test_golden_depth_one():
    assert [s.digits for s in enumerate_abs(AlphaContext(PHI), 1)] == [(1,)]


def test_two_one_literal_depth_two():
    seqs = [s.digits for s in enumerate_abs(CFLiteral([], [2, 1]), 2)]
    assert sorted(seqs) == sorted([(1,), (2,), (0, 1), (1, 1)])


@pytest.mark.parametrize("block", [[1], [2], [2, 1], [1, 3, 2]])
@pytest.mark.parametrize("depth", [1, 4, 6])
def test_enumeration_matches_brute_force(block, depth):
    lit = CFLiteral([], block)
    a = [lit.digit(k) for k in range(1, depth + 1)]
    assert [s.digits for s in enumerate_abs(lit, depth)] == brute_abs(a, depth)
    assert [s.digits for s in enumerate_alt(lit, depth)] == brute_alt(a, depth)


@settings(max_examples=30)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(1, DEPTH_CAP))
def test_transfer_count(block, depth):
    lit = CFLiteral([], block)
    if count_abs(lit, depth) > 20000:
        return
    assert len(enumerate_abs(lit, depth)) == count_abs(lit, depth)


def test_depth_cap():
    with pytest.raises(CapExceeded):
        enumerate_abs(AlphaContext(PHI), DEPTH_CAP + 1)


def test_sequence_budget(monkeypatch):
    monkeypatch.setenv("OSTROWSKI_MAX_BUDGET", "10")
    with pytest.raises(CapExceeded):
        enumerate_abs(AlphaContext(SQRT2M1), 6)


@pytest.mark.parametrize("alpha", [PHI, SQRT2M1])
def test_certify_abs(alpha):
    report = certify_uniqueness_abs(AlphaContext(alpha), 8)
    assert report.ok and report.count > 0
    js = report.to_json(10)
    assert js["duplicates"] == [] and js["roundtrip_failures"] == []


def test_certify_abs_depth_one():
    report = certify_uniqueness_abs(AlphaContext(PHI), 1)
    assert report.count == 1 and report.min_value == PHI == report.max_value


@pytest.mark.parametrize("alpha", [PHI, SQRT2M1])
def test_certify_alt(alpha):
    ctx = AlphaContext(alpha)
    report = certify_uniqueness_alt(ctx, 6)
    assert report.ok
    assert report.min_value > -ctx.alpha and report.max_value < 1


def test_certify_alt_definition_mode():
    report = certify_uniqueness_alt(AlphaContext(SQRT2M1), 5, DEFINITION)
    assert report.ok


def test_empty_alternating_sequence_is_zero():
    ctx = AlphaContext(PHI)
    seqs = enumerate_alt(ctx, 2)
    assert seqs[0].digits == ()
    assert alt_evaluate(ctx, seqs[0]).value == 0


def test_values_equal_evaluator():
    ctx = AlphaContext(SQRT2M1)
    for s in enumerate_abs(ctx, 4):
        total = sum((ctx.abs_theta(k - 1) * b for k, b in enumerate(s.digits, 1)), Real(0))
        assert abs_evaluate(ctx, s).value == total
