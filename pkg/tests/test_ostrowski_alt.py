from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from ostrowski.cfrac import AlphaContext, CFLiteral
from ostrowski.errors import InadmissibleDigits, SeedOutOfRange
from ostrowski.exactreal import Real
from ostrowski.ostrowski_abs import Status, abs_evaluate
from ostrowski.ostrowski_alt import (
    DEFINITION, THEOREM_PROOF, AltDigits, alt_evaluate, alt_expand, alt_expand_line,
    alt_to_json, alt_validate, audit_alt_trace, parity, parity_interval, split_by_parity,
)

PHI = Real(-1, 1, 5, 2)
SQRT2M1 = Real(-1, 1, 2)
GOLD = AlphaContext(PHI)
SILVER = AlphaContext(SQRT2M1)


@pytest.mark.parametrize("k,rho", [(0, 0), (7, 1), (12, 0), (1, 1)])
def test_parity(k, rho):
    assert parity(k) == rho


def test_parity_rejects_negative():
    with pytest.raises(ValueError):
        parity(-1)


# -- expansion examples --------------------------------------------------------

def test_self_expansion():
    digits, trace = alt_expand(GOLD, PHI)
    assert digits.digits == (1,) and digits.terminated
    assert trace.residuals[-1] == 0


def test_one_minus_phi_is_all_ones():
    digits, trace = alt_expand(GOLD, 1 - PHI, 40)
    assert digits.digits == (1,) * 40 and not digits.terminated
    power = PHI * PHI
    for k in range(0, 41):
        assert trace.residuals[k] == (power if k % 2 == 0 else -power)
        power = power * PHI
    # geometric series: sum of theta_{k-1} is phi / (1 + phi) = phi^2 = 1 - phi
    assert PHI / (1 + PHI) == PHI * PHI == 1 - PHI


def test_minus_half_first_steps():
    digits, trace = alt_expand(GOLD, Fraction(-1, 2), 6)
    assert digits.digits[:2] == (0, 1)
    assert trace.residuals[1] == Fraction(-1, 2)
    g2 = Fraction(-1, 2) + PHI * PHI
    assert trace.residuals[2] == g2
    lo, hi = parity_interval(GOLD, 2)
    assert lo == -GOLD.theta(2) and hi == -GOLD.theta(1)
    assert lo < g2 < hi


def test_zero_seed_is_empty():
    digits, _ = alt_expand(GOLD, 0)
    assert digits.digits == () and digits.terminated


@pytest.mark.parametrize("gamma", [-PHI, Real(1), Real(-1), Real(2)])
def test_seed_out_of_range(gamma):
    with pytest.raises(SeedOutOfRange):
        alt_expand(GOLD, gamma)


# -- evaluation -------------------------------------------------------------

def test_vacuous_expansion():
    ev = alt_evaluate(GOLD, AltDigits((), -2))
    assert ev.exact and ev.value == 2


def test_single_digit_is_alpha():
    assert alt_evaluate(GOLD, AltDigits((1,))).value == PHI


def test_all_ones_depth_40():
    ev = alt_evaluate(GOLD, AltDigits((), period=(1,)), 40)
    assert ev.bound == GOLD.abs_theta(39) + GOLD.abs_theta(40)
    assert ev.lower <= 1 - PHI <= ev.upper


def test_evaluate_rejects_inadmissible():
    with pytest.raises(InadmissibleDigits):
        alt_evaluate(GOLD, AltDigits((1, 1), strictness=DEFINITION))


# -- validation ------------------------------------------------------------

def test_validate_examples():
    ones = AltDigits((), period=(1,))
    assert alt_validate(GOLD, ones, THEOREM_PROOF).status is Status.ADMISSIBLE
    v = alt_validate(GOLD, ones, DEFINITION)
    assert v.status is Status.INADMISSIBLE and v.condition == "alpha_ii"
    v = alt_validate(GOLD, AltDigits((0, 1)))
    assert v.status is Status.ADMISSIBLE
    assert alt_evaluate(GOLD, AltDigits((0, 1))).value == GOLD.theta(1) == -PHI * PHI


def test_validate_other_verdicts():
    assert alt_validate(GOLD, AltDigits(())).status is Status.ADMISSIBLE
    assert alt_validate(GOLD, AltDigits((1, 0))).condition == "terminal"
    assert alt_validate(GOLD, AltDigits((2,))).condition == "range"
    # c_2 = 0 needs c_1 = a_1 for the silver ratio (a_1 = 2)
    v = alt_validate(SILVER, AltDigits((1, 0, 1)))
    assert (v.condition, v.index) == ("zero_successor", 1)
    assert alt_validate(SILVER, AltDigits((2, 0, 1))).status is Status.ADMISSIBLE
    # zeros on all even indices are never allowed infinitely often
    assert alt_validate(SILVER, AltDigits((), period=(2, 0))).condition == "infinitely_often"
    assert alt_validate(GOLD, AltDigits((1, 1), terminated=False)).status is \
        Status.ADMISSIBLE_SO_FAR


def test_unknown_strictness():
    with pytest.raises(ValueError):
        alt_validate(GOLD, AltDigits((1,)), "loose")


# -- line expansion ------------------------------------------------------------

def test_line_expansion_examples():
    d, _ = alt_expand_line(GOLD, 3)
    assert d.c0 == -3 and d.digits == ()
    d, trace = alt_expand_line(GOLD, Fraction(-3, 10), 8)
    assert d.c0 == 1 and trace.residuals[0] == Fraction(7, 10)
    assert d.digits[0] >= 1
    d, _ = alt_expand_line(GOLD, PHI)
    assert d.c0 == 0 and d.digits == (1,)
    assert alt_evaluate(GOLD, d).value == PHI


def test_interval_mode_agrees_with_exact_mode():
    exact = AlphaContext(Real(-1, 1, 3, 2))
    interval = AlphaContext(CFLiteral([], [2, 1]))
    for gamma in (Fraction(-1, 3), Fraction(1, 2), Fraction(-7, 20)):
        a, _ = alt_expand(exact, gamma, 30)
        b, _ = alt_expand(interval, gamma, 30)
        assert a.digits == b.digits


def test_json_shape():
    d, trace = alt_expand(GOLD, PHI)
    js = alt_to_json(GOLD, d, trace, 10)
    assert js["variant"] == "alternating" and js["strictness"] == THEOREM_PROOF
    assert js["c0"] == 0 and js["digits"] == [1]


# -- properties -------------------------------------------------------------

seeds = st.fractions(min_value=-Fraction(2, 5), max_value=1, max_denominator=10**6)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_parity_interval_and_round_trip(gamma):
    assume(-SQRT2M1 < gamma < 1)
    digits, trace = alt_expand(SILVER, gamma, 40)
    assert audit_alt_trace(SILVER, digits, trace) == []
    assert alt_validate(SILVER, digits, THEOREM_PROOF)
    ev = alt_evaluate(SILVER, digits)
    if digits.terminated:
        assert ev.value == gamma
    else:
        assert ev.lower <= gamma <= ev.upper
        assert trace.residuals[-1] == gamma - ev.value


@settings(max_examples=60, deadline=None)
@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(1, 40))
def test_golden_quadratic_seeds(p, q, r):
    x = Real(p, q, 5, r)
    gamma = x - x.floor()
    digits, trace = alt_expand(GOLD, gamma, 30)
    assert audit_alt_trace(GOLD, digits, trace) == []


@settings(max_examples=100)
@given(st.lists(st.integers(0, 2), max_size=9))
def test_admissible_sequences_land_in_range(seq):
    d = AltDigits(tuple(seq))
    if alt_validate(SILVER, d):
        v = alt_evaluate(SILVER, d).value
        assert -SQRT2M1 < v < 1
        back, _ = alt_expand(SILVER, v, len(seq) + 2)
        assert back.digits == d.digits and back.terminated


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_split_by_parity(gamma):
    assume(-SQRT2M1 < gamma < 1)
    digits, _ = alt_expand(SILVER, gamma, 30)
    odd, even = split_by_parity(digits)
    pos = abs_evaluate(SILVER, odd, check=False).value
    neg = abs_evaluate(SILVER, even, check=False).value
    assert pos - neg == alt_evaluate(SILVER, digits).value
    assert pos >= 0 and neg >= 0
