import math

import pytest
from hypothesis import given, strategies as st

from entropy_bound.core import DomainError, evaluate_bound, golden_section_max

nonneg = st.floats(min_value=0.0, max_value=1e12, allow_nan=False, allow_infinity=False)


def test_empty_system_is_marginal():
    r = evaluate_bound(0.0, 0.0, "empty")
    assert r.satisfied and r.margin == 0.0 and r.bound_value == 0.0


def test_ln3_against_two():
    # 2 pi E R = 2 n^4 at n = 1
    r = evaluate_bound(math.log(3.0), 1.0 / math.pi)
    assert r.bound_value == pytest.approx(2.0)
    assert r.margin == pytest.approx(2.0 - math.log(3.0))
    assert r.margin == pytest.approx(0.9014, abs=1e-4)
    assert r.satisfied


def test_strong_coupling_value_violates():
    r = evaluate_bound(math.log(2.0), 127.5 / (2 * math.pi * 200))
    assert r.bound_value == pytest.approx(0.6375)
    assert not r.satisfied


@pytest.mark.parametrize("s, er", [(-1e-9, 1.0), (1.0, -1.0), (math.nan, 1.0)])
def test_negative_inputs_rejected(s, er):
    with pytest.raises(DomainError):
        evaluate_bound(s, er)


@given(nonneg, nonneg, nonneg)
def test_monotone_in_energy(s, er, extra):
    before = evaluate_bound(s, er)
    after = evaluate_bound(s, er + extra)
    assert not (before.satisfied and not after.satisfied)


@given(nonneg, nonneg)
def test_margin_and_verdict_consistent(s, er):
    r = evaluate_bound(s, er)
    assert r.margin == r.bound_value - r.entropy_nats
    assert r.satisfied == (r.margin >= 0)
    assert r.bound_value == 2 * math.pi * er


def test_golden_section_finds_parabola_peak():
    x, fx = golden_section_max(lambda t: -(t - 2.0) ** 2, 1.0, 5.0, xtol=1e-9)
    assert x == pytest.approx(2.0, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)
