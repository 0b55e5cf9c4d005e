import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcovlab import DomainError, InvalidBaseError, QContext
from qcovlab.qnum import (
    bracket_box,
    bracket_sym,
    coeff_cm_su11,
    coeff_cn_su2,
    qdoublefact_box,
    qfact_box,
)

q_values = st.floats(0.05, 3.0).filter(lambda q: abs(q - 1) > 1e-3)


def test_box_oracles():
    assert bracket_box(0, 0.3) == 0
    assert bracket_box(1, 0.3) == 1
    assert bracket_box(3, 4) == pytest.approx(21, rel=1e-15)


def test_box_rejects_base_one():
    with pytest.raises(InvalidBaseError):
        bracket_box(2, 1.0)


def test_sym_oracles(half):
    assert bracket_sym(0, half) == 0
    assert bracket_sym(1, half) == pytest.approx(1)
    assert bracket_sym(2, half) == pytest.approx(2.5)


def test_factorials():
    assert qfact_box(0, 0.7) == 1
    assert qdoublefact_box(-1, 0.7) == 1
    assert qdoublefact_box(0, 0.7) == 1
    assert qfact_box(3, 4) == pytest.approx(105)
    # [1][3] and [2][4] at base 2
    assert qdoublefact_box(3, 2) == pytest.approx(7)
    assert qdoublefact_box(4, 2) == pytest.approx(3 * 15)


def test_factorial_domain():
    with pytest.raises(DomainError):
        qfact_box(-1, 0.5)
    with pytest.raises(DomainError):
        qdoublefact_box(-2, 0.5)


def test_coefficients(half):
    assert coeff_cn_su2(0, half) == 0
    assert coeff_cn_su2(1, half) == pytest.approx(math.sqrt(0.75))
    assert coeff_cm_su11(0, half) == pytest.approx(math.sqrt(3))


@pytest.mark.parametrize("bad", [1.0, 0.0, -0.5, float("nan"), float("inf")])
def test_context_rejects(bad):
    with pytest.raises(DomainError):
        QContext(bad)


def test_derived_constants(half):
    assert half.lam == pytest.approx(0.5 - 2.0)
    assert half.inverse().q == pytest.approx(2.0)
    assert half.sqrt_context().q == pytest.approx(math.sqrt(0.5))
    assert half.with_q(0.8).q == 0.8


@given(q_values, st.integers(0, 30))
def test_box_is_geometric_sum(q, n):
    assert bracket_box(n, q) == pytest.approx(sum(q**i for i in range(n)), rel=1e-9, abs=1e-12)


@given(q_values, st.integers(-20, 20))
def test_sym_bracket_symmetries(q, n):
    c = QContext(q)
    assert bracket_sym(-n, c) == pytest.approx(-bracket_sym(n, c), rel=1e-12, abs=1e-12)
    assert bracket_sym(n, c) == pytest.approx(bracket_sym(n, c.inverse()), rel=1e-9, abs=1e-9)


@given(q_values, st.integers(-15, 15))
def test_box_sym_relation(q, n):
    # [n]_q = q^(1-n) [n; q^2]
    c = QContext(q)
    assert bracket_sym(n, c) == pytest.approx(q ** (1 - n) * bracket_box(n, q * q), rel=1e-9, abs=1e-9)
