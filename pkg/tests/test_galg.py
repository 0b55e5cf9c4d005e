import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from qcovlab import GuardInfeasibleError, QContext, ShapeError
from qcovlab import _accel
from qcovlab.galg import (
    GradedOperator,
    GradedSpace,
    anticommutator,
    commutator,
    dagger,
    graded_kron,
    guarded_residual,
    identity,
    operator_from_json,
    operator_to_json,
    tridiag_eigenvalues,
)
from qcovlab.qnum import coeff_cn_su2
from qcovlab.repcat import fock_qosc


def _random_op(rng, parity_bits, op_parity):
    space = GradedSpace.exact(parity_bits)
    n = space.dim
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    p = space.parity
    m[((p[:, None] + p[None, :]) % 2) != op_parity] = 0
    return GradedOperator(m, space, op_parity)


def _brute_kron(a, b):
    # entrywise definition: (a (x) b)(u(x)v) = (-1)^{p(b) p(u)} a u (x) b v
    da, db = a.dim, b.dim
    out = np.zeros((da * db, da * db), complex)
    for i in range(da):
        for j in range(da):
            for k in range(db):
                for l in range(db):
                    sign = (-1) ** (b.parity * a.space.parity[j])
                    out[i * db + k, j * db + l] = sign * a.matrix[i, j] * b.matrix[k, l]
    return out


def test_kron_identity():
    s = GradedSpace.exact([0, 1, 1])
    t = GradedSpace.exact([1, 0])
    k = graded_kron(identity(s), identity(t))
    assert np.array_equal(k.matrix, np.eye(6))
    assert list(k.space.parity) == [1, 0, 0, 1, 0, 1]


def test_kron_even_is_plain():
    rng = np.random.default_rng(1)
    a = _random_op(rng, [0, 1, 1], 0)
    b = _random_op(rng, [0, 1], 0)
    assert np.array_equal(graded_kron(a, b).matrix, np.kron(a.matrix, b.matrix))


def test_kron_odd_sign():
    rng = np.random.default_rng(2)
    a = _random_op(rng, [0, 1, 0], 1)
    b = _random_op(rng, [1, 0], 1)
    k = graded_kron(a, b)
    assert np.allclose(k.matrix, _brute_kron(a, b), atol=0)
    assert k.parity == 0
    assert k.homogeneity_defect() == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31 - 1), st.tuples(*[st.integers(0, 1)] * 4))
def test_kron_mixed_product(seed, pars):
    # (a (x) b)(c (x) d) = (-1)^{p(b) p(c)} ac (x) bd
    rng = np.random.default_rng(seed)
    pa, pb, pc, pd = pars
    a, c = _random_op(rng, [0, 1], pa), _random_op(rng, [0, 1], pc)
    b, d = _random_op(rng, [1, 0, 0], pb), _random_op(rng, [1, 0, 0], pd)
    lhs = graded_kron(a, b) @ graded_kron(c, d)
    rhs = graded_kron(a @ c, b @ d) * (-1) ** (pb * pc)
    assert np.allclose(lhs.matrix, rhs.matrix, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.tuples(*[st.integers(0, 1)] * 3))
def test_kron_associative(seed, pars):
    rng = np.random.default_rng(seed)
    a = _random_op(rng, [0, 1], pars[0])
    b = _random_op(rng, [1, 0], pars[1])
    c = _random_op(rng, [0, 1, 1], pars[2])
    left = graded_kron(graded_kron(a, b), c)
    right = graded_kron(a, graded_kron(b, c))
    assert np.allclose(left.matrix, right.matrix, atol=1e-12)


def test_tensor_levels_and_order():
    s = GradedSpace.fock(3).tensor(GradedSpace.exact([0, 1]))
    assert list(s.level) == [0, 0, 1, 1, 2, 2]
    assert list(s.parity) == [0, 1, 0, 1, 0, 1]


def test_guarded_residual_examples():
    ctx = QContext(0.5)
    rep = fock_qosc("big_A", 12, ctx)
    A, Ad = rep["A"], rep["A+"]
    expr = [(1.0, [A, Ad]), (-ctx.q**2, [Ad, A]), (-1.0, [])]
    assert guarded_residual(expr, 1).residual < 1e-12
    bad = guarded_residual(expr, 0)
    assert not bad.passed
    assert bad.residual > 0.1
    assert guarded_residual([], 0).residual == 0


def test_guard_infeasible():
    rep = fock_qosc("alpha", 3, QContext(0.5))
    with pytest.raises(GuardInfeasibleError):
        guarded_residual([(1.0, [rep["alpha"]])], 5)


def test_mixed_spaces_rejected():
    a = identity(GradedSpace.fock(3))
    b = identity(GradedSpace.fock(4))
    with pytest.raises(ShapeError):
        a @ b


def test_helpers():
    rng = np.random.default_rng(3)
    a = _random_op(rng, [0, 1, 0], 0)
    assert np.array_equal(dagger(dagger(a)).matrix, a.matrix)
    assert np.count_nonzero(commutator(a, a).matrix) == 0
    s = GradedSpace.exact([0, 1])
    f = GradedOperator(np.array([[0, 1], [0, 0]]), s, 1)
    assert np.array_equal(anticommutator(f, dagger(f)).matrix, np.eye(2))


def test_tridiag_small():
    assert np.allclose(tridiag_eigenvalues([0, 0], [1]), [-1, 1])
    ev = tridiag_eigenvalues(np.zeros(9), np.arange(1, 9.0))
    assert np.allclose(ev, -ev[::-1])


def test_tridiag_vs_dense():
    ctx = QContext(0.5)
    off = np.array([ctx.q**n * coeff_cn_su2(n, ctx) for n in range(1, 10)])
    dense = np.linalg.eigvalsh(np.diag(off, 1) + np.diag(off, -1))
    assert np.max(np.abs(tridiag_eigenvalues(np.zeros(10), off) - dense)) < 1e-8


@settings(max_examples=40, deadline=None)
@given(hnp.arrays(float, 12, elements=st.floats(-5, 5)), hnp.arrays(float, 11, elements=st.floats(-5, 5)))
def test_tridiag_property(d, e):
    dense = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    scale = max(1.0, np.max(np.abs(dense)))
    assert np.max(np.abs(tridiag_eigenvalues(d, e) - dense)) < 1e-10 * scale


def test_tridiag_shape_error():
    with pytest.raises(ShapeError):
        tridiag_eigenvalues([0, 0, 0], [1])


def test_json_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(4)
    op = _random_op(rng, [0, 1, 1, 0], 1)
    m = op.matrix.copy()
    m[0, 1] = complex(np.nextafter(0.1, 1), -1e-300)
    op = GradedOperator(m, op.space, 1)
    text = json.dumps(operator_to_json(op))
    (tmp_path / "m.json").write_text(text)
    back = operator_from_json((tmp_path / "m.json").read_text())
    assert back.matrix.tobytes() == op.matrix.tobytes()
    assert list(back.space.parity) == [0, 1, 1, 0]
    assert back.parity == 1
    assert json.dumps(operator_to_json(back)) == text


def test_json_shape_errors():
    with pytest.raises(ShapeError, match="missing key"):
        operator_from_json({"rows": 1, "cols": 1, "data": [[0, 0]]})
    with pytest.raises(ShapeError, match="entries"):
        operator_from_json({"rows": 2, "cols": 2, "parity": [0, 0], "data": [[0, 0]]})


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
def test_numba_kernels_match_numpy():
    rng = np.random.default_rng(5)
    d, e = rng.normal(size=30), rng.normal(size=29)
    a = _accel.bisect_eigenvalues_numpy(d, e, 1e-12)
    b = _accel.bisect_eigenvalues_numba(d, e, 1e-12)
    assert np.allclose(np.sort(a), np.sort(b), atol=1e-12)
    xs = np.linspace(-4, 4, 17)
    assert np.array_equal(_accel.sturm_count_numpy(d, e**2, xs), _accel.sturm_count_numba(d, e**2, xs))
    par = rng.integers(0, 2, size=7)
    assert np.array_equal(_accel.koszul_col_signs_numpy(par, 1, 3), _accel.koszul_col_signs_numba(par, 1, 3))
    m = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
    assert _accel.colsum_norm_numpy(m) == pytest.approx(_accel.colsum_norm_numba(m), rel=1e-14)


def test_numpy_only_switch():
    code = (
        "import numpy as np; from qcovlab import _accel; from qcovlab.galg import tridiag_eigenvalues;"
        "assert not _accel.USE_NUMBA; assert _accel.colsum_norm is _accel.colsum_norm_numpy;"
        "print(tridiag_eigenvalues([0.0, 0.0], [1.0]))"
    )
    env = {**os.environ, "QCOVLAB_NUMPY_ONLY": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert "[-1.  1.]" in out.stdout
