import json
import math

import numpy as np
import pytest

from qcovlab import DomainError, QContext, UnsupportedRegimeError
from qcovlab.galg import guarded_residual, operator_from_json
from qcovlab.qnum import bracket_box
from qcovlab.repcat import (
    contraction_errors,
    export_rep,
    fock_qosc,
    grassmann_suq11_rep,
    multimode_rep,
    suq11_group_rep,
    suq2_group_rep,
    suq2_irrep,
    super_osc_rep,
)


def _all_pass(rep, tol=1e-10):
    reports = rep.check_relations(tol=tol)
    assert reports
    bad = [(r.check_id, r.residual) for r in reports if not r.passed]
    assert not bad


@pytest.mark.parametrize("variant", ["small_a", "big_A", "alpha"])
def test_fock_relations(ctx, variant):
    rep = fock_qosc(variant, 20, ctx)
    _all_pass(rep)
    for name, op in rep.gens.items():
        assert op.homogeneity_defect() == 0, name


def test_alpha_spectrum(half):
    rep = fock_qosc("alpha", 6, half)
    h = (rep["alpha+"] @ rep["alpha"]).matrix
    assert h[2, 2].real == pytest.approx(5.0)
    assert np.count_nonzero(rep["alpha"].matrix[:, 0]) == 0
    for n in range(6):
        assert h[n, n].real == pytest.approx(bracket_box(n, half.q**-2))


def test_scaling_interlinks(ctx):
    reps = {v: fock_qosc(v, 14, ctx) for v in ("small_a", "big_A", "alpha")}
    A = reps["big_A"]["A"]
    a = reps["small_a"]["a"]
    al = reps["alpha"]["alpha"]
    qN2 = reps["big_A"]["q^N/2"]
    qN = reps["big_A"]["q^N"]
    assert np.allclose((qN2 @ a).matrix, A.matrix, atol=1e-12)
    assert np.allclose((qN @ al).matrix, A.matrix, atol=1e-12)
    assert np.array_equal(reps["big_A"]["A+"].matrix, A.matrix.conj().T)


def test_unknown_variant():
    with pytest.raises(DomainError):
        fock_qosc("beta", 5, QContext(0.5))


@pytest.mark.parametrize("j", [0, 0.5, 1, 1.5, 2])
def test_spin_irreps(ctx, j):
    rep = suq2_irrep(j, ctx)
    _all_pass(rep)
    assert np.array_equal(rep["X-"].matrix, rep["X+"].matrix.conj().T)
    if j == 0:
        assert rep.space.dim == 1
        assert np.count_nonzero(rep["X+"].matrix) == 0


def test_spin_matrix_elements(half):
    assert suq2_irrep(0.5, half)["X+"].matrix[0, 1] ** 2 == pytest.approx(1.0)
    # N+(0, 1)^2 = [1][2]
    assert suq2_irrep(1, half)["X+"].matrix[0, 1] ** 2 == pytest.approx(2.5)


def test_spin_rejects_non_half_integer():
    with pytest.raises(DomainError):
        suq2_irrep(0.3, QContext(0.5))


def test_suq2_group(ctx):
    rep = suq2_group_rep(16, ctx)
    _all_pass(rep)
    b = np.diag(rep["b"].matrix).real
    assert b[0] == 1.0
    assert np.allclose(b, ctx.q ** np.arange(16))


def test_suq2_group_needs_small_q():
    with pytest.raises(UnsupportedRegimeError):
        suq2_group_rep(8, QContext(2.0))


def test_suq11_group(ctx):
    rep = suq11_group_rep(30, 0.4, ctx)
    _all_pass(rep)
    b = rep["b"].matrix
    assert np.count_nonzero(b - np.diag(np.diag(b))) == 0
    # diagonal means normal; the products only differ by FMA rounding
    d = np.diag(b)
    assert np.allclose(d * d.conj(), d.conj() * d, rtol=1e-15, atol=0)


def test_suq11_c0(half):
    rep = suq11_group_rep(5, 0.0, half)
    # a|0> = c_0 |1> with c_0^2 = 1 + 1/q
    assert abs(rep["a"].matrix[6, 5]) ** 2 == pytest.approx(3.0)


def test_super_oscillator(ctx):
    rep = super_osc_rep(12, ctx)
    _all_pass(rep)
    B = rep["B"].matrix
    assert np.count_nonzero(B @ B) == 0
    assert rep["B"].parity == 1
    # BB+ + B+B = q^2N (x) 1, exactly on the whole space
    lhs = B @ B.conj().T + B.conj().T @ B
    assert np.allclose(lhs, np.diag(np.repeat(ctx.q ** (2 * np.arange(12)), 2)), atol=1e-14)


def test_two_mode(ctx):
    rep = multimode_rep(2, 8, ctx)
    _all_pass(rep)
    assert rep.meta["dressing"] == "mode2-dressed-by-N1"
    assert min(rep.meta["dressing_table"].values()) < 1e-12
    assert max(rep.meta["dressing_table"].values()) > 1e-3
    assert np.count_nonzero(rep["A1"].matrix[:, 0]) == 0
    assert np.count_nonzero(rep["A2"].matrix[:, 0]) == 0


def test_multimode_only_two():
    with pytest.raises(UnsupportedRegimeError):
        multimode_rep(3, 4, QContext(0.5))


def test_grassmann(ctx):
    rep = grassmann_suq11_rep(0.3, ctx)
    _all_pass(rep)
    assert rep.meta["best_residual"] < 1e-10
    beta = rep["beta"].matrix
    assert np.count_nonzero(np.abs(beta @ beta) > 1e-15) == 0
    one = np.zeros(4)
    one[0] = 1.0
    assert np.allclose(rep["Lambda"].matrix @ one, one)


def test_contraction_converges(ctx):
    js = [10, 15, 20, 25, 30]
    errs = contraction_errors(js, 5, ctx)
    assert errs[-1] < 1e-3
    floor = 1e-14
    assert all(b <= a or b < floor for a, b in zip(errs, errs[1:]))


def test_contraction_at_q_above_one():
    q = 1.7
    errs = contraction_errors([10, 20, 30], 5, QContext(q))
    assert errs[-1] < 1e-3
    assert errs == sorted(errs, reverse=True)
    # the limit is the alpha ladder at q; rebuilt independently
    assert math.isclose(math.sqrt(bracket_box(1, q**-2)), 1.0)


def test_export_round_trip(tmp_path, half):
    rep = super_osc_rep(4, half)
    manifest = export_rep(rep, tmp_path / "out")
    meta = json.loads(manifest.read_text())
    assert meta["representation"] == "super-osc"
    names = [g["name"] for g in meta["generators"]]
    assert names == sorted(rep.gens)
    for g in meta["generators"]:
        op = operator_from_json((manifest.parent / g["file"]).read_text())
        assert op.matrix.tobytes() == rep.gens[g["name"]].matrix.tobytes()
        assert list(op.space.parity) == list(rep.space.parity)


def test_relation_fails_without_guard(half):
    rep = fock_qosc("alpha", 8, half)
    _, terms = rep.relations[0]
    assert not guarded_residual(rep.expr(terms), 0)
