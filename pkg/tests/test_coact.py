import csv
import math

import numpy as np
import pytest

from qcovlab import DomainError, GuardInfeasibleError, QContext
from qcovlab import coact
from qcovlab.galg import guarded_residual
from qcovlab.qnum import bracket_box, coeff_cm_su11, coeff_cn_su2
from qcovlab.repcat import super_osc_rep


@pytest.fixture(scope="module")
def sys_half():
    return coact.build_coaction_suq2(14, 0.5, QContext(0.5))


@pytest.mark.parametrize("j", [0.5, 1.0])
def test_suq2_images_satisfy_relations(ctx, j):
    sys = coact.build_coaction_suq2(14, j, ctx)
    assert all(coact.coaction_relations_suq2(sys))
    N, a = sys["N"], sys["alpha"]
    assert guarded_residual([(1.0, [N, a]), (-1.0, [a, N]), (1.0, [a])], 2).residual < 1e-12
    assert sys.leg_order == ("algebra", "group")


def test_suq2_needs_room():
    with pytest.raises(GuardInfeasibleError, match="oscdim"):
        coact.build_coaction_suq2(4, 1.0, QContext(0.5))


def test_j_zero_is_plain_oscillator(half):
    sys = coact.build_coaction_suq2(10, 0, half)
    osc = sys.legs[0]
    assert np.array_equal(sys["alpha"].matrix, osc["alpha"].matrix)
    H, rep = coact.hamiltonian_HI(sys)
    assert rep.passed
    assert np.allclose(H.matrix, (osc["alpha+"] @ osc["alpha"]).matrix, atol=1e-14)


def test_HI_cross_check(ctx):
    sys = coact.build_coaction_suq2(14, 1.0, ctx)
    H, rep = coact.hamiltonian_HI(sys)
    assert rep.residual < 1e-12


def test_HI_hermitian_when_sqrt_lam_real():
    # for q > 1 sqrt(lam) is real and psi(alpha+) is the adjoint of psi(alpha)
    sys = coact.build_coaction_suq2(14, 1.0, QContext(1.6))
    H, _ = coact.hamiltonian_HI(sys)
    m = sys.space.interior(2)
    Hg = H.matrix[np.ix_(m, m)]
    assert np.max(np.abs(Hg - Hg.conj().T)) < 1e-12 * np.max(np.abs(Hg))


def test_vacuum_k0_single_term(sys_half):
    v = coact.vacuum_k(sys_half, 0)
    assert np.count_nonzero(v.vector) == 1
    assert v.vector[0] == pytest.approx(1.0)
    assert v.meta["coefficients"] == [1.0]


def test_vacuum_k1_coefficient(sys_half):
    ctx = QContext(0.5)
    c = coact.vacuum_coefficients_suq2(0.5, 1, ctx)
    expected = -np.sqrt(complex(ctx.lam)) * math.sqrt(0.5) * 1.0
    assert c[0] == 1.0
    assert c[1] == pytest.approx(expected)
    v = coact.vacuum_k(sys_half, 1)
    assert v.residual < 1e-10
    assert np.linalg.norm(v.vector) == pytest.approx(1.0)


@pytest.mark.parametrize("j", [0.5, 1.0])
def test_vacua(ctx, j):
    sys = coact.build_coaction_suq2(14, j, ctx)
    vs = [coact.vacuum_k(sys, k) for k in range(int(2 * j) + 1)]
    for k, v in enumerate(vs):
        assert v.residual < 1e-10
        assert v.meta["psiN_eigen_residual"] < 1e-12
        assert v.meta["psiN_eigenvalue"] == pytest.approx(k - j)
    V = np.array([v.vector for v in vs])
    G = V.conj() @ V.T
    assert np.max(np.abs(G - np.eye(len(vs)))) < 1e-8


def test_vacuum_k_range(sys_half):
    with pytest.raises(DomainError):
        coact.vacuum_k(sys_half, 2)


@pytest.mark.parametrize("j", [0.5, 1.0])
def test_spectrum(ctx, j):
    sys = coact.build_coaction_suq2(14, j, ctx)
    for k in range(int(2 * j) + 1):
        rep, rows = coact.spectrum_check_suq2(sys, k, 8)
        assert rep.passed, rep.meta
        assert rows[0]["value"] == 0
        assert rows[0]["z_value"] == pytest.approx(-bracket_box(k - j, ctx.q**-2) if k != j else 0.0)


def test_spectrum_example():
    sys = coact.build_coaction_suq2(14, 1.0, QContext(0.5))
    _, rows = coact.spectrum_check_suq2(sys, 0, 1)
    assert rows[1]["value"] == pytest.approx(0.25)


def test_spectrum_guard():
    sys = coact.build_coaction_suq2(6, 0.5, QContext(0.5))
    with pytest.raises(GuardInfeasibleError):
        coact.spectrum_check_suq2(sys, 1, 8)


def test_ladder_orthogonal_at_inverse_q():
    # at q > 1 the ladder states over all (n, k) are orthonormal
    sys = coact.build_coaction_suq2(14, 1.0, QContext(2.0))
    states = []
    for k in range(3):
        v = coact.vacuum_k(sys, k).vector
        states.extend(coact._ladder(sys, v, 3))
    S = np.array(states)
    G = S.conj() @ S.T
    assert np.max(np.abs(G - np.eye(len(states)))) < 1e-8


def test_multiplicity_table(half):
    t = coact.multiplicity_table(1.0, 4, half)
    # n = 0 values are all zero, so they coincide across k
    assert (0, 0, 1) in t["collisions"]
    assert all(n == 0 for n, _, _ in t["collisions"])


def test_psiH(ctx):
    sys = coact.build_coaction_su11(10, 16, 0.0, ctx)
    reports = coact.psiH_check(sys)
    assert all(reports), [(r.check_id, r.residual) for r in reports]
    ids = [r.check_id for r in reports]
    assert "psi(H) literal = psi(A+)psi(A)" in ids


def test_psiH_zero_b(half):
    sys = coact.build_coaction_su11(10, 16, 0.0, half, zero_b=True)
    assert all(coact.psiH_check(sys))


def test_su11_dims():
    with pytest.raises(GuardInfeasibleError):
        coact.build_coaction_su11(2, 16, 0.0, QContext(0.5))


def test_su11_coefficients():
    ctx = QContext(0.5)
    xs = coact.vacuum_su11_coefficients(0, 3, ctx)
    assert xs[0] == 1.0
    lit = coact.vacuum_su11_coefficients(0, 1, ctx, literal=True)
    # the product runs over c_{k-i}; at k = 0, i = 1 that is c_{-1}
    assert lit[1] == pytest.approx(-math.sqrt(1 / 1.5) * 0.5 / coeff_cm_su11(-1, ctx))
    assert xs[1] == pytest.approx(-math.sqrt(1 / 1.5) / coeff_cm_su11(-1, ctx))


@pytest.mark.parametrize("k", [0, 2])
def test_su11_vacuum(ctx, k):
    sys = coact.build_coaction_su11(30, 40, 0.0, ctx)
    v = coact.vacuum_su11(sys, k)
    assert v.residual < 1e-8
    assert v.meta["leg_order"] == "group,algebra"


def test_su11_literal_vacuum_fails(half):
    sys = coact.build_coaction_su11(30, 40, 0.0, half)
    assert coact.vacuum_su11(sys, 0, literal=True).residual > 1e-3


def test_su11_truncation_error():
    ctx = QContext(0.8)
    sys = coact.build_coaction_su11(6, 10, 0.0, ctx)
    with pytest.raises(GuardInfeasibleError, match="needs oscdim >= .* and M >="):
        coact.vacuum_su11(sys, 0)


def test_k_prime(ctx):
    sys = coact.k_prime_system(16, 1.0, ctx)
    out, lit = coact.k_prime_checks(sys)
    bad = [(r.check_id, r.residual) for r in out if not r.passed]
    assert not bad
    ids = {r.check_id for r in out}
    assert "alpha' = q gamma (b a+ + a b+)" in ids
    assert "reflection" in ids


def test_k_prime_alpha_formula(half):
    sys = coact.k_prime_system(10, 1.3, half)
    grp = sys.legs[0]
    expected = (grp["b"] @ grp["a+"] + grp["a"] @ grp["b+"]) * (half.q * 1.3)
    assert np.allclose(sys["alpha"].matrix, expected.matrix, atol=1e-14)


def test_k_prime_zero(half):
    sys = coact.k_prime_system(10, 0.0, half)
    for name in ("alpha", "beta", "gamma", "delta"):
        assert np.count_nonzero(sys[name].matrix) == 0
    out, _ = coact.k_prime_checks(sys)
    assert all(out)


def test_jacobi(ctx):
    rep, ev, chain = coact.jacobi_spectrum(24, 1.0, ctx)
    assert rep.residual < 1e-10
    assert len(ev) == 24
    assert all("ratio" in c for c in chain)
    assert coact.jacobi_dense_check(12, 1.0, ctx)


def test_jacobi_entry():
    ctx = QContext(0.5)
    J = coact.jacobi_matrix(4, 1.0, ctx)
    assert J[0, 1] == pytest.approx(0.25 * math.sqrt(0.75))
    assert coeff_cn_su2(1, ctx) == pytest.approx(math.sqrt(0.75))


def test_susy(ctx):
    ops, checks = coact.susy_charges(super_osc_rep(12, ctx))
    assert all(checks), [(r.check_id, r.residual) for r in checks]
    assert ops["Q"].parity == 1
    assert np.count_nonzero(ops["Q"].matrix @ ops["Q"].matrix) == 0


def test_two_mode(ctx):
    sys = coact.two_mode_coaction(10, 6, ctx)
    assert all(coact.two_mode_checks(sys))


def test_write_csv(tmp_path):
    rows = [{"k": 0, "value": 0.1, "residual": 1e-17}, {"k": 1, "value": 1 + 2j, "extra": "x"}]
    path = coact.write_csv(rows, tmp_path / "s.csv")
    got = list(csv.DictReader(path.open()))
    assert list(got[0]) == ["k", "value", "residual", "extra"]
    assert float(got[0]["value"]) == 0.1
    assert complex(got[1]["value"]) == 1 + 2j
    assert got[1]["residual"] == ""
