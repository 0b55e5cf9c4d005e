"""Acceptance criteria 1-11, one test each, evaluated on full default runs.

Run directly (``python tests/test_acceptance.py``) or under pytest; both
print one PASS/FAIL line per criterion.
"""
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from osp_fixture import osp_rhat, write_matrix_json  # noqa: E402

from qcovlab import QContext  # noqa: E402
from qcovlab.cli import main  # noqa: E402
from qcovlab.rmx import RMatrix, osp_R_validate  # noqa: E402

Q_GRID = (0.3, 0.5, 0.8)
RESULTS: dict[int, tuple[bool, str]] = {}

TITLES = {
    1: "relation suite over the whole catalog",
    2: "alpha+ alpha spectrum on dim-20 Fock",
    3: "coaction spectrum and psi(z) eigenvalues",
    4: "vacuum constructions",
    5: "term-by-term Hamiltonian cross-checks",
    6: "symbolic suite",
    7: "R-matrix suite",
    8: "contraction to the oscillator",
    9: "Jacobi operator",
    10: "OSp sector",
    11: "determinism",
}


def _full_run(workdir: Path, tag: str) -> Path:
    rfile = write_matrix_json(workdir / "R.json", osp_rhat(0.5), q=0.5)
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"q": list(Q_GRID), "paths": {"rmatrix": rfile.name}, "output": ["json", "csv", "markdown"]}))
    code = main(["run", str(cfg), "--out", str(workdir / tag), "--quiet"])
    assert code in (0, 1)
    return workdir / tag


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("acceptance")
    return _full_run(d, "first"), _full_run(d, "second")


@pytest.fixture(scope="module")
def report(runs):
    return json.loads((runs[0] / "report.json").read_text())


def _rows(report, suite, check=None):
    out = [r for r in report["checks"] if r["suite"] == suite]
    if check is not None:
        out = [r for r in out if r["check_id"].startswith(check)]
    return out


def _record(n, ok, detail=""):
    RESULTS[n] = (bool(ok), detail)
    assert ok, detail


def _failing(rows):
    return [(r["check_id"], r["params"]) for r in rows if not r["pass"]]


def test_criterion_01_relations(report):
    rows = _rows(report, "relations")
    reps = {r["params"]["rep"] for r in rows}
    wanted = {
        "fock-alpha", "fock-big_A", "fock-small_a", "grassmann-suq11", "super-osc", "suq11-group",
        "suq2-group", "two-mode", *(f"suq2-V{k}/2" for k in range(5)),
    }
    qs = {r["params"]["q"] for r in rows}
    ok = wanted <= reps and qs == set(Q_GRID) and not _failing(rows) and all(r["tolerance"] <= 1e-10 for r in rows)
    _record(1, ok, f"{len(rows)} relation checks, missing reps {sorted(wanted - reps)}, failing {_failing(rows)[:3]}")


def test_criterion_02_fock_spectrum(report):
    rows = _rows(report, "fock-spectrum")
    ns = {r["params"]["n"] for r in rows}
    ok = ns == set(range(19)) and len(rows) == 19 * 3 and not _failing(rows) and all(r["tolerance"] <= 1e-12 for r in rows)
    worst = max(r["residual"] for r in rows)
    _record(2, ok, f"worst relative error {worst:.2e}")


def test_criterion_03_coaction_spectrum(report):
    rows = _rows(report, "spectrum-suq2")
    keys = {(r["params"]["q"], r["params"]["j"], r["params"]["k"]) for r in rows}
    wanted = {(q, j, k) for q in Q_GRID for j in (0.5, 1.0) for k in range(int(2 * j) + 1)}
    ok = keys == wanted and not _failing(rows) and all(r["params"]["nmax"] >= 8 and r["tolerance"] <= 1e-8 for r in rows)
    _record(3, ok, f"{len(rows)} (q, j, k) ladders, worst {max(r['residual'] for r in rows):.2e}")


def test_criterion_04_vacua(report):
    v8 = _rows(report, "vacuum-eq8", "psi(alpha)|0>_k = 0")
    v14 = _rows(report, "vacuum-eq14", "psi(A)|0>^(k) = 0")
    ok = (
        v8 and v14
        and not _failing(_rows(report, "vacuum-eq8")) and not _failing(_rows(report, "vacuum-eq14"))
        and all(r["tolerance"] <= 1e-10 for r in v8) and all(r["tolerance"] <= 1e-8 for r in v14)
    )
    _record(4, ok, f"worst {max(r['residual'] for r in v8):.2e} / {max(r['residual'] for r in v14):.2e}")


def test_criterion_05_cross_checks(report):
    a = _rows(report, "coaction-suq2", "H_I literal")
    b = _rows(report, "coaction-suq11", "psi(H) literal")
    rows = a + b
    ok = len(a) == 9 and len(b) == 3 and not _failing(rows) and all(r["tolerance"] <= 1e-12 for r in rows)
    _record(5, ok, f"worst {max(r['residual'] for r in rows):.2e}")


def test_criterion_06_symbolic(report):
    rows = _rows(report, "symbolic")
    ids = {r["check_id"] for r in rows}
    wanted = {
        "z central", "c1 central", "c2 central", "coaction psi-osc-suq2", "coaction psi-osc-suq11",
        "coaction s-A_q", "coassociativity and counit of psi-osc-suq2", "H = A+A + B+B invariant",
        "psi(z) = z (expected nonzero)",
    }
    z = next(r for r in rows if r["check_id"] == "psi(z) = z (expected nonzero)")
    ok = wanted <= ids and not _failing(rows) and z["residual"] > z["tolerance"]
    _record(6, ok, f"{len(rows)} symbolic checks; psi(z) - z normal form size {z['residual']:.2e}")


def test_criterion_07_rmatrix(report):
    rows = _rows(report, "rmatrix")
    ids = {r["check_id"] for r in rows}
    wanted = {"braid", "hecke", "FRT SU_q(2)", "FRT SU_q(1,1)", "zf-all", "reflection", "central extension", "q-metric"}
    kp = _rows(report, "k-prime")
    ok = wanted <= ids and not _failing(rows + kp) and all(r["tolerance"] <= 1e-10 for r in rows)
    _record(7, ok, f"worst {max(r['residual'] for r in rows):.2e}")


def test_criterion_08_contraction(report):
    rows = _rows(report, "contraction")
    at30 = [r for r in rows if r["check_id"] == "error at j = 30"]
    ok = len(at30) == 3 and not _failing(rows) and all(r["tolerance"] <= 1e-3 for r in at30)
    _record(8, ok, f"worst error at j = 30: {max(r['residual'] for r in at30):.2e}")


def test_criterion_09_jacobi(report):
    rows = _rows(report, "jacobi")
    sym = [r for r in rows if r["check_id"].startswith("spectrum symmetric")]
    dense = [r for r in rows if r["check_id"].startswith("bisection = dense")]
    chains = report["meta"]["diagnostics"].get("jacobi", {})
    ok = (
        len(sym) == len(dense) == 3 and not _failing(rows)
        and all(r["tolerance"] <= 1e-10 for r in sym) and all(r["tolerance"] <= 1e-8 for r in dense)
        and len(chains) == 3
    )
    _record(9, ok, f"chain diagnostics for {sorted(chains)}")


def test_criterion_10_osp(report):
    plane = _rows(report, "osp-plane")
    forms = [r for r in plane if r["check_id"] == "c2 forms agree"]
    accepted = _rows(report, "osp-validate")
    ctx = QContext(0.5)
    rng = np.random.default_rng(7)
    conj_ok = True
    for _ in range(5):
        DD = np.kron(*[np.diag(rng.uniform(0.3, 3.0, 3))] * 2)
        m = DD @ osp_rhat(0.5) @ np.linalg.inv(DD)
        conj_ok &= osp_R_validate(RMatrix(m, 3, (0, 1, 0)), ctx).passed
    bad = osp_rhat(0.5)
    bad[0, 4] += 1e-4
    rejected = osp_R_validate(RMatrix(bad, 3, (0, 1, 0)), ctx)
    ok = (
        len(plane) == 8 * 3 and not _failing(plane)
        and all(r["tolerance"] <= 1e-12 for r in forms)
        and len(accepted) == 1 and not _failing(accepted)
        and conj_ok and not rejected.passed and float(rejected.meta["braid"]) > 0
    )
    _record(10, ok, f"perturbed input braid residual {float(rejected.meta['braid']):.2e}")


def test_criterion_11_determinism(runs):
    a, b = runs
    same = all((a / n).read_bytes() == (b / n).read_bytes() for n in ("report.json", "report.csv", "report.md"))
    _record(11, same, "report.json, report.csv and report.md byte-identical across two runs")


def test_full_run_is_green(report):
    assert report["meta"]["n_failed"] == 0, _failing(report["checks"])[:5]


def summary_lines():
    lines = []
    for n, title in TITLES.items():
        ok, detail = RESULTS.get(n, (False, "not evaluated"))
        lines.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    return lines


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
