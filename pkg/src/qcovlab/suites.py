"""Suite registry, run configuration and report assembly."""
from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import coact, ncpoly, repcat, rmx
from .errors import ConfigError, DomainError, IncompletePresentationError, QCovError
from .galg import CheckReport, tridiag_eigenvalues
from .qnum import QContext, bracket_box

__all__ = ["Suite", "SUITES", "SuiteConfig", "run_suites", "list_suites", "report_to_csv", "report_to_markdown"]

REPORT_VERSION = 1


@dataclass(frozen=True)
class Suite:
    id: str
    description: str
    covers: str
    runner: Callable
    per_q: bool = True
    requires_input: bool = False


@dataclass(frozen=True)
class SuiteConfig:
    q: tuple = (0.3, 0.5, 0.8)
    dims: dict = field(default_factory=dict)
    suites: tuple | None = None
    output: tuple = ("json",)
    seed: int = 20240601
    paths: dict = field(default_factory=dict)
    workers: int = 4

    @classmethod
    def from_dict(cls, obj: dict) -> "SuiteConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {"q", "dims", "suites", "output", "seed", "paths", "workers"}
        for k in obj:
            if k not in known:
                raise ConfigError(f"unknown config key {k!r}")
        qs = obj.get("q", list(cls.q))
        if not isinstance(qs, list) or not qs:
            raise ConfigError("config key 'q' must be a non-empty list of numbers")
        for i, q in enumerate(qs):
            if not isinstance(q, (int, float)) or isinstance(q, bool) or not 0.0 < q < 1.0:
                raise ConfigError(f"config key 'q[{i}]' = {q!r} must lie strictly between 0 and 1")
        dims = dict(DEFAULT_DIMS)
        given = obj.get("dims", {})
        if not isinstance(given, dict):
            raise ConfigError("config key 'dims' must be an object")
        for k, v in given.items():
            if k not in DIM_BOUNDS:
                raise ConfigError(f"unknown config key 'dims.{k}'")
            dims[k] = v
        _check_dims(dims)
        suites = obj.get("suites")
        if suites is not None:
            if not isinstance(suites, list):
                raise ConfigError("config key 'suites' must be a list of suite ids")
            for i, s in enumerate(suites):
                if s not in SUITES:
                    raise ConfigError(f"config key 'suites[{i}]': unknown suite id {s!r}")
            suites = tuple(suites)
        out = obj.get("output", "json")
        out = [out] if isinstance(out, str) else out
        if not isinstance(out, list) or not out:
            raise ConfigError("config key 'output' must be a format name or a list of them")
        for i, f in enumerate(out):
            if f not in ("json", "csv", "markdown"):
                raise ConfigError(f"config key 'output[{i}]': unknown format {f!r}")
        seed = obj.get("seed", cls.seed)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ConfigError("config key 'seed' must be an integer")
        paths = obj.get("paths", {})
        if not isinstance(paths, dict):
            raise ConfigError("config key 'paths' must be an object")
        for k in paths:
            if k not in ("rmatrix", "output_dir"):
                raise ConfigError(f"unknown config key 'paths.{k}'")
        workers = obj.get("workers", cls.workers)
        if not isinstance(workers, int) or workers < 1:
            raise ConfigError("config key 'workers' must be a positive integer")
        cfg = cls(tuple(float(q) for q in qs), dims, suites, tuple(out), seed, dict(paths), workers)
        for s in cfg.selected():
            if SUITES[s].requires_input and "rmatrix" not in paths:
                raise ConfigError(f"suite {s!r} needs config key 'paths.rmatrix'")
        return cfg

    @classmethod
    def load(cls, path) -> "SuiteConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        cfg = cls.from_dict(obj)
        base = path.parent
        paths = {k: str((base / v).resolve()) if not Path(v).is_absolute() else v for k, v in cfg.paths.items()}
        return cls(cfg.q, cfg.dims, cfg.suites, cfg.output, cfg.seed, paths, cfg.workers)

    def selected(self) -> list[str]:
        if self.suites is None:
            return [s for s in SUITES if not SUITES[s].requires_input or "rmatrix" in self.paths]
        return sorted(set(self.suites))

    def as_meta(self) -> dict:
        return {
            "q": list(self.q),
            "dims": dict(sorted(self.dims.items())),
            "suites": self.selected(),
            "seed": self.seed,
            "rmatrix": Path(self.paths["rmatrix"]).name if "rmatrix" in self.paths else None,
        }


DEFAULT_DIMS = {
    "oscdim": 14,
    "j": [0.5, 1.0],
    "nmax": 8,
    "M": 30,
    "su11_oscdim": 40,
    "psiH_M": 10,
    "psiH_oscdim": 16,
    "fockdim": 16,
    "modedim": 8,
    "jacobi_dim": 24,
    "fock_spectrum_dim": 20,
    "phi": 0.0,
    "gamma0": 1.0,
}

# (low, high) feasibility bounds; kept at desk scale
DIM_BOUNDS = {
    "oscdim": (6, 60),
    "nmax": (0, 20),
    "M": (4, 40),
    "su11_oscdim": (8, 60),
    "psiH_M": (4, 20),
    "psiH_oscdim": (8, 24),
    "fockdim": (8, 60),
    "modedim": (6, 16),
    "jacobi_dim": (12, 200),
    "fock_spectrum_dim": (2, 60),
    "j": None,
    "phi": None,
    "gamma0": None,
}


def _check_dims(d):
    for k, bounds in DIM_BOUNDS.items():
        v = d[k]
        if k == "j":
            if not isinstance(v, list) or not v:
                raise ConfigError("config key 'dims.j' must be a non-empty list of half-integers")
            for i, j in enumerate(v):
                if not isinstance(j, (int, float)) or j < 0 or abs(2 * j - round(2 * j)) > 1e-12 or j > 2:
                    raise ConfigError(f"config key 'dims.j[{i}]' = {j!r} must be a half-integer in [0, 2]")
            continue
        if bounds is None:
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ConfigError(f"config key 'dims.{k}' must be a finite number")
            continue
        lo, hi = bounds
        if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
            raise ConfigError(f"config key 'dims.{k}' = {v!r} must be an integer in [{lo}, {hi}]")
    need = max(int(round(2 * j)) for j in d["j"]) + d["nmax"] + 2
    if d["oscdim"] < need:
        raise ConfigError(f"config key 'dims.oscdim' = {d['oscdim']} is too small; spectra up to nmax need >= {need}")


# -- report rows


def _row(suite, rep: CheckReport, params: dict, passed: bool | None = None) -> dict:
    res = rep.residual
    return {
        "suite": suite,
        "check_id": rep.check_id,
        "params": dict(sorted(params.items())),
        "residual": res if math.isfinite(res) else None,
        "tolerance": rep.tolerance,
        "pass": rep.passed if passed is None else bool(passed),
    }


def _expect_nonzero(suite, rep: CheckReport, params, label):
    """A check that is supposed to fail: passes when the residual is above tolerance."""
    r = CheckReport(f"{label} (expected nonzero)", rep.residual, rep.tolerance, meta=rep.meta)
    return _row(suite, r, {**params, "expect": "nonzero"}, passed=rep.residual > rep.tolerance)


# -- suite bodies; each returns (rows, diagnostics)


def _relations(cfg, ctx):
    d = cfg.dims
    reps = [repcat.fock_qosc(v, 20, ctx) for v in repcat.FOCK_VARIANTS]
    reps += [repcat.suq2_irrep(j / 2, ctx) for j in range(5)]
    reps += [
        repcat.suq2_group_rep(d["fockdim"], ctx),
        repcat.suq11_group_rep(d["M"], d["phi"], ctx),
        repcat.grassmann_suq11_rep(d["phi"], ctx),
        repcat.super_osc_rep(d["fockdim"], ctx),
        repcat.multimode_rep(2, d["modedim"], ctx),
    ]
    rows = []
    for rep in reps:
        for r in rep.check_relations():
            rows.append(_row("relations", r, {"q": ctx.q, "rep": rep.name, "dim": rep.space.dim}))
    return rows, {}


def _fock_spectrum(cfg, ctx):
    dim = cfg.dims["fock_spectrum_dim"]
    osc = repcat.fock_qosc("alpha", dim, ctx)
    H = osc["alpha+"].matrix @ osc["alpha"].matrix
    ev = tridiag_eigenvalues(np.real(np.diag(H)), np.real(np.diag(H, 1)), rtol=1e-15)
    rows = []
    q = ctx.q
    for n in range(dim - 1):
        t = bracket_box(n, q**-2)
        r = CheckReport(f"eigenvalue n={n:02d}", abs(ev[n] - t) / max(abs(t), 1e-300) if t else abs(ev[n]), 1e-12)
        rows.append(_row("fock-spectrum", r, {"q": q, "dim": dim, "n": n}))
    return rows, {}


def _coaction_suq2(cfg, ctx):
    rows = []
    for j in [0.0] + list(cfg.dims["j"]):
        sys = coact.build_coaction_suq2(cfg.dims["oscdim"], j, ctx)
        p = {"q": ctx.q, "j": j, "oscdim": cfg.dims["oscdim"]}
        for r in coact.coaction_relations_suq2(sys):
            rows.append(_row("coaction-suq2", r, p))
        _, r = coact.hamiltonian_HI(sys)
        rows.append(_row("coaction-suq2", r, p))
        if j == 0:
            osc = sys.legs[0]
            diff = np.max(np.abs(sys["alpha"].matrix - osc["alpha"].matrix))
            rows.append(_row("coaction-suq2", CheckReport("j = 0: psi(alpha) = alpha (x) 1", float(diff), 1e-14), p))
    return rows, {}


def _spectrum_suq2(cfg, ctx):
    rows, diag = [], {}
    for j in cfg.dims["j"]:
        sys = coact.build_coaction_suq2(cfg.dims["oscdim"], j, ctx)
        for k in range(int(round(2 * j)) + 1):
            rep, _ = coact.spectrum_check_suq2(sys, k, cfg.dims["nmax"])
            rows.append(_row("spectrum-suq2", rep, {"q": ctx.q, "j": j, "k": k, "nmax": cfg.dims["nmax"]}))
        coll = coact.multiplicity_table(j, cfg.dims["nmax"], ctx)["collisions"]
        diag[f"q={ctx.q!r} j={j!r} collisions"] = [list(c) for c in coll]
    return rows, diag


def _ladder_states(cfg, j, ctx, nmax=3):
    sys = coact.build_coaction_suq2(cfg.dims["oscdim"], j, ctx)
    states, vacs, labels = [], [], []
    for k in range(int(round(2 * j)) + 1):
        v = coact.vacuum_k(sys, k)
        vacs.append(v)
        for n, w in enumerate(coact._ladder(sys, v.vector, nmax)):
            states.append(w)
            labels.append((n, k))
    return vacs, np.array(states), labels


def _offdiag(S):
    G = S.conj() @ S.T
    return float(np.max(np.abs(G - np.diag(np.diag(G))), initial=0.0))


def _vacuum_ladder(cfg, ctx):
    rows = []
    for j in cfg.dims["j"]:
        vacs, S, labels = _ladder_states(cfg, j, ctx)
        for k, v in enumerate(vacs):
            p = {"q": ctx.q, "j": j, "k": k}
            rows.append(_row("vacuum-eq8", CheckReport("psi(alpha)|0>_k = 0", v.residual, 1e-10), p))
            r = CheckReport("|0>_k is a psi(N) eigenvector", v.meta["psiN_eigen_residual"], 1e-10)
            rows.append(_row("vacuum-eq8", r, {**p, "eigenvalue": round(v.meta["psiN_eigenvalue"], 12)}))
        p = {"q": ctx.q, "j": j}
        V = np.array([v.vector for v in vacs])
        rows.append(_row("vacuum-eq8", CheckReport("vacua mutually orthogonal", _offdiag(V), 1e-8), p))
        # for q < 1 sqrt(lam) is imaginary and H_I is not Hermitian, so ladder
        # states sharing a psi(N) eigenvalue need not be orthogonal there
        smin = float(np.linalg.svd(S, compute_uv=False)[-1])
        rows.append(_row("vacuum-eq8", CheckReport("ladder states linearly independent", 1.0 / smin, 1e8), {**p, "nmax": 3}))
        _, S_inv, _ = _ladder_states(cfg, j, ctx.inverse())
        rows.append(
            _row(
                "vacuum-eq8",
                CheckReport("ladder states orthogonal across (n, k) at 1/q", _offdiag(S_inv), 1e-8),
                {**p, "q_eval": 1.0 / ctx.q, "nmax": 3},
            )
        )
    return rows, {}


def _coaction_suq11(cfg, ctx):
    d = cfg.dims
    rows = []
    for zero_b in (False, True):
        sys = coact.build_coaction_su11(d["psiH_M"], d["psiH_oscdim"], d["phi"], ctx, zero_b=zero_b)
        for r in coact.psiH_check(sys):
            rows.append(_row("coaction-suq11", r, {"q": ctx.q, "M": d["psiH_M"], "oscdim": d["psiH_oscdim"], "zero_b": zero_b}))
    return rows, {}


def _vacuum_bogoliubov(cfg, ctx):
    d = cfg.dims
    sys = coact.build_coaction_su11(d["M"], d["su11_oscdim"], d["phi"], ctx)
    rows = []
    for k in (-1, 0, 1):
        v = coact.vacuum_su11(sys, k)
        p = {"q": ctx.q, "k": k, "M": d["M"], "oscdim": d["su11_oscdim"], "jmax": v.meta["jmax"]}
        rows.append(_row("vacuum-eq14", CheckReport("psi(A)|0>^(k) = 0", v.residual, 1e-8), p))
    lit = coact.vacuum_su11(sys, 0, literal=True)
    rows.append(
        _expect_nonzero(
            "vacuum-eq14",
            CheckReport("printed coefficients give a vacuum", lit.residual, 1e-8),
            {"q": ctx.q, "k": 0},
            "printed coefficients give a vacuum",
        )
    )
    return rows, {}


def _symbolic(cfg, ctx):
    ctxs = ncpoly.sample_contexts(cfg.seed)
    C = ncpoly.CATALOG
    p = {"q": "sampled", "seed": cfg.seed, "n_q": len(ctxs)}
    S = "symbolic"
    rows = []
    for name in sorted(C):
        rows.append(_row(S, ncpoly.confluence_check(C[name], ctxs, check_id=f"confluent: {name}"), p))
    rows.append(_row(S, ncpoly.is_central(ncpoly.oscillator_z, C["alpha-osc"], ctxs, check_id="z central"), p))
    rows.append(_row(S, ncpoly.is_central(ncpoly.k_c1, C["k-algebra"], ctxs, check_id="c1 central"), p))
    rows.append(_row(S, ncpoly.is_central(ncpoly.k_c2, C["k-algebra"], ctxs, check_id="c2 central"), p))
    lit = ncpoly.is_central(ncpoly.k_c2_literal, C["k-algebra"], ctxs, check_id="c2 with beta gamma order central")
    rows.append(_expect_nonzero(S, lit, p, lit.check_id))
    rows.append(_row(S, ncpoly.is_central(ncpoly.osp_c2, C["osp-plane"], ctxs, check_id="osp c2 central"), p))
    rows.append(
        _row(
            S,
            ncpoly.is_zero(
                lambda c: ncpoly.osp_c2(c) - ncpoly.osp_c2_ba(c),
                lambda c: ncpoly.RewriteSystem([C["osp-plane"].at(c)]),
                ctxs,
                check_id="osp c2 forms agree",
            ),
            p,
        )
    )
    rows.append(_row(S, ncpoly.coaction_check(ncpoly.psi_oscillator_suq2(), ctxs, check_id="coaction psi-osc-suq2"), p))
    rows.append(_row(S, ncpoly.coaction_check(ncpoly.psi_oscillator_suq11(), ctxs, check_id="coaction psi-osc-suq11"), p))
    best, table = ncpoly.select_super_signs(ctxs)
    cm = ncpoly.phi_super_oscillator(best)
    rows.append(_row(S, ncpoly.coaction_check(cm, ctxs, check_id="coaction s-A_q"), {**p, "signs": str(best)}))
    rows.append(
        _row(S, ncpoly.invariance_check(cm, ncpoly.super_hamiltonian, ctxs, check_id="H = A+A + B+B invariant"), {**p, "signs": str(best)})
    )
    co = ncpoly.coassociativity_counit_check(
        ncpoly.psi_oscillator_suq2(), ncpoly.suq2_coproduct("standard"), ncpoly.suq2_counit, ctxs
    )
    co.check_id = "coassociativity and counit of psi-osc-suq2"
    rows.append(_row(S, co, p))
    z = ncpoly.invariance_check(ncpoly.psi_oscillator_suq2(), ncpoly.oscillator_z, ctxs, check_id="psi(z) = z")
    rows.append(_expect_nonzero(S, z, p, "psi(z) = z"))
    osp = ncpoly.invariance_check(ncpoly.osp_plane_coaction(), lambda c: ncpoly.osp_c2(c, 1), ctxs, on_incomplete="report")
    status = osp.meta.get("status", "reduced")
    r = CheckReport("osp c2 invariance needs the full T presentation", 0.0 if status == "incomplete-presentation" else 1.0, 0.5)
    rows.append(_row(S, r, {**p, "status": status, "pair": osp.meta.get("pair", "")}))
    diag = {"super-sign table": {str(k): [repr(v[0]), repr(v[1])] for k, v in sorted(table.items(), key=lambda t: str(t[0]))}}
    return rows, diag


def _rmatrix(cfg, ctx):
    d = cfg.dims
    q = ctx.q
    R = rmx.rmatrix_slq2(ctx)
    p = {"q": q}
    rows = [
        _row("rmatrix", CheckReport("ice-rule fit", R.meta["fit_residual"], 1e-10), p),
        _row("rmatrix", rmx.ybe_check(R), p),
        _row("rmatrix", rmx.hecke_check(R, q), p),
    ]
    g = repcat.suq2_group_rep(d["fockdim"], ctx)
    U = [[g["a"], g["b"] * q], [-g["b+"], g["a+"]]]
    w = repcat.suq11_group_rep(d["M"], d["phi"], ctx)
    T = [[w["a"], w["b"]], [w["b*"], w["a*"]]]
    rows.append(_row("rmatrix", rmx.frt_check(R, U, check_id="FRT SU_q(2)"), {**p, "fockdim": d["fockdim"]}))
    rows.append(_row("rmatrix", rmx.frt_check(R, T, check_id="FRT SU_q(1,1)"), {**p, "M": d["M"]}))
    osc = repcat.fock_qosc("big_A", 14, ctx.sqrt_context())
    rows.append(_row("rmatrix", rmx.central_extension_check(R, osc["A"], ctx), p))
    rows.append(_row("rmatrix", rmx.eps_metric_checks(T, ctx), {**p, "M": d["M"]}))
    m = repcat.multimode_rep(2, d["modedim"], ctx)
    rows.append(_row("rmatrix", rmx.zf_check(R, [m["A1"], m["A2"]], "all"), {**p, "modedim": d["modedim"]}))
    ks = coact.k_prime_system(d["fockdim"], d["gamma0"], ctx)
    ops = ks.images
    rows.append(
        _row(
            "rmatrix",
            rmx.re_check(R, [[ops["alpha"], ops["beta"]], [ops["gamma"], ops["delta"]]], guard=4),
            {**p, "fockdim": d["fockdim"], "gamma0": d["gamma0"]},
        )
    )
    return rows, {f"q={q!r} R-hat": [[repr(float(x)) for x in row] for row in np.real(R.matrix)]}


def _k_prime(cfg, ctx):
    d = cfg.dims
    ks = coact.k_prime_system(d["fockdim"], d["gamma0"], ctx)
    out, lit = coact.k_prime_checks(ks)
    p = {"q": ctx.q, "fockdim": d["fockdim"], "gamma0": d["gamma0"]}
    return [_row("k-prime", r, p) for r in out], {f"q={ctx.q!r} {lit.check_id}": repr(lit.residual)}


def _contraction(cfg, ctx):
    js = [10, 15, 20, 25, 30]
    errs = repcat.contraction_errors(js, 5, ctx)
    p = {"q": ctx.q, "levels": 5}
    rows = [_row("contraction", CheckReport("error at j = 30", errs[-1], 1e-3), p)]
    floor = 1e-14
    worst = max((max(0.0, b - a) for a, b in zip(errs, errs[1:]) if b > floor), default=0.0)
    rows.append(_row("contraction", CheckReport("error non-increasing in j above 1e-14", worst, 0.0), {**p, "js": str(js)}))
    return rows, {f"q={ctx.q!r} errors": [repr(e) for e in errs]}


def _jacobi(cfg, ctx):
    d = cfg.dims
    rep, ev, chain = coact.jacobi_spectrum(d["jacobi_dim"], d["gamma0"], ctx)
    p = {"q": ctx.q, "dim": d["jacobi_dim"], "gamma0": d["gamma0"]}
    rows = [
        _row("jacobi", rep, p),
        _row("jacobi", coact.jacobi_dense_check(12, d["gamma0"], ctx), {**p, "dim": 12}),
    ]
    diag = {f"q={ctx.q!r} chain": [[round(c["ratio"], 12), float(f"{c['deviation']:.3e}")] for c in chain]}
    return rows, diag


def _susy(cfg, ctx):
    srep = repcat.super_osc_rep(cfg.dims["fockdim"], ctx)
    _, checks = coact.susy_charges(srep)
    return [_row("susy", r, {"q": ctx.q, "dim": srep.space.dim}) for r in checks], {}


def _two_mode(cfg, ctx):
    d = cfg.dims
    sys = coact.two_mode_coaction(10, d["modedim"], ctx)
    p = {"q": ctx.q, "fockdim": 10, "modedim": d["modedim"], "dressing": sys.provenance["dressing"]}
    return [_row("two-mode", r, p) for r in coact.two_mode_checks(sys)], {}


def _osp_plane(cfg, ctx):
    plane = rmx.osp_plane_rep(16, ctx)
    p = {"q": ctx.q, "dim": 32, "dressing": plane.dressing}
    rows = [_row("osp-plane", r, p) for r in rmx.osp_plane_checks(plane)]
    T = rmx.osp_subalgebra_sample(12, ctx)
    rows.append(_row("osp-plane", rmx.osp_subalgebra_check(*T, ctx, guard=1), {"q": ctx.q, "dim": 12}))
    return rows, {}


def _osp_validate(cfg, ctx):
    R = rmx.load_rmatrix(cfg.paths["rmatrix"])
    p = {"q": ctx.q, "file": Path(cfg.paths["rmatrix"]).name}
    if "q" in R.meta and not math.isclose(R.meta["q"], ctx.q, rel_tol=1e-12):
        # an R-hat belongs to one q; other grid points are skipped
        return [], {f"q={ctx.q!r} skipped": f"file declares q = {R.meta['q']!r}"}
    rep = rmx.osp_R_validate(R, ctx)
    diag = {f"q={ctx.q!r} extension": {k: rep.meta[k] for k in sorted(rep.meta) if k.startswith(("extension", "J_"))}}
    return [_row("osp-validate", rep, p)], diag


SUITES = {
    s.id: s
    for s in sorted(
        [
            Suite("relations", "defining relations of every catalog representation", "Eqs. (1)-(3), §2.1-§2.4", _relations),
            Suite("fock-spectrum", "alpha+ alpha spectrum on a truncated Fock space", "Eq. (6)", _fock_spectrum),
            Suite("coaction-suq2", "su_q(2) coaction images and the interaction Hamiltonian", "Eqs. (3), (4), (7)", _coaction_suq2),
            Suite("spectrum-suq2", "H_I and psi(z) eigenvalues on each vacuum ladder", "§2.1", _spectrum_suq2),
            Suite("vacuum-eq8", "vacua of the su_q(2)-coacted oscillator", "Eq. (8)", _vacuum_ladder),
            Suite("coaction-suq11", "Bogoliubov-type SU_q(1,1) coaction and psi(H)", "Eqs. (11), (13)", _coaction_suq11),
            Suite("vacuum-eq14", "vacua of the SU_q(1,1)-coacted oscillator", "Eq. (14)", _vacuum_bogoliubov),
            Suite("symbolic", "normal-form tests at sampled q", "Eqs. (4), (5), (11), §2.1, §2.3, §2.5, §2.6", _symbolic, per_q=False),
            Suite("rmatrix", "braid, Hecke, FRT, ZF, reflection and metric identities", "Eqs. (9), (10), (15), §2.4", _rmatrix),
            Suite("k-prime", "reflection-equation algebra image K' = U K U+", "§2.5", _k_prime),
            Suite("contraction", "su_q(2) to oscillator contraction", "§2.1", _contraction),
            Suite("jacobi", "Jacobi operator spectrum and chain diagnostic", "§2.5", _jacobi),
            Suite("susy", "supercharges and the free-fermion substitution", "§2.3", _susy),
            Suite("two-mode", "two covariant modes: invariant Hamiltonian and exchange relations", "§2.4", _two_mode),
            Suite("osp-plane", "quantum OSp plane realization and subalgebra validator", "Eqs. (16), (17), §2.6", _osp_plane),
            Suite(
                "osp-validate",
                "validate a user-supplied OSp R-hat (requires input file)",
                "§2.6",
                _osp_validate,
                requires_input=True,
            ),
        ],
        key=lambda s: s.id,
    )
}


def list_suites() -> list[dict]:
    return [
        {"id": s.id, "description": s.description, "covers": s.covers, "requires_input": s.requires_input}
        for s in SUITES.values()
    ]


def _task(suite_id, cfg, q):
    ctx = QContext(q) if q is not None else None
    t0 = time.perf_counter()
    try:
        rows, diag = SUITES[suite_id].runner(cfg, ctx)
    except (QCovError, DomainError, IncompletePresentationError) as exc:
        r = CheckReport("suite error", float("inf"), 0.0)
        rows, diag = [_row(suite_id, r, {"q": q, "error": f"{type(exc).__name__}: {exc}"})], {}
    return suite_id, q, rows, diag, time.perf_counter() - t0


def _sort_key(row):
    return (row["suite"], row["check_id"], json.dumps(row["params"], sort_keys=True))


def run_suites(cfg: SuiteConfig):
    """Run the selected suites in a thread pool; returns (report, timings)."""
    tasks = []
    for sid in cfg.selected():
        if SUITES[sid].per_q:
            tasks += [(sid, q) for q in cfg.q]
        else:
            tasks.append((sid, None))
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(lambda t: _task(t[0], cfg, t[1]), tasks))
    rows, diags, timings = [], {}, {}
    for sid, q, r, d, dt in results:
        rows += r
        if d:
            diags.setdefault(sid, {}).update(d)
        timings[f"{sid} q={q}"] = dt
    rows.sort(key=_sort_key)
    n_fail = sum(not r["pass"] for r in rows)
    report = {
        "meta": {
            "report_version": REPORT_VERSION,
            "config": cfg.as_meta(),
            "n_checks": len(rows),
            "n_failed": n_fail,
            "diagnostics": {k: diags[k] for k in sorted(diags)},
        },
        "checks": rows,
    }
    return report, dict(sorted(timings.items()))


def dumps_report(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def report_to_csv(report) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "check_id", "params", "residual", "tolerance", "pass"])
    for r in report["checks"]:
        w.writerow(
            [
                r["suite"],
                r["check_id"],
                json.dumps(r["params"], sort_keys=True),
                "" if r["residual"] is None else repr(r["residual"]),
                repr(r["tolerance"]),
                "pass" if r["pass"] else "FAIL",
            ]
        )
    return buf.getvalue()


def report_to_markdown(report) -> str:
    lines = ["# Verification report", ""]
    meta = report["meta"]
    lines.append(f"{meta['n_checks']} checks, {meta['n_failed']} failed.")
    lines.append("")
    suite = None
    for r in report["checks"]:
        if r["suite"] != suite:
            suite = r["suite"]
            sub = [x for x in report["checks"] if x["suite"] == suite]
            ok = all(x["pass"] for x in sub)
            lines += ["", f"## {suite} {'![pass](https://img.shields.io/badge/-pass-green)' if ok else '![fail](https://img.shields.io/badge/-fail-red)'}", ""]
            lines += ["| check | params | residual | tol | |", "|---|---|---|---|---|"]
        params = ", ".join(f"{k}={v}" for k, v in r["params"].items())
        res = "n/a" if r["residual"] is None else f"{r['residual']:.3e}"
        lines.append(f"| {r['check_id']} | {params} | {res} | {r['tolerance']:.0e} | {'pass' if r['pass'] else '**FAIL**'} |")
    return "\n".join(lines) + "\n"


def write_reports(report, timings, cfg: SuiteConfig, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in cfg.output:
        if fmt == "json":
            path = outdir / "report.json"
            path.write_text(dumps_report(report))
        elif fmt == "csv":
            path = outdir / "report.csv"
            path.write_text(report_to_csv(report))
        else:
            path = outdir / "report.md"
            path.write_text(report_to_markdown(report))
        written.append(path)
    # wall-clock data lives apart from the report so the report stays byte-stable
    t = outdir / "timing.json"
    t.write_text(json.dumps({"finished": time.strftime("%Y-%m-%dT%H:%M:%S"), "seconds": timings}, indent=2) + "\n")
    written.append(t)
    return written
