"""A reference 9x9 OSp R-hat built from the 3-dim U_q(osp(1|2)) module.

Built independently of the library: the commutant of the tensor-square
action is computed numerically and split into its 5 + 3 + 1 isotypic
projectors.
"""
import numpy as np

PAR = np.array([0, 1, 0])


def _gk(A, B, pB):
    s = np.array([(-1.0) ** (pB * PAR[i]) for i in range(3) for _ in range(3)])
    return np.kron(A, B) * s[None, :]


def _projectors(q):
    E = np.zeros((3, 3))
    F = np.zeros((3, 3))
    E[0, 1] = E[1, 2] = 1.0
    F[1, 0] = 1.0
    F[2, 1] = -1.0
    K = np.diag([q, 1.0, 1.0 / q])
    I = np.eye(3)
    dE = _gk(E, K, 0) + _gk(I, E, 1)
    dF = _gk(F, I, 0) + _gk(np.linalg.inv(K), F, 1)
    dK = np.kron(K, K)
    sys = np.vstack([np.kron(np.eye(9), G.T) - np.kron(G, np.eye(9)) for G in (dE, dF, dK)])
    _, s, vt = np.linalg.svd(sys)
    null = vt[np.sum(s > 1e-9):]
    assert len(null) == 3
    rng = np.random.default_rng(0)
    X = sum(rng.normal() * n.reshape(9, 9) for n in null)
    w, V = np.linalg.eig(X)
    Vi = np.linalg.inv(V)
    groups = {}
    for i in range(9):
        key = next((k for k in groups if abs(k - w[i]) < 1e-6), w[i])
        groups.setdefault(key, []).append(i)
    return {len(ix): (V[:, ix] @ Vi[ix, :]).real for ix in groups.values()}


def osp_rhat(q):
    P = _projectors(q)
    R0 = q * P[5] - P[3] / q - P[1] / q**2
    Pi = np.eye(3)[::-1]
    PP = np.kron(Pi, Pi)
    D = np.diag([q**-0.5, 1.0, 1.0])
    DD = np.kron(D, D)
    return DD @ (PP @ R0.T @ PP) @ np.linalg.inv(DD)


def write_matrix_json(path, m, leg_parity=(0, 1, 0), q=None):
    import json

    par = [(a + b) % 2 for a in leg_parity for b in leg_parity]
    obj = {
        "rows": 9,
        "cols": 9,
        "parity": par,
        "level": [0] * 9,
        "data": [[float(z.real), float(z.imag)] for z in np.asarray(m, complex).ravel()],
        "leg_parity": list(leg_parity),
    }
    if q is not None:
        obj["q"] = q
    path.write_text(json.dumps(obj))
    return path
