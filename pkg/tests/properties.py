"""Seeded randomized spectrum checks shared by the unit and acceptance suites.

Each ``check_*`` runs ``trials`` independent cases and returns the list of
failure descriptions (empty on success).
"""

from __future__ import annotations

import numpy as np

from evenspec.constructions import certified, clique_blowup, hs_join, kron, pq_join, skew_pair
from evenspec.linalg import SymMatrix, eigenvalues

TOL = 1e-8


def _sym(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.uniform(-2, 2, size=(n, n))
    return (m + m.T) / 2


def _spec(a: SymMatrix) -> np.ndarray:
    return np.array(eigenvalues(a))


def _close(x, y, scale=1.0) -> bool:
    x, y = np.sort(np.asarray(x, dtype=float)), np.sort(np.asarray(y, dtype=float))
    return x.shape == y.shape and float(np.max(np.abs(x - y), initial=0.0)) <= TOL * max(1.0, scale)


def check_skew_pair(trials: int, seed: int = 1) -> list[str]:
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        n = int(rng.integers(1, 6))
        a = SymMatrix.from_dense(_sym(rng, n))
        s = rng.uniform(-2, 2, size=(n, n))
        m = skew_pair(a, s)
        vals = _spec(m)
        if float(np.max(np.abs(vals[1::2] - vals[0::2]))) > 1e-9 * max(1.0, float(np.max(np.abs(vals)))):
            bad.append(f"skew_pair trial {t}: unpaired spectrum {vals}")
            continue
        sk = np.triu(s, 1) - np.triu(s, 1).T
        herm = np.linalg.eigvalsh(a.dense() + 1j * sk)
        if not _close(vals[0::2], herm):
            bad.append(f"skew_pair trial {t}: spectrum differs from A+iS")
    return bad


def random_join_inputs(rng: np.random.Generator, n: int, m: int):
    b = _sym(rng, m)
    w, v = np.linalg.eigh(b)
    k = int(rng.integers(0, m))
    mu1, u = float(w[k]), v[:, k]
    if rng.random() < 0.5:
        u = -u
    a = _sym(rng, n)
    a[-1, -1] = mu1
    return SymMatrix.from_dense(a), SymMatrix.from_dense(b), u, mu1, w, k


def check_hs_join(trials: int, seed: int = 2) -> list[str]:
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        a, b, u, mu1, w, k = random_join_inputs(rng, n, m)
        res = hs_join(a, b, u, mu1)
        expected = list(_spec(a)) + [x for i, x in enumerate(w) if i != k]
        if not _close(_spec(res.matrix), expected, 4):
            bad.append(f"hs_join trial {t} (n={n}, m={m}): spectrum mismatch")
            continue
        # eigenvector lifting
        av, avec = np.linalg.eigh(a.dense())
        c = res.matrix.dense()
        for i in range(n):
            x = res.lift(avec[:, i])
            if np.linalg.norm(c @ x - av[i] * x) > 1e-8:
                bad.append(f"hs_join trial {t}: lifted eigenvector {i} fails")
                break
    return bad


def check_kron(trials: int, seed: int = 3) -> list[str]:
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        a = SymMatrix.from_dense(_sym(rng, n))
        b = SymMatrix.from_dense(_sym(rng, m))
        products = np.outer(_spec(a), _spec(b)).ravel()
        if not _close(_spec(kron(a, b)), products, 4):
            bad.append(f"kron trial {t}: spectrum is not the pairwise products")
    return bad


def check_pq_join(trials: int, seed: int = 4) -> list[str]:
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        a = _sym(rng, n)
        a[-1, -1] = 2.0
        b = _sym(rng, m)
        b[-1, -1] = 0.0
        a, b = SymMatrix.from_dense(a), SymMatrix.from_dense(b)
        c = pq_join(a, b)
        if not _close(_spec(c), list(_spec(a)) + list(_spec(b)), 4):
            bad.append(f"pq_join trial {t}: spectrum is not the multiset union")
    return bad


def check_clique_blowup(trials: int, seed: int = 5) -> list[str]:
    """Output spectrum = shifted input spectrum plus 2m zeros."""
    rng = np.random.default_rng(seed)
    bad = []
    for t in range(trials):
        n = int(rng.integers(1, 4))
        base = skew_pair(SymMatrix.from_dense(_sym(rng, n)), rng.uniform(-2, 2, size=(n, n)))
        try:
            c = certified(base, "skew_pair", tol=1e-8)
        except Exception as exc:  # pattern may be anything; the certificate must hold
            bad.append(f"clique_blowup trial {t}: base not square ({exc})")
            continue
        v = int(rng.integers(1, c.order + 1))
        m = int(rng.integers(0, 3))
        out = clique_blowup(c, v, m)
        shift = 2 * m + 1 - float(c.matrix.dense()[v - 1, v - 1])
        expected = [x + shift for x in _spec(c.matrix)] + [0.0] * (2 * m)
        if not _close(_spec(out.matrix), expected, 8):
            bad.append(f"clique_blowup trial {t}: spectrum lacks the x^(2m) factor")
        elif not out.certificate.is_square:
            bad.append(f"clique_blowup trial {t}: output not certified")
    return bad
