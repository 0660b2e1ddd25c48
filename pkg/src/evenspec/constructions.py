"""Matrix constructions whose characteristic polynomial is a perfect square.

Every builder that returns a :class:`CertifiedMatrix` has already checked the
matrix pattern against the intended graph and run :func:`certify_square`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import CertificationError, PreconditionError
from .graphs import (
    Graph,
    blowup_vertex,
    complement,
    complete_bipartite,
    complete_graph,
    components,
    disjoint_union,
    find_isomorphism,
    join,
)
from .linalg import (
    DEFAULT_TOL,
    SpectrumCertificate,
    SymMatrix,
    certify_square,
    charpoly_exact,
    eigenvalues,
    pattern_of,
    random_in_pattern,
)
from .poly import RatPoly

PATTERN_TOL = 1e-10


@dataclass(frozen=True)
class CertifiedMatrix:
    """A matrix, its pattern and its spectrum certificate.

    ``certificate.is_square`` holds for every even order; the rank-two
    builders may also be called on odd orders, where it is necessarily false.
    """

    matrix: SymMatrix
    graph: Graph
    certificate: SpectrumCertificate
    provenance: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.matrix.order


def certified(matrix: SymMatrix, name: str, params: dict | None = None, *, graph: Graph | None = None,
              tol: float = DEFAULT_TOL, require_square: bool = True) -> CertifiedMatrix:
    pattern = pattern_of(matrix, PATTERN_TOL)
    if graph is not None and pattern != graph:
        raise CertificationError(f"{name}: pattern {pattern!r} differs from intended graph {graph!r}")
    cert = certify_square(matrix, tol)
    if require_square and not cert.is_square:
        raise CertificationError(f"{name}: certificate failed (max pair gap {cert.max_gap:.3e}, mode {cert.mode})")
    return CertifiedMatrix(matrix, pattern, cert, {"name": name, "params": dict(params or {})})


def relabel_certified(c: CertifiedMatrix, g: Graph) -> CertifiedMatrix:
    """Re-index ``c`` so that its pattern is exactly ``g`` (which must be isomorphic)."""
    mapping = find_isomorphism(c.graph, g)
    if mapping is None:
        raise PreconditionError("certificate graph is not isomorphic to the requested graph")
    perm = [0] * g.order
    for old, new in enumerate(mapping):
        perm[new - 1] = old
    m = c.matrix.permuted(perm)
    return certified(m, c.provenance.get("name", "relabel"), c.provenance.get("params"), graph=g,
                     tol=c.certificate.tol, require_square=c.certificate.is_square)


def _rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _from_blocks(rows_exact, dense) -> SymMatrix:
    if rows_exact is not None:
        return SymMatrix.from_rational(rows_exact)
    return SymMatrix.from_dense(dense)


# -- skew pairs and cycles ----------------------------------------------------

def skew_pair(a: SymMatrix, s) -> SymMatrix:
    """``[[A, S], [-S, A]]`` with ``S = triu(s, 1) - triu(s, 1).T``.

    The spectrum is that of the Hermitian matrix ``A + iS`` with every value
    doubled, so the characteristic polynomial is a square.
    """
    n = a.order
    raw = np.asarray(s, dtype=object)
    if raw.shape != (n, n):
        raise PreconditionError(f"skew data must be {n}x{n}, got {raw.shape}")
    upper = [[raw[i][j] if j > i else 0 for j in range(n)] for i in range(n)]
    sk = [[upper[i][j] - upper[j][i] for j in range(n)] for i in range(n)]
    if a.exact is not None and all(_rational(x) for row in upper for x in row):
        A = a.exact_rows()
        rows = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = rows[n + i][n + j] = A[i][j]
                rows[i][n + j] = Fraction(sk[i][j])
                rows[n + i][j] = -Fraction(sk[i][j])
        return SymMatrix.from_rational(rows)
    A = a.dense()
    S = np.array(sk, dtype=float)
    return SymMatrix.from_dense(np.block([[A, S], [-S, A]]))


def path_adjacency(n: int) -> SymMatrix:
    return SymMatrix.from_rational([[int(abs(i - j) == 1) for j in range(n)] for i in range(n)])


def cycle_matrix(order: int) -> CertifiedMatrix:
    """Integer matrix with pattern C_order built as a skew pair of two paths."""
    if not isinstance(order, int) or order < 4 or order % 2:
        raise PreconditionError(f"cycle_matrix needs an even order >= 4, got {order!r}")
    n = order // 2
    s = [[0] * n for _ in range(n)]
    s[0][n - 1] = -1  # S = E_{n1} - E_{1n}
    m = skew_pair(path_adjacency(n), s)
    from .graphs import cycle_graph

    return certified(m, "cycle", {"order": order}, graph=cycle_graph(order))


# -- tensor products ----------------------------------------------------------

def kron(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    """Kronecker product, row-major: index ``(u - 1) * |b| + u'``."""
    if a.exact is not None and b.exact is not None:
        A, B = a.exact_rows(), b.exact_rows()
        n, m = a.order, b.order
        return SymMatrix.from_rational(
            [[A[i // m][j // m] * B[i % m][j % m] for j in range(n * m)] for i in range(n * m)]
        )
    return SymMatrix.from_dense(np.kron(a.dense(), b.dense()))


# -- joining along an eigenvector ---------------------------------------------

@dataclass(frozen=True)
class JoinResult:
    """Output of :func:`hs_join` with the eigenvector bookkeeping of the join."""

    matrix: SymMatrix
    u: np.ndarray
    n: int
    m: int

    def lift(self, v) -> np.ndarray:
        """Eigenvector ``(w, alpha)`` of the left matrix -> ``(w, alpha * u)``."""
        v = np.asarray(v, dtype=float)
        return np.concatenate([v[:-1], v[-1] * self.u])

    def embed(self, w) -> np.ndarray:
        """Eigenvector of the right matrix orthogonal to ``u`` -> ``(0, w)``."""
        return np.concatenate([np.zeros(self.n - 1), np.asarray(w, dtype=float)])


def hs_join(a: SymMatrix, b: SymMatrix, u, mu1) -> JoinResult:
    """Glue ``b`` onto the last vertex of ``a`` through the eigenpair ``(mu1, u)`` of ``b``.

    With ``a = [[A1, c], [c^T, mu1]]`` the result ``[[A1, c u^T], [u c^T, b]]``
    has the eigenvalues of ``a`` together with those of ``b`` minus one copy of ``mu1``.
    """
    n, m = a.order, b.order
    u_list = list(np.asarray(u, dtype=object).ravel()) if not isinstance(u, np.ndarray) or u.dtype == object \
        else list(u.ravel())
    if len(u_list) != m:
        raise PreconditionError(f"u has length {len(u_list)}, expected {m}")
    uf = np.array([float(x) for x in u_list])
    last = a.entry(n - 1, n - 1)
    if abs(float(last) - float(mu1)) > 1e-12 * max(1.0, abs(float(mu1))):
        raise PreconditionError(f"last diagonal entry of a is {float(last)!r}, expected mu1={float(mu1)!r} "
                                f"(difference {abs(float(last) - float(mu1)):.3e})")
    norm_err = abs(float(np.linalg.norm(uf)) - 1.0)
    if norm_err > 1e-10:
        raise PreconditionError(f"u must be a unit vector (| |u| - 1 | = {norm_err:.3e})")
    resid = float(np.linalg.norm(b.dense() @ uf - float(mu1) * uf))
    if resid > 1e-10:
        raise PreconditionError(f"u is not an eigenvector of b for mu1 (residual {resid:.3e})")

    exact = a.exact is not None and b.exact is not None and all(_rational(x) for x in u_list) and _rational(mu1)
    if exact:
        A, B = a.exact_rows(), b.exact_rows()
        uq = [Fraction(x) for x in u_list]
        size = n - 1 + m
        rows = [[Fraction(0)] * size for _ in range(size)]
        for i in range(n - 1):
            for j in range(n - 1):
                rows[i][j] = A[i][j]
            for j in range(m):
                rows[i][n - 1 + j] = rows[n - 1 + j][i] = A[i][n - 1] * uq[j]
        for i in range(m):
            for j in range(m):
                rows[n - 1 + i][n - 1 + j] = B[i][j]
        return JoinResult(SymMatrix.from_rational(rows), uf, n, m)
    A = a.dense()
    A1 = A[: n - 1, : n - 1]
    c = A[: n - 1, n - 1]
    top = np.hstack([A1, np.outer(c, uf)])
    bottom = np.hstack([np.outer(uf, c), b.dense()])
    return JoinResult(SymMatrix.from_dense(np.vstack([top, bottom])), uf, n, m)


def _move_last(a: SymMatrix, v: int) -> tuple[SymMatrix, list[int]]:
    """Permute 1-based vertex ``v`` to the last position; returns the 0-based order used."""
    perm = [i for i in range(a.order) if i != v - 1] + [v - 1]
    return a.permuted(perm), perm


def clique_blowup(c: CertifiedMatrix, v: int, m: int) -> CertifiedMatrix:
    """Replace vertex ``v`` by a clique on ``2m + 1`` vertices with v's neighbourhood.

    The clique occupies positions ``v .. v + 2m`` of the output.
    """
    if not c.certificate.is_square:
        raise PreconditionError("clique_blowup needs a square-certified input")
    if not 1 <= v <= c.order:
        raise PreconditionError(f"vertex {v} out of range")
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    size = 2 * m + 1
    a = c.matrix
    shifted = a.affine(1, size - a.entry(v - 1, v - 1))
    moved, _ = _move_last(shifted, v)
    ones = SymMatrix.from_rational([[1] * size for _ in range(size)])
    u = [1] if size == 1 else [1.0 / math.sqrt(size)] * size
    joined = hs_join(moved, ones, u, size).matrix
    # joined order: other vertices (original order), then the clique; put the clique back at v
    n = c.order
    others = list(range(n - 1))
    clique = list(range(n - 1, n - 1 + size))
    perm = others[: v - 1] + clique + others[v - 1:]
    out = joined.permuted(perm)
    return certified(out, "clique_blowup", {"base": c.provenance, "vertex": v, "m": m},
                     graph=blowup_vertex(c.graph, v, size), tol=c.certificate.tol)


def pq_join(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    """Couple ``a`` (last diagonal 2) and ``b`` (last diagonal 0) into one matrix
    whose characteristic polynomial is the product of theirs.

    Order of the result: b's leading block, a's leading block, then two glue vertices.
    """
    if abs(float(a.entry(a.order - 1, a.order - 1)) - 2.0) > 1e-12:
        raise PreconditionError("pq_join: last diagonal entry of a must be 2")
    if abs(float(b.entry(b.order - 1, b.order - 1))) > 1e-12:
        raise PreconditionError("pq_join: last diagonal entry of b must be 0")
    a = _snap_corner(a, 2)
    b = _snap_corner(b, 0)
    h = 1.0 / math.sqrt(2.0)
    ones2 = SymMatrix.from_rational([[1, 1], [1, 1]])
    d = hs_join(a, ones2, [h, h], 2).matrix
    w = np.zeros(d.order)
    w[-2], w[-1] = h, -h
    return hs_join(b, d, w, 0).matrix


def _snap_corner(a: SymMatrix, value) -> SymMatrix:
    n = a.order
    if a.exact is not None:
        if a.exact[-1] == value:
            return a
        rows = a.exact_rows()
        rows[n - 1][n - 1] = Fraction(value)
        return SymMatrix.from_rational(rows)
    d = a.dense()
    d[n - 1, n - 1] = value
    return SymMatrix.from_dense(d)


def pq_join_graph(ga: Graph, va: int, gb: Graph, vb: int) -> Graph:
    """Pattern of :func:`graph_pq_join`: b's other vertices, a's other vertices, v_a, v_b."""
    nb, na = gb.order - 1, ga.order - 1
    b_ids = {x: k + 1 for k, x in enumerate(y for y in gb.vertices if y != vb)}
    a_ids = {x: nb + k + 1 for k, x in enumerate(y for y in ga.vertices if y != va)}
    ja, jb = nb + na + 1, nb + na + 2
    edges = [(ja, jb)]
    for i, j in gb.edges:
        if vb in (i, j):
            other = b_ids[j if i == vb else i]
            edges += [(other, ja), (other, jb)]
        else:
            edges.append((b_ids[i], b_ids[j]))
    for i, j in ga.edges:
        if va in (i, j):
            other = a_ids[j if i == va else i]
            edges += [(other, ja), (other, jb)]
        else:
            edges.append((a_ids[i], a_ids[j]))
    return Graph.from_edges(nb + na + 2, edges)


def graph_pq_join(ca: CertifiedMatrix, v_a: int, cb: CertifiedMatrix, v_b: int) -> CertifiedMatrix:
    """Merge two square-certified graphs: ``v_a`` and ``v_b`` become adjacent and
    each inherits the other's neighbourhood."""
    for c, name in ((ca, "ca"), (cb, "cb")):
        if not c.certificate.is_square:
            raise PreconditionError(f"{name} is not square-certified")
    a = ca.matrix
    if not ca.graph.edges and len(set(a.diag())) <= 1:
        raise PreconditionError("ca is a scalar matrix; it cannot be renormalised usefully")
    a = a.affine(1, 2 - a.entry(v_a - 1, v_a - 1))
    b = cb.matrix.affine(1, -cb.matrix.entry(v_b - 1, v_b - 1))
    a, _ = _move_last(a, v_a)
    b, _ = _move_last(b, v_b)
    out = pq_join(a, b)
    tol = max(ca.certificate.tol, cb.certificate.tol)
    return certified(out, "graph_pq_join",
                     {"a": ca.provenance, "v_a": v_a, "b": cb.provenance, "v_b": v_b},
                     graph=pq_join_graph(ca.graph, v_a, cb.graph, v_b), tol=tol)


# -- complete graphs with prescribed spectrum ---------------------------------

@dataclass(frozen=True)
class SpectrumTarget:
    values: tuple[float, ...]
    eigvec_support: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.eigvec_support is not None:
            if len(self.eigvec_support) != len(self.values):
                raise PreconditionError("support pattern must have one entry per eigenvalue")
            if sum(1 for s in self.eigvec_support if s) < 2:
                raise PreconditionError("the eigenvector support needs at least two nonzero positions")


@dataclass(frozen=True)
class Realization:
    """A matrix in S(K_n) with a prescribed spectrum and a first-eigenvalue eigenvector."""

    matrix: SymMatrix
    eigenvector: np.ndarray
    eigenvalue: float
    spectrum_error: float


class _Collision(Exception):
    pass


def _d2_fractions():
    # 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, 2/5, ...
    for den in range(2, 40):
        for num in range(1, den):
            if math.gcd(num, den) == 1:
                yield num / den


def _two_by_two(hi: float, lo: float, d2: float) -> np.ndarray:
    off = math.sqrt(max(0.0, -(hi - d2) * (lo - d2)))
    return np.array([[hi + lo - d2, off], [off, d2]])


def _top_vector(m2: np.ndarray, lam: float) -> np.ndarray:
    p, s = m2[0, 0], m2[0, 1]
    v = np.array([s, lam - p])
    return v / np.linalg.norm(v)


def _append_eigenvalue(a: np.ndarray, vec: np.ndarray | None, lam: float):
    """Attach one vertex, adding ``lam`` to the spectrum.

    When ``vec`` is given it is an eigenvector being tracked; the pivot must be
    one of its nonzero positions.  Without ``vec`` the returned vector is the
    new eigenvector for ``lam`` (two nonzero entries).
    """
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))), abs(lam))
    best, best_score = None, 0.0
    for j in range(n):
        gap = abs(a[j, j] - lam)
        if gap <= 1e-9 * scale:
            continue
        weight = abs(vec[j]) if vec is not None else 1.0
        if vec is not None and weight <= 1e-8:
            continue
        score = min(gap / scale, weight)
        if score > best_score:
            best, best_score = j, score
    if best is None:
        raise _Collision
    perm = [i for i in range(n) if i != best] + [best]
    ap = a[np.ix_(perm, perm)]
    d = ap[-1, -1]
    hi, lo = max(d, lam), min(d, lam)
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    block = np.array([[mid, half], [half, mid]])
    h = 1.0 / math.sqrt(2.0)
    u_d = np.array([h, h]) if d == hi else np.array([h, -h])
    u_new = np.array([h, -h]) if d == hi else np.array([h, h])
    res = hs_join(SymMatrix.from_dense(ap), SymMatrix.from_dense(block), u_d, d)
    if vec is not None:
        return res.matrix.dense(), res.lift(vec[perm])
    return res.matrix.dense(), res.embed(u_new)


def _build_complete(vals: list[float], k: int, t: float):
    n = len(vals)
    if n == 2:
        hi, lo = vals
        m2 = _two_by_two(hi, lo, lo + t * (hi - lo))
        return m2, _top_vector(m2, hi)
    if k == n or k > 2:
        a, v = _build_complete(vals[:-1], k - 1, t)
        return _append_eigenvalue(a, v, vals[-1])
    # k == 2: realise the other values first, then add vals[0] last so its
    # eigenvector lives on the final two vertices only
    rest = list(vals[1:])
    j = next((i for i in range(1, len(rest)) if rest[i] != rest[0]), None)
    if j is None:
        raise PreconditionError(
            "a two-entry eigenvector is impossible when all remaining eigenvalues coincide"
        )
    rest[1], rest[j] = rest[j], rest[1]
    if rest[0] < rest[1]:
        rest[0], rest[1] = rest[1], rest[0]
    a, _ = _build_complete(rest, len(rest), t)
    return _append_eigenvalue(a, None, vals[0])


def realize_complete(target: SpectrumTarget) -> Realization:
    """Matrix in S(K_n) with spectrum ``target.values`` and an eigenvector for the
    first listed value with zero/nonzero pattern ``target.eigvec_support``."""
    vals = [float(x) for x in target.values]
    n = len(vals)
    if n < 2:
        raise PreconditionError("realize_complete needs n >= 2")
    if vals[0] == vals[1]:
        raise PreconditionError("the first two target values must differ")
    support = list(target.eigvec_support) if target.eigvec_support is not None else [1] * n
    k = sum(1 for s in support if s)
    # the induction wants lambda_1 > lambda_2; otherwise realise -sigma and negate
    sign = 1.0 if vals[0] > vals[1] else -1.0
    vals = [sign * x for x in vals]
    lam1 = vals[0]
    if k < n:
        # the two-entry sub-problem uses the leading tail values; it needs one
        # of them to differ from lambda_2
        tail = vals[2:]
        j = next((i for i, x in enumerate(tail) if x != vals[1]), None)
        if j is None:
            raise PreconditionError("with lambda_2 repeated n - 1 times every lambda_1 eigenvector has full support")
        tail.insert(0, tail.pop(j))
        vals[2:] = tail
    target_sorted = np.sort(np.array(vals))
    last_error = None
    for t in _d2_fractions():
        try:
            m, vec = _build_complete(vals, k, t)
        except _Collision:
            continue
        nz = [i for i in range(n) if vec[i] != 0.0]
        zs = [i for i in range(n) if vec[i] == 0.0]
        want_nz = [i for i in range(n) if support[i]]
        want_z = [i for i in range(n) if not support[i]]
        if len(nz) != len(want_nz):
            last_error = f"eigenvector has {len(nz)} nonzeros, wanted {len(want_nz)}"
            continue
        perm = [0] * n
        for src, dst in zip(nz, want_nz):
            perm[dst] = src
        for src, dst in zip(zs, want_z):
            perm[dst] = src
        m = m[np.ix_(perm, perm)]
        vec = vec[perm] / np.linalg.norm(vec)
        iu = np.triu_indices(n, 1)
        if np.min(np.abs(m[iu])) <= 1e-10:
            last_error = "an off-diagonal entry vanished"
            continue
        err = float(np.max(np.abs(np.array(eigenvalues(SymMatrix.from_dense(m))) - target_sorted)))
        resid = float(np.linalg.norm(m @ vec - lam1 * vec))
        if err >= 1e-8 or resid > 1e-8:
            last_error = f"spectrum error {err:.3e}, eigenvector residual {resid:.3e}"
            continue
        if any(abs(vec[i]) <= 1e-8 for i in want_nz):
            last_error = "eigenvector entry too small"
            continue
        return Realization(SymMatrix.from_dense(sign * m), vec, sign * lam1, err)
    raise CertificationError(f"realize_complete failed for every interior parameter ({last_error})")


def even_complete(order: int, pair_values: Sequence[float]) -> CertifiedMatrix:
    """K_order realised with every value of ``pair_values`` doubled."""
    if not isinstance(order, int) or order % 2 or order < 4:
        raise PreconditionError("even_complete needs an even order >= 4 (K2 admits no such matrix)")
    m = order // 2
    pv = list(pair_values)
    if len(pv) != m:
        raise PreconditionError(f"need {m} pair values, got {len(pv)}")
    if pv[0] == pv[1]:
        raise PreconditionError("the first two pair values must differ")
    vals = [pv[0], pv[1], pv[0], pv[1]] + [x for x in pv[2:] for _ in range(2)]
    r = realize_complete(SpectrumTarget(tuple(vals)))
    return certified(r.matrix, "complete", {"order": order, "pair_values": [float(x) for x in pv]},
                     graph=complete_graph(order))


def _clusters(sorted_vals: Sequence[float], tol: float) -> list[list[float]]:
    out: list[list[float]] = []
    for x in sorted_vals:
        if out and abs(x - out[-1][-1]) <= tol:
            out[-1].append(x)
        else:
            out.append([x])
    return out


def clique_join(a: SymMatrix, *, drop_even: bool = False, extra_pairs: Sequence[float] = (),
                tol: float = DEFAULT_TOL) -> CertifiedMatrix:
    """Join the leading block of ``a`` to a complete graph so that every eigenvalue
    of ``a`` is doubled (or, with ``drop_even``, only those of odd multiplicity
    receive a partner).  ``a``'s last row must be full off the diagonal."""
    n = a.order
    if n < 2:
        raise PreconditionError("clique_join needs a matrix of order >= 2")
    dense = a.dense()
    if np.min(np.abs(dense[-1, :-1])) <= PATTERN_TOL:
        raise PreconditionError("the last row of a must be nonzero off the diagonal")
    mu1 = float(dense[-1, -1])
    lams = eigenvalues(a)
    if drop_even:
        scale = max(1.0, max(abs(x) for x in lams))
        partners = [float(np.mean(c)) for c in _clusters(lams, 1e-9 * scale) if len(c) % 2]
    else:
        partners = list(lams)
    partners += [float(x) for x in extra_pairs for _ in range(2)]
    if not partners:
        raise PreconditionError("nothing to join: every eigenvalue already has even multiplicity")
    far = max(range(len(partners)), key=lambda i: (abs(partners[i] - mu1), -i))
    if partners[far] == mu1:
        raise PreconditionError("the clique block would be scalar")
    values = [mu1, partners[far]] + [x for i, x in enumerate(partners) if i != far]
    r = realize_complete(SpectrumTarget(tuple(values)))
    joined = hs_join(a, r.matrix, r.eigenvector, mu1).matrix
    base = pattern_of(SymMatrix.from_dense(dense[:-1, :-1]), PATTERN_TOL)
    return certified(joined, "clique_join",
                     {"order": n, "drop_even": drop_even, "extra_pairs": [float(x) for x in extra_pairs]},
                     graph=join(base, complete_graph(len(values))), tol=tol)


def join_with_clique(g: Graph, seed: int = 0, max_attempts: int = 50) -> CertifiedMatrix:
    """Certified matrix for ``g`` joined with ``K_{|g| + 2}``."""
    if g.order < 1:
        raise PreconditionError("join_with_clique needs a graph with at least one vertex")
    rng = np.random.default_rng(seed)
    n = g.order + 1
    last_exc = None
    for attempt in range(max_attempts):
        a1 = random_in_pattern(g, rng).dense()
        b = rng.uniform(0.1, 2.0, size=n - 1) * rng.choice([-1.0, 1.0], size=n - 1)
        mu = rng.uniform(-2.0, 2.0)
        a = np.zeros((n, n))
        a[:-1, :-1] = a1
        a[:-1, -1] = a[-1, :-1] = b
        a[-1, -1] = mu
        try:
            out = clique_join(SymMatrix.from_dense(a))
        except (CertificationError, PreconditionError) as exc:
            last_exc = exc
            continue
        if out.graph == join(g, complete_graph(n + 1)):
            return CertifiedMatrix(out.matrix, out.graph, out.certificate,
                                   {"name": "join_with_clique", "params": {"seed": seed, "attempt": attempt}})
    raise CertificationError(f"join_with_clique: no valid draw in {max_attempts} attempts ({last_exc})")


# -- rank two -----------------------------------------------------------------

@dataclass(frozen=True)
class Rank2Decomposition:
    """Complement of the graph as ``(K_{p1,q1} u ... u K_{pk,qk}) v K_r``.

    ``blocks[i]`` lists the vertices of the two colour classes of part ``i``.
    """

    k: int
    parts: tuple[tuple[int, int], ...]
    r: int
    all_q_positive: bool
    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()
    universal: tuple[int, ...] = ()


def recognize_rank2(g: Graph) -> Rank2Decomposition | None:
    h = complement(g)
    adj = h.adjacency()
    universal = tuple(v for v in h.vertices if len(adj[v]) == h.order - 1)
    rest = [v for v in h.vertices if v not in universal]
    sub = h.induced(rest)
    blocks = []
    for comp in components(sub):
        verts = [rest[x - 1] for x in comp]
        if len(verts) == 1:
            blocks.append(((verts[0],), ()))
            continue
        colour = {verts[0]: 0}
        stack = [verts[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in universal:
                    continue
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return None
        side0 = tuple(sorted(v for v in verts if colour[v] == 0))
        side1 = tuple(sorted(v for v in verts if colour[v] == 1))
        if any(not h.has_edge(x, y) for x in side0 for y in side1):
            return None
        if len(side0) < len(side1):
            side0, side1 = side1, side0
        blocks.append((side0, side1))
    blocks.sort(key=lambda b: (-len(b[0]), -len(b[1]), b[0]))
    parts = tuple((len(s), len(t)) for s, t in blocks)
    return Rank2Decomposition(len(parts), parts, len(universal), all(q >= 1 for _, q in parts),
                              tuple(blocks), universal)


def _rank2_gram(n: int, blocks, universal=()) -> tuple[SymMatrix, int]:
    """Gram matrix of the two-dimensional vectors assigned to each class."""
    vecs: dict[int, tuple[tuple[int, int], int]] = {}  # vertex -> (integer direction, squared scale)
    for i, (S, T) in enumerate(blocks, start=1):
        if not T:
            raise PreconditionError("singleton classes (q = 0) are not covered; use frame_realize")
        for v in S:
            vecs[v] = ((i, 1), len(S))
        for v in T:
            vecs[v] = ((1, -i), len(T))
    a_val = sum(i * i + 1 for i in range(1, len(blocks) + 1))
    rows_f = np.zeros((n, n))
    rows_q = [[Fraction(0)] * n for _ in range(n)]
    exact = True
    for v, (w, c) in vecs.items():
        for x, (z, e) in vecs.items():
            dot = w[0] * z[0] + w[1] * z[1]
            if dot == 0:
                continue
            rows_f[v - 1, x - 1] = dot / math.sqrt(c * e)
            root = math.isqrt(c * e)
            if root * root == c * e:
                rows_q[v - 1][x - 1] = Fraction(dot, root)
            else:
                exact = False
    m = SymMatrix.from_rational(rows_q) if exact else SymMatrix.from_dense(rows_f)
    return m, a_val


def _check_rank2(m: SymMatrix, a_val: float, name: str):
    vals = eigenvalues(m)
    n = m.order
    if n >= 2 and (abs(vals[-1] - a_val) > 1e-10 * max(1.0, a_val) or abs(vals[-2] - a_val) > 1e-10 * max(1.0, a_val)):
        raise CertificationError(f"{name}: top eigenvalues {vals[-2:]} differ from {a_val}")
    if n >= 3 and sorted(abs(x) for x in vals)[-3] >= 1e-10 * max(1.0, a_val):
        raise CertificationError(f"{name}: rank exceeds two")
    if m.exact is not None and isinstance(a_val, int):
        expected = RatPoly.x() ** (n - 2) * RatPoly([-a_val, 1]) ** 2
        if charpoly_exact(m) != expected:
            raise CertificationError(f"{name}: exact characteristic polynomial differs from x^(n-2)(x-a)^2")


def _rank2_graph(n: int, blocks, universal) -> Graph:
    h_edges = [(x, y) for S, T in blocks for x in S for y in T]
    h_edges += [(u, x) for u in universal for x in range(1, n + 1) if x != u]
    return complement(Graph.from_edges(n, h_edges))


def rank2_realize(k: int, parts: Sequence[Sequence[int]], r: int) -> CertifiedMatrix:
    """Gram matrix ``U^T U`` of rank two whose two nonzero eigenvalues equal
    ``a = sum_{i=1..k} (i^2 + 1)``; the pattern is the complement of
    ``(K_{p1,q1} u ... u K_{pk,qk}) v K_r`` with vertices listed class by class."""
    parts = [tuple(p) for p in parts]
    if len(parts) != k:
        raise PreconditionError(f"expected {k} parts, got {len(parts)}")
    if r < 0:
        raise PreconditionError("r must be nonnegative")
    for p, q in parts:
        if p < 1:
            raise PreconditionError("every p_i must be >= 1")
        if q < 1:
            raise PreconditionError("a part with q_i = 0 has no rank-two Gram formula; use frame_realize")
    blocks, nxt = [], 1
    for p, q in parts:
        S = tuple(range(nxt, nxt + p))
        T = tuple(range(nxt + p, nxt + p + q))
        blocks.append((S, T))
        nxt += p + q
    universal = tuple(range(nxt, nxt + r))
    n = nxt - 1 + r
    m, a_val = _rank2_gram(n, blocks, universal)
    _check_rank2(m, a_val, "rank2_realize")
    return certified(m, "rank2", {"k": k, "parts": [list(p) for p in parts], "r": r, "a": a_val},
                     graph=_rank2_graph(n, blocks, universal), require_square=n % 2 == 0)


def rank2_for_graph(g: Graph) -> CertifiedMatrix | None:
    """Rank-two certificate on ``g``'s own vertex labels when every part has q_i >= 1."""
    dec = recognize_rank2(g)
    if dec is None or not dec.all_q_positive:
        return None
    m, a_val = _rank2_gram(g.order, dec.blocks, dec.universal)
    _check_rank2(m, a_val, "rank2")
    return certified(m, "rank2", {"k": dec.k, "parts": [list(p) for p in dec.parts], "r": dec.r, "a": a_val},
                     graph=g, require_square=g.order % 2 == 0)


FRAME_EDGE_FLOOR = 1e-3
FRAME_RESIDUAL = 1e-10


def frame_realize(g: Graph, seed: int = 0, restarts: int = 50, max_steps: int = 5000) -> CertifiedMatrix | None:
    """Numerical rank-two realisation for decompositions with singleton classes.

    Vectors of a part with two classes are ``s_v (cos t, sin t)`` and
    ``t_w (-sin t, cos t)`` so the required zeros hold exactly; singleton
    vectors are free.  Least squares drives ``sum u u^T`` to a multiple of the
    identity (trace fixed at 2).
    """
    dec = recognize_rank2(g)
    if dec is None:
        return None
    n = g.order
    paired = [(S, T) for S, T in dec.blocks if T]
    singles = [S[0] for S, T in dec.blocks if not T]
    n_angles = len(paired)
    radii_vertices = [v for S, T in paired for v in S + T]
    n_params = n_angles + len(radii_vertices) + 2 * len(singles)

    def vectors(x):
        U = np.zeros((2, n))
        pos = n_angles
        for i, (S, T) in enumerate(paired):
            c, s = math.cos(x[i]), math.sin(x[i])
            for v in S:
                U[:, v - 1] = x[pos] * np.array([c, s])
                pos += 1
            for v in T:
                U[:, v - 1] = x[pos] * np.array([-s, c])
                pos += 1
        for v in singles:
            U[:, v - 1] = x[pos:pos + 2]
            pos += 2
        return U

    def residuals(x):
        U = vectors(x)
        F = U @ U.T
        return np.array([F[0, 0] - F[1, 1], 2.0 * F[0, 1], F[0, 0] + F[1, 1] - 2.0])

    zero_pairs = {(min(x, y), max(x, y)) for S, T in paired for x in S for y in T}
    want = g
    rng = np.random.default_rng(seed)
    for attempt in range(restarts):
        x0 = np.concatenate([
            rng.uniform(0, math.pi, size=n_angles),
            rng.uniform(0.5, 1.5, size=len(radii_vertices)),
            rng.uniform(-1.2, 1.2, size=2 * len(singles)),
        ])
        if n_params == 0:
            return None
        sol = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_steps)
        U = vectors(sol.x)
        F = U @ U.T
        a_val = 0.5 * float(np.trace(F))
        if a_val <= 0 or np.max(np.abs(F - a_val * np.eye(2))) > FRAME_RESIDUAL * a_val:
            continue
        A = U.T @ U
        for x, y in zero_pairs:
            A[x - 1, y - 1] = A[y - 1, x - 1] = 0.0
        ok = all(abs(A[i - 1, j - 1]) >= FRAME_EDGE_FLOOR * a_val for i, j in g.edges)
        if not ok:
            continue
        m = SymMatrix.from_dense(A)
        if pattern_of(m, PATTERN_TOL) != want:
            continue
        vals = eigenvalues(m)
        if n >= 2 and abs(vals[-1] - vals[-2]) > 1e-8 * max(1.0, a_val):
            continue
        try:
            return certified(m, "frame", {"seed": seed, "restart": attempt, "a": a_val}, graph=g,
                             require_square=n % 2 == 0)
        except CertificationError:
            continue
    return None
