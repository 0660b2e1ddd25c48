"""Symmetric matrices, eigenvalues, exact characteristic polynomials and the
square-characteristic-polynomial certificate."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .graphs import Graph
from .poly import RatPoly, poly_square_root

DEFAULT_TOL = 1e-8


def _is_rational_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric matrix stored as its row-major upper triangle.

    ``exact`` is present only when every entry is rational by construction.
    """

    order: int
    upper: tuple[float, ...]
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        need = self.order * (self.order + 1) // 2
        if len(self.upper) != need:
            raise ValueError(f"order {self.order} needs {need} upper-triangle entries, got {len(self.upper)}")
        if self.exact is not None and len(self.exact) != need:
            raise ValueError("exact entries do not match the order")

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_dense(cls, a, *, check_tol: float = 1e-12) -> "SymMatrix":
        arr = np.asarray(a, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
        if arr.size and np.max(np.abs(arr - arr.T)) > check_tol * scale:
            raise ValueError("matrix is not symmetric")
        iu = np.triu_indices(arr.shape[0])
        return cls(arr.shape[0], tuple(float(x) for x in arr[iu]))

    @classmethod
    def from_rational(cls, rows: Sequence[Sequence]) -> "SymMatrix":
        """Exact matrix from rows of ints, Fractions or ``"p/q"`` strings."""
        n = len(rows)
        fr = [[Fraction(x) for x in row] for row in rows]
        if any(len(r) != n for r in fr):
            raise ValueError("rows must form a square matrix")
        for i in range(n):
            for j in range(i):
                if fr[i][j] != fr[j][i]:
                    raise ValueError("matrix is not symmetric")
        exact = tuple(fr[i][j] for i in range(n) for j in range(i, n))
        return cls(n, tuple(float(x) for x in exact), exact)

    @classmethod
    def from_upper(cls, order: int, values: Sequence, exact: bool | None = None) -> "SymMatrix":
        if exact is None:
            exact = all(_is_rational_scalar(v) for v in values)
        if exact:
            fr = tuple(Fraction(v) for v in values)
            return cls(order, tuple(float(v) for v in fr), fr)
        return cls(order, tuple(float(v) for v in values))

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls.from_rational([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> "SymMatrix":
        n = len(values)
        if all(_is_rational_scalar(v) for v in values):
            return cls.from_rational([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])
        return cls.from_dense(np.diag(np.asarray(values, dtype=float)))

    # -- views ----------------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def dense(self) -> np.ndarray:
        n = self.order
        out = np.zeros((n, n))
        iu = np.triu_indices(n)
        out[iu] = self.upper
        out.T[iu] = self.upper
        return out

    def exact_rows(self) -> list[list[Fraction]]:
        if self.exact is None:
            raise PreconditionError("matrix carries no exact entries")
        n = self.order
        rows = [[Fraction(0)] * n for _ in range(n)]
        k = 0
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = self.exact[k]
                k += 1
        return rows

    def entry(self, i: int, j: int):
        """0-based entry; exact value when available."""
        if i > j:
            i, j = j, i
        k = i * self.order - i * (i - 1) // 2 + (j - i)
        return self.exact[k] if self.exact is not None else self.upper[k]

    def diag(self) -> list:
        return [self.entry(i, i) for i in range(self.order)]

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.dense()))

    # -- transformations ------------------------------------------------------
    def affine(self, alpha=1, beta=0) -> "SymMatrix":
        """``alpha * A + beta * I``; stays exact when A, alpha and beta are rational."""
        if alpha == 0:
            raise PreconditionError("affine rescaling needs alpha != 0")
        if self.exact is not None and _is_rational_scalar(alpha) and _is_rational_scalar(beta):
            rows = self.exact_rows()
            n = self.order
            return SymMatrix.from_rational(
                [[alpha * rows[i][j] + (beta if i == j else 0) for j in range(n)] for i in range(n)]
            )
        return SymMatrix.from_dense(float(alpha) * self.dense() + float(beta) * np.eye(self.order))

    def permuted(self, perm: Sequence[int]) -> "SymMatrix":
        """Matrix whose row/column ``k`` is row/column ``perm[k]`` of this one (0-based)."""
        perm = list(perm)
        if sorted(perm) != list(range(self.order)):
            raise ValueError("perm must be a permutation of 0..n-1")
        if self.exact is not None:
            rows = self.exact_rows()
            return SymMatrix.from_rational([[rows[p][q] for q in perm] for p in perm])
        d = self.dense()
        return SymMatrix.from_dense(d[np.ix_(perm, perm)])

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"SymMatrix(order={self.order}, {kind})"


# -- pattern ------------------------------------------------------------------

def pattern_of(a: SymMatrix, zero_tol: float = 1e-10) -> Graph:
    if zero_tol < 0:
        raise PreconditionError("zero_tol must be nonnegative")
    d = a.dense()
    n = a.order
    return Graph.from_edges(
        n, ((i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if abs(d[i, j]) > zero_tol)
    )


# -- eigenvalues --------------------------------------------------------------

def jacobi_eigh(a: np.ndarray, rel_tol: float = 1e-13, max_sweeps: int = 60):
    """Cyclic Jacobi rotations.  Returns ``(eigenvalues, eigenvectors)`` unsorted;
    column ``k`` of the vector array belongs to eigenvalue ``k``."""
    m = np.array(a, dtype=float, copy=True)
    n = m.shape[0]
    v = np.eye(n)
    total = np.linalg.norm(m)
    if n < 2 or total == 0.0:
        return np.diag(m).copy(), v
    target = rel_tol * total
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.triu(m, 1) ** 2)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if apq == 0.0:
                    continue
                diff = m[q, q] - m[p, p]
                if abs(diff) > 1e150 * abs(apq):
                    t = apq / diff  # limit of the formula below; avoids overflow
                else:
                    theta = diff / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                mp = m[:, p].copy()
                mq = m[:, q].copy()
                m[:, p] = c * mp - s * mq
                m[:, q] = s * mp + c * mq
                mp = m[p, :].copy()
                mq = m[q, :].copy()
                m[p, :] = c * mp - s * mq
                m[q, :] = s * mp + c * mq
                m[p, q] = m[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(m).copy(), v


def eigenvalues(a: SymMatrix) -> list[float]:
    d = a.dense()
    if not np.all(np.isfinite(d)):
        raise ValueError("matrix has a non-finite entry")
    vals, _ = jacobi_eigh(d)
    return sorted(float(x) for x in vals)


def eigh(a: SymMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Sorted eigenvalues and matching orthonormal eigenvector columns."""
    d = a.dense()
    if not np.all(np.isfinite(d)):
        raise ValueError("matrix has a non-finite entry")
    vals, vecs = jacobi_eigh(d)
    idx = np.argsort(vals, kind="stable")
    return vals[idx], vecs[:, idx]


# -- exact characteristic polynomial -----------------------------------------

def charpoly_exact(a: SymMatrix) -> RatPoly:
    """det(xI - A) by the Faddeev-LeVerrier recursion over the rationals."""
    if a.exact is None:
        raise PreconditionError("charpoly_exact needs exact (rational) entries")
    A = a.exact_rows()
    n = a.order
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
        prev = M
        M = [[sum((A[i][t] * prev[t][j] for t in range(n) if prev[t][j]), Fraction(0)) for j in range(n)]
             for i in range(n)]
        for i in range(n):
            M[i][i] += coeffs[n - k + 1]
        tr = sum((A[i][t] * M[t][i] for i in range(n) for t in range(n)), Fraction(0))
        coeffs[n - k] = -tr / k
    return RatPoly(coeffs)


# -- certificate --------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumCertificate:
    eigenvalues: tuple[float, ...]
    pair_gaps: tuple[float, ...]
    max_gap: float
    tol: float
    is_square: bool
    mode: str
    odd_order: bool = False
    sqrt_poly: RatPoly | None = field(default=None, compare=False)

    @property
    def spread(self) -> float:
        return (self.eigenvalues[-1] - self.eigenvalues[0]) if self.eigenvalues else 0.0

    def to_dict(self) -> dict:
        out = {
            "mode": self.mode,
            "is_square": self.is_square,
            "eigenvalues": list(self.eigenvalues),
            "pair_gaps": list(self.pair_gaps),
            "max_gap": self.max_gap,
            "tol": self.tol,
        }
        if self.odd_order:
            out["odd_order"] = True
        if self.sqrt_poly is not None:
            out["sqrt_poly"] = [str(c) for c in self.sqrt_poly.coeffs]
        return out


def pair_gaps(sorted_vals: Sequence[float]) -> list[float]:
    return [abs(sorted_vals[2 * i + 1] - sorted_vals[2 * i]) for i in range(len(sorted_vals) // 2)]


def numeric_square_verdict(sorted_vals: Sequence[float], tol: float) -> bool:
    n = len(sorted_vals)
    if n % 2:
        return False
    if n == 0:
        return True
    spread = sorted_vals[-1] - sorted_vals[0]
    return max(pair_gaps(sorted_vals)) <= tol * max(1.0, spread)


def certify_square(a: SymMatrix, tol: float = DEFAULT_TOL) -> SpectrumCertificate:
    """Exact verdict from the characteristic polynomial when entries are rational,
    otherwise by pairing the sorted eigenvalues."""
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    vals = eigenvalues(a)
    gaps = pair_gaps(vals)
    max_gap = max(gaps) if gaps else 0.0
    odd = a.order % 2 == 1
    if a.exact is not None:
        root = poly_square_root(charpoly_exact(a))
        return SpectrumCertificate(tuple(vals), tuple(gaps), max_gap, tol, root is not None,
                                   "exact", odd, root)
    return SpectrumCertificate(tuple(vals), tuple(gaps), max_gap, tol,
                               numeric_square_verdict(vals, tol), "numeric", odd)


# -- plain-text matrix format -------------------------------------------------
#   "n; a11 a12 ... a1n a22 ... ann"   (row-major upper triangle)

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_matrix_text(text: str) -> SymMatrix:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    head, sep, rest = body.partition(";")
    if not sep:
        raise ValueError("matrix text must start with 'n;'")
    try:
        n = int(head.strip())
    except ValueError:
        raise ValueError(f"bad order {head.strip()!r}") from None
    if n < 1:
        raise ValueError("order must be positive")
    tokens = rest.split()
    need = n * (n + 1) // 2
    if len(tokens) != need:
        raise ValueError(f"order {n} needs {need} upper-triangle entries, got {len(tokens)}")
    if all(_RATIONAL.match(t) for t in tokens):
        return SymMatrix.from_upper(n, [Fraction(t) for t in tokens], exact=True)
    try:
        vals = [float(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"bad matrix entry: {exc}") from None
    return SymMatrix.from_upper(n, vals, exact=False)


def format_matrix_text(a: SymMatrix) -> str:
    if a.exact is not None:
        body = " ".join(str(x) for x in a.exact)
    else:
        body = " ".join(repr(x) for x in a.upper)
    return f"{a.order}; {body}\n"


def random_in_pattern(g: Graph, rng: np.random.Generator, entry_range=(-2.0, 2.0),
                      min_abs: float = 0.1) -> SymMatrix:
    """Uniform diagonal and edge entries; edge entries resampled while ``|x| < min_abs``."""
    lo, hi = entry_range
    n = g.order
    m = np.zeros((n, n))
    m[np.diag_indices(n)] = rng.uniform(lo, hi, size=n)
    for i, j in sorted(g.edges):
        x = rng.uniform(lo, hi)
        while abs(x) < min_abs:
            x = rng.uniform(lo, hi)
        m[i - 1, j - 1] = m[j - 1, i - 1] = x
    return SymMatrix.from_dense(m)
