"""Derivative-free search in S(G) for matrices whose eigenvalues pair up."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constructions import CertifiedMatrix, certified
from .errors import CertificationError, PreconditionError
from .graphs import Graph
from .linalg import DEFAULT_TOL, SymMatrix, eigenvalues, pattern_of, random_in_pattern

EDGE_BAND = 1e-4
START_STEP = 0.5
MIN_STEP = 1e-9
STALL_WINDOW = 250
STALL_FACTOR = 0.5


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    max_iters: int = 4000
    accept_cost: float = 1e-20
    entry_range: tuple[float, float] = (-2.0, 2.0)
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise PreconditionError("restarts and max_iters must be positive")
        if not self.accept_cost > 0:
            raise PreconditionError("accept_cost must be positive")
        lo, hi = self.entry_range
        if not lo < hi:
            raise PreconditionError("entry_range must be a nonempty interval")


@dataclass(frozen=True)
class SearchResult:
    best: SymMatrix
    cost: float
    restart: int
    sweeps: int


def _pair_cost_sorted(vals: np.ndarray) -> np.ndarray:
    d = vals[..., 1::2] - vals[..., 0::2]
    return np.sum(d * d, axis=-1)


def pairing_cost(a: SymMatrix) -> float:
    """Sum of squared gaps inside consecutive pairs of the sorted spectrum."""
    if a.order % 2:
        raise PreconditionError("pairing_cost needs an even order")
    return float(_pair_cost_sorted(np.array(eigenvalues(a))))


class _Batch:
    """Free entries of R matrices in S(G): diagonal first, then edges."""

    def __init__(self, g: Graph):
        self.n = g.order
        self.edges = sorted(g.edges)
        self.n_free = self.n + len(self.edges)
        self.rows = np.array(list(range(self.n)) + [i - 1 for i, _ in self.edges], dtype=int)
        self.cols = np.array(list(range(self.n)) + [j - 1 for _, j in self.edges], dtype=int)
        self.is_edge = np.array([False] * self.n + [True] * len(self.edges))

    def matrices(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape[:-1] + (self.n, self.n))
        out[..., self.rows, self.cols] = x
        out[..., self.cols, self.rows] = x
        return out

    def costs(self, x: np.ndarray) -> np.ndarray:
        return _pair_cost_sorted(np.linalg.eigvalsh(self.matrices(x)))

    def pack(self, a: SymMatrix) -> np.ndarray:
        d = a.dense()
        return d[self.rows, self.cols]


def _pattern_move(batch: _Batch, x: np.ndarray, f: np.ndarray, delta: np.ndarray, mask: np.ndarray):
    """Extrapolate along the last sweep's displacement (factors 1, 2, 4, ...)."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return
    base_x, d = x[idx].copy(), delta[idx]
    cur_f = f[idx].copy()
    cur_x = base_x.copy()
    scale = 1.0
    live = np.ones(idx.size, dtype=bool)
    for _ in range(12):
        trial = base_x + scale * d
        ft = batch.costs(trial)
        bad = np.any((np.abs(trial) < EDGE_BAND) & batch.is_edge, axis=1)
        better = live & ~bad & (ft < cur_f)
        cur_x[better] = trial[better]
        cur_f[better] = ft[better]
        live &= better
        if not live.any():
            break
        scale *= 2.0
    x[idx] = cur_x
    f[idx] = cur_f


def _run(g: Graph, cfg: SearchConfig) -> SearchResult:
    if g.order % 2:
        raise PreconditionError("search needs an even order")
    batch = _Batch(g)
    R = cfg.restarts
    x = np.stack([
        batch.pack(random_in_pattern(g, np.random.default_rng(cfg.seed + r), cfg.entry_range))
        for r in range(R)
    ])
    f = batch.costs(x)
    step = np.full(R, START_STEP)
    active = np.ones(R, dtype=bool)
    sweeps = 0
    edge = batch.is_edge
    history = [f.copy()]
    for sweeps in range(1, cfg.max_iters + 1):
        improved = np.zeros(R, dtype=bool)
        x_start = x.copy()
        for k in range(batch.n_free):
            idx = np.flatnonzero(active)
            if idx.size == 0:
                break
            xa, fa, h = x[idx], f[idx], step[idx]
            plus, minus = xa.copy(), xa.copy()
            plus[:, k] += h
            minus[:, k] -= h
            fp, fm = np.split(batch.costs(np.concatenate([plus, minus])), 2)
            # vertex of the parabola through (-h, fm), (0, fa), (h, fp)
            curv = fm - 2.0 * fa + fp
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(curv > 0, 0.5 * h * (fm - fp) / curv, 0.0)
            t = np.clip(t, -4.0 * h, 4.0 * h)
            vert = xa.copy()
            vert[:, k] += t
            fv = batch.costs(vert)
            cand_x = np.stack([plus[:, k], minus[:, k], vert[:, k]], axis=1)
            cand_f = np.stack([fp, fm, fv], axis=1)
            if edge[k]:
                cand_f = np.where(np.abs(cand_x) < EDGE_BAND, np.inf, cand_f)
            cand_f = np.where(np.isfinite(cand_f), cand_f, np.inf)
            pick = np.argmin(cand_f, axis=1)
            best_f = cand_f[np.arange(idx.size), pick]
            ok = best_f < fa
            rows = idx[ok]
            x[rows, k] = cand_x[np.arange(idx.size), pick][ok]
            f[rows] = best_f[ok]
            improved[rows] = True
        _pattern_move(batch, x, f, x - x_start, active & improved)
        step = np.where(active & ~improved, step * 0.5, step)
        active &= (step >= MIN_STEP) & (f > cfg.accept_cost)
        history.append(f.copy())
        if len(history) > STALL_WINDOW:
            # slow decay toward an unattained infimum; give up on that restart
            active &= f < STALL_FACTOR * history.pop(0)
        if not active.any() or (f <= cfg.accept_cost).any():
            break
    order = sorted(range(R), key=lambda r: (f[r], r))
    r = order[0]
    best = SymMatrix.from_dense(batch.matrices(x[r]))
    return SearchResult(best, float(f[r]), r, sweeps)


def minimize(g: Graph, cfg: SearchConfig = SearchConfig()) -> tuple[SymMatrix, float]:
    """Lowest pairing cost found over ``cfg.restarts`` coordinate-descent runs."""
    res = _run(g, cfg)
    return res.best, res.cost


def search_detailed(g: Graph, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    return _run(g, cfg)


def numeric_certify(g: Graph, cfg: SearchConfig = SearchConfig(), tol: float = DEFAULT_TOL,
                    result: SearchResult | None = None) -> CertifiedMatrix | None:
    """Certificate from search, or None.  None is not evidence of infeasibility."""
    res = result if result is not None else _run(g, cfg)
    if res.cost > cfg.accept_cost or pattern_of(res.best, 1e-10) != g:
        return None
    try:
        return certified(res.best, "search", {"seed": cfg.seed, "restarts": cfg.restarts,
                                              "restart": res.restart, "cost": res.cost},
                         graph=g, tol=tol)
    except CertificationError:
        return None
