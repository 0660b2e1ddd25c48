"""Certified reasons why a graph cannot carry a matrix whose eigenvalue
multiplicities are all even.

Each check returns an :class:`Obstruction` with a witness that
:func:`replay` re-verifies from scratch against the graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .errors import PreconditionError
from .graphs import Graph, all_pairs_paths, distance, is_connected, is_tree, unique_shortest_path


class ObstructionKind(str, Enum):
    PARITY = "Parity"
    TREE = "Tree"
    UNIQUE_PATH = "UniquePath"
    PENDANT_FAMILY = "PendantFamily"


@dataclass(frozen=True)
class Obstruction:
    kind: ObstructionKind
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "witness": dict(self.witness)}

    @classmethod
    def from_dict(cls, data: dict) -> "Obstruction":
        w = dict(data.get("witness", {}))
        if "X" in w:
            w["X"] = tuple(w["X"])
        if "Y" in w:
            w["Y"] = tuple(w["Y"])
        return cls(ObstructionKind(data["kind"]), w)


def _require_connected(g: Graph, name: str):
    if not is_connected(g):
        raise PreconditionError(f"{name} expects a connected graph")


def parity_no(g: Graph) -> Obstruction | None:
    if g.order % 2:
        return Obstruction(ObstructionKind.PARITY, {"order": g.order})
    return None


def tree_no(g: Graph) -> Obstruction | None:
    _require_connected(g, "tree_no")
    if is_tree(g):
        return Obstruction(ObstructionKind.TREE, {"order": g.order, "edges": g.size})
    return None


def q_lower_bound(g: Graph) -> tuple[int, tuple[int, int] | None]:
    """Lower bound ``d + 1`` on the number of distinct eigenvalues, maximised over
    vertex pairs joined by a unique shortest path of length ``d``.

    Returns the bound and a maximising pair (None for a single vertex).
    """
    _require_connected(g, "q_lower_bound")
    best, pair = 1, None
    for (u, v), (d, count) in sorted(all_pairs_paths(g).items()):
        if count == 1 and d + 1 > best:
            best, pair = d + 1, (u, v)
    return best, pair


def unique_path_no(g: Graph) -> Obstruction | None:
    _require_connected(g, "unique_path_no")
    if g.order % 2:
        raise PreconditionError("unique_path_no applies to even orders; use parity_no")
    half = g.order // 2
    bound, pair = q_lower_bound(g)
    # n eigenvalue pairs allow at most n distinct values
    if bound >= half + 1:
        u, v = pair
        return Obstruction(ObstructionKind.UNIQUE_PATH, {"u": u, "v": v, "d": bound - 1, "half_order": half})
    return None


def _pendant_shape(g: Graph, adj, v: int, X: tuple[int, int]) -> tuple[int, ...] | None:
    Y = tuple(y for y in g.vertices if y != v and y not in X)
    for y in Y:
        if adj[y] != {v}:
            return None
    return Y


def pendant_family_no(g: Graph) -> Obstruction | None:
    """Vertex ``v``, a pair ``X`` and the rest ``Y``: every ``y`` in ``Y`` is a
    pendant of ``v``.  (Edges inside ``X`` and from ``v`` to ``X`` are free.)"""
    _require_connected(g, "pendant_family_no")
    if g.order % 2 or g.order < 6:
        raise PreconditionError("pendant_family_no applies to even orders >= 6")
    adj = g.adjacency()
    for v in g.vertices:
        others = [x for x in g.vertices if x != v]
        for X in itertools.combinations(others, 2):
            Y = _pendant_shape(g, adj, v, X)
            if Y is not None:
                return Obstruction(ObstructionKind.PENDANT_FAMILY, {"v": v, "X": X, "Y": Y})
    return None


def first_obstruction(g: Graph) -> Obstruction | None:
    """Parity, tree, unique path, pendant family; first hit wins."""
    hit = parity_no(g)
    if hit:
        return hit
    hit = tree_no(g)
    if hit:
        return hit
    hit = unique_path_no(g)
    if hit:
        return hit
    if g.order >= 6:
        return pendant_family_no(g)
    return None


def all_obstructions(g: Graph) -> list[Obstruction]:
    out = [parity_no(g)]
    if is_connected(g):
        out.append(tree_no(g))
        if g.order % 2 == 0:
            out.append(unique_path_no(g))
            if g.order >= 6:
                out.append(pendant_family_no(g))
    return [o for o in out if o is not None]


def replay(g: Graph, obs: Obstruction) -> bool:
    """Re-derive the obstruction's conclusion from its witness alone."""
    w = obs.witness
    kind = obs.kind
    if kind is ObstructionKind.PARITY:
        return g.order % 2 == 1
    if kind is ObstructionKind.TREE:
        return is_tree(g)
    if kind is ObstructionKind.UNIQUE_PATH:
        u, v, d = w["u"], w["v"], w["d"]
        if g.order % 2 or not is_connected(g):
            return False
        return (u != v and distance(g, u, v) == d and unique_shortest_path(g, u, v)
                and d >= g.order // 2)
    if kind is ObstructionKind.PENDANT_FAMILY:
        v, X, Y = w["v"], tuple(w["X"]), tuple(w["Y"])
        if g.order % 2 or g.order < 6 or not is_connected(g):
            return False
        if len(X) != 2 or len(set(X) | set(Y) | {v}) != g.order or len(Y) != g.order - 3:
            return False
        adj = g.adjacency()
        independent = all(not g.has_edge(a, b) for a, b in itertools.combinations(Y, 2))
        pendant = all(adj[y] == {v} for y in Y)
        no_cross = all(not g.has_edge(x, y) for x in X for y in Y)
        covered = all(g.has_edge(v, y) for y in Y)
        return independent and pendant and no_cross and covered
    return False
