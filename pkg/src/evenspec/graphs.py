"""Small simple graphs: representation, graph6 I/O, operations and enumeration.

Vertices are numbered ``1..n``.  Edges are stored once as ordered pairs
``(i, j)`` with ``i < j``.  Self-loops never appear in the edge set; the
tensor construction marks free diagonal entries through the separate
``loops`` vertex set instead.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, Graph6Error, PreconditionError

GRAPH6_MAX_ORDER = 62
CANONICAL_MAX_ORDER = 9
ENUMERATE_MAX_ORDER = 8

INFINITY = float("inf")


@dataclass(frozen=True)
class Graph:
    order: int
    edges: frozenset = field(default_factory=frozenset)
    loops: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order!r}")
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.order):
                raise ValueError(f"edge {e!r} is not a pair 1 <= i < j <= {self.order}")
        for v in self.loops:
            if not 1 <= v <= self.order:
                raise ValueError(f"loop vertex {v!r} out of range")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[Sequence[int]] = (), loops: Iterable[int] = ()) -> "Graph":
        """Build a graph from unordered pairs in any orientation."""
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {(u, v)!r} given as an edge; use loops=")
            norm.add((min(u, v), max(u, v)))
        return cls(order, frozenset(norm), frozenset(loops))

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.order + 1)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for i, j in self.edges:
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return out

    def adjacency(self) -> list[set[int]]:
        """Neighbor sets indexed by vertex (index 0 unused)."""
        adj = [set() for _ in range(self.order + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degrees(self) -> list[int]:
        adj = self.adjacency()
        return [len(adj[v]) for v in self.vertices]

    def relabel(self, mapping: Sequence[int]) -> "Graph":
        """Rename vertex ``v`` to ``mapping[v - 1]``."""
        if sorted(mapping) != list(self.vertices):
            raise ValueError("mapping must be a permutation of 1..n")
        return Graph.from_edges(
            self.order,
            ((mapping[i - 1], mapping[j - 1]) for i, j in self.edges),
            (mapping[v - 1] for v in self.loops),
        )

    def induced(self, keep: Sequence[int]) -> "Graph":
        """Subgraph induced on ``keep``, renumbered in the given order."""
        index = {v: k + 1 for k, v in enumerate(keep)}
        return Graph.from_edges(
            len(keep),
            ((index[i], index[j]) for i, j in self.edges if i in index and j in index),
            (index[v] for v in self.loops if v in index),
        )

    def __repr__(self):
        tag = f", loops={sorted(self.loops)}" if self.loops else ""
        return f"Graph(order={self.order}, edges={sorted(self.edges)}{tag})"


# -- named families -----------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 1."""
    return Graph.from_edges(leaves + 1, ((1, v) for v in range(2, leaves + 2)))


def complete_bipartite(p: int, q: int) -> Graph:
    return Graph.from_edges(p + q, ((i, p + j) for i in range(1, p + 1) for j in range(1, q + 1)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shift = g.order
    return Graph.from_edges(
        g.order + h.order,
        list(g.edges) + [(i + shift, j + shift) for i, j in h.edges],
        list(g.loops) + [v + shift for v in h.loops],
    )


def cycle_with_tail(k: int, m: int) -> Graph:
    """C_k with a path on ``m`` vertices glued at cycle vertex 1 (k + m - 1 vertices)."""
    edges = [(i, i + 1) for i in range(1, k)] + [(k, 1)]
    prev = 1
    for t in range(m - 1):
        new = k + 1 + t
        edges.append((prev, new))
        prev = new
    return Graph.from_edges(k + m - 1, edges)


# -- graph6 -------------------------------------------------------------------

def _upper_pairs(n: int):
    # graph6 bit order: column j, then row i < j (0-based)
    for j in range(1, n):
        for i in range(j):
            yield i, j


def write_graph6(g: Graph) -> str:
    if g.loops:
        raise Graph6Error("graph6 cannot encode self-loops")
    n = g.order
    if n > GRAPH6_MAX_ORDER:
        raise Graph6Error(f"short-form graph6 supports n <= {GRAPH6_MAX_ORDER}, got {n}")
    bits = [1 if (i + 1, j + 1) in g.edges else 0 for i, j in _upper_pairs(n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = (value << 1) | b
        out.append(chr(value + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    codes = [ord(c) for c in s]
    for pos, c in enumerate(codes):
        if not 63 <= c <= 126:
            raise Graph6Error(f"byte {c!r} outside the printable graph6 range 63..126", pos)
    n = codes[0] - 63
    if n == 63:
        raise Graph6Error("long-form graph6 header (n > 62) is not supported", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(codes) < 1 + nbytes:
        raise Graph6Error(f"truncated: expected {1 + nbytes} bytes for n={n}, got {len(codes)}", len(codes))
    if len(codes) > 1 + nbytes:
        raise Graph6Error("trailing garbage after edge data", 1 + nbytes)
    bits = []
    for c in codes[1:]:
        v = c - 63
        bits.extend((v >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", len(codes) - 1)
    edges = [(i + 1, j + 1) for (i, j), b in zip(_upper_pairs(n), bits) if b]
    return Graph.from_edges(n, edges)


# -- operations ---------------------------------------------------------------

def complement(g: Graph) -> Graph:
    if g.loops:
        raise PreconditionError("complement is defined for loopless graphs only")
    return Graph.from_edges(
        g.order, (e for e in itertools.combinations(g.vertices, 2) if e not in g.edges)
    )


def join(g: Graph, h: Graph) -> Graph:
    if g.loops or h.loops:
        raise PreconditionError("join is defined for loopless graphs only")
    shift = g.order
    cross = [(i, shift + j) for i in g.vertices for j in h.vertices]
    return Graph.from_edges(
        g.order + h.order,
        list(g.edges) + [(i + shift, j + shift) for i, j in h.edges] + cross,
    )


def tensor_graph(g: Graph, h: Graph) -> Graph:
    """Categorical product; loops of ``g`` stand for nonzero diagonal entries.

    Vertex ``(u, u')`` becomes ``(u - 1) * |h| + u'`` so that the numbering
    agrees with ``numpy.kron`` of the corresponding matrices.
    """
    m = h.order
    g_rel = set(g.edges) | {(u, u) for u in g.loops}
    edges = set()
    for u, v in g_rel:
        for a, b in h.edges:
            for x, y in ((a, b), (b, a)):
                p = (u - 1) * m + x
                q = (v - 1) * m + y
                if p != q:
                    edges.add((min(p, q), max(p, q)))
    return Graph.from_edges(g.order * m, edges)


def blowup_vertex(g: Graph, v: int, size: int) -> Graph:
    """Replace ``v`` by a clique of ``size`` vertices sharing v's neighbourhood.

    The clique occupies positions ``v .. v + size - 1``; later vertices shift up.
    """
    if not 1 <= v <= g.order:
        raise PreconditionError(f"vertex {v} out of range")
    if size < 1:
        raise PreconditionError("blow-up size must be positive")

    def new_ids(x):
        if x < v:
            return [x]
        if x == v:
            return list(range(v, v + size))
        return [x + size - 1]

    edges = [(a, b) for a, b in itertools.combinations(new_ids(v), 2)]
    for i, j in g.edges:
        edges.extend(itertools.product(new_ids(i), new_ids(j)))
    return Graph.from_edges(g.order + size - 1, edges)


# -- distances ----------------------------------------------------------------

def _check_vertex(g: Graph, v: int):
    if not (isinstance(v, int) and 1 <= v <= g.order):
        raise PreconditionError(f"vertex {v!r} out of range 1..{g.order}")


def _bfs_counts(g: Graph, source: int, adj=None):
    """Distances and shortest-path counts from ``source``."""
    adj = adj or g.adjacency()
    dist = {source: 0}
    count = {source: 1}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                count[y] = count[x]
                queue.append(y)
            elif dist[y] == dist[x] + 1:
                count[y] += count[x]
    return dist, count


def distance(g: Graph, u: int, v: int) -> float:
    _check_vertex(g, u)
    _check_vertex(g, v)
    dist, _ = _bfs_counts(g, u)
    return dist.get(v, INFINITY)


def shortest_path_count(g: Graph, u: int, v: int) -> int:
    _check_vertex(g, u)
    _check_vertex(g, v)
    _, count = _bfs_counts(g, u)
    return count.get(v, 0)


def unique_shortest_path(g: Graph, u: int, v: int) -> bool:
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        raise PreconditionError("unique_shortest_path needs two distinct vertices")
    dist, count = _bfs_counts(g, u)
    if v not in dist:
        raise PreconditionError(f"vertices {u} and {v} lie in different components")
    return count[v] == 1


def all_pairs_paths(g: Graph) -> dict[tuple[int, int], tuple[int, int]]:
    """``(u, v) -> (distance, number of shortest paths)`` for connected pairs u != v."""
    adj = g.adjacency()
    out = {}
    for u in g.vertices:
        dist, count = _bfs_counts(g, u, adj)
        for v, d in dist.items():
            if v != u:
                out[u, v] = (d, count[v])
    return out


def is_connected(g: Graph) -> bool:
    if g.order == 0:
        return True
    dist, _ = _bfs_counts(g, 1)
    return len(dist) == g.order


def is_tree(g: Graph) -> bool:
    return g.order >= 1 and g.size == g.order - 1 and is_connected(g)


def components(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    seen = set()
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        dist, _ = _bfs_counts(g, s, adj)
        comp = sorted(dist)
        seen.update(comp)
        comps.append(comp)
    return comps


# -- canonical labelling ------------------------------------------------------

def _refine(adj_bits: list[int], n: int) -> list[list[int]]:
    """Ordered equitable partition by iterated neighbour-colour counts.

    The cell order depends only on isomorphism-invariant data.
    """
    colour = [bin(adj_bits[v]).count("1") for v in range(n)]
    while True:
        sig = []
        for v in range(n):
            nb = sorted(colour[w] for w in range(n) if adj_bits[v] >> w & 1)
            sig.append((colour[v], tuple(nb)))
        keys = sorted(set(sig))
        new = [keys.index(s) for s in sig]
        if len(keys) == len(set(colour)):
            colour = new
            break
        colour = new
    cells = [[] for _ in range(max(colour) + 1)] if n else []
    for v in range(n):
        cells[colour[v]].append(v)
    return cells


def canonical_form(g: Graph) -> tuple[bytes, tuple[int, ...]]:
    """Canonical label and the vertex order that realises it.

    The label is the lexicographically smallest graph6 bit string over all
    vertex orders compatible with the refined degree partition (the partition
    is an isomorphism invariant, so labels agree exactly on isomorphic graphs).
    ``order[k]`` is the original vertex placed at canonical position ``k + 1``.
    """
    n = g.order
    if n > CANONICAL_MAX_ORDER:
        raise CapacityError(f"canonical labelling is brute force; n <= {CANONICAL_MAX_ORDER}")
    if g.loops:
        raise PreconditionError("canonical labelling is defined for loopless graphs")
    adj_bits = [0] * n
    for i, j in g.edges:
        adj_bits[i - 1] |= 1 << (j - 1)
        adj_bits[j - 1] |= 1 << (i - 1)
    cells = _refine(adj_bits, n)
    slot_cell = [c for c, cell in enumerate(cells) for _ in cell]

    best_cols: list[int] | None = None
    best_order: list[int] | None = None
    order: list[int] = []
    cols: list[int] = []
    used = [False] * n

    def column(w):
        # bits of w against earlier vertices, first earlier vertex most significant
        col = 0
        for x in order:
            col = (col << 1) | (adj_bits[w] >> x & 1)
        return col

    def search(depth):
        nonlocal best_cols, best_order
        if best_cols is not None and cols > best_cols[:depth]:
            return
        if depth == n:
            if best_cols is None or cols < best_cols:
                best_cols = list(cols)
                best_order = list(order)
            return
        tried = []
        for w in cells[slot_cell[depth]]:
            if used[w]:
                continue
            # twins (same neighbourhood apart from each other) give identical subtrees
            mask_w = adj_bits[w]
            if any((mask_w & ~(1 << t)) == (adj_bits[t] & ~(1 << w)) for t in tried):
                continue
            tried.append(w)
            used[w] = True
            order.append(w)
            cols.append(column(w))
            search(depth + 1)
            cols.pop()
            order.pop()
            used[w] = False

    search(0)
    canon_edges = []
    pos = {v: k for k, v in enumerate(best_order or [])}
    for i, j in g.edges:
        a, b = pos[i - 1] + 1, pos[j - 1] + 1
        canon_edges.append((a, b))
    label = write_graph6(Graph.from_edges(n, canon_edges)).encode("ascii")
    return label, tuple(v + 1 for v in (best_order or []))


def canonical_label(g: Graph) -> bytes:
    return canonical_form(g)[0]


def canonical_graph(g: Graph) -> Graph:
    return parse_graph6(canonical_label(g).decode("ascii"))


def find_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """A list ``m`` with ``g.relabel(m) == h``, or None if not isomorphic."""
    if g.order != h.order or g.size != h.size:
        return None
    lg, og = canonical_form(g)
    lh, oh = canonical_form(h)
    if lg != lh:
        return None
    mapping = [0] * g.order
    for a, b in zip(og, oh):
        mapping[a - 1] = b
    return mapping


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


# -- enumeration --------------------------------------------------------------

def _extend_by_vertex(graphs: Iterable[Graph], nonempty: bool = True) -> list[Graph]:
    found: dict[bytes, Graph] = {}
    for base in graphs:
        n = base.order + 1
        for r in range(1 if nonempty else 0, n):
            for nbrs in itertools.combinations(range(1, n), r):
                cand = Graph(n, base.edges | {(u, n) for u in nbrs})
                label = canonical_label(cand)
                if label not in found:
                    found[label] = parse_graph6(label.decode("ascii"))
    return [found[k] for k in sorted(found, key=lambda k: (found[k].size, k))]


def enumerate_connected(n: int) -> list[Graph]:
    """One canonical representative per class of connected graphs on n vertices.

    Every connected graph has a vertex whose removal leaves it connected, so
    the classes on n vertices are reached by attaching a new vertex to each
    class on n - 1 vertices.  Results are sorted by (edge count, label).
    """
    if not isinstance(n, int) or n < 1 or n > ENUMERATE_MAX_ORDER:
        raise CapacityError(f"enumerate_connected supports 1 <= n <= {ENUMERATE_MAX_ORDER}, got {n!r}")
    level = [Graph(1)]
    for _ in range(1, n):
        level = _extend_by_vertex(level)
    return level


def enumerate_trees(n: int) -> list[Graph]:
    """Unlabelled trees on n vertices, grown leaf by leaf."""
    if not isinstance(n, int) or n < 1 or n > CANONICAL_MAX_ORDER:
        raise CapacityError(f"enumerate_trees supports 1 <= n <= {CANONICAL_MAX_ORDER}")
    level = [Graph(1)]
    for size in range(2, n + 1):
        found: dict[bytes, Graph] = {}
        for base in level:
            for u in base.vertices:
                cand = Graph(size, base.edges | {(u, size)})
                label = canonical_label(cand)
                found.setdefault(label, parse_graph6(label.decode("ascii")))
        level = [found[k] for k in sorted(found)]
    return level
