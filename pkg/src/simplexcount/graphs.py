"""Small graphs: canonical forms, statistics, supergraphs and K_{u,u} search.

Vertices are ``0..k-1`` internally; the JSON edge-list format is 1-indexed.
Adjacency is kept as Python int bitmasks, which keeps the exhaustive scans
over subsets of at most ten vertices cheap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .geom import GeometryError, PointSet, squared_distance_matrix, unit_adjacency
from .numbers import TOL

MAX_CANONICAL_K = 10

Edge = Tuple[int, int]


class GraphError(ValueError):
    pass


def _norm_edge(e: Sequence[int], k: int) -> Edge:
    i, j = int(e[0]), int(e[1])
    if i == j:
        raise GraphError(f"self-loop at vertex {i}")
    if not (0 <= i < k and 0 <= j < k):
        raise GraphError(f"edge {(i, j)} outside vertex range 0..{k - 1}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class SmallGraph:
    k: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self) -> None:
        if self.k < 0:
            raise GraphError("vertex count must be nonnegative")
        object.__setattr__(self, "edges",
                           frozenset(_norm_edge(e, self.k) for e in self.edges))

    @classmethod
    def empty(cls, k: int) -> "SmallGraph":
        return cls(k)

    @classmethod
    def complete(cls, k: int) -> "SmallGraph":
        return cls(k, frozenset(combinations(range(k), 2)))

    @classmethod
    def path(cls, k: int) -> "SmallGraph":
        return cls(k, frozenset((i, i + 1) for i in range(k - 1)))

    @classmethod
    def cycle(cls, k: int) -> "SmallGraph":
        return cls(k, frozenset((i, (i + 1) % k) for i in range(k)))

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return _adjacency(self.k, self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> List[int]:
        return _bits(self.adjacency[i])

    def degree(self, i: int) -> int:
        return bin(self.adjacency[i]).count("1")

    def degrees(self) -> List[int]:
        return [bin(a).count("1") for a in self.adjacency]

    def non_edges(self) -> List[Edge]:
        return [e for e in combinations(range(self.k), 2) if e not in self.edges]

    def with_edge(self, i: int, j: int) -> "SmallGraph":
        return SmallGraph(self.k, self.edges | {_norm_edge((i, j), self.k)})

    def complement(self) -> "SmallGraph":
        return SmallGraph(self.k, frozenset(self.non_edges()))

    def relabel(self, perm: Sequence[int]) -> "SmallGraph":
        """Image of the graph under ``i -> perm[i]``."""
        return SmallGraph(self.k, frozenset((perm[i], perm[j]) for i, j in self.edges))

    def induced(self, vertices: Sequence[int]) -> "SmallGraph":
        index = {v: n for n, v in enumerate(vertices)}
        return SmallGraph(len(vertices), frozenset(
            (index[i], index[j]) for i, j in self.edges if i in index and j in index))

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def to_json_obj(self) -> dict:
        return {"k": self.k, "edges": [[i + 1, j + 1] for i, j in self.sorted_edges()]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SmallGraph":
        k = int(obj["k"])
        return cls(k, frozenset(_norm_edge((e[0] - 1, e[1] - 1), k) for e in obj["edges"]))

    @classmethod
    def from_json(cls, text: str) -> "SmallGraph":
        return cls.from_json_obj(json.loads(text))


@lru_cache(maxsize=None)
def _adjacency(k: int, edges: FrozenSet[Edge]) -> Tuple[int, ...]:
    adj = [0] * k
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return tuple(adj)


def _bits(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# ---------------------------------------------------------------- canonical form

def _refine(g: SmallGraph) -> List[int]:
    """Stable colour refinement started from degrees; colours are canonical."""
    adj = g.adjacency
    colors = [popcount(a) for a in adj]
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in _bits(adj[v]))))
                for v in range(g.k)]
        palette = {s: n for n, s in enumerate(sorted(set(sigs)))}
        new = [palette[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_form(g: SmallGraph) -> Tuple[int, Tuple[int, ...]]:
    """Isomorphism-invariant key: equal keys exactly for isomorphic graphs.

    Vertices are split into refined degree classes, and the search runs over
    every ordering compatible with the class order. It keeps the
    lexicographically largest adjacency code, pruning any partial ordering
    whose code prefix already falls behind. The code lists, for each
    position p, the adjacencies to positions ``0..p-1``.
    """
    if g.k > MAX_CANONICAL_K:
        raise GraphError(f"canonical form supports k <= {MAX_CANONICAL_K}, got {g.k}")
    return _canonical(g.k, g.edges)


@lru_cache(maxsize=200_000)
def _canonical(k: int, edges: FrozenSet[Edge]) -> Tuple[int, Tuple[int, ...]]:
    g = SmallGraph(k, edges)
    if k == 0:
        return (0, ())
    adj = g.adjacency
    colors = _refine(g)
    slots = sorted(colors)
    best: List[int] = []
    current: List[int] = []
    placed: List[int] = []

    def search(pos: int, ahead: bool) -> None:
        nonlocal best
        if pos == k:
            if ahead or not best:
                best = list(current)
            return
        start = len(current)
        for v in range(k):
            if colors[v] != slots[pos] or v in placed:
                continue
            segment = [(adj[v] >> w) & 1 for w in placed]
            now_ahead = ahead
            if best and not ahead:
                ref = best[start:start + pos]
                if segment < ref:
                    continue
                now_ahead = segment > ref
            current.extend(segment)
            placed.append(v)
            search(pos + 1, now_ahead)
            placed.pop()
            del current[start:]

    search(0, False)
    return (k, tuple(best))


def canonical_graph(g: SmallGraph) -> SmallGraph:
    """Representative graph rebuilt from the canonical code."""
    k, code = canonical_form(g)
    edges = set()
    n = 0
    for p in range(k):
        for w in range(p):
            if code[n]:
                edges.add((w, p))
            n += 1
    return SmallGraph(k, frozenset(edges))


def key_string(g: SmallGraph) -> str:
    """Printable canonical key such as ``4:1-2,1-3``."""
    c = canonical_graph(g)
    body = ",".join(f"{i + 1}-{j + 1}" for i, j in c.sorted_edges())
    return f"{c.k}:{body}"


def all_graphs(k: int) -> List[SmallGraph]:
    """One representative per isomorphism class of graphs on ``k`` vertices."""
    return list(_all_graphs(k))


@lru_cache(maxsize=None)
def _all_graphs(k: int) -> Tuple[SmallGraph, ...]:
    pairs = list(combinations(range(k), 2))
    seen: Dict[tuple, SmallGraph] = {}
    frontier = {canonical_form(SmallGraph(k)): canonical_graph(SmallGraph(k))}
    seen.update(frontier)
    # grow by one edge at a time so that only non-isomorphic graphs are kept
    for _ in range(len(pairs)):
        nxt = {}
        for g in frontier.values():
            for h in supergraphs(g):
                key = canonical_form(h)
                if key not in seen and key not in nxt:
                    nxt[key] = canonical_graph(h)
        seen.update(nxt)
        frontier = nxt
        if not frontier:
            break
    return tuple(sorted(seen.values(), key=lambda g: (len(g.edges), g.sorted_edges())))


def supergraphs(g: SmallGraph) -> List[SmallGraph]:
    """One graph per non-edge, each adding exactly that edge."""
    return [g.with_edge(i, j) for i, j in g.non_edges()]


# ---------------------------------------------------------------- statistics

@dataclass(frozen=True)
class GraphStats:
    max_cliques: Tuple[Tuple[int, ...], ...]
    clique_number: int
    independence_number: int
    girth: Optional[int]
    odd_girth: Optional[int]
    degree_sequence: Tuple[int, ...]
    triangle_free: bool
    bipartite: bool


def maximal_cliques(g: SmallGraph) -> List[Tuple[int, ...]]:
    """All maximal cliques (Bron-Kerbosch with pivoting), sorted."""
    adj = g.adjacency
    out: List[Tuple[int, ...]] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(tuple(_bits(r)))
            return
        pivot = max(_bits(p | x), key=lambda u: popcount(p & adj[u]))
        for v in _bits(p & ~adj[pivot]):
            expand(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.k:
        expand(0, (1 << g.k) - 1, 0)
    return sorted(out)


def _bfs_dist(adj: Sequence[int], root: int) -> Dict[int, int]:
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for w in _bits(adj[v]):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def girth(g: SmallGraph) -> Optional[int]:
    adj = g.adjacency
    best = None
    for root in range(g.k):
        dist, parent = {root: 0}, {root: -1}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for w in _bits(adj[v]):
                    if w not in dist:
                        dist[w], parent[w] = dist[v] + 1, v
                        nxt.append(w)
                    elif parent[v] != w:
                        length = dist[v] + dist[w] + 1
                        best = length if best is None else min(best, length)
            frontier = nxt
    return best


def odd_girth(g: SmallGraph) -> Optional[int]:
    adj = g.adjacency
    best = None
    for root in range(g.k):
        dist = _bfs_dist(adj, root)
        for i, j in g.edges:
            if i in dist and j in dist and dist[i] == dist[j]:
                length = 2 * dist[i] + 1
                best = length if best is None else min(best, length)
    return best


def two_coloring(g: SmallGraph) -> Optional[List[int]]:
    """Proper 2-colouring (component roots get colour 0), or None."""
    adj = g.adjacency
    color = [-1] * g.k
    for root in range(g.k):
        if color[root] >= 0:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for w in _bits(adj[v]):
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def graph_stats(g: SmallGraph) -> GraphStats:
    cliques = maximal_cliques(g)
    omega = max((len(c) for c in cliques), default=0)
    alpha = max((len(c) for c in maximal_cliques(g.complement())), default=0)
    gi = girth(g)
    return GraphStats(
        max_cliques=tuple(cliques),
        clique_number=omega,
        independence_number=alpha,
        girth=gi,
        odd_girth=odd_girth(g),
        degree_sequence=tuple(sorted(g.degrees(), reverse=True)),
        triangle_free=gi is None or gi > 3,
        bipartite=two_coloring(g) is not None,
    )


def spanning_cycle_sets(g: SmallGraph) -> List[FrozenSet[int]]:
    """Vertex sets S (|S| >= 3) such that G[S] has a Hamiltonian cycle.

    Bitmask DP over Hamiltonian paths that start at the lowest vertex of S.
    """
    return list(_spanning_cycle_sets(g.k, g.edges))


@lru_cache(maxsize=4096)
def _spanning_cycle_sets(k: int, edges: FrozenSet[Edge]) -> Tuple[FrozenSet[int], ...]:
    adj = _adjacency(k, edges)
    ends = [0] * (1 << k)
    for s in range(k):
        ends[1 << s] = 1 << s
    out = []
    for mask in range(1, 1 << k):
        e = ends[mask]
        if not e:
            continue
        low = (mask & -mask).bit_length() - 1
        if popcount(mask) >= 3 and any(adj[v] >> low & 1 for v in _bits(e)):
            out.append(frozenset(_bits(mask)))
        higher = ~((1 << (low + 1)) - 1)
        for v in _bits(e):
            for w in _bits(adj[v] & ~mask & higher):
                ends[mask | (1 << w)] |= 1 << w
    return tuple(out)


def shortest_odd_cycle(g: SmallGraph) -> Optional[List[int]]:
    """Vertices of a shortest odd cycle in cyclic order (lexicographic tie-break)."""
    og = odd_girth(g)
    if og is None:
        return None
    for s in sorted(sorted(c) for c in spanning_cycle_sets(g) if len(c) == og):
        order = _hamiltonian_cycle(g, s)
        if order is not None:
            return order
    return None


def shortest_cycle(g: SmallGraph) -> Optional[List[int]]:
    gi = girth(g)
    if gi is None:
        return None
    for s in sorted(sorted(c) for c in spanning_cycle_sets(g) if len(c) == gi):
        order = _hamiltonian_cycle(g, s)
        if order is not None:
            return order
    return None


def _hamiltonian_cycle(g: SmallGraph, verts: Sequence[int]) -> Optional[List[int]]:
    verts = list(verts)
    target = len(verts)
    allowed = set(verts)

    def extend(path: List[int]) -> Optional[List[int]]:
        if len(path) == target:
            return path if g.has_edge(path[-1], path[0]) else None
        for w in g.neighbors(path[-1]):
            if w in allowed and w not in path:
                found = extend(path + [w])
                if found:
                    return found
        return None

    return extend([verts[0]])


def independence_numbers(g: SmallGraph) -> List[int]:
    """alpha(G[S]) for every subset bitmask S."""
    adj = g.adjacency
    alpha = [0] * (1 << g.k)
    for mask in range(1, 1 << g.k):
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        alpha[mask] = max(alpha[rest], 1 + alpha[rest & ~adj[v]])
    return alpha


# ---------------------------------------------------------------- bipartite

@dataclass(frozen=True)
class BipartiteGraph:
    """Left class ``0..m-1``, right class ``0..n-1``; ``left_adj[i]`` is a bitmask."""

    m: int
    n: int
    left_adj: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "left_adj", tuple(self.left_adj))
        if len(self.left_adj) != self.m:
            raise GraphError("adjacency length must equal m")
        if any(a >> self.n for a in self.left_adj):
            raise GraphError("adjacency refers to right vertices beyond n")

    @classmethod
    def from_edges(cls, m: int, n: int, edges: Iterable[Edge]) -> "BipartiteGraph":
        adj = [0] * m
        for i, j in edges:
            if not (0 <= i < m and 0 <= j < n):
                raise GraphError(f"edge {(i, j)} out of range")
            adj[i] |= 1 << j
        return cls(m, n, tuple(adj))

    @classmethod
    def complete(cls, m: int, n: int) -> "BipartiteGraph":
        return cls(m, n, tuple([(1 << n) - 1] * m))

    def edges(self) -> List[Edge]:
        return [(i, j) for i in range(self.m) for j in _bits(self.left_adj[i])]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.left_adj[i] >> j & 1)


def contains_kuu(b: BipartiteGraph, u: int) -> bool:
    """Whether some u left and u right vertices are fully joined.

    Depth-first choice of left vertices in increasing order, carrying the
    common right neighbourhood and pruning once it drops below u.
    """
    if u < 1:
        raise GraphError("u must be at least 1")
    if u > b.m or u > b.n:
        return False
    cands = [i for i in range(b.m) if popcount(b.left_adj[i]) >= u]

    def search(start: int, chosen: int, common: int) -> bool:
        if chosen == u:
            return True
        for idx in range(start, len(cands)):
            if len(cands) - idx < u - chosen:
                return False
            nxt = common & b.left_adj[cands[idx]]
            if popcount(nxt) >= u and search(idx + 1, chosen + 1, nxt):
                return True
        return False

    return search(0, 0, (1 << b.n) - 1)


# ---------------------------------------------------------------- from points

def _check_diameter(points: PointSet, tol: float) -> None:
    if len(points) < 2:
        raise GraphError("a diameter graph needs at least two points")
    d2 = squared_distance_matrix(points)
    i, j = divmod(int(d2.argmax()), len(points))
    if abs(d2[i, j] - 1.0) > tol:
        raise GraphError(
            f"diameter condition violated: points {i + 1} and {j + 1} have squared "
            f"distance {d2[i, j]:.12g}, but the maximum must be 1")


def geometric_graph(p: PointSet, mode: str = "unit", tol: float = TOL,
                    other: Optional[PointSet] = None):
    """Unit-distance (or diameter) graph of a point set.

    With ``other`` the result is the bipartite graph between the two sets.
    In diameter mode the precondition is that the largest pairwise
    distance in the vertex set equals 1.
    """
    if mode not in ("unit", "diameter"):
        raise GraphError(f"unknown mode {mode!r}")
    if other is not None and other.dim != p.dim:
        raise GeometryError(f"dimension mismatch: {p.dim} vs {other.dim}")
    if mode == "diameter":
        union = p if other is None else PointSet(p.points + other.points, tol=0.0)
        _check_diameter(union, tol)
    if other is None:
        adj = unit_adjacency(p, tol=tol)
        edges = [(i, j) for i in range(len(p)) for j in range(i + 1, len(p)) if adj[i, j]]
        return SmallGraph(len(p), frozenset(edges))
    adj = unit_adjacency(p, other, tol=tol)
    return BipartiteGraph(len(p), len(other), tuple(
        sum(1 << j for j in range(len(other)) if adj[i, j]) for i in range(len(p))))
