"""Undirected graph core: representation, text format, cuts, and disjoint paths.

Graphs are simple and undirected, with nodes labelled 0..n-1. Everything
downstream (condition checkers, the consensus protocol, the simulator) leans
on two guarantees provided here:

* ``vertex_connectivity`` agrees with an exhaustive cut search on small
  graphs, and
* ``canonical_disjoint_paths`` is a pure function of the graph structure, so
  every caller that fixes paths for a node pair fixes the *same* paths.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

BRUTE_FORCE_NODE_LIMIT = 12


class GraphFormatError(ValueError):
    """Raised when graph text input cannot be parsed."""


class InsufficientPathsError(ValueError):
    """Raised when fewer node-disjoint paths exist than were requested.

    Attributes
    ----------
    requested : int
        Number of paths the caller asked for.
    achieved : int
        Maximum number of pairwise node-disjoint paths that exist.
    paths : tuple
        A maximum-size family of disjoint paths, in canonical order.
    """

    def __init__(self, u: int, v: int, requested: int, paths: tuple):
        self.u = u
        self.v = v
        self.requested = requested
        self.achieved = len(paths)
        self.paths = paths
        super().__init__(
            f"only {self.achieved} node-disjoint paths exist between "
            f"{u} and {v}, {requested} requested"
        )


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on nodes 0..n-1.

    ``edges`` must be canonical: each pair (u, v) with u < v, strictly
    sorted, no duplicates. Use :meth:`from_edges` to build from arbitrary
    pair iterables.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        prev = None
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge {e!r} out of range for n={self.n}")
            if prev is not None and e <= prev:
                raise ValueError("edges must be strictly sorted and unique")
            prev = e

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph, normalising edge order and rejecting duplicates."""
        seen = set()
        for pair in pairs:
            u, v = pair
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e!r}")
            seen.add(e)
        return cls(n, tuple(sorted(seen)))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        sets: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            sets[u].add(v)
            sets[v].add(u)
        return tuple(frozenset(s) for s in sets)

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        """Neighbourhoods as bitmasks, for subset-enumeration hot loops."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def sorted_neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in self.adjacency)

    def neighbors(self, u: int) -> frozenset:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def is_complete(self) -> bool:
        return 2 * len(self.edges) == self.n * (self.n - 1)


def parse_graph(text: str) -> Graph:
    """Parse the plain text graph format.

    Lines starting with ``#`` are comments. The first significant line is
    the node count n; every following significant line is an edge ``u v``
    with 0 <= u < v < n. Duplicate or out-of-range edges are format errors.
    """
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise GraphFormatError(
                    f"line {lineno}: expected node count, got {line!r}"
                )
            try:
                n = int(parts[0])
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: node count is not an integer: {line!r}"
                ) from None
            if n < 0:
                raise GraphFormatError(f"line {lineno}: negative node count")
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(
                f"line {lineno}: edge endpoints are not integers: {line!r}"
            ) from None
        if not (0 <= u < v < n):
            raise GraphFormatError(
                f"line {lineno}: edge ({u}, {v}) violates 0 <= u < v < {n}"
            )
        if (u, v) in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("empty input: no node count line")
    return Graph(n, tuple(sorted(edges)))


def format_graph(g: Graph) -> str:
    """Serialise a graph to the text format; round-trips with parse_graph."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def gamma(g: Graph, nodes: Iterable[int]) -> frozenset:
    """External neighbourhood: nodes adjacent to the set but not in it."""
    s = frozenset(nodes)
    out: set[int] = set()
    for u in s:
        out |= g.adjacency[u]
    return frozenset(out - s)


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("min_degree of an empty graph is undefined")
    return min(len(g.adjacency[u]) for u in range(g.n))


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.sorted_neighbors[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == g.n


def _components_after_removal(g: Graph, removed: frozenset) -> int:
    remaining = [u for u in range(g.n) if u not in removed]
    seen: set[int] = set()
    comps = 0
    for start in remaining:
        if start in seen:
            continue
        comps += 1
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if v not in removed and v not in seen:
                    seen.add(v)
                    queue.append(v)
    return comps


def brute_force_min_vertex_cut(g: Graph) -> int:
    """Size of a minimum vertex cut, by exhaustive subset search.

    Complete graphs have no cut; by convention the result is n - 1 so it
    matches ``vertex_connectivity``. Only intended for n <= 12.
    """
    if g.n < 2:
        raise ValueError("vertex cuts are undefined for graphs with n < 2")
    if g.n > BRUTE_FORCE_NODE_LIMIT:
        raise ValueError(
            f"brute force cut search capped at n <= {BRUTE_FORCE_NODE_LIMIT}"
        )
    if g.is_complete():
        return g.n - 1
    for size in range(g.n - 1):
        for cut in itertools.combinations(range(g.n), size):
            if _components_after_removal(g, frozenset(cut)) >= 2:
                return size
    raise AssertionError("non-complete graph must have a vertex cut")


# --- unit-capacity max flow on the node-split digraph ---
#
# Node i becomes an arc in(i) -> out(i) of capacity 1 (in(i) = 2i,
# out(i) = 2i+1); each undirected edge {a, b} becomes out(a) -> in(b) and
# out(b) -> in(a). Max flow out(u) -> in(v) then equals the number of
# node-disjoint u-v paths (endpoints shared). Augmentation is BFS with
# neighbours explored in ascending order, which makes both the flow value
# and the decomposition below deterministic.


def _build_flow_net(g: Graph, edge_cap: int = 1) -> tuple[list[list[int]], dict]:
    res: dict[tuple[int, int], int] = {}
    adj: list[set[int]] = [set() for _ in range(2 * g.n)]

    def arc(x: int, y: int, cap: int) -> None:
        res[(x, y)] = cap
        res.setdefault((y, x), 0)
        adj[x].add(y)
        adj[y].add(x)

    for i in range(g.n):
        arc(2 * i, 2 * i + 1, 1)
    for a, b in g.edges:
        arc(2 * a + 1, 2 * b, edge_cap)
        arc(2 * b + 1, 2 * a, edge_cap)
    return [sorted(s) for s in adj], res


def _augment_once(adj: list[list[int]], res: dict, s: int, t: int) -> bool:
    parent: dict[int, int] = {s: s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            break
        for y in adj[x]:
            if y not in parent and res[(x, y)] > 0:
                parent[y] = x
                queue.append(y)
    if t not in parent:
        return False
    y = t
    while y != s:
        x = parent[y]
        res[(x, y)] -= 1
        res[(y, x)] += 1
        y = x
    return True


def _max_disjoint_flow(
    g: Graph, u: int, v: int, limit: int | None, edge_cap: int = 1
) -> tuple[int, dict]:
    adj, res = _build_flow_net(g, edge_cap)
    s, t = 2 * u + 1, 2 * v
    flow = 0
    while limit is None or flow < limit:
        if not _augment_once(adj, res, s, t):
            break
        flow += 1
    return flow, res


def _decompose(g: Graph, u: int, v: int, flow: int, res: dict) -> tuple[tuple[int, ...], ...]:
    # Saturated original arcs carry residual 0. Walk from out(u) choosing the
    # smallest next node each time; vertex capacities make walks disjoint.
    used: dict[int, list[int]] = {}
    original: set[tuple[int, int]] = set()
    for i in range(g.n):
        original.add((2 * i, 2 * i + 1))
    for a, b in g.edges:
        original.add((2 * a + 1, 2 * b))
        original.add((2 * b + 1, 2 * a))
    for x, y in original:
        if res[(x, y)] == 0:
            used.setdefault(x, []).append(y)
    for x in used:
        used[x].sort()
    paths: list[tuple[int, ...]] = []
    s, t = 2 * u + 1, 2 * v
    for _ in range(flow):
        path = [u]
        cur = s
        while cur != t:
            nxt = used[cur].pop(0)
            if nxt % 2 == 0:
                # arrived at in(b): the walk enters graph node b
                path.append(nxt // 2)
            cur = nxt
        paths.append(tuple(path))
    return tuple(paths)


def local_connectivity(g: Graph, u: int, v: int) -> int:
    """Maximum number of node-disjoint paths between distinct nodes u, v."""
    if u == v:
        raise ValueError("local connectivity needs two distinct nodes")
    flow, _ = _max_disjoint_flow(g, u, v, None)
    return flow


def vertex_connectivity(g: Graph) -> int:
    """Vertex connectivity; complete graphs give n - 1 by convention."""
    if g.n < 2:
        raise ValueError("connectivity is undefined for graphs with n < 2")
    if g.is_complete():
        return g.n - 1
    if not is_connected(g):
        return 0
    best = g.n - 1
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                flow, _ = _max_disjoint_flow(g, u, v, best)
                # flow may have been cut short at `best`; either way it
                # bounds the minimum from above only when the search ended
                # before the limit.
                if flow < best:
                    best = flow
    return best


def canonical_disjoint_paths(
    g: Graph, u: int, v: int, k: int
) -> tuple[tuple[int, ...], ...]:
    """Return k pairwise node-disjoint u-v paths, deterministically.

    Paths share only their endpoints. The result depends only on the graph
    structure and the arguments: augmentation explores neighbours in
    ascending order and the flow decomposition always takes the smallest
    next node, so repeated calls are identical. When the two nodes are
    adjacent, the direct edge is always one of the returned paths.

    Raises
    ------
    InsufficientPathsError
        If fewer than k disjoint paths exist. The error carries the
        achievable count and a maximum family of paths.
    """
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("path endpoints out of range")
    if u == v:
        raise ValueError("path endpoints must be distinct")
    if k < 1:
        raise ValueError("at least one path must be requested")
    flow, res = _max_disjoint_flow(g, u, v, k)
    paths = _decompose(g, u, v, flow, res)
    if flow < k:
        raise InsufficientPathsError(u, v, k, paths)
    return paths


# --- generators ---


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 nodes")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def circulant_graph(n: int, jumps: Iterable[int]) -> Graph:
    """Circulant graph: node i adjacent to i +/- j (mod n) for each jump j."""
    edges = set()
    for j in jumps:
        if j % n == 0:
            raise ValueError(f"jump {j} is a multiple of n={n}")
        for i in range(n):
            a, b = i, (i + j) % n
            edges.add((a, b) if a < b else (b, a))
    return Graph(n, tuple(sorted(edges)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    """K_{a,b} with the first a nodes on one side."""
    return Graph(a + b, tuple((u, v) for u in range(a) for v in range(a, a + b)))


def petersen_graph() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, edges)


def gnp_graph(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi sample: each pair is an edge with probability p."""
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph(n, tuple(edges))
