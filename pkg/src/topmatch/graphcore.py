"""Graphs with stable edge identifiers, the moves of the CON/NON game, and a few
classical parameters (matching number, independence domination number,
derangement counts).

A :class:`Graph` never relabels anything. Removing vertices shrinks the
``vertices`` set and drops edge ids from ``alive``; the endpoint table
``edge_list`` is shared with the root graph, so an :data:`EdgeId` means the same
edge in every subgraph derived from that root.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InputError, SizeError, UndominatableError

EdgeId = int


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edge_list: tuple[tuple[int, int], ...]
    vertices: frozenset[int]
    alive: frozenset[EdgeId]
    bipartition: tuple[frozenset[int], frozenset[int]] | None = None
    _validated: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self._validated:
            return
        if self.n < 0:
            raise InputError("vertex count must be non-negative")
        for v in self.vertices:
            if not 0 <= v < self.n:
                raise InputError(f"vertex {v} outside 0..{self.n - 1}")
        for eid in self.alive:
            if not 0 <= eid < len(self.edge_list):
                raise InputError(f"unknown edge id {eid}")
            u, v = self.edge_list[eid]
            if u == v:
                raise InputError(f"self-loop at {u}")
            if u not in self.vertices or v not in self.vertices:
                raise InputError(f"edge {eid}=({u},{v}) has an inactive endpoint")
        if self.bipartition is not None:
            a, b = self.bipartition
            if a & b:
                raise InputError("bipartition sides overlap")
            if (a | b) != self.vertices:
                raise InputError("bipartition must cover exactly the active vertices")
            for eid in self.alive:
                u, v = self.edge_list[eid]
                if (u in a) == (v in a):
                    raise InputError(f"edge ({u},{v}) does not cross the bipartition")

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        bipartition: tuple[Iterable[int], Iterable[int]] | None = None,
        multiplicity: Sequence[int] | None = None,
    ) -> Graph:
        edges = [tuple(e) for e in edges]
        if multiplicity is not None:
            if len(multiplicity) != len(edges):
                raise InputError("multiplicity must be parallel to edges")
            expanded = []
            for e, k in zip(edges, multiplicity):
                if k < 1:
                    raise InputError("multiplicities must be positive")
                expanded.extend([e] * k)
            edges = expanded
        for e in edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} is not a pair")
        edge_list = tuple(_norm(int(u), int(v)) for u, v in edges)
        bp = None
        if bipartition is not None:
            bp = (frozenset(bipartition[0]), frozenset(bipartition[1]))
        return cls(n, edge_list, frozenset(range(n)), frozenset(range(len(edge_list))), bp)

    @classmethod
    def from_dict(cls, data: dict) -> Graph:
        try:
            g = cls.from_edges(
                data["n"],
                data.get("edges", []),
                bipartition=data.get("bipartition"),
                multiplicity=data.get("multiplicity"),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad graph record: {exc}") from exc
        if "vertices" in data:
            g = induced_subgraph(g, data["vertices"])
        return g

    @classmethod
    def from_json(cls, text: str) -> Graph:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        counts: dict[tuple[int, int], int] = {}
        for eid in sorted(self.alive):
            e = self.edge_list[eid]
            counts[e] = counts.get(e, 0) + 1
        out: dict = {"n": self.n, "edges": [list(e) for e in counts]}
        if any(k > 1 for k in counts.values()):
            out["multiplicity"] = list(counts.values())
        if self.bipartition is not None:
            out["bipartition"] = [sorted(self.bipartition[0]), sorted(self.bipartition[1])]
        if self.vertices != frozenset(range(self.n)):
            out["vertices"] = sorted(self.vertices)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def _derive(self, vertices: frozenset[int], alive: frozenset[EdgeId]) -> Graph:
        bp = None
        if self.bipartition is not None:
            bp = (self.bipartition[0] & vertices, self.bipartition[1] & vertices)
        return Graph(self.n, self.edge_list, vertices, alive, bp, _validated=True)

    # -- queries ------------------------------------------------------

    @cached_property
    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(sorted(self.alive))

    def endpoints(self, eid: EdgeId) -> tuple[int, int]:
        if eid not in self.alive:
            raise InputError(f"edge id {eid} not present")
        return self.edge_list[eid]

    @cached_property
    def incident(self) -> dict[int, tuple[EdgeId, ...]]:
        inc: dict[int, list[EdgeId]] = {v: [] for v in self.vertices}
        for eid in self.edge_ids:
            u, v = self.edge_list[eid]
            inc[u].append(eid)
            inc[v].append(eid)
        return {v: tuple(es) for v, es in inc.items()}

    @cached_property
    def adjacency(self) -> dict[int, int]:
        """Neighbor bitmask of every active vertex."""
        adj = {v: 0 for v in self.vertices}
        for eid in self.alive:
            u, v = self.edge_list[eid]
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(w for w in _bits(self.adjacency[v]))

    def degree(self, v: int) -> int:
        """Number of incident edges, counting parallel edges separately."""
        return len(self.incident[v])

    @property
    def num_edges(self) -> int:
        return len(self.alive)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    @cached_property
    def is_simple(self) -> bool:
        pairs = [self.edge_list[e] for e in self.alive]
        return len(pairs) == len(set(pairs))

    def isolated_vertices(self) -> list[int]:
        return sorted(v for v in self.vertices if not self.incident[v])

    def has_isolated_vertex(self) -> bool:
        return any(not es for es in self.incident.values())

    def require_simple(self) -> None:
        if not self.is_simple:
            raise InputError("operation requires a simple graph (no parallel edges)")

    def is_independent(self, s: Iterable[int]) -> bool:
        mask = 0
        for v in s:
            mask |= 1 << v
        return all(not (self.adjacency[v] & mask) for v in _bits(mask))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- standard constructions ------------------------------------------------


def empty_graph(k: int) -> Graph:
    return Graph.from_edges(k, [])


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, itertools.combinations(range(k), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with sides 0..a-1 and a..a+b-1; edge id of (i, a+j) is i*b + j."""
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return Graph.from_edges(a + b, edges, bipartition=(range(a), range(a, a + b)))


def graph_from_mask(k: int, mask: int) -> Graph:
    """The labeled graph on k vertices whose edge set is selected by ``mask``
    over the pairs of ``itertools.combinations(range(k), 2)``."""
    pairs = list(itertools.combinations(range(k), 2))
    return Graph.from_edges(k, [p for i, p in enumerate(pairs) if mask >> i & 1])


def all_labeled_graphs(k: int) -> Iterator[Graph]:
    m = k * (k - 1) // 2
    for mask in range(1 << m):
        yield graph_from_mask(k, mask)


def find_bipartition(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """2-colouring by BFS with lower-indexed component roots on side 0."""
    colour: dict[int, int] = {}
    for root in sorted(g.vertices):
        if root in colour:
            continue
        colour[root] = 0
        queue = [root]
        while queue:
            u = queue.pop()
            for w in g.neighbors(u):
                if w not in colour:
                    colour[w] = 1 - colour[u]
                    queue.append(w)
                elif colour[w] == colour[u]:
                    return None
    return (
        frozenset(v for v, c in colour.items() if c == 0),
        frozenset(v for v, c in colour.items() if c == 1),
    )


# -- operations ------------------------------------------------------------


def line_graph(g: Graph) -> Graph:
    """One vertex per edge id of ``g``; parallel edges are adjacent."""
    edges = []
    ids = g.edge_ids
    for i, a in enumerate(ids):
        ua, va = g.edge_list[a]
        for b in ids[i + 1 :]:
            ub, vb = g.edge_list[b]
            if ua in (ub, vb) or va in (ub, vb):
                edges.append((a, b))
    lg = Graph.from_edges(len(g.edge_list), edges)
    return induced_subgraph(lg, ids)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = frozenset(s)
    if not s <= g.vertices:
        raise InputError(f"vertices {sorted(s - g.vertices)} are not active")
    alive = frozenset(
        e for e in g.alive if g.edge_list[e][0] in s and g.edge_list[e][1] in s
    )
    return g._derive(s, alive)


def delete_edge(g: Graph, e: EdgeId) -> Graph:
    g.endpoints(e)
    return g._derive(g.vertices, g.alive - {e})


def explode_edge(g: Graph, e: EdgeId) -> Graph:
    """Remove both endpoints of ``e``, all their neighbours, and every edge
    touching a removed vertex."""
    x, y = g.endpoints(e)
    gone = {x, y} | g.neighbors(x) | g.neighbors(y)
    return induced_subgraph(g, g.vertices - gone)


def remove_vertices(g: Graph, s: Iterable[int]) -> Graph:
    return induced_subgraph(g, g.vertices - frozenset(s))


# -- keys ------------------------------------------------------------------

CANONICAL_VERTEX_CAP = 10


def canonical_key(g: Graph, canonical: bool = False) -> bytes:
    """Cache key for the (vertex set, edge multiset) state of ``g``.

    The default key is label-sensitive: two graphs get the same key iff they
    have the same vertex count, active vertices and edges with multiplicities.
    With ``canonical=True`` the key is an isomorphism invariant (and a complete
    one): active vertices are relabeled 0..k-1 by the permutation, consistent
    with a degree ordering, that minimises the sorted edge list. That mode is
    exhaustive and capped at ``CANONICAL_VERTEX_CAP`` active vertices.
    """
    counts: dict[tuple[int, int], int] = {}
    for eid in g.alive:
        e = g.edge_list[eid]
        counts[e] = counts.get(e, 0) + 1
    if not canonical:
        payload = [g.n, sorted(g.vertices), sorted([u, v, k] for (u, v), k in counts.items())]
        return json.dumps(payload, separators=(",", ":")).encode()

    verts = sorted(g.vertices)
    if len(verts) > CANONICAL_VERTEX_CAP:
        raise SizeError(f"canonical key limited to {CANONICAL_VERTEX_CAP} vertices")
    deg = {v: g.degree(v) for v in verts}
    classes = [
        [v for v in verts if deg[v] == d] for d in sorted(set(deg.values()), reverse=True)
    ]
    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [v for p in perms for v in p]
        label = {v: i for i, v in enumerate(order)}
        enc = sorted(
            (*_norm(label[u], label[v]), k) for (u, v), k in counts.items()
        )
        if best is None or enc < best:
            best = enc
    degs = [deg[v] for c in classes for v in c]
    payload = [len(verts), degs, [list(t) for t in best or []]]
    return json.dumps(payload, separators=(",", ":")).encode()


# -- parameters ------------------------------------------------------------


def max_matching(g: Graph) -> int:
    """Exact matching number.

    Up to 24 active vertices this is an exact memoised branching on the lowest
    vertex (it is either unmatched or matched to one of its neighbours);
    beyond that it defers to networkx's blossom implementation.
    """
    if len(g.vertices) > 24:
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(g.vertices)
        h.add_edges_from(g.edge_list[e] for e in g.alive)
        return len(nx.max_weight_matching(h, maxcardinality=True))

    adj = g.adjacency

    @lru_cache(maxsize=None)
    def nu(mask: int) -> int:
        # drop vertices with no neighbour inside mask
        while mask:
            v = (mask & -mask).bit_length() - 1
            if adj[v] & mask:
                break
            mask &= ~(1 << v)
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        best = nu(rest)
        for w in _bits(adj[v] & rest):
            best = max(best, 1 + nu(rest & ~(1 << w)))
        return best

    start = 0
    for v in g.vertices:
        start |= 1 << v
    return nu(start)


def igamma(g: Graph, cap: int = 14) -> int:
    """Independence domination number with open-neighbourhood domination:
    the maximum over independent sets I of min |D| subject to I ⊆ N(D)."""
    verts = sorted(g.vertices)
    k = len(verts)
    if k > cap:
        raise SizeError(f"igamma is exhaustive; {k} vertices exceeds cap {cap}")
    if not verts:
        return 0
    iso = g.isolated_vertices()
    if iso:
        raise UndominatableError(f"vertex {iso[0]} has no neighbours and cannot be dominated")
    pos = {v: i for i, v in enumerate(verts)}
    adj = [0] * k
    for v in verts:
        for w in _bits(g.adjacency[v]):
            adj[pos[v]] |= 1 << pos[w]

    full = 1 << k
    inf = k + 1
    # cheapest dominating set whose open neighbourhood is exactly S
    cost = [inf] * full
    cov = [0] * full
    for d in range(1, full):
        low = d & -d
        cov[d] = cov[d ^ low] | adj[low.bit_length() - 1]
        c = bin(d).count("1")
        if c < cost[cov[d]]:
            cost[cov[d]] = c
    cost[0] = 0
    # superset minimum: cost[S] = min over T ⊇ S of cost[T]
    for b in range(k):
        bit = 1 << b
        for s in range(full):
            if not s & bit and cost[s | bit] < cost[s]:
                cost[s] = cost[s | bit]
    best = 0
    for s in range(full):
        if cost[s] > best and all(not (adj[i] & s) for i in _bits(s)):
            best = cost[s]
    return best


def derangements(n: int) -> int:
    if n < 0:
        raise InputError("n must be non-negative")
    a, b = 1, 0  # D_0, D_1
    if n == 0:
        return 1
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (a + b)
    return b
