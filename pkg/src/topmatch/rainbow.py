"""Independent sets of representatives (ISRs) and rainbow matchings: exact
solvers, topological Hall checks, known bounds, and the classical
counterexample fixtures."""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, SizeError
from .game import psi
from .graphcore import Graph, complete_bipartite, derangements, find_bipartition, induced_subgraph, line_graph
from .homology import eta_independence


@dataclass(frozen=True)
class ColorPartition:
    """A partition of the edges (``mode="edge"``) or vertices
    (``mode="vertex"``) of ``host`` into classes. Class ``i`` of the list is
    referred to as colour ``i``."""

    host: Graph
    mode: str
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.mode not in ("edge", "vertex"):
            raise InputError("mode must be 'edge' or 'vertex'")
        ground = self.host.alive if self.mode == "edge" else self.host.vertices
        seen: set[int] = set()
        for c in self.classes:
            if not c:
                raise InputError("colour classes must be nonempty")
            if seen & set(c) or len(set(c)) != len(c):
                raise InputError("colour classes overlap")
            seen |= set(c)
        if seen != set(ground):
            raise InputError("colour classes must cover the coloured ground set exactly")

    @property
    def m(self) -> int:
        return len(self.classes)

    def conflict_graph(self) -> Graph:
        """The graph whose independent sets are the admissible choices."""
        return line_graph(self.host) if self.mode == "edge" else self.host

    def as_vertex_partition(self) -> ColorPartition:
        if self.mode == "vertex":
            return self
        return ColorPartition(line_graph(self.host), "vertex", self.classes)

    def to_dict(self) -> dict:
        out = self.host.to_dict()
        if self.mode == "edge" and not self.host.is_simple:
            # parallel edges need explicit ids: list them one per row
            out.pop("multiplicity", None)
            out["edges"] = [list(self.host.edge_list[e]) for e in self.host.edge_ids]
        out["mode"] = self.mode
        out["classes"] = [list(c) for c in self.classes]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ColorPartition:
        if "colors" in data:
            return stein_from_colors(data["n"], data["colors"])
        host = Graph.from_dict({k: v for k, v in data.items() if k not in ("classes", "mode")})
        return cls(host, data.get("mode", "vertex"), tuple(tuple(c) for c in data["classes"]))

    @classmethod
    def from_json(cls, text: str) -> ColorPartition:
        return cls.from_dict(json.loads(text))


def stein_from_colors(n: int, colors) -> ColorPartition:
    """Edge colouring of K_{n,n} from ``[[i, j, c], ...]`` rows; colours are
    renumbered in sorted order."""
    g = complete_bipartite(n, n)
    by_colour: dict[int, list[int]] = {}
    seen = set()
    for i, j, c in colors:
        if not (0 <= i < n and 0 <= j < n) or (i, j) in seen:
            raise InputError(f"bad or repeated cell ({i},{j})")
        seen.add((i, j))
        by_colour.setdefault(c, []).append(i * n + j)
    if len(seen) != n * n:
        raise InputError("every edge of K_{n,n} needs a colour")
    return ColorPartition(g, "edge", tuple(tuple(sorted(by_colour[c])) for c in sorted(by_colour)))


def stein_colors(inst: ColorPartition) -> list[list[int]]:
    n = inst.host.n // 2
    return sorted([e // n, e % n, c] for c, cls in enumerate(inst.classes) for e in cls)


def is_stein_instance(inst: ColorPartition) -> bool:
    n = inst.host.n // 2
    return (
        inst.mode == "edge"
        and inst.host.edge_list == complete_bipartite(n, n).edge_list
        and inst.m == n
        and all(len(c) == n for c in inst.classes)
    )


# -- exact solvers -----------------------------------------------------------


def max_partial_isr(inst: ColorPartition, budget_vertices: int = 64) -> tuple[int, list[tuple[int, int]]]:
    """Largest independent set meeting each class at most once.

    Classes are processed in order; each is either represented by one of its
    members (ascending) or skipped. The search prunes with the number of later
    classes that still have an admissible member, so the first optimum found
    is the lexicographically least witness of (class, member) pairs.
    """
    g = inst.conflict_graph()
    if len(g.vertices) > budget_vertices:
        raise SizeError(f"ISR search limited to {budget_vertices} vertices")
    adj = g.adjacency
    classes = [sorted(c) for c in inst.classes]
    m = len(classes)
    best: list = [-1, []]
    chosen: list[tuple[int, int]] = []

    def alive(c: int, blocked: int) -> bool:
        return any(not blocked >> v & 1 for v in classes[c])

    def go(c: int, blocked: int) -> None:
        if best[0] == m:
            return
        if c == m:
            if len(chosen) > best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        reach = sum(1 for k in range(c, m) if alive(k, blocked))
        if len(chosen) + reach <= best[0]:
            return
        for v in classes[c]:
            if not blocked >> v & 1:
                chosen.append((c, v))
                go(c + 1, blocked | adj[v] | (1 << v))
                chosen.pop()
        go(c + 1, blocked)

    go(0, 0)
    return best[0], best[1]


def isr_exists(inst: ColorPartition) -> tuple[bool, list[tuple[int, int]] | None]:
    size, witness = max_partial_isr(inst.as_vertex_partition())
    return (True, witness) if size == inst.m else (False, None)


def max_rainbow_matching(inst: ColorPartition, budget_n: int = 8) -> tuple[int, list[tuple[int, int]]]:
    """Maximum partial rainbow matching; witness is [(colour, edge id), ...]."""
    if inst.mode != "edge":
        raise InputError("rainbow matchings need an edge colouring")
    if len(inst.host.vertices) > 2 * budget_n:
        raise SizeError(f"exact rainbow search limited to hosts with {2 * budget_n} vertices")
    host = inst.host
    classes = [sorted(c) for c in inst.classes]
    m = len(classes)
    masks = {e: (1 << host.edge_list[e][0]) | (1 << host.edge_list[e][1]) for e in host.alive}
    best: list = [-1, []]
    chosen: list[tuple[int, int]] = []

    def go(c: int, used: int) -> None:
        if best[0] == m:
            return
        if c == m:
            if len(chosen) > best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        reach = sum(1 for k in range(c, m) if any(not masks[e] & used for e in classes[k]))
        if len(chosen) + reach <= best[0]:
            return
        for e in classes[c]:
            if not masks[e] & used:
                chosen.append((c, e))
                go(c + 1, used | masks[e])
                chosen.pop()
        go(c + 1, used)

    go(0, 0)
    return best[0], best[1]


# -- topological Hall condition ----------------------------------------------


@dataclass
class HallReport:
    d: int
    oracle: str
    passed: bool
    subsets_checked: int
    worst_subset: tuple[int, ...]
    worst_value: float | int
    worst_required: int
    partial_isr_size: int | None = None
    partial_isr_witness: list = field(default_factory=list)
    consistent: bool | None = None


def hall_condition_check(inst: ColorPartition, d: int = 0, oracle: str = "eta", max_classes: int = 20) -> HallReport:
    """Check connectivity(I(G) restricted to V_I) >= |I| - d for every set I of
    classes, with connectivity measured by homology or bounded below by the
    game value. If it holds, a partial ISR of size m - d must exist; that is
    confirmed by exact search."""
    if oracle not in ("eta", "psi"):
        raise InputError("oracle must be 'eta' or 'psi'")
    if inst.m > max_classes:
        raise SizeError(f"subset loop limited to {max_classes} classes")
    g = inst.conflict_graph()
    worst = None
    count = 0
    for r in range(inst.m + 1):
        for subset in itertools.combinations(range(inst.m), r):
            need = r - d
            count += 1
            if need <= 0:
                continue
            verts = [v for c in subset for v in inst.classes[c]]
            sub = induced_subgraph(g, verts)
            val = eta_independence(sub, cap=need) if oracle == "eta" else psi(sub)
            slack = val - need
            if worst is None or slack < worst[0]:
                worst = (slack, subset, val, need)
    if worst is None:
        worst = (0, (), 0, 0)
    rep = HallReport(d, oracle, worst[0] >= 0, count, worst[1], worst[2], worst[3])
    if rep.passed:
        size, witness = max_partial_isr(inst.as_vertex_partition())
        rep.partial_isr_size, rep.partial_isr_witness = size, witness
        rep.consistent = size >= inst.m - d
    return rep


# -- bounds ------------------------------------------------------------------


def bound_stein23(n: int) -> Fraction:
    return Fraction(2 * n, 3) - Fraction(1, 2)


def stein_average_bound(n: int) -> Fraction:
    return n * (1 - Fraction(derangements(n), math.factorial(n)))


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def bounds_table(n: int) -> list[dict]:
    """Known lower bounds on the largest partial transversal (or partial
    rainbow matching) and the integer size each guarantees."""
    if n < 1:
        raise InputError("n must be positive")
    import mpmath

    rows = []
    koksma = Fraction(2 * n, 3)
    rows.append({"name": "Koksma", "setting": "Latin square", "bound": str(koksma), "guaranteed": _ceil(koksma)})
    # ceil(n - sqrt(n)) = n - isqrt(n) whether or not n is a square
    rows.append({"name": "Woolbright", "setting": "Latin square", "bound": f"{n} - sqrt({n})",
                 "value": float(n - math.sqrt(n)), "guaranteed": n - math.isqrt(n)})
    with mpmath.workdps(50):
        sh = mpmath.mpf(n) - 11 * mpmath.log(n, 2) ** 2
        sh_ceil = int(mpmath.ceil(sh))
    rows.append({"name": "Shor-Hatami", "setting": "Latin square", "bound": f"{n} - 11 log2^2({n})",
                 "value": float(sh), "guaranteed": max(sh_ceil, 0)})
    avg = stein_average_bound(n)
    rows.append({"name": "Stein average", "setting": "equi-n array", "bound": str(avg), "guaranteed": _ceil(avg)})
    s23 = bound_stein23(n)
    rows.append({"name": "two-thirds", "setting": "K_{n,n} into n classes of size n", "bound": str(s23),
                 "guaranteed": max(_ceil(s23), 0)})
    return rows


def average_distinct_symbols(arr) -> Fraction:
    """Mean number of distinct symbols over all n! permutation submatrices."""
    n = arr.n
    if n > 7:
        raise SizeError("permutation enumeration limited to n <= 7")
    cells = arr.cells
    total = 0
    for perm in itertools.permutations(range(n)):
        total += len({cells[i][perm[i]] for i in range(n)})
    return Fraction(total, math.factorial(n))


def verify_equirep(n: int, classes) -> tuple[bool, dict]:
    """Search for a perfect matching F of K_{n,n} with
    |F ∩ E_i| >= floor(|E_i|/n) - 1 for all i, strictly for all but one.

    ``classes`` holds cell sets [(row, col), ...] partitioning the n×n grid.
    """
    classes = [frozenset(map(tuple, c)) for c in classes]
    if len(classes) > n:
        raise InputError("at most n classes")
    cover = set()
    for c in classes:
        if cover & c:
            raise InputError("classes overlap")
        cover |= c
    if cover != {(i, j) for i in range(n) for j in range(n)}:
        raise InputError("classes must partition the cells of K_{n,n}")
    if n > 8:
        raise SizeError("perfect-matching enumeration limited to n <= 8")
    targets = [len(c) // n - 1 for c in classes]
    best = None
    for perm in itertools.permutations(range(n)):
        hits = [sum((i, perm[i]) in c for i in range(n)) for c in classes]
        if any(h < t for h, t in zip(hits, targets)):
            continue
        tight = sum(h == t for h, t in zip(hits, targets))
        if tight <= 1:
            return True, {"matching": list(perm), "hits": hits, "targets": targets}
        if best is None or tight < best[0]:
            best = (tight, list(perm), hits)
    report = {"targets": targets, "counterexample": True}
    if best is not None:
        report.update(closest_matching=best[1], hits=best[2], tight_classes=best[0])
    return False, report


# -- fixtures and hypothesis checks -------------------------------------------


def jin_yuster() -> tuple[Graph, ColorPartition]:
    """Twelve vertices a(i,j), i <= 3, j <= 4 (id 4(i-1)+(j-1)); classes
    V_j = {a(i,j)}; three disjoint 4-cycles. Every class has Δ+1 = 3 members
    and there is no ISR."""
    a = lambda i, j: 4 * (i - 1) + (j - 1)  # noqa: E731
    cycles = [
        (a(1, 1), a(1, 2), a(2, 1), a(2, 2)),
        (a(1, 3), a(1, 4), a(2, 3), a(2, 4)),
        (a(3, 1), a(3, 3), a(3, 2), a(3, 4)),
    ]
    edges = [(c[k], c[(k + 1) % 4]) for c in cycles for k in range(4)]
    g = Graph.from_edges(12, edges)
    classes = tuple(tuple(a(i, j) for i in (1, 2, 3)) for j in (1, 2, 3, 4))
    return g, ColorPartition(g, "vertex", classes)


def jin_yuster_root() -> Graph:
    """A graph H (three disjoint 4-cycles) whose line graph is the
    Jin–Yuster graph with matching labels: edge id of H = vertex of G."""
    g, _ = jin_yuster()
    edge_list = [None] * 12
    # consecutive vertices of each 4-cycle of G become consecutive edges of H
    seen: set[int] = set()
    base = 0
    for start in sorted(g.vertices):
        if start in seen:
            continue
        order = _cycle_order(g, start)
        seen |= set(order)
        for k, v in enumerate(order):
            edge_list[v] = (base + k, base + (k + 1) % 4)
        base += 4
    return Graph.from_edges(base, edge_list)


def _cycle_order(g: Graph, start: int) -> list[int]:
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = min(w for w in g.neighbors(cur) if w != prev) if prev is not None else min(g.neighbors(cur))
        if nxt == start:
            return order
        order.append(nxt)
        prev, cur = cur, nxt


def multigraph_example(k: int) -> tuple[Graph, ColorPartition]:
    """Classes V_1..V_k each hold k copies of a_i b_i and k copies of c_i d_i;
    V_0 holds a_i d_i and b_i c_i for every i. Every class has 2k edges, the
    maximum degree is k+1, and no rainbow matching exists. Class 0 is V_0."""
    if k < 2:
        raise InputError("k must be at least 2")
    edges = []
    classes = [[] for _ in range(k + 1)]
    for i in range(k):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        for pair in [(a, b)] * k + [(c, d)] * k:
            classes[i + 1].append(len(edges))
            edges.append(pair)
        for pair in [(a, d), (b, c)]:
            classes[0].append(len(edges))
            edges.append(pair)
    g = Graph.from_edges(4 * k, edges)
    return g, ColorPartition(g, "edge", tuple(tuple(c) for c in classes))


def check_sufficient_conditions(inst: ColorPartition, root: Graph | None = None) -> dict:
    """Which known sufficient conditions for a full ISR the instance meets.

    For an edge partition the conflict graph is L(H) with H the host. For a
    vertex partition, pass ``root`` with line_graph(root) equal to the host
    (edge ids of root = vertices of host) to enable the line-graph criteria.
    """
    g = inst.conflict_graph()
    h = inst.host if inst.mode == "edge" else root
    if h is not None and inst.mode == "vertex":
        lg = line_graph(h)
        if {lg.edge_list[e] for e in lg.alive} != {inst.host.edge_list[e] for e in inst.host.alive}:
            raise InputError("root's line graph does not match the host")
    smallest = min(len(c) for c in inst.classes)
    out = {
        "min_class_size": smallest,
        "max_degree_G": g.max_degree(),
        "max_degree_H": h.max_degree() if h is not None else None,
        "basic": smallest >= 2 * g.max_degree(),
    }
    if h is not None:
        out["deltah"] = smallest >= 2 * h.max_degree()
        out["aab"] = smallest >= g.max_degree() + 2
        out["deltaplus1_conjecture"] = (
            h.is_simple and find_bipartition(h) is not None and smallest > h.max_degree() + 1
        )
    else:
        out["deltah"] = out["aab"] = out["deltaplus1_conjecture"] = None
    out["guaranteed"] = [name for name in ("basic", "deltah", "aab") if out.get(name)]
    return out


# -- random instances ---------------------------------------------------------


def cyclic_stein_instance(n: int) -> ColorPartition:
    return stein_from_colors(n, [[i, j, (i + j) % n] for i in range(n) for j in range(n)])


def random_stein_instance(n: int, seed: int, swaps: int | None = None) -> ColorPartition:
    """Start from the cyclic colouring and apply seeded swaps of the colours of
    two differently coloured edges (10 n^2 swaps by default)."""
    rng = random.Random(seed)
    colour = [(i + j) % n for i in range(n) for j in range(n)]
    for _ in range(10 * n * n if swaps is None else swaps):
        a, b = rng.randrange(n * n), rng.randrange(n * n)
        if colour[a] != colour[b]:
            colour[a], colour[b] = colour[b], colour[a]
    return stein_from_colors(n, [[e // n, e % n, colour[e]] for e in range(n * n)])
