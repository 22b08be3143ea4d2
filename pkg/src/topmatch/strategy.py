"""CON's sequence strategy for the game on the line graph of a balanced
bipartite graph, plus a replaying auditor for its bookkeeping inequalities.

Playing on L(G) means offering pairs (e, f) of edges of G sharing a vertex.
NON either separates the pair (deletes the L(G)-edge) or explodes it. Play is
grouped into sequences; each ends with an explosion, which removes two or
three vertices of G, or with an edge of G becoming an isolated vertex of
L(G), which ends the game at infinity.

Tie-breaks: the chosen vertex is the lowest-index one of minimal positive
degree, its partner is its lowest-index neighbour, and offers within a phase
go in ascending edge id.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from hashlib import sha256
from typing import Callable, Iterator

from . import config
from .errors import CorruptionError, InputError, ProtocolError
from .game import GameSolver, Move
from .graphcore import Graph, find_bipartition, induced_subgraph, line_graph
from .homology import INFINITY


def density_defect(g: Graph) -> Fraction:
    """|V|/2 - 2|E|/|V|, and 0 for the empty graph."""
    n = len(g.vertices)
    if n == 0:
        return Fraction(0)
    return Fraction(n, 2) - Fraction(2 * g.num_edges, n)


def name_sides(p_side: frozenset[int], q_side: frozenset[int], index: int):
    """(X, Y): the larger side is X; on a tie X is P at index 0 and Q later."""
    if len(p_side) != len(q_side):
        return (p_side, q_side) if len(p_side) > len(q_side) else (q_side, p_side)
    return (p_side, q_side) if index == 0 else (q_side, p_side)


@dataclass(frozen=True)
class OfferContext:
    """Public state handed to the adversary for one offered pair."""

    graph: Graph
    x_side: frozenset[int]
    y_side: frozenset[int]
    sequence: int
    phase: str
    e: int
    f: int
    separated: frozenset[int]
    deletion_isolates: bool
    line_state: tuple[int, int]
    line: "_LineState" = field(repr=False, compare=False, default=None)


Adversary = Callable[[OfferContext], "Move | str"]


@dataclass
class Offer:
    e: int
    f: int
    phase: str
    response: str


@dataclass
class SequenceRecord:
    index: int
    pos: str
    case: str
    v: int
    delta: int
    x: int
    y: int
    e: int
    n: int
    edges: int
    x_side: list[int]
    y_side: list[int]
    offers: list[Offer] = field(default_factory=list)
    removed: list[int] = field(default_factory=list)
    returned: int | None = None
    outcome: str = "explosion"


@dataclass
class GameTranscript:
    root: Graph
    p_side: list[int]
    q_side: list[int]
    sequences: list[SequenceRecord] = field(default_factory=list)
    terminal_vertices: list[int] | None = None
    infinity_reason: str | None = None

    @property
    def t(self) -> int:
        return sum(s.outcome == "explosion" for s in self.sequences)

    @property
    def value(self):
        return INFINITY if self.infinity_reason is not None else self.t

    def root_hash(self) -> str:
        return sha256(self.root.to_json().encode()).hexdigest()[:16]

    # JSON lines: header, then one offer or removal per line.
    def to_jsonl(self) -> str:
        lines = [
            {
                "type": "header",
                "root": self.root.to_dict(),
                "root_hash": self.root_hash(),
                "engine_version": config.ENGINE_VERSION,
                "tie_break": [config.CON_TIE_BREAK, config.NON_TIE_BREAK],
                "sides": [self.p_side, self.q_side],
            }
        ]
        for s in self.sequences:
            meta = {k: v for k, v in asdict(s).items() if k != "offers"}
            lines.append({"type": "sequence", **{k: meta[k] for k in (
                "index", "pos", "case", "v", "delta", "x", "y", "e", "n", "edges", "x_side", "y_side")}})
            for o in s.offers:
                lines.append({"type": "offer", "sequence": s.index, **asdict(o)})
            lines.append({"type": "end", "sequence": s.index, "outcome": s.outcome,
                          "removed": s.removed, "returned": s.returned})
        lines.append({"type": "result", "t": self.t, "infinity_reason": self.infinity_reason,
                      "terminal_vertices": self.terminal_vertices})
        return "\n".join(json.dumps(x) for x in lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> GameTranscript:
        recs = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not recs or recs[0].get("type") != "header":
            raise CorruptionError("transcript has no header line")
        head = recs[0]
        tr = cls(Graph.from_dict(head["root"]), head["sides"][0], head["sides"][1])
        if tr.root_hash() != head["root_hash"]:
            raise CorruptionError("root hash mismatch")
        current = None
        for r in recs[1:]:
            kind = r.pop("type")
            if kind == "sequence":
                current = SequenceRecord(**r)
                tr.sequences.append(current)
            elif kind == "offer":
                r.pop("sequence")
                current.offers.append(Offer(**r))
            elif kind == "end":
                current.outcome, current.removed, current.returned = r["outcome"], r["removed"], r["returned"]
            elif kind == "result":
                tr.infinity_reason = r["infinity_reason"]
                tr.terminal_vertices = r["terminal_vertices"]
        return tr


class _LineState:
    """Game position on L(root): alive edges of G_i plus separated pairs."""

    def __init__(self, root: Graph):
        self.root = root
        self.line = line_graph(root)
        self.pair_id = {}
        for lid in self.line.edge_ids:
            self.pair_id[self.line.edge_list[lid]] = lid
        self._solver: GameSolver | None = None

    def masks(self, g: Graph, e: int, separated: set[int]) -> tuple[int, int]:
        vm = 0
        for a in g.alive:
            vm |= 1 << a
        em = 0
        for lid in self.line.alive:
            a, b = self.line.edge_list[lid]
            if vm >> a & 1 and vm >> b & 1:
                em |= 1 << lid
        for f in separated:
            em &= ~(1 << self.pair_id[(min(e, f), max(e, f))])
        return vm, em

    def solver(self) -> GameSolver:
        if self._solver is None:
            self._solver = GameSolver(self.line, cap=max(12, len(self.line.vertices)))
        return self._solver


def _l_neighbours(g: Graph, eid: int) -> set[int]:
    u, v = g.edge_list[eid]
    return (set(g.incident[u]) | set(g.incident[v])) - {eid}


def con_strategy_play(g: Graph, adversary: Adversary) -> GameTranscript:
    """Play CON's sequence strategy against ``adversary`` to the end."""
    g.require_simple()
    sides = g.bipartition if g.bipartition is not None else find_bipartition(g)
    if sides is None:
        raise InputError("graph is not bipartite")
    p0, q0 = sides
    if len(p0) != len(q0):
        raise InputError(f"sides must have equal size, got {len(p0)} and {len(q0)}")
    tr = GameTranscript(g, sorted(p0), sorted(q0))
    lstate = _LineState(g)
    active = frozenset(g.vertices)
    index = 0
    while True:
        gi = induced_subgraph(g, active)
        if gi.num_edges == 0:
            tr.terminal_vertices = sorted(active)
            return tr
        deg = {v: gi.degree(v) for v in active}
        for eid in gi.edge_ids:
            a, b = gi.edge_list[eid]
            if deg[a] == 1 and deg[b] == 1:
                tr.infinity_reason = f"edge {eid} is an isolated vertex of the line graph"
                return tr
        xs, ys = name_sides(p0 & active, q0 & active, index)
        if any(deg[v] == 0 for v in xs):
            pos = "POS1"
            pool = [v for v in active if deg[v] > 0]
        else:
            pos = "POS2"
            pool = [v for v in xs if deg[v] > 0]
        delta = min(deg[v] for v in pool)
        v = min(w for w in pool if deg[w] == delta)
        if v in xs:
            x = v
            y = min(gi.neighbors(x))
        else:
            y = v
            x = min(gi.neighbors(y))
        e = next(eid for eid in gi.incident[x] if y in gi.edge_list[eid])
        rec = SequenceRecord(index, pos, "", v, delta, x, y, e, len(active), gi.num_edges,
                             sorted(xs), sorted(ys))
        tr.sequences.append(rec)
        separated: set[int] = set()
        spare = min((w for w in xs if deg[w] == 0), default=None)

        def run_phase(pivot: int, phase: str) -> int | None:
            for f in sorted(gi.incident[pivot]):
                if f == e:
                    continue
                isolates = not (_l_neighbours(gi, e) - separated - {f}) or _l_neighbours(gi, f) == {e}
                ctx = OfferContext(gi, xs, ys, index, phase, e, f, frozenset(separated), isolates,
                                   lstate.masks(gi, e, separated), lstate)
                reply = adversary(ctx)
                try:
                    reply = Move(reply)
                except ValueError:
                    raise ProtocolError(f"adversary answered {reply!r}") from None
                rec.offers.append(Offer(e, f, phase, reply.value))
                if reply is Move.EXPLODE:
                    return f
                separated.add(f)
                if isolates:
                    return -1
            return None

        if deg[y] > 1:
            rec.case = "I"
            f = run_phase(y, "y")
            if f is not None and f >= 0:
                w = next(u for u in gi.edge_list[f] if u != y)
                rec.removed = [x, y, w]
            elif f is None:
                rec.case = "I-lagging"
                f = run_phase(x, "x")
                if f is not None and f >= 0:
                    z = next(u for u in gi.edge_list[f] if u != x)
                    rec.removed = [x, z] + ([spare] if pos == "POS1" else [])
        else:
            rec.case = "II"
            f = run_phase(x, "x")
            if f is not None and f >= 0:
                z = next(u for u in gi.edge_list[f] if u != x)
                rec.removed = [x, z] + ([spare] if pos == "POS1" else [])
                rec.returned = y
        if not rec.removed:
            rec.outcome = "infinity"
            tr.infinity_reason = f"NON separated every offer around edge {e} in sequence {index}"
            return tr
        active = active - set(rec.removed)
        index += 1


# -- adversaries -------------------------------------------------------------


def optimal_adversary(ctx: OfferContext) -> Move:
    """NON's optimal reply in the true game position (small instances only)."""
    lstate = ctx.line
    solver = lstate.solver()
    vm, em = ctx.line_state
    lid = lstate.pair_id[(min(ctx.e, ctx.f), max(ctx.e, ctx.f))]
    after_delete = solver.value(vm, em & ~(1 << lid))
    xv, xe = solver.explode(vm, em, lid)
    after_explode = solver.value(xv, xe) + 1
    return Move.DELETE if after_delete <= after_explode else Move.EXPLODE


def random_adversary(seed: int, p_explode: float = 0.5) -> Adversary:
    rng = random.Random(seed)

    def reply(ctx: OfferContext) -> Move:
        return Move.EXPLODE if rng.random() < p_explode else Move.DELETE

    return reply


def delete_until_forced(ctx: OfferContext) -> Move:
    """Separate every pair unless that would end the game at infinity."""
    return Move.EXPLODE if ctx.deletion_isolates else Move.DELETE


class ScriptedAdversary:
    """Replies from a fixed script, then deletes; records every reply."""

    def __init__(self, script: list[Move]):
        self.script = list(script)
        self.replies: list[Move] = []

    def __call__(self, ctx: OfferContext) -> Move:
        i = len(self.replies)
        reply = self.script[i] if i < len(self.script) else Move.DELETE
        self.replies.append(reply)
        return reply


def all_playouts(g: Graph) -> Iterator[GameTranscript]:
    """Every transcript reachable by some adversary (depth-first over replies)."""
    stack: list[list[Move]] = [[]]
    while stack:
        prefix = stack.pop()
        adv = ScriptedAdversary(prefix)
        tr = con_strategy_play(g, adv)
        yield tr
        for i in range(len(adv.replies) - 1, len(prefix) - 1, -1):
            stack.append(adv.replies[:i] + [Move.EXPLODE])


# -- audit -------------------------------------------------------------------


@dataclass
class Check:
    name: str
    step: int | None
    passed: bool
    vacuous: bool = False
    detail: str = ""


@dataclass
class AuditReport:
    checks: list[Check] = field(default_factory=list)
    t: int = 0
    value: float | int = 0
    bound: Fraction | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name, step, passed, detail="", vacuous=False):
        self.checks.append(Check(name, step, bool(passed), vacuous, detail))


def _ceil_half(k: int) -> int:
    return -(-k // 2)


def audit_transcript(tr: GameTranscript, root: Graph | None = None) -> AuditReport:
    """Replay ``tr`` on ``root`` and check every bookkeeping inequality."""
    root = tr.root if root is None else root
    p0, q0 = frozenset(tr.p_side), frozenset(tr.q_side)
    if p0 | q0 != root.vertices or p0 & q0:
        raise CorruptionError("recorded sides do not partition the root's vertices")
    active = frozenset(root.vertices)
    states = []  # (G_i, X_i, Y_i) for i = 0..t
    for i, s in enumerate(tr.sequences):
        gi = induced_subgraph(root, active)
        xs, ys = name_sides(p0 & active, q0 & active, i)
        if s.index != i or s.n != len(active) or s.edges != gi.num_edges:
            raise CorruptionError(f"sequence {i}: recorded state does not match replay")
        if sorted(xs) != s.x_side or sorted(ys) != s.y_side:
            raise CorruptionError(f"sequence {i}: recorded side naming does not match replay")
        if s.e not in gi.alive or set(gi.edge_list[s.e]) != {s.x, s.y}:
            raise CorruptionError(f"sequence {i}: edge {s.e} is not xy in G_{i}")
        if gi.degree(s.v) != s.delta:
            raise CorruptionError(f"sequence {i}: recorded degree of v does not match replay")
        states.append((gi, xs, ys))
        if s.outcome != "explosion":
            break
        if not set(s.removed) <= active or len(set(s.removed)) != len(s.removed):
            raise CorruptionError(f"sequence {i}: removes inactive or repeated vertices")
        active = active - set(s.removed)

    rep = AuditReport()
    finite = tr.infinity_reason is None
    t = tr.t
    rep.t, rep.value = t, tr.value
    if finite:
        gt = induced_subgraph(root, active)
        if gt.num_edges:
            raise CorruptionError("finite transcript ends on a graph with edges")
        states.append((gt, *name_sides(p0 & active, q0 & active, t)))
    vt = active if finite else None
    nt = len(vt) if finite else None

    for i, (gi, xs, ys) in enumerate(states):
        d = len(xs) - len(ys)
        rep.add("balanced", i, 0 <= d <= 1, f"|X|-|Y| = {d}")
        if finite:
            ni = len(gi.vertices)
            want = _ceil_half(ni - nt)
            got = max(len(xs - vt), len(ys - vt))
            rep.add("smallworld", i, got == want, f"max = {got}, ceil((n_i-n_t)/2) = {want}")
            rep.add("obs1", i, gi.is_independent(vt), "V_t independent in G_i")

    for i, s in enumerate(tr.sequences):
        if s.outcome != "explosion":
            continue
        gi, xs, ys = states[i]
        nxt = states[i + 1][0] if i + 1 < len(states) else induced_subgraph(root, gi.vertices - set(s.removed))
        k = len(s.removed)
        drop = gi.num_edges - nxt.num_edges
        rep.add("removal-count", i, k in (2, 3), f"{k} vertices removed")
        if k == 3:
            in_x = sum(u in xs for u in s.removed)
            rep.add("removal-sides", i, in_x == 2, f"{in_x} of 3 removed vertices in X_i")
            limit = len(gi.vertices) + s.delta - 2
        else:
            in_x = sum(u in xs for u in s.removed)
            rep.add("removal-sides", i, in_x == 1, f"{in_x} of 2 removed vertices in X_i")
            limit = len(xs) + s.delta - 1
        rep.add("howmanyremoved", i, drop <= limit, f"e_i - e_i+1 = {drop} <= {limit}")
        if finite:
            ni = len(gi.vertices)
            rep.add("deltasmall", i, s.delta <= _ceil_half(ni - nt),
                    f"delta = {s.delta}, bound {_ceil_half(ni - nt)}")
            if k == 2:
                bound = Fraction(ni) - Fraction(nt, 2) - Fraction(1, 2)
                rep.add("ejejplus1", i, drop <= bound, f"{drop} <= {bound}")

    n0 = len(root.vertices)
    bound = rep.bound = Fraction(n0, 3) - density_defect(root) - Fraction(1, 2)
    if finite:
        rep.add("third", None, 3 * t >= n0 - nt, f"t = {t}, (n_0-n_t)/3 = {Fraction(n0 - nt, 3)}")
        rep.add("headline", None, t >= bound, f"t = {t} >= {bound}")
    else:
        rep.add("third", None, True, "game value is infinite", vacuous=True)
        rep.add("headline", None, True, "game value is infinite", vacuous=True)
    return rep
