"""Exact value of the CON/NON game, NON's optimal reply, and a terminal REPL.

CON offers an edge; NON either deletes it or explodes it (removing both
endpoints and all their neighbours). The game is worth infinity to CON as soon
as an isolated vertex appears, otherwise the number of explosions once the
graph is empty.

The solver answers threshold questions "is the value at least k?" and caches
the tightest known bounds per state. A state is the pair (active-vertex mask,
alive-edge mask) over the ids of one root graph, which is exactly the
information in the label-sensitive :func:`~topmatch.graphcore.canonical_key`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from .errors import InputError, SizeError
from .graphcore import EdgeId, Graph, _bits, delete_edge, explode_edge
from .homology import INFINITY

DEFAULT_VERTEX_CAP = 12


class Move(str, enum.Enum):
    DELETE = "delete"
    EXPLODE = "explode"


class GameSolver:
    """Memoised solver for all states derived from one root graph."""

    def __init__(self, root: Graph, cap: int = DEFAULT_VERTEX_CAP):
        root.require_simple()
        self.root = root
        self.cap = cap
        self.ends = root.edge_list
        inc = [0] * root.n
        for eid, (u, v) in enumerate(self.ends):
            inc[u] |= 1 << eid
            inc[v] |= 1 << eid
        self.inc = inc
        # state -> [lo, hi]: value >= lo is known, value >= hi is known false
        self.memo: dict[tuple[int, int], list[int]] = {}
        self.lookups = 0

    @staticmethod
    def masks(g: Graph) -> tuple[int, int]:
        vm = em = 0
        for v in g.vertices:
            vm |= 1 << v
        for e in g.alive:
            em |= 1 << e
        return vm, em

    def explode(self, vm: int, em: int, eid: int) -> tuple[int, int]:
        x, y = self.ends[eid]
        gone = (1 << x) | (1 << y)
        for f in _bits(em & (self.inc[x] | self.inc[y])):
            u, w = self.ends[f]
            gone |= (1 << u) | (1 << w)
        dead = 0
        for w in _bits(gone):
            dead |= self.inc[w]
        return vm & ~gone, em & ~dead

    def _has_isolated(self, vm: int, em: int) -> bool:
        inc = self.inc
        for v in _bits(vm):
            if not em & inc[v]:
                return True
        return False

    def at_least(self, vm: int, em: int, k: int) -> bool:
        """Whether the game value of the state is at least ``k``.

        Finite values never exceed half the vertex count, so any ``k`` above
        that asks whether the value is infinite.
        """
        top = bin(vm).count("1") // 2 + 1
        if k > top:
            k = top
        if k <= 0:
            return True
        if not vm:
            return False
        if self._has_isolated(vm, em):
            return True
        if k == 1:
            # nonempty and no isolated vertex: emptying it takes an explosion
            return True
        key = (vm, em)
        bounds = self.memo.get(key)
        self.lookups += 1
        if bounds is None:
            bounds = self.memo[key] = [1, top + 1]
        if k <= bounds[0]:
            return True
        if k >= bounds[1]:
            return False
        result = False
        for eid in _bits(em):
            xv, xe = self.explode(vm, em, eid)
            if self.at_least(xv, xe, k - 1) and self.at_least(vm, em & ~(1 << eid), k):
                result = True
                break
        if result:
            bounds[0] = max(bounds[0], k)
        else:
            bounds[1] = min(bounds[1], k)
        return result

    def value(self, vm: int, em: int):
        nv = bin(vm).count("1")
        if nv > self.cap:
            raise SizeError(f"psi is exhaustive; {nv} vertices exceeds cap {self.cap}")
        top = nv // 2 + 1
        if self.at_least(vm, em, top):
            return INFINITY
        k = 0
        while k + 1 < top and self.at_least(vm, em, k + 1):
            k += 1
        return k

    def value_of(self, g: Graph):
        return self.value(*self.masks(g))


_SOLVERS: dict[tuple[int, tuple[tuple[int, int], ...]], GameSolver] = {}


def solver_for(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> GameSolver:
    """Shared solver for every graph derived from the same root edge table."""
    key = (g.n, g.edge_list)
    s = _SOLVERS.get(key)
    if s is None:
        if len(_SOLVERS) > 64:
            _SOLVERS.clear()
        s = _SOLVERS[key] = GameSolver(g, cap)
    s.cap = cap
    return s


def psi(g: Graph, cap: int = DEFAULT_VERTEX_CAP):
    """Exact game value: an int, or ``INFINITY``."""
    g.require_simple()
    if len(g.vertices) > cap:
        raise SizeError(f"psi is exhaustive; {len(g.vertices)} vertices exceeds cap {cap}")
    return solver_for(g, cap).value_of(g)


def non_best_response(g: Graph, e: EdgeId, cap: int = DEFAULT_VERTEX_CAP) -> Move:
    """NON's optimal reply to the offer ``e``; ties go to deletion."""
    after_delete = psi(delete_edge(g, e), cap)
    after_explode = psi(explode_edge(g, e), cap) + 1
    return Move.DELETE if after_delete <= after_explode else Move.EXPLODE


def best_offer(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> EdgeId | None:
    """An edge attaining the game value (lowest id among optimal ones)."""
    best, arg = -1, None
    for e in g.edge_ids:
        val = min(psi(delete_edge(g, e), cap), psi(explode_edge(g, e), cap) + 1)
        if val > best:
            best, arg = val, e
    return arg


# -- terminal play -----------------------------------------------------------


@dataclass
class PlayedMove:
    edge: EdgeId
    endpoints: tuple[int, int]
    response: Move


@dataclass
class PlayTranscript:
    root: Graph
    human_side: str
    moves: list[PlayedMove] = field(default_factory=list)
    value: float | int | None = None
    finished: bool = False
    psi_value: float | int | None = None

    @property
    def explosions(self) -> int:
        return sum(m.response is Move.EXPLODE for m in self.moves)


def _terminal_value(g: Graph, explosions: int):
    if not g.vertices:
        return explosions
    if g.has_isolated_vertex():
        return INFINITY
    return None


def _read_line(prompt: str) -> str:
    # end of input behaves like quit
    try:
        return input(prompt)
    except EOFError:
        return "quit"


def interactive_game(
    g: Graph,
    human_side: str,
    input_fn: Callable[[str], str] | None = None,
    output_fn: Callable[[str], None] | None = None,
    cap: int = DEFAULT_VERTEX_CAP,
) -> PlayTranscript:
    """Play one game in the terminal against the optimal opponent.

    Commands: ``list`` shows the offers, ``offer <k>`` (CON) offers edge
    ``k`` of the list, ``delete [k]`` / ``explode [k]`` (NON) answer the
    current offer, ``hint`` shows the optimal action, ``quit`` stops early.
    """
    input_fn = input_fn or _read_line
    output_fn = output_fn or print
    side = human_side.upper()
    if side not in ("CON", "NON"):
        raise InputError("human_side must be CON or NON")
    g.require_simple()
    tr = PlayTranscript(g, side, psi_value=psi(g, cap))
    state = g
    while True:
        val = _terminal_value(state, tr.explosions)
        if val is not None:
            tr.value, tr.finished = val, True
            output_fn(f"game over: value {val} (optimal value {tr.psi_value})")
            return tr
        offers = list(state.edge_ids)
        if side == "CON":
            output_fn("offers: " + ", ".join(f"[{k}] {state.edge_list[e]}" for k, e in enumerate(offers)))
            cmd = input_fn("con> ").strip().split()
            if not cmd:
                continue
            if cmd[0] == "quit":
                output_fn("quitting: transcript left unfinished")
                return tr
            if cmd[0] == "list":
                continue
            if cmd[0] == "hint":
                b = best_offer(state, cap)
                output_fn(f"hint: offer [{offers.index(b)}] {state.edge_list[b]}")
                continue
            if cmd[0] != "offer" or len(cmd) != 2 or not cmd[1].isdigit() or int(cmd[1]) >= len(offers):
                output_fn("invalid move; use offer <k>, list, hint or quit")
                continue
            e = offers[int(cmd[1])]
            reply = non_best_response(state, e, cap)
            output_fn(f"NON {reply.value}s {state.edge_list[e]}")
        else:
            e = best_offer(state, cap)
            output_fn(f"CON offers [0] {state.edge_list[e]}")
            cmd = input_fn("non> ").strip().split()
            if not cmd:
                continue
            if cmd[0] == "quit":
                output_fn("quitting: transcript left unfinished")
                return tr
            if cmd[0] == "list":
                continue
            if cmd[0] == "hint":
                output_fn(f"hint: {non_best_response(state, e, cap).value}")
                continue
            if cmd[0] not in ("delete", "explode") or (len(cmd) == 2 and cmd[1] != "0") or len(cmd) > 2:
                output_fn("invalid move; use delete, explode, list, hint or quit")
                continue
            reply = Move(cmd[0])
        tr.moves.append(PlayedMove(e, state.edge_list[e], reply))
        state = delete_edge(state, e) if reply is Move.DELETE else explode_edge(state, e)
