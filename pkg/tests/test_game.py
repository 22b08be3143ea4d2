from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from topmatch.errors import InputError, SizeError
from topmatch.game import GameSolver, Move, best_offer, interactive_game, non_best_response, psi
from topmatch.graphcore import (
    Graph,
    all_labeled_graphs,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    delete_edge,
    empty_graph,
    explode_edge,
    graph_from_mask,
    line_graph,
    path_graph,
)
from topmatch.homology import INFINITY, eta_independence

TWO_K2 = Graph.from_edges(4, [(0, 1), (2, 3)])


def plain_psi(vertices: frozenset, edges: frozenset):
    """The game recursion written out with plain sets and no memo."""
    if not vertices:
        return 0
    touched = {v for e in edges for v in e}
    if vertices - touched:
        return math.inf
    best = -1
    for e in edges:
        deleted = plain_psi(vertices, edges - {e})
        gone = set(e) | {w for f in edges if set(f) & set(e) for w in f}
        kept = frozenset(vertices - gone)
        exploded = plain_psi(kept, frozenset(f for f in edges if set(f) <= kept)) + 1
        best = max(best, min(deleted, exploded))
    return best


def as_sets(g: Graph):
    return frozenset(g.vertices), frozenset(g.edge_list[e] for e in g.alive)


class TestPsiValues:
    def test_examples(self):
        assert psi(complete_graph(2)) == 1
        assert psi(cycle_graph(4)) == 1
        assert psi(TWO_K2) == 2
        assert psi(path_graph(4)) == INFINITY
        assert psi(empty_graph(0)) == 0

    def test_isolated_vertex(self):
        assert psi(Graph.from_edges(3, [(0, 1)])) == INFINITY

    def test_against_plain_recursion(self):
        for k in range(0, 5):
            for g in all_labeled_graphs(k):
                assert psi(g) == plain_psi(*as_sets(g))

    def test_line_graph_k33(self):
        assert psi(line_graph(complete_bipartite(3, 3))) == 2

    def test_cap(self):
        with pytest.raises(SizeError):
            psi(cycle_graph(13))
        assert psi(empty_graph(13), cap=13) == INFINITY

    def test_rejects_multigraph(self):
        with pytest.raises(InputError):
            psi(Graph.from_edges(2, [(0, 1)], multiplicity=[2]))

    def test_finite_values_bounded(self):
        for g in all_labeled_graphs(5):
            v = psi(g)
            assert v == INFINITY or v <= math.ceil(len(g.vertices) / 2)

    @given(st.integers(2, 7), st.data())
    def test_recursion_identity(self, k, data):
        g = graph_from_mask(k, data.draw(st.integers(1, (1 << (k * (k - 1) // 2)) - 1)))
        if g.has_isolated_vertex():
            return
        vals = [min(psi(delete_edge(g, e)), psi(explode_edge(g, e)) + 1) for e in g.edge_ids]
        assert psi(g) == max(vals)
        e = best_offer(g)
        assert min(psi(delete_edge(g, e)), psi(explode_edge(g, e)) + 1) == psi(g)

    @given(st.integers(1, 7), st.data())
    def test_psi_below_eta(self, k, data):
        g = graph_from_mask(k, data.draw(st.integers(0, max((1 << (k * (k - 1) // 2)) - 1, 0))))
        assert psi(g) <= eta_independence(g)

    def test_solver_threshold_consistency(self):
        g = line_graph(complete_bipartite(3, 3))
        s = GameSolver(g)
        vm, em = s.masks(g)
        assert s.at_least(vm, em, 2) and not s.at_least(vm, em, 3)


class TestNonResponse:
    def test_two_k2_explodes(self):
        for e in TWO_K2.edge_ids:
            assert non_best_response(TWO_K2, e) is Move.EXPLODE

    def test_c4_explodes(self):
        c4 = cycle_graph(4)
        for e in c4.edge_ids:
            assert non_best_response(c4, e) is Move.EXPLODE

    def test_p4_end_edge_tie_deletes(self):
        p4 = path_graph(4)
        assert psi(delete_edge(p4, 0)) == psi(explode_edge(p4, 0)) + 1 == INFINITY
        assert non_best_response(p4, 0) is Move.DELETE


def scripted(lines):
    it = iter(lines)
    out: list[str] = []
    return (lambda prompt: next(it)), out.append, out


class TestInteractive:
    @pytest.mark.parametrize("reply", ["delete", "explode"])
    def test_human_non_on_k2(self, reply):
        inp, outp, log = scripted([reply])
        tr = interactive_game(complete_graph(2), "NON", inp, outp)
        assert tr.finished and tr.value in (1, INFINITY)
        assert tr.value == (INFINITY if reply == "delete" else 1)
        assert tr.psi_value == 1

    def test_human_con_on_two_k2(self):
        inp, outp, log = scripted(["hint", "offer 0", "offer 0"])
        tr = interactive_game(TWO_K2, "con", inp, outp)
        assert tr.finished and tr.value == 2 == tr.psi_value
        assert [m.response for m in tr.moves] == [Move.EXPLODE, Move.EXPLODE]
        assert any(line.startswith("hint") for line in log)

    def test_quit_leaves_unfinished(self):
        inp, outp, _ = scripted(["quit"])
        tr = interactive_game(cycle_graph(4), "CON", inp, outp)
        assert not tr.finished and tr.value is None and not tr.moves

    def test_invalid_input_reprompts(self):
        inp, outp, log = scripted(["offer 9", "bogus", "", "list", "offer 1"])
        tr = interactive_game(cycle_graph(4), "CON", inp, outp)
        assert tr.finished and tr.value == 1
        assert sum("invalid" in line for line in log) == 2

    def test_non_explode_with_index(self):
        inp, outp, _ = scripted(["explode 1", "explode 0"])
        tr = interactive_game(complete_graph(2), "NON", inp, outp)
        assert tr.value == 1

    def test_bad_side(self):
        with pytest.raises(InputError):
            interactive_game(complete_graph(2), "both")
