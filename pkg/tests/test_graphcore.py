from __future__ import annotations

import itertools
import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_matching
from topmatch.errors import InputError, SizeError, UndominatableError
from topmatch.graphcore import (
    Graph,
    all_labeled_graphs,
    canonical_key,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    delete_edge,
    derangements,
    empty_graph,
    explode_edge,
    find_bipartition,
    graph_from_mask,
    igamma,
    induced_subgraph,
    line_graph,
    max_matching,
    path_graph,
)


@st.composite
def graphs(draw, max_k=7):
    k = draw(st.integers(0, max_k))
    mask = draw(st.integers(0, (1 << (k * (k - 1) // 2)) - 1)) if k > 1 else 0
    return graph_from_mask(k, mask)


def edge_set(g: Graph) -> set[tuple[int, int]]:
    return {g.edge_list[e] for e in g.alive}


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(edge_set(g))
    return h


class TestValidation:
    def test_self_loop_rejected(self):
        with pytest.raises(InputError):
            Graph.from_edges(2, [(0, 0)])

    def test_endpoint_out_of_range(self):
        with pytest.raises(InputError):
            Graph.from_edges(2, [(0, 2)])

    def test_bipartition_must_be_crossed(self):
        with pytest.raises(InputError):
            Graph.from_edges(3, [(0, 1)], bipartition=([0, 1], [2]))

    def test_json_round_trip(self):
        g = Graph.from_edges(4, [(0, 2), (1, 3), (0, 3)], bipartition=([0, 1], [2, 3]))
        h = Graph.from_json(g.to_json())
        assert edge_set(h) == edge_set(g)
        assert h.bipartition == g.bipartition

    def test_multiplicity(self):
        g = Graph.from_edges(2, [(0, 1)], multiplicity=[3])
        assert g.num_edges == 3 and not g.is_simple
        with pytest.raises(InputError):
            g.require_simple()


class TestLineGraph:
    def test_path3_to_k2(self):
        lg = line_graph(path_graph(3))
        assert len(lg.vertices) == 2 and lg.num_edges == 1

    def test_star_to_triangle(self):
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert nx.is_isomorphic(to_nx(line_graph(star)), nx.complete_graph(3))

    def test_k22_to_c4(self):
        # K_{2,2} edges: 0-2, 0-3, 1-2, 1-3; each meets exactly two others
        lg = line_graph(complete_bipartite(2, 2))
        assert edge_set(lg) == {(0, 1), (0, 2), (1, 3), (2, 3)}

    def test_parallel_edges_adjacent(self):
        lg = line_graph(Graph.from_edges(2, [(0, 1)], multiplicity=[2]))
        assert lg.num_edges == 1

    @given(graphs())
    def test_degree_identity(self, g):
        lg = line_graph(g)
        for e in g.edge_ids:
            x, y = g.edge_list[e]
            assert lg.degree(e) == g.degree(x) + g.degree(y) - 2

    @given(graphs(6))
    def test_matches_networkx(self, g):
        assert nx.is_isomorphic(to_nx(line_graph(g)), nx.line_graph(to_nx(g)))


class TestSubgraphs:
    def test_induced_identity(self):
        c4 = cycle_graph(4)
        assert edge_set(induced_subgraph(c4, range(4))) == edge_set(c4)

    def test_induced_adjacent_pair(self):
        assert induced_subgraph(cycle_graph(4), [0, 1]).num_edges == 1

    def test_induced_opposite_pair(self):
        sub = induced_subgraph(cycle_graph(4), [0, 2])
        assert sub.num_edges == 0 and sub.vertices == {0, 2}

    def test_induced_not_subset(self):
        with pytest.raises(InputError):
            induced_subgraph(induced_subgraph(cycle_graph(4), [0, 1]), [2])

    def test_explode_k2(self):
        g = explode_edge(complete_graph(2), 0)
        assert not g.vertices and not g.alive

    def test_explode_c4_any_edge(self):
        c4 = cycle_graph(4)
        for e in c4.edge_ids:
            assert not explode_edge(c4, e).vertices

    def test_explode_p4_end_edge(self):
        # a=0, d=1, c=2, b=3 on the path a-d-c-b
        p = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        g = explode_edge(p, 0)
        assert g.vertices == {3} and not g.alive

    def test_delete_keeps_vertices(self):
        c4 = cycle_graph(4)
        g = delete_edge(c4, 0)
        assert g.vertices == c4.vertices and g.num_edges == 3

    def test_missing_edge(self):
        g = delete_edge(cycle_graph(4), 0)
        with pytest.raises(InputError):
            delete_edge(g, 0)
        with pytest.raises(InputError):
            explode_edge(g, 0)

    def test_edge_ids_stable(self):
        g = complete_graph(5)
        sub = induced_subgraph(g, [1, 2, 4])
        for e in sub.alive:
            assert sub.edge_list[e] == g.edge_list[e]

    @given(graphs(), st.data())
    def test_explode_leaves_no_dangling_edge(self, g, data):
        if not g.alive:
            return
        e = data.draw(st.sampled_from(sorted(g.alive)))
        x, y = g.edge_list[e]
        h = explode_edge(g, e)
        gone = {x, y} | g.neighbors(x) | g.neighbors(y)
        assert h.vertices == g.vertices - gone
        for f in h.alive:
            assert set(h.edge_list[f]) <= h.vertices


class TestCanonicalKey:
    def test_delete_changes_key(self):
        g = cycle_graph(4)
        assert canonical_key(g) != canonical_key(delete_edge(g, 0))

    def test_identity_subgraph_same_key(self):
        g = cycle_graph(5)
        assert canonical_key(g) == canonical_key(induced_subgraph(g, g.vertices))

    def test_isomorphic_c4_canonical(self):
        a = cycle_graph(4)
        b = Graph.from_edges(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
        assert canonical_key(a) != canonical_key(b)
        assert canonical_key(a, canonical=True) == canonical_key(b, canonical=True)

    def test_canonical_agrees_with_isomorphism(self):
        # brute-force isomorphism oracle over all labelled 4-vertex graphs
        gs = list(all_labeled_graphs(4))
        for a, b in itertools.combinations(gs[::3], 2):
            same = canonical_key(a, canonical=True) == canonical_key(b, canonical=True)
            assert same == nx.is_isomorphic(to_nx(a), to_nx(b))

    def test_deterministic(self):
        g = complete_bipartite(2, 3)
        assert canonical_key(g) == canonical_key(Graph.from_json(g.to_json()))


class TestParameters:
    @pytest.mark.parametrize("g,nu", [(complete_bipartite(3, 3), 3), (cycle_graph(5), 2),
                                      (Graph.from_edges(4, [(0, 1), (2, 3)]), 2), (empty_graph(3), 0)])
    def test_matching_examples(self, g, nu):
        assert max_matching(g) == nu

    def test_matching_exhaustive_small(self):
        for k in range(1, 6):
            for g in all_labeled_graphs(k):
                if g.num_edges <= 8:
                    assert max_matching(g) == brute_matching(g)

    @given(graphs(8))
    def test_matching_matches_networkx(self, g):
        assert max_matching(g) == len(nx.max_weight_matching(to_nx(g), maxcardinality=True))

    def test_matching_large_falls_back(self):
        assert max_matching(cycle_graph(30)) == 15

    def test_igamma_examples(self):
        assert igamma(cycle_graph(4)) == 1
        assert igamma(Graph.from_edges(4, [(0, 1), (2, 3)])) == 2
        assert igamma(empty_graph(0)) == 0

    def test_igamma_isolated(self):
        with pytest.raises(UndominatableError):
            igamma(empty_graph(2))
        with pytest.raises(UndominatableError):
            igamma(Graph.from_edges(3, [(0, 1)]))

    def test_igamma_cap(self):
        with pytest.raises(SizeError):
            igamma(cycle_graph(16))

    def test_igamma_brute_force(self):
        # independent oracle: plain loops over independent sets and dominators
        for g in all_labeled_graphs(5):
            if g.has_isolated_vertex():
                continue
            verts = sorted(g.vertices)
            best = 0
            for r in range(len(verts) + 1):
                for s in itertools.combinations(verts, r):
                    if not g.is_independent(s):
                        continue
                    need = next(
                        d for d in range(len(verts) + 1)
                        if any(set(s) <= set().union(*(g.neighbors(u) for u in dom))
                               for dom in itertools.combinations(verts, d))
                    )
                    best = max(best, need)
            assert igamma(g) == best <= len(verts)

    def test_bipartition(self):
        assert find_bipartition(cycle_graph(5)) is None
        a, b = find_bipartition(cycle_graph(6))
        assert len(a) == len(b) == 3


class TestDerangements:
    @pytest.mark.parametrize("n", range(0, 8))
    def test_against_enumeration(self, n):
        count = sum(all(p[i] != i for i in range(n)) for p in itertools.permutations(range(n)))
        assert derangements(n) == count

    def test_small_values(self):
        assert [derangements(n) for n in (1, 3, 4)] == [0, 2, 9]

    @staticmethod
    def _e_bounds(n):
        # e lies between consecutive partial sums of sum 1/k!; truncating after
        # n + 25 terms brackets it within 2/(n+25)!.
        terms = n + 25
        lo = sum(Fraction(1, math.factorial(k)) for k in range(terms))
        return lo, lo + Fraction(2, math.factorial(terms))

    @pytest.mark.parametrize("n", range(2, 13))
    def test_close_to_n_factorial_over_e(self, n):
        lo, hi = self._e_bounds(n)
        d, f = derangements(n), math.factorial(n)
        assert abs(d * lo - f) < 1 and abs(d * hi - f) < 1

    def test_n1_is_the_boundary_case(self):
        # D_1 e - 1! = -1 exactly, so the strict bound only starts at n = 2
        assert derangements(1) * math.e - 1 == -1

    @pytest.mark.parametrize("n", range(1, 13))
    def test_nearest_integer_to_n_factorial_over_e(self, n):
        lo, hi = self._e_bounds(n)
        f = math.factorial(n)
        # n!/e lies in (f/hi, f/lo); both ends round to D_n
        for x in (f / hi, f / lo):
            assert abs(derangements(n) - x) < Fraction(1, 2)
