import itertools
import random

import pytest

from invperm.core_model import Ranking
from invperm.counting import CrossInvMatrix, cross_inv_tables
from invperm.errors import InconsistentTable, Infeasible, IsolatedVertex, LimitExceeded, ParallelArcs, ParseError
from invperm.generators import make_rng, random_simple_digraph, random_tree
from invperm.minimizer import min_ordering_exhaustive, minv, minv_bruteforce
from invperm.reductions import (
    WeightedDigraph,
    brute_force_mfas,
    drop_isolated,
    extract_fas,
    fas_from_gadget,
    gadget_offset,
    mfas_to_tree_gadget,
    mrinv_to_mfas,
    shared_endpoint_pairs,
    solve_mfas,
)

import oracles

TRIANGLE = WeightedDigraph.unweighted(3, [(0, 1), (1, 2), (2, 0)])


def test_digraph_validation():
    with pytest.raises(ParseError):
        WeightedDigraph(2, ((0, 0, 1),))
    with pytest.raises(ParseError):
        WeightedDigraph(2, ((0, 1, 0),))
    with pytest.raises(ParseError):
        WeightedDigraph(2, ((0, 2, 1),))
    with pytest.raises(ParallelArcs):
        WeightedDigraph(2, ((0, 1, 1), (0, 1, 2)))
    g = WeightedDigraph.from_json('{"n": 3, "arcs": [[0, 1], [1, 2, 5]]}')
    assert g.arcs == ((0, 1, 1), (1, 2, 5))
    assert WeightedDigraph.from_json(g.to_json()) == g
    with pytest.raises(ParseError):
        WeightedDigraph.from_json('{"n": 3, "arcs": [[0]]}')


def test_brute_force_examples():
    assert brute_force_mfas(WeightedDigraph.unweighted(3, [(0, 1), (1, 2), (0, 2)])) == 0
    assert brute_force_mfas(WeightedDigraph(2, ((0, 1, 3), (1, 0, 5)))) == 3
    assert brute_force_mfas(TRIANGLE) == 1
    with pytest.raises(LimitExceeded):
        brute_force_mfas(WeightedDigraph(11, ()))


def test_solve_mfas_matches_bruteforce():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 7)
        arcs = [(u, v, rng.randint(1, 5)) for u in range(n) for v in range(n) if u != v and rng.random() < 0.4]
        g = WeightedDigraph(n, tuple(arcs))
        cost, order = solve_mfas(g)
        assert cost == brute_force_mfas(g) == oracles.mfas(n, arcs)
        from invperm.reductions import fas_cost
        assert fas_cost(g, order) == cost


def test_mrinv_to_mfas_examples():
    g, off = mrinv_to_mfas(CrossInvMatrix((2, 2), ((0, 1), (3, 0))))
    assert g.arcs == ((0, 1, 2),) and off == 1
    assert off + brute_force_mfas(g) == 1
    g, off = mrinv_to_mfas(CrossInvMatrix((2, 2, 2), ((0, 2, 2), (2, 0, 2), (2, 2, 0))))
    assert g.arcs == () and off == 6
    # a weighted cycle 0 -> 1 -> 2 -> 0
    tab = CrossInvMatrix((2, 2, 2), ((0, 1, 3), (3, 0, 1), (1, 3, 0)))
    g, off = mrinv_to_mfas(tab)
    assert brute_force_mfas(g) > 0
    assert off + brute_force_mfas(g) == min_ordering_exhaustive(tab.xinv)[0]
    with pytest.raises(InconsistentTable):
        mrinv_to_mfas(CrossInvMatrix((1, 1), ((0, 1), (1, 0))))


def test_mrinv_via_fas_on_random_nodes():
    rng = make_rng(9)
    checked = 0
    while checked < 500:
        t = random_tree(int(rng.integers(3, 16)), rng, max_degree=7)
        r = Ranking(tuple(rng.permutation(t.leaf_names).tolist()))
        for v, tab in cross_inv_tables(t, r).items():
            g, off = mrinv_to_mfas(tab)
            assert off + solve_mfas(g)[0] == min_ordering_exhaustive(tab.xinv)[0]
            checked += 1


def test_gadget_examples():
    single = WeightedDigraph.unweighted(2, [(0, 1)])
    t, r = mfas_to_tree_gadget(single)
    assert t.n == 4 and minv(t, r)[0] == 1 == minv_bruteforce(t, r)
    disjoint = WeightedDigraph.unweighted(4, [(0, 1), (2, 3)])
    assert minv(*mfas_to_tree_gadget(disjoint))[0] == 10
    # arcs sharing endpoints: the cyclic triangle gives 23, not 4m(m-1)+m+2 = 29
    t, r = mfas_to_tree_gadget(TRIANGLE)
    assert t.n == 12 and minv(t, r)[0] == 23 == minv_bruteforce(t, r)
    assert shared_endpoint_pairs(TRIANGLE) == 3 and gadget_offset(3, 3) == 21
    assert fas_from_gadget(TRIANGLE, 23) == 1


def test_gadget_shape():
    g = WeightedDigraph.unweighted(4, [(0, 1), (1, 2), (3, 0)])
    t, r = mfas_to_tree_gadget(g)
    assert t.n == 12 and sorted(r.rank_of.values()) == list(range(1, 13))
    depth = max(len(t.ancestors(t.leaf_node[x])) for x in t.leaf_names)
    assert depth == 2 and len(t.children(0)) == 4


def test_gadget_errors():
    with pytest.raises(IsolatedVertex):
        mfas_to_tree_gadget(WeightedDigraph.unweighted(3, [(0, 1)]))
    with pytest.raises(ParallelArcs):
        mfas_to_tree_gadget(WeightedDigraph.unweighted(2, [(0, 1), (1, 0)]))
    with pytest.raises(ParseError):
        mfas_to_tree_gadget(WeightedDigraph(2, ((0, 1, 2),)))


def test_extract_fas():
    assert extract_fas(1, 1) == 0
    assert extract_fas(29, 3) == 1
    with pytest.raises(Infeasible):
        extract_fas(28, 3)
    with pytest.raises(Infeasible):
        extract_fas(0, 2)
    assert extract_fas(23, 3, shared=3) == 1


def all_simple_digraphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for choice in itertools.product((None, 0, 1), repeat=len(pairs)):
        arcs = [(u, v) if c == 0 else (v, u) for (u, v), c in zip(pairs, choice) if c is not None]
        if len({x for a in arcs for x in a}) == n:
            yield WeightedDigraph.unweighted(n, arcs)


def test_roundtrip_small_graphs():
    count = 0
    for n in range(2, 5):
        for g in all_simple_digraphs(n):
            if len(g.arcs) > 5:
                continue
            t, r = mfas_to_tree_gadget(g)
            assert fas_from_gadget(g, minv(t, r)[0]) == brute_force_mfas(g)
            count += 1
    assert count > 100


def test_drop_isolated():
    g = WeightedDigraph(5, ((0, 3, 2), (3, 4, 1)))
    h = drop_isolated(g)
    assert h.n == 3 and h.arcs == ((0, 1, 2), (1, 2, 1))
    assert brute_force_mfas(h) == brute_force_mfas(g)
