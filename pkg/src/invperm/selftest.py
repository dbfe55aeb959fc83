"""Quick desk-scale versions of the acceptance checks, for the ``selftest`` command."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import distribution as dist
from . import permutahedron as perm
from .core_model import Ranking, Tree, apply_transposition, Transposition, induced_ranking
from .generators import all_trees, make_rng, random_comparisons, rank_instance
from .minimizer import minv, minv_bruteforce, solve
from .reductions import WeightedDigraph, brute_force_mfas, fas_from_gadget, mfas_to_tree_gadget
from .traces import ComparisonDAG, decode, encode, encoding_count_check, iter_linear_extensions

BODY_PARTS = ((((("knee", "thigh"), "toe"), ("chest", "waist")), (("cheek", "mouth"), "ear")))
BODY_ORDER = ("ear", "cheek", "mouth", "chest", "waist", "thigh", "knee", "toe")


def _oracle() -> tuple[bool, str]:
    count = 0
    for n in range(2, 5):
        for tree in all_trees(n):
            for i in range(math.factorial(n)):
                rk = perm.ranking_from_index(i, tree.leaf_names)
                if minv(tree, rk)[0] != minv_bruteforce(tree, rk):
                    return False, f"mismatch on {tree.to_nested()}"
                count += 1
    return True, f"{count} instances"


def _rank_instance() -> tuple[bool, str]:
    ok = all(minv(*rank_instance(n, r))[0] == min(r - 1, n - r) for n in range(2, 10) for r in range(1, n + 1))
    return ok, "n <= 9"


def _body_parts() -> tuple[bool, str]:
    tree = Tree.from_nested(BODY_PARTS)
    sol = solve(tree, Ranking(BODY_ORDER))
    order = induced_ranking(tree, sol.ordering).inverse
    return sol.total == 0 and order == BODY_ORDER, f"minv={sol.total}"


def _criterion() -> tuple[bool, str]:
    bad = 0
    for tree in all_trees(5, binary=True):
        for i in range(120):
            rk = perm.ranking_from_index(i, tree.leaf_names)
            base = minv(tree, rk)[0]
            for r in range(1, 5):
                t = Transposition(r)
                same = minv(tree, apply_transposition(rk, t))[0] == base
                bad += perm.binary_criterion_check(tree, rk, t).insensitive != same
    return bad == 0, f"{bad} mismatches"


def _sensitivity() -> tuple[bool, str]:
    ok = all(perm.analyze(perm.inversion_count(n)).avg_sensitivity == n - 1 for n in range(1, 6))
    ok &= all(perm.analyze(perm.xinv_partition(a, b)).avg_sensitivity == Fraction(2 * a * b, a + b)
              for a in range(1, 4) for b in range(1, 4))
    ok &= all(perm.analyze(perm.selection(n, r)).components == perm.component_count_selection(n, r)
              for n in range(1, 6) for r in range(1, n + 1))
    return ok, "n <= 5"


def _decomposition() -> tuple[bool, str]:
    ok = all(perm.sensitivity_decomposition_check(t).holds for n in range(2, 6) for t in all_trees(n, binary=True))
    return ok, "binary n <= 5"


def _encoding() -> tuple[bool, str]:
    rng = make_rng()
    for _ in range(10):
        items, edges = random_comparisons(5, 4, rng)
        dag = ComparisonDAG(tuple(items), tuple(edges))
        for d in range(5):
            actual, bound = encoding_count_check(dag, d)
            if actual > bound:
                return False, f"degree {d}: {actual} > {bound}"
        if any(decode(encode(rk, dag), dag) != rk for rk in iter_linear_extensions(dag)):
            return False, "round trip failed"
    return True, "10 DAGs on 5 items"


def _distribution() -> tuple[bool, str]:
    ok = all(dist.cross_inv_counts(a, b).counts == dist.cross_inv_counts_bruteforce(a, b)
             for a in range(6) for b in range(6 - a))
    grid = dist.max_probability_grid(12)
    return ok and grid.sup <= 1.5, f"sup={grid.sup:.4f} at {grid.argmax}"


def _fourier() -> tuple[bool, str]:
    worst = 0.0
    for a, b in [(1, 2), (2, 2), (3, 5), (6, 7)]:
        approx = dist.probabilities_via_inverse_ft(a, b, 1e-8)
        worst = max(worst, float(np.max(np.abs(approx - dist.cross_inv_counts(a, b).probabilities()))))
    return worst < 1e-6, f"max error {worst:.2e}"


def _pole() -> tuple[bool, str]:
    rng = make_rng()
    reports = [dist.pole_reduction_check(a, b, rng.uniform(0, math.pi, 500)) for a in range(1, 7) for b in range(1, 7)]
    return all(r.ok for r in reports), "a, b <= 6, 500 samples each"


def _gadget() -> tuple[bool, str]:
    for arcs, n in [([(0, 1)], 2), ([(0, 1), (1, 2), (2, 0)], 3), ([(0, 1), (2, 3)], 4), ([(0, 1), (1, 2), (0, 2)], 3)]:
        g = WeightedDigraph.unweighted(n, arcs)
        if fas_from_gadget(g, minv(*mfas_to_tree_gadget(g))[0]) != brute_force_mfas(g):
            return False, f"arcs {arcs}"
    return True, "4 graphs"


def run_all() -> list[tuple[str, bool, str]]:
    checks = [("oracle", _oracle), ("rank-instance", _rank_instance), ("body-parts", _body_parts),
              ("criterion", _criterion), ("sensitivity", _sensitivity), ("decomposition", _decomposition),
              ("encoding", _encoding), ("distribution", _distribution), ("fourier", _fourier),
              ("pole-reduction", _pole), ("gadget", _gadget)]
    return [(name, *fn()) for name, fn in checks]
