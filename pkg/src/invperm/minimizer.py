"""Minimum inversions on a tree, node by node.

MInv(T, rho) splits into independent per-node problems: at a node with
children L_1..L_k, pick the child order minimizing the cross inversions
between earlier and later children.  That is a minimum linear ordering
problem on the k x k cross-inversion table, solved here either by trying all
k! orders or by a subset DP in O(k^2 2^k).

Both solvers return the lexicographically smallest optimal permutation, so
every strategy yields the same ordering.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core_model import Ordering, Ranking, Tree
from .counting import CrossInvMatrix, cross_inv_tables
from .errors import BadPermutation, DomainMismatch, LimitExceeded

EXHAUSTIVE_LIMIT = 8
DP_LIMIT = 24
BRUTEFORCE_LIMIT = 10**7

Matrix = Sequence[Sequence[int]]


@dataclass(frozen=True)
class NodeSolution:
    node: int
    mrinv: int
    best_perm: tuple[int, ...]  # child node indices in the chosen order


@dataclass(frozen=True)
class MinvSolution:
    total: int
    ordering: Ordering
    nodes: tuple[NodeSolution, ...]


# -- minimum linear ordering on a cost table ----------------------------------


def ordering_cost(m: Matrix, perm: Sequence[int]) -> int:
    """Sum of m[p_i][p_j] over positions i < j."""
    return sum(m[perm[i]][perm[j]] for i in range(len(perm)) for j in range(i + 1, len(perm)))


def min_ordering_exhaustive(m: Matrix, limit: int = EXHAUSTIVE_LIMIT) -> tuple[int, tuple[int, ...]]:
    k = len(m)
    if k > limit:
        raise LimitExceeded(f"degree {k} exceeds exhaustive limit {limit}")
    best, arg = None, tuple(range(k))
    for perm in itertools.permutations(range(k)):  # lexicographic
        c = ordering_cost(m, perm)
        if best is None or c < best:
            best, arg = c, perm
    return (best or 0), arg


def _suffix_costs(m: Matrix) -> np.ndarray:
    """F[R] = cheapest way to order the set R, for every subset mask R.

    F[R] = min over s in R of  sum_{j in R-s} m[s][j] + F[R - s],
    placing s first.  Row sums over subsets come from two half-width lookup
    tables, so each DP layer costs O(k) vector operations.
    """
    k = len(m)
    w = np.asarray(m, dtype=np.int64).reshape(k, k)
    lo_bits = k // 2
    hi_bits = k - lo_bits
    lo_mask = (1 << lo_bits) - 1

    def half_table(offset: int, width: int) -> np.ndarray:
        masks = np.arange(1 << width, dtype=np.int64)
        bits = (masks[:, None] >> np.arange(width)) & 1
        return bits @ w[:, offset:offset + width].T  # [mask, s]

    lo_tab = half_table(0, lo_bits)
    hi_tab = half_table(lo_bits, hi_bits)
    size = 1 << k
    masks = np.arange(size, dtype=np.int64)
    pop = np.bitwise_count(masks)
    by_pop = np.argsort(pop, kind="stable")
    bounds = np.searchsorted(pop[by_pop], np.arange(k + 2))
    f = np.zeros(size, dtype=np.int64)
    for p in range(1, k + 1):
        layer = by_pop[bounds[p]:bounds[p + 1]]
        best = np.full(layer.shape, np.iinfo(np.int64).max, dtype=np.int64)
        for s in range(k):
            has = ((layer >> s) & 1).astype(bool)
            rest = layer[has] ^ (1 << s)
            cand = f[rest] + lo_tab[rest & lo_mask, s] + hi_tab[rest >> lo_bits, s]
            best[has] = np.minimum(best[has], cand)
        f[layer] = best
    return f


def min_ordering_dp(m: Matrix, limit: int = DP_LIMIT) -> tuple[int, tuple[int, ...]]:
    k = len(m)
    if k > limit:
        raise LimitExceeded(f"degree {k} exceeds DP limit {limit}")
    if k <= 1:
        return 0, tuple(range(k))
    f = _suffix_costs(m)
    full = (1 << k) - 1
    perm: list[int] = []
    rest = full
    while rest:
        for s in range(k):  # smallest feasible first element gives the lexicographic minimum
            if not rest >> s & 1:
                continue
            r2 = rest ^ (1 << s)
            step = sum(m[s][j] for j in range(k) if r2 >> j & 1)
            if step + f[r2] == f[rest]:
                perm.append(s)
                rest = r2
                break
        else:  # pragma: no cover
            raise AssertionError("DP backtracking failed")
    return int(f[full]), tuple(perm)


def min_ordering(m: Matrix, strategy: str = "auto") -> tuple[int, tuple[int, ...]]:
    if strategy == "exhaustive":
        return min_ordering_exhaustive(m)
    if strategy == "dp":
        return min_ordering_dp(m)
    if strategy == "auto":
        return min_ordering_exhaustive(m) if len(m) <= 3 else min_ordering_dp(m)
    raise ValueError(f"unknown strategy {strategy!r}")


# -- tree-level API -----------------------------------------------------------


def _table(tree: Tree, node: int, ranking: Ranking, tables: dict[int, CrossInvMatrix] | None) -> CrossInvMatrix:
    if tables is None:
        tables = cross_inv_tables(tree, ranking)
    return tables[node]


def _positions(tree: Tree, node: int, child_perm: Sequence[int]) -> list[int]:
    kids = tree.children(node)
    if sorted(child_perm) != sorted(kids) or len(set(child_perm)) != len(kids):
        raise BadPermutation(f"{tuple(child_perm)} is not a permutation of the children {kids} of node {node}")
    where = {c: i for i, c in enumerate(kids)}
    return [where[c] for c in child_perm]


def rinv(tree: Tree, node: int, ranking: Ranking, child_perm: Sequence[int],
         tables: dict[int, CrossInvMatrix] | None = None) -> int:
    """Cross inversions through ``node`` for one fixed order of its children."""
    pos = _positions(tree, node, child_perm)
    return ordering_cost(_table(tree, node, ranking, tables).xinv, pos)


def _solution(tree: Tree, node: int, cost: int, perm: Sequence[int]) -> NodeSolution:
    kids = tree.children(node)
    return NodeSolution(node, cost, tuple(kids[i] for i in perm))


def mrinv_exhaustive(tree: Tree, node: int, ranking: Ranking, limit: int = EXHAUSTIVE_LIMIT,
                     tables: dict[int, CrossInvMatrix] | None = None) -> NodeSolution:
    cost, perm = min_ordering_exhaustive(_table(tree, node, ranking, tables).xinv, limit)
    return _solution(tree, node, cost, perm)


def mrinv_dp(tree: Tree, node: int, ranking: Ranking, limit: int = DP_LIMIT,
             tables: dict[int, CrossInvMatrix] | None = None) -> NodeSolution:
    cost, perm = min_ordering_dp(_table(tree, node, ranking, tables).xinv, limit)
    return _solution(tree, node, cost, perm)


def solve(tree: Tree, ranking: Ranking, strategy: str = "auto") -> MinvSolution:
    tables = cross_inv_tables(tree, ranking)
    nodes = []
    for v in tree.internal_nodes():
        cost, perm = min_ordering(tables[v].xinv, strategy)
        nodes.append(_solution(tree, v, cost, perm))
    ordering = Ordering({s.node: s.best_perm for s in nodes})
    return MinvSolution(sum(s.mrinv for s in nodes), ordering, tuple(nodes))


def minv(tree: Tree, ranking: Ranking, strategy: str = "auto") -> tuple[int, Ordering]:
    sol = solve(tree, ranking, strategy)
    return sol.total, sol.ordering


# -- brute-force oracle -------------------------------------------------------


def ordering_count(tree: Tree) -> int:
    return math.prod(math.factorial(len(nd.children)) for nd in tree.nodes)


@lru_cache(maxsize=64)
def _all_leaf_sequences(tree: Tree) -> np.ndarray:
    """Every left-to-right leaf sequence over all global orderings (leaf positions in leaf_names)."""
    index = {x: i for i, x in enumerate(tree.leaf_names)}

    def seqs(v: int) -> np.ndarray:
        nd = tree.nodes[v]
        if nd.is_leaf:
            return np.array([[index[nd.name]]], dtype=np.int8)
        parts = [seqs(c) for c in nd.children]
        blocks = []
        for perm in itertools.permutations(range(len(parts))):
            acc = parts[perm[0]]
            for i in perm[1:]:
                nxt = parts[i]
                acc = np.hstack([np.repeat(acc, len(nxt), axis=0), np.tile(nxt, (len(acc), 1))])
            blocks.append(acc)
        return np.vstack(blocks)

    return seqs(tree.root)


def minv_bruteforce(tree: Tree, ranking: Ranking, limit: int = BRUTEFORCE_LIMIT) -> int:
    """Minimum inversions over every global ordering, by enumeration."""
    if ordering_count(tree) > limit:
        raise LimitExceeded(f"{ordering_count(tree)} orderings exceed the brute-force limit {limit}")
    if set(tree.leaf_names) != ranking.items:
        raise DomainMismatch("ranking does not cover exactly the leaves of the tree")
    ranks = np.array([ranking[x] for x in tree.leaf_names])
    vals = ranks[_all_leaf_sequences(tree)]
    n = vals.shape[1]
    counts = np.zeros(len(vals), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            counts += vals[:, i] > vals[:, j]
    return int(counts.min())
