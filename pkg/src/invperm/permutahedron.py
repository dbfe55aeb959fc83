"""Exhaustive permutahedron analysis for small n.

Every ranking of n items is a vertex; adjacent-rank transpositions are the
edges.  Coloring vertices by the output of a problem splits the edges into
monochromatic ones (the graph G) and bichromatic ones (its complement).
Component counts and average sensitivity of these graphs give lower bounds on
the number of execution traces of any comparison algorithm for the problem.

Rankings are stored as rows of an ``orders`` matrix (row i lists the item
indices by increasing rank) in lexicographic order, so the row number of a
ranking is its Lehmer-code index.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core_model import Ranking, Transposition, Tree, apply_transposition, normalize, replace_subtree
from .counting import dinv
from .errors import (
    LeafCountMismatch,
    LimitExceeded,
    NotAnExtension,
    NotBinary,
    NotDegree2,
    OutOfRange,
    PartitionPropertyViolated,
    NotAPartition,
)
from .minimizer import minv
from .traces import ComparisonDAG

DEFAULT_MAX_N = 9


def max_enumeration_n() -> int:
    """Enumeration cap; INVPERM_MAX_N overrides the default of 9."""
    return int(os.environ.get("INVPERM_MAX_N", DEFAULT_MAX_N))


def _guard(n: int, limit: int | None) -> None:
    cap = max_enumeration_n() if limit is None else limit
    if n > cap:
        raise LimitExceeded(f"n={n} exceeds the enumeration cap {cap}")


# -- ranking tables -----------------------------------------------------------


@lru_cache(maxsize=16)
def all_orders(n: int) -> np.ndarray:
    """All n! rankings as item-index rows, in Lehmer (lexicographic) order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    out = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=16)
def all_ranks(n: int) -> np.ndarray:
    """ranks[i, x] = rank (1-based) of item x in ranking i."""
    orders = all_orders(n)
    ranks = np.empty_like(orders)
    rows = np.arange(len(orders))[:, None]
    ranks[rows, orders] = np.arange(1, n + 1, dtype=np.int8)
    ranks.flags.writeable = False
    return ranks


def lehmer_index(orders: np.ndarray) -> np.ndarray:
    n = orders.shape[1]
    idx = np.zeros(len(orders), dtype=np.int64)
    for p in range(n):
        smaller_later = (orders[:, p + 1:] < orders[:, p:p + 1]).sum(axis=1)
        idx += smaller_later * math.factorial(n - 1 - p)
    return idx


@lru_cache(maxsize=16)
def neighbor_table(n: int) -> np.ndarray:
    """nbr[i, r-1] = index of the ranking obtained from ranking i by swapping ranks r, r+1."""
    orders = all_orders(n)
    nbr = np.empty((len(orders), max(n - 1, 0)), dtype=np.int64)
    for r in range(1, n):
        swapped = orders.copy()
        swapped[:, [r - 1, r]] = swapped[:, [r, r - 1]]
        nbr[:, r - 1] = lehmer_index(swapped)
    nbr.flags.writeable = False
    return nbr


def ranking_index(ranking: Ranking, items: Sequence[str]) -> int:
    pos = {x: i for i, x in enumerate(items)}
    return int(lehmer_index(np.array([[pos[x] for x in ranking.inverse]]))[0])


def ranking_from_index(i: int, items: Sequence[str]) -> Ranking:
    return Ranking(tuple(items[j] for j in all_orders(len(items))[i]))


# -- problems -----------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    """A total function on rankings of ``items``.

    ``batch`` (optional) maps a ranks matrix, one row per ranking with columns
    in ``items`` order, to an integer output per row.
    """

    name: str
    items: tuple[str, ...]
    evaluate: Callable[[Ranking], Hashable] = field(compare=False)
    batch: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.items)


def _items(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def _pair_count(ranks: np.ndarray, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    out = np.zeros(len(ranks), dtype=np.int64)
    for x, y in pairs:
        out += ranks[:, x] > ranks[:, y]
    return out


def inversion_count(n: int) -> Problem:
    items = _items(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def ev(rk: Ranking) -> int:
        return sum(1 for i, j in pairs if rk[items[i]] > rk[items[j]])

    return Problem("inversion-count", items, ev, lambda R: _pair_count(R, pairs))


def inversion_parity(n: int) -> Problem:
    p = inversion_count(n)
    return Problem("inversion-parity", p.items, lambda rk: p.evaluate(rk) % 2,
                   lambda R: p.batch(R) % 2)  # type: ignore[misc]


def sorting(n: int) -> Problem:
    items = _items(n)

    def batch(R: np.ndarray) -> np.ndarray:
        return lehmer_index(np.argsort(R, axis=1))

    return Problem("sorting", items, lambda rk: rk.inverse, batch)


def selection(n: int, r: int) -> Problem:
    if not 1 <= r <= n:
        raise OutOfRange(f"selection rank {r} outside 1..{n}")
    items = _items(n)
    return Problem(f"selection({r})", items, lambda rk: rk.item(r),
                   lambda R: np.argmax(R == r, axis=1))


def xinv_partition(a: int, b: int) -> Problem:
    """Cross inversions from A = first a items to B = last b items."""
    items = tuple(f"a{i}" for i in range(1, a + 1)) + tuple(f"b{i}" for i in range(1, b + 1))
    pairs = [(x, a + y) for x in range(a) for y in range(b)]

    def ev(rk: Ranking) -> int:
        return sum(1 for x, y in pairs if rk[items[x]] > rk[items[y]])

    return Problem(f"xinv-partition({a},{b})", items, ev, lambda R: _pair_count(R, pairs))


# -- batched minimum inversions on a tree ---------------------------------------


@lru_cache(maxsize=512)
def _node_structure(tree: Tree) -> dict[int, tuple[list[list[int]], bool]]:
    """Per internal node: leaf column indices per child, and whether all children are leaves."""
    col = {x: i for i, x in enumerate(tree.leaf_names)}
    out = {}
    for v in tree.internal_nodes():
        kids = tree.children(v)
        groups = [[col[x] for x in tree.leaves(c)] for c in kids]
        out[v] = (groups, all(tree.is_leaf(c) for c in kids))
    return out


def mrinv_batch(tree: Tree, node: int, ranks: np.ndarray) -> np.ndarray:
    """MRInv at ``node`` for every row of a ranks matrix (columns in leaf_names order)."""
    groups, leaves_only = _node_structure(tree)[node]
    rows = len(ranks)
    k = len(groups)
    if leaves_only or k == 1:
        return np.zeros(rows, dtype=np.int64)
    x = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            cnt = _pair_count(ranks, [(p, q) for p in groups[i] for q in groups[j]])
            x[i][j] = cnt
            x[j][i] = len(groups[i]) * len(groups[j]) - cnt
    if k == 2:
        return np.minimum(x[0][1], x[1][0])
    # subset DP, vectorized over rows: F[S] = min_s sum_{j in S-s} x[s][j] + F[S-s]
    f = {0: np.zeros(rows, dtype=np.int64)}
    for mask in range(1, 1 << k):
        best = None
        for s in range(k):
            if not mask >> s & 1:
                continue
            rest = mask ^ (1 << s)
            cand = f[rest].copy()
            for j in range(k):
                if rest >> j & 1:
                    cand += x[s][j]
            best = cand if best is None else np.minimum(best, cand)
        f[mask] = best  # type: ignore[assignment]
    return f[(1 << k) - 1]


def minv_batch(tree: Tree, ranks: np.ndarray) -> np.ndarray:
    total = np.zeros(len(ranks), dtype=np.int64)
    for v in tree.internal_nodes():
        total += mrinv_batch(tree, v, ranks)
    return total


def minv_on_tree(tree: Tree) -> Problem:
    return Problem("minv-on-tree", tree.leaf_names, lambda rk: minv(tree, rk)[0],
                   lambda R: minv_batch(tree, R))


# -- analysis -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PermutahedronAnalysis:
    n: int
    problem: str
    items: tuple[str, ...]
    colors: np.ndarray        # output token id per ranking index
    sensitive: np.ndarray     # [i, r-1]: edge (i, tau_r i) is bichromatic
    component: np.ndarray     # component label per ranking index
    components: int

    @property
    def neighbors(self) -> np.ndarray:
        return neighbor_table(self.n)

    @property
    def bi_edge_count(self) -> int:
        return int(self.sensitive.sum()) // 2

    @property
    def mono_edge_count(self) -> int:
        return int((~self.sensitive).sum()) // 2

    def _edges(self, mask: np.ndarray) -> np.ndarray:
        rows, cols = np.nonzero(mask)
        other = self.neighbors[rows, cols]
        keep = rows < other
        return np.stack([rows[keep], other[keep]], axis=1)

    def bi_edges(self) -> np.ndarray:
        return self._edges(self.sensitive)

    def mono_edges(self) -> np.ndarray:
        return self._edges(~self.sensitive)

    @property
    def avg_sensitivity(self) -> Fraction:
        return Fraction(int(self.sensitive.sum()), math.factorial(self.n))

    def component_sizes(self) -> np.ndarray:
        """Size of the component containing each ranking."""
        counts = np.bincount(self.component, minlength=self.components)
        return counts[self.component]

    def sizes_histogram(self) -> dict[int, int]:
        """component size -> number of components of that size."""
        counts = np.bincount(self.component, minlength=self.components)
        return dict(sorted(Counter(counts.tolist()).items()))

    def report(self) -> dict:
        s = self.avg_sensitivity
        return {
            "n": self.n,
            "problem": self.problem,
            "components": self.components,
            "sizes_histogram": {str(k): v for k, v in self.sizes_histogram().items()},
            "avg_sensitivity": {"num": s.numerator, "den": s.denominator},
            "bounds": {
                "connectivity": self.components,
                "sensitivity_gamma_log2": sensitivity_lemma_bound_log2(s, self.n),
            },
        }


def _color(problem: Problem) -> np.ndarray:
    n = problem.n
    if problem.batch is not None:
        out = np.asarray(problem.batch(all_ranks(n).astype(np.int64)))
        return np.unique(out, return_inverse=True)[1].reshape(-1)
    ids: dict[Hashable, int] = {}
    colors = np.empty(math.factorial(n), dtype=np.int64)
    for i, row in enumerate(all_orders(n)):
        tok = problem.evaluate(Ranking(tuple(problem.items[j] for j in row)))
        colors[i] = ids.setdefault(tok, len(ids))
    return colors


def analyze(problem: Problem, limit: int | None = None) -> PermutahedronAnalysis:
    n = problem.n
    _guard(n, limit)
    colors = _color(problem)
    nbr = neighbor_table(n)
    sensitive = colors[:, None] != colors[nbr]
    total = math.factorial(n)
    rows, cols = np.nonzero(~sensitive)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, nbr[rows, cols])), shape=(total, total))
    count, labels = connected_components(graph, directed=False)
    return PermutahedronAnalysis(n, problem.name, problem.items, colors, sensitive, labels, int(count))


# -- lower-bound formulas -------------------------------------------------------


def component_count_selection(n: int, r: int) -> int:
    if not 1 <= r <= n:
        raise OutOfRange(f"selection rank {r} outside 1..{n}")
    return n * math.comb(n - 1, r - 1)


def piecewise_factorial(x: float) -> float:
    """Linear interpolation of the factorial between consecutive integers."""
    lo = math.floor(x)
    frac = x - lo
    return frac * math.factorial(math.ceil(x)) + (1 - frac) * math.factorial(lo)


def sensitivity_lemma_bound(s: float | Fraction, n: int, g: str = "gamma") -> float:
    """Lower bound g(s+1)/n on the number of traces, with g(x) = Gamma(x+1) by default."""
    s = float(s)
    if g == "gamma":
        try:
            return math.gamma(s + 2) / n
        except OverflowError:
            return math.inf
    if g == "linear":
        return piecewise_factorial(s + 1) / n
    raise ValueError(f"unknown interpolation {g!r}")


def sensitivity_lemma_bound_log2(s: float | Fraction, n: int) -> float:
    return math.lgamma(float(s) + 2) / math.log(2) - math.log2(n)


def connectivity_bound(analysis: PermutahedronAnalysis) -> int:
    return analysis.components


# -- binary trees: sensitivity criterion ---------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    insensitive: bool
    lhs: int
    rhs: int


def binary_criterion_check(tree: Tree, ranking: Ranking, t: Transposition) -> CriterionResult:
    """Decide insensitivity of MInv to ``t`` at ``ranking`` from the cross-inversion counts."""
    if not tree.is_binary():
        raise NotBinary("criterion applies to trees whose internal nodes all have two children")
    if not 1 <= t.r <= ranking.n - 1:
        raise OutOfRange(f"transposition ({t.r},{t.r + 1}) outside 1..{ranking.n}")
    lo, hi = ranking.item(t.r), ranking.item(t.r + 1)
    v = tree.lca(lo, hi)
    A = [x for x in tree.leaves(tree.child_toward(v, lo)) if x != lo]
    B = [y for y in tree.leaves(tree.child_toward(v, hi)) if y != hi]
    cut = ranking[lo]  # nothing sits strictly between lo and hi
    a_lt = sum(1 for x in A if ranking[x] < cut)
    b_lt = sum(1 for y in B if ranking[y] < cut)
    lhs = dinv(A, B, ranking)
    rhs = a_lt - (len(A) - a_lt) + (len(B) - b_lt) - b_lt
    return CriterionResult(lhs == rhs, lhs, rhs)


# -- root sensitivity and the decomposition of s --------------------------------


def _swap_ranks(ranks: np.ndarray, orders: np.ndarray, r: int) -> np.ndarray:
    out = ranks.copy()
    rows = np.arange(len(ranks))
    out[rows, orders[:, r - 1]] = r + 1
    out[rows, orders[:, r]] = r
    return out


def _root_sensitivity_counts(tree: Tree) -> tuple[int, int]:
    """(changed, total) over all rankings and root-crossing transpositions."""
    n = tree.n
    orders = all_orders(n).astype(np.int64)
    ranks = all_ranks(n).astype(np.int64)
    side = np.empty(n, dtype=np.int64)
    for ci, c in enumerate(tree.children(tree.root)):
        for x in tree.leaves(c):
            side[tree.leaf_names.index(x)] = ci
    base = mrinv_batch(tree, tree.root, ranks)
    changed = total = 0
    for r in range(1, n):
        crossing = side[orders[:, r - 1]] != side[orders[:, r]]
        after = mrinv_batch(tree, tree.root, _swap_ranks(ranks, orders, r))
        total += int(crossing.sum())
        changed += int((crossing & (after != base)).sum())
    return changed, total


def root_sensitivity(tree: Tree, limit: int = 9, any_degree: bool = False) -> Fraction:
    """Probability that MRInv at the root changes under a uniform root-crossing transposition."""
    if not any_degree and len(tree.children(tree.root)) != 2:
        raise NotDegree2("root sensitivity needs a root with two children")
    if len(tree.children(tree.root)) < 2:
        raise NotDegree2("root needs at least two children")
    _guard(tree.n, limit)
    changed, total = _root_sensitivity_counts(tree)
    return Fraction(changed, total)


@dataclass(frozen=True)
class DecompositionReport:
    s: Fraction
    rhs: Fraction
    terms: tuple[tuple[int, Fraction, Fraction], ...]  # (node, Pr[node = LCA], root sensitivity)

    @property
    def holds(self) -> bool:
        return self.s == self.rhs


def sensitivity_decomposition_check(tree: Tree, limit: int = 8) -> DecompositionReport:
    """Compare s with (n-1) * sum_v Pr[v = LCA] * rootsens(T_v)."""
    n = tree.n
    _guard(n, limit)
    s = tree_sensitivity(tree)
    terms = []
    rhs = Fraction(0)
    for v in tree.internal_nodes():
        sizes = [tree.leaf_count(c) for c in tree.children(v)]
        if len(sizes) < 2:
            continue
        pairs = sum(sizes[i] * sizes[j] for i in range(len(sizes)) for j in range(i + 1, len(sizes)))
        p_lca = Fraction(2 * pairs, n * (n - 1))
        rs = root_sensitivity(tree.subtree(v), limit=limit, any_degree=True)
        terms.append((v, p_lca, rs))
        rhs += p_lca * rs
    return DecompositionReport(s, (n - 1) * rhs, tuple(terms))


_SENS_CACHE: dict[str, Fraction] = {}


def tree_sensitivity(tree: Tree, limit: int | None = None) -> Fraction:
    """Average sensitivity of MInv on ``tree``; depends only on the unordered shape."""
    key = tree.shape()
    if key not in _SENS_CACHE:
        _SENS_CACHE[key] = analyze(minv_on_tree(tree), limit).avg_sensitivity
    return _SENS_CACHE[key]


# -- subtree bounds -------------------------------------------------------------


def balanced_subtree(tree: Tree) -> tuple[int, Fraction]:
    """First node on the heaviest-child walk with leaf fraction in [1/(k+1), k/(k+1)]."""
    n, k = tree.n, tree.degree
    if n < 2:
        raise OutOfRange("balanced_subtree needs at least two leaves")
    lo, hi = Fraction(1, k + 1), Fraction(k, k + 1)
    v = tree.root
    while True:
        alpha = Fraction(tree.leaf_count(v), n)
        if lo <= alpha <= hi:
            return v, alpha
        if tree.is_leaf(v):  # pragma: no cover - excluded by the balance argument
            raise AssertionError("heaviest-child walk found no balanced node")
        v = max(tree.children(v), key=lambda c: (tree.leaf_count(c), -c))


def subtree_sensitivity_bound(tree: Tree) -> tuple[int, Fraction]:
    v, _ = balanced_subtree(tree)
    ell, n = tree.leaf_count(v), tree.n
    return v, Fraction(ell * (n - ell), n) - 1


@dataclass(frozen=True)
class LipschitzResult:
    s_before: Fraction
    s_after: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return abs(self.s_before - self.s_after) <= self.bound


def lipschitz_check(tree: Tree, node: int, replacement: Tree, limit: int = 8) -> LipschitzResult:
    ell = tree.leaf_count(node)
    if replacement.n != ell:
        raise LeafCountMismatch(f"replacement has {replacement.n} leaves, subtree has {ell}")
    _guard(tree.n, limit)
    if set(replacement.leaf_names) != set(tree.leaves(node)):
        mapping = dict(zip(replacement.leaf_names, tree.leaves(node)))
        replacement = Tree.from_nested(_relabel(replacement.to_nested(), mapping))
    after = replace_subtree(tree, node, replacement)
    return LipschitzResult(tree_sensitivity(tree, limit), tree_sensitivity(after, limit),
                           Fraction(ell * (ell - 1), tree.n))


def _relabel(nested, mapping):
    if isinstance(nested, str):
        return mapping[nested]
    return tuple(_relabel(c, mapping) for c in nested)


# -- partition property and successor graphs -------------------------------------


def successor_graph(problem: Problem, ranking: Ranking) -> list[tuple[int, int]]:
    """Rank pairs (r, r+1) whose swap leaves the output unchanged."""
    base = problem.evaluate(ranking)
    return [(r, r + 1) for r in range(1, ranking.n)
            if problem.evaluate(apply_transposition(ranking, Transposition(r))) == base]


@dataclass(frozen=True)
class PartitionCheck:
    holds: bool
    classes: tuple[frozenset[str], ...]
    counterexample: tuple[Ranking, Transposition] | None = None


def partition_property_check(problem: Problem, analysis: PermutahedronAnalysis | None = None,
                             limit: int | None = None) -> PartitionCheck:
    """Look for an item partition whose within-class swaps are exactly the insensitive ones.

    Candidate classes are the closure of item pairs that are never sensitive;
    the definition is then verified on every ranking and every rank pair.
    """
    n = problem.n
    if analysis is None:
        analysis = analyze(problem, limit)
    orders = all_orders(n)
    sens = analysis.sensitive
    ever = np.zeros((n, n), dtype=bool)
    for r in range(1, n):
        x, y = orders[:, r - 1], orders[:, r]
        ever[x[sens[:, r - 1]], y[sens[:, r - 1]]] = True
    ever |= ever.T
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if not ever[i, j]:
                parent[find(i)] = find(j)
    label = np.array([find(i) for i in range(n)])
    groups: dict[int, list[str]] = {}
    for i in range(n):
        groups.setdefault(int(label[i]), []).append(problem.items[i])
    classes = tuple(frozenset(g) for g in sorted(groups.values(), key=lambda g: problem.items.index(g[0])))
    for r in range(1, n):
        same = label[orders[:, r - 1]] == label[orders[:, r]]
        bad = np.nonzero(same == sens[:, r - 1])[0]
        if len(bad):
            rk = ranking_from_index(int(bad[0]), problem.items)
            return PartitionCheck(False, classes, (rk, Transposition(r)))
    return PartitionCheck(True, classes)


def successor_components(n: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    """Sizes of the runs of consecutive ranks joined by successor edges."""
    linked = {r for r, _ in edges}
    sizes, run = [], 1
    for r in range(1, n):
        if r in linked:
            run += 1
        else:
            sizes.append(run)
            run = 1
    sizes.append(run)
    return sizes


def component_size_from_successor(problem: Problem, ranking: Ranking, verify: bool = True) -> int:
    """Product of factorials of the successor-graph component sizes."""
    if verify and not partition_property_check(problem).holds:
        raise PartitionPropertyViolated(f"{problem.name} lacks the partition property")
    sizes = successor_components(ranking.n, successor_graph(problem, ranking))
    return math.prod(math.factorial(s) for s in sizes)


@dataclass(frozen=True)
class ParityCheck:
    satisfies: bool
    max_class: int
    bound: int  # ceil(n! / (2 (k!)^2)); 0 when the condition fails


def parity_condition_check(tree: Tree) -> ParityCheck:
    """At most one odd leaf child set, and no leaf children above it."""
    tree = normalize(tree)
    sets = {v: tree.leaf_child_set(v) for v in tree.internal_nodes()}
    odd = [v for v, s in sets.items() if len(s) % 2 == 1]
    ok = len(odd) <= 1 and all(not sets[a] for v in odd for a in tree.ancestors(v))
    k = max((len(s) for s in sets.values()), default=1) or 1
    if not ok:
        return ParityCheck(False, k, 0)
    num, den = math.factorial(tree.n), 2 * math.factorial(k) ** 2
    return ParityCheck(True, k, -(-num // den))


# -- paths inside one execution trace --------------------------------------------


def monochromatic_path(dag: ComparisonDAG, start: Ranking, end: Ranking) -> list[Transposition]:
    """Adjacent transpositions leading from ``start`` to ``end`` through linear extensions of ``dag``.

    Find the first rank r where the two disagree; the item y holding rank r in
    ``end`` sits at some rank s > r in the current ranking, and its lower
    neighbour cannot be comparable to it, so swap ranks s-1 and s.
    """
    for rk in (start, end):
        if not dag.is_extension(rk):
            raise NotAnExtension("path endpoints must be linear extensions of the DAG")
    cur = list(start.inverse)
    target = end.inverse
    steps: list[Transposition] = []
    r = 0
    while True:
        while r < len(cur) and cur[r] == target[r]:
            r += 1
        if r == len(cur):
            return steps
        s = cur.index(target[r])
        cur[s - 1], cur[s] = cur[s], cur[s - 1]
        steps.append(Transposition(s))  # 1-based: swaps ranks s and s+1 of the 0-based pair (s-1, s)


# -- Mann-Whitney component sizes and chunk bounds ---------------------------------


def mw_component_size(ranking: Ranking, A, B) -> int:
    A, B = set(A), set(B)
    if A & B or A | B != ranking.items:
        raise NotAPartition("A and B must partition the ranked items")
    labels = ["A" if x in A else "B" for x in ranking.inverse]
    size = 1
    for _, run in itertools.groupby(labels):
        size *= math.factorial(len(list(run)))
    return size


def prob_all_gaps_at_most(a: int, b: int, k: int) -> Fraction:
    """Pr[every one of the b+1 gaps holds at most k of the a items], by inclusion-exclusion."""
    parts = b + 1
    good = 0
    for j in range(parts + 1):
        left = a - j * (k + 1)
        if left < 0:
            break
        good += (-1) ** j * math.comb(parts, j) * math.comb(left + parts - 1, parts - 1)
    return Fraction(good, math.comb(a + b, b))


def prob_gap_exceeds(a: int, b: int, k: int) -> Fraction:
    """Pr[a specific gap holds more than k items] = C(a+b-k-1, b) / C(a+b, b)."""
    if a + b - k - 1 < b:
        return Fraction(0)
    return Fraction(math.comb(a + b - k - 1, b), math.comb(a + b, b))


@dataclass(frozen=True)
class ChunkBounds:
    m_star: int
    n_star: int
    m_bracket: tuple[float, float]
    n_bracket: tuple[float, float]

    @property
    def within(self) -> bool:
        return (self.m_bracket[0] <= self.m_star <= self.m_bracket[1]
                and self.n_bracket[0] <= self.n_star <= self.n_bracket[1])


def _min_chunk(a: int, b: int) -> int:
    k = 0
    while prob_all_gaps_at_most(a, b, k) < Fraction(3, 4):
        k += 1
    return k


def mw_chunk_bounds(a: int, b: int) -> ChunkBounds:
    if a < 1 or b < 1:
        raise OutOfRange("chunk bounds need a, b >= 1")
    m_br = (max(1.0, a / (b + 1)), (a + b) / b * math.log(4 * (b + 1)))
    n_br = (max(1.0, b / (a + 1)), (a + b) / a * math.log(4 * (a + 1)))
    return ChunkBounds(_min_chunk(a, b), _min_chunk(b, a), m_br, n_br)
