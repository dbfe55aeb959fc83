"""Inversions, cross inversions and the rank statistics built on them."""

from __future__ import annotations

import heapq
import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .core_model import Ranking, Tree
from .errors import DomainMismatch, InvalidRankSum, NotAPartition, Overlap


def count_inversions(seq: Sequence[int]) -> int:
    """Pairs i < j with seq[i] > seq[j], by bottom-up merge sort."""
    a = list(seq)
    n = len(a)
    buf = [0] * n
    total = 0
    width = 1
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid, hi = lo + width, min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    buf[k] = a[j]
                    total += mid - i
                    j += 1
                else:
                    buf[k] = a[i]
                    i += 1
                k += 1
            buf[k:k + mid - i] = a[i:mid]
            k += mid - i
            buf[k:k + hi - j] = a[j:hi]
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return total


def count_inversions_bruteforce(seq: Sequence[int]) -> int:
    n = len(seq)
    return sum(1 for i in range(n) for j in range(i + 1, n) if seq[i] > seq[j])


def _same_domain(sigma: Ranking, rho: Ranking) -> None:
    if sigma.items != rho.items:
        raise DomainMismatch("rankings are over different item sets")


def inv(sigma: Ranking, rho: Ranking) -> int:
    """Number of pairs ordered one way by ``rho`` and the other way by ``sigma``."""
    _same_domain(sigma, rho)
    return count_inversions([rho[x] for x in sigma.inverse])


def inv_bruteforce(sigma: Ranking, rho: Ranking) -> int:
    _same_domain(sigma, rho)
    xs = sigma.inverse
    return sum(
        1
        for x1 in xs
        for x2 in xs
        if rho[x1] < rho[x2] and sigma[x1] > sigma[x2]
    )


# -- cross inversions ---------------------------------------------------------


def _ranks(items: Collection[str], ranking: Ranking) -> list[int]:
    try:
        return [ranking[x] for x in items]
    except KeyError as exc:
        raise DomainMismatch(f"item {exc.args[0]!r} is not ranked") from None


def _check_disjoint(A: Collection[str], B: Collection[str]) -> None:
    common = set(A) & set(B)
    if common:
        raise Overlap(f"sets share items: {sorted(common)}")


def xinv_ranks_merge(ra: Iterable[int], rb: Iterable[int]) -> int:
    """|{(x, y): x > y}| for two rank lists, by merging the sorted lists."""
    sa, sb = sorted(ra), sorted(rb)
    total = j = 0
    for x in sa:
        while j < len(sb) and sb[j] < x:
            j += 1
        total += j
    return total


def xinv_ranks_bisect(ra: Sequence[int], rb: Sequence[int]) -> int:
    """Same count, sorting only the smaller side and binary-searching the larger."""
    if len(ra) <= len(rb):
        sa = sorted(ra)
        # pairs with x > y, counted per y as the number of x above it
        return sum(len(sa) - bisect_left(sa, y + 1) for y in rb)
    sb = sorted(rb)
    return sum(bisect_left(sb, x) for x in ra)


def xinv_ranks_bruteforce(ra: Iterable[int], rb: Iterable[int]) -> int:
    rb = list(rb)
    return sum(1 for x in ra for y in rb if x > y)


def _use_bisect(a: int, b: int) -> bool:
    small, large = min(a, b), max(a, b)
    return small <= large / math.log2(small + 2)


def xinv(A: Collection[str], B: Collection[str], ranking: Ranking, method: str = "auto") -> int:
    """Cross inversions from A to B: pairs (x in A, y in B) with rank(x) > rank(y)."""
    _check_disjoint(A, B)
    ra, rb = _ranks(A, ranking), _ranks(B, ranking)
    if method == "auto":
        method = "bisect" if _use_bisect(len(ra), len(rb)) else "merge"
    if method == "merge":
        return xinv_ranks_merge(ra, rb)
    if method == "bisect":
        return xinv_ranks_bisect(ra, rb)
    if method == "brute":
        return xinv_ranks_bruteforce(ra, rb)
    raise ValueError(f"unknown xinv method {method!r}")


def dinv(A: Collection[str], B: Collection[str], ranking: Ranking) -> int:
    """xinv(A, B) - xinv(B, A), computed as |A||B| - 2 xinv(B, A)."""
    return len(A) * len(B) - 2 * xinv(B, A, ranking)


def _check_partition(A: Collection[str], B: Collection[str], ranking: Ranking) -> None:
    _check_disjoint(A, B)
    if set(A) | set(B) != ranking.items or len(A) + len(B) != ranking.n:
        raise NotAPartition("A and B must partition the ranked items")


def mann_whitney_u(A: Collection[str], B: Collection[str], ranking: Ranking) -> int:
    _check_partition(A, B, ranking)
    x = xinv(A, B, ranking)
    return min(x, len(A) * len(B) - x)


def wilcoxon_w(B: Collection[str], ranking: Ranking) -> int:
    """Rank sum of B."""
    return sum(_ranks(B, ranking))


def xinv_via_wilcoxon(a: int, b: int, w_b: int) -> int:
    lo, hi = b * (b + 1) // 2, b * (2 * a + b + 1) // 2
    if not lo <= w_b <= hi:
        raise InvalidRankSum(f"rank sum {w_b} outside [{lo}, {hi}] for a={a}, b={b}")
    return a * b + b * (b + 1) // 2 - w_b


# -- per-node cross-inversion tables -----------------------------------------


@dataclass(frozen=True)
class CrossInvMatrix:
    """xinv[i][j] = XInv(L_i, L_j) over the children of one node."""

    sizes: tuple[int, ...]
    xinv: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.sizes)

    def consistent(self) -> bool:
        k = self.k
        if len(self.xinv) != k or any(len(row) != k for row in self.xinv):
            return False
        for i in range(k):
            if self.xinv[i][i] != 0:
                return False
            for j in range(k):
                v = self.xinv[i][j]
                if v < 0 or (i != j and v + self.xinv[j][i] != self.sizes[i] * self.sizes[j]):
                    return False
        return True


def cross_inv_tables(tree: Tree, ranking: Ranking) -> dict[int, CrossInvMatrix]:
    """One bottom-up pass computing the table at every internal node.

    Each node merges the sorted rank lists of its children; while walking the
    merged list, an item of child j lies above every item already seen from
    child i, which is one cross inversion (j, i) per such item.
    """
    if set(tree.leaf_names) != ranking.items:
        raise DomainMismatch("ranking does not cover exactly the leaves of the tree")
    sorted_ranks: dict[int, list[int]] = {}
    tables: dict[int, CrossInvMatrix] = {}
    # children carry larger indices than their parent, so reverse index order is bottom-up
    for v in range(len(tree.nodes) - 1, -1, -1):
        nd = tree.nodes[v]
        if nd.is_leaf:
            sorted_ranks[v] = [ranking[nd.name]]  # type: ignore[index]
            continue
        kids = nd.children
        k = len(kids)
        seen = [0] * k
        table = [[0] * k for _ in range(k)]
        merged: list[int] = []
        tagged = [[(r, j) for r in sorted_ranks.pop(c)] for j, c in enumerate(kids)]
        for r, j in heapq.merge(*tagged):
            row = table[j]
            for i in range(k):
                row[i] += seen[i]
            seen[j] += 1
            merged.append(r)
        for j in range(k):
            table[j][j] = 0
        sorted_ranks[v] = merged
        tables[v] = CrossInvMatrix(tuple(seen), tuple(tuple(row) for row in table))
    return tables
