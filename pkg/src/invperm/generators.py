"""Tree-shape enumeration and seeded random instances.

All randomness goes through ``make_rng``, a numpy ``Generator`` over the
PCG64 bit generator, so a seed reproduces the same instances everywhere.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

import numpy as np

from .core_model import Nested, Tree

PRNG_NAME = "numpy.random.PCG64"
DEFAULT_SEED = 20240101


def make_rng(seed: int | None = None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(DEFAULT_SEED if seed is None else seed))


# -- unordered shapes ---------------------------------------------------------
# A shape is () for a leaf, or a sorted tuple of child shapes.

Shape = tuple


def _partitions(n: int, max_part: int, min_parts: int) -> Iterator[list[int]]:
    """Partitions of n into non-increasing parts <= max_part, with at least min_parts parts."""
    if n == 0:
        if min_parts <= 0:
            yield []
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - p, p, min_parts - 1):
            yield [p] + rest


def _multisets(options: list, count: int, start: int = 0) -> Iterator[tuple]:
    if count == 0:
        yield ()
        return
    for i in range(start, len(options)):
        for rest in _multisets(options, count - 1, i):
            yield (options[i],) + rest


@lru_cache(maxsize=None)
def shapes(n: int, binary: bool = False) -> tuple[Shape, ...]:
    """All unordered rooted shapes with n leaves and no degree-1 nodes."""
    if n == 1:
        return ((),)
    out = set()
    for parts in _partitions(n, n - 1, 2):
        if binary and len(parts) != 2:
            continue
        # group equal part sizes so each multiset of subshapes is produced once
        groups: dict[int, int] = {}
        for p in parts:
            groups[p] = groups.get(p, 0) + 1
        combos: list[tuple] = [()]
        for size, cnt in groups.items():
            opts = list(shapes(size, binary))
            combos = [c + m for c in combos for m in _multisets(opts, cnt)]
        for c in combos:
            out.add(tuple(sorted(c)))
    return tuple(sorted(out))


def shape_to_tree(shape: Shape, prefix: str = "x") -> Tree:
    """Label the leaves of a shape prefix1, prefix2, ... left to right."""
    counter = iter(range(1, 10**9))

    def build(s: Shape) -> Nested:
        if s == ():
            return f"{prefix}{next(counter)}"
        return tuple(build(c) for c in s)

    return Tree.from_nested(build(shape))


def all_trees(n: int, binary: bool = False) -> list[Tree]:
    return [shape_to_tree(s) for s in shapes(n, binary)]


# -- random instances ---------------------------------------------------------


def random_tree(n: int, rng: np.random.Generator, max_degree: int = 4, prefix: str = "x") -> Tree:
    """Random tree without degree-1 nodes, built by recursive random splits."""
    names = [f"{prefix}{i}" for i in range(1, n + 1)]

    def build(items: list[str]) -> Nested:
        if len(items) == 1:
            return items[0]
        k = int(rng.integers(2, min(max_degree, len(items)) + 1))
        cuts = sorted(rng.choice(np.arange(1, len(items)), size=k - 1, replace=False).tolist())
        bounds = [0] + cuts + [len(items)]
        return tuple(build(items[bounds[i]:bounds[i + 1]]) for i in range(k))

    return Tree.from_nested(build(names))


def random_binary_tree(n: int, rng: np.random.Generator, prefix: str = "x") -> Tree:
    return random_tree(n, rng, max_degree=2, prefix=prefix)


def random_permutation(n: int, rng: np.random.Generator) -> list[int]:
    return rng.permutation(n).tolist()


def random_comparisons(n: int, m: int, rng: np.random.Generator) -> tuple[list[str], list[tuple[str, str]]]:
    """m random comparisons among n items, oriented by a hidden random ranking (so acyclic)."""
    items = [f"x{i}" for i in range(1, n + 1)]
    hidden = rng.permutation(n)
    edges = set()
    for _ in range(m):
        i, j = rng.choice(n, size=2, replace=False).tolist()
        if hidden[i] > hidden[j]:
            i, j = j, i
        edges.add((items[i], items[j]))
    return items, sorted(edges)


def random_simple_digraph(n: int, rng: np.random.Generator, p: float = 0.5) -> list[tuple[int, int]]:
    """Each unordered pair gets at most one arc, present with probability p, random direction."""
    arcs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return arcs


# -- named instances ------------------------------------------------------------


def mann_whitney_tree(a: int, b: int) -> Tree:
    """Root with two flat groups of a and b leaves (a1.., b1..); a group of one is a bare leaf."""
    def group(prefix: str, size: int) -> Nested:
        names = tuple(f"{prefix}{i}" for i in range(1, size + 1))
        return names[0] if size == 1 else names

    return Tree.from_nested((group("a", a), group("b", b)))


def rank_instance(n: int, r: int):
    """The a=1 Mann-Whitney tree with the lone leaf at rank r; MInv = min(r-1, n-r)."""
    from .core_model import Ranking

    if n == 1:
        return Tree.from_nested("a1"), Ranking(("a1",))
    tree = mann_whitney_tree(1, n - 1)
    others = [f"b{i}" for i in range(1, n)]
    return tree, Ranking(tuple(others[:r - 1] + ["a1"] + others[r - 1:]))
