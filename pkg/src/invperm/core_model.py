"""Trees, rankings, orderings and adjacent-rank transpositions.

A :class:`Tree` is an immutable table of node records indexed densely in
document (preorder) order, so the root is node 0 and the children of a node
always carry larger indices than the node itself.  Leaves are identified by
their unique names; ranks are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

from .errors import DuplicateLeaf, MissingNode, OutOfRange, ParseError, BadPermutation

# Nested form accepted by Tree.from_nested: a leaf name, or a sequence of nested forms.
Nested = Union[str, Sequence["Nested"]]


@dataclass(frozen=True)
class Node:
    parent: int | None
    children: tuple[int, ...]
    name: str | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Tree:
    nodes: tuple[Node, ...]
    root: int = 0

    def __post_init__(self) -> None:
        nodes = self.nodes
        if not nodes:
            raise ParseError("tree has no nodes")
        if not 0 <= self.root < len(nodes) or nodes[self.root].parent is not None:
            raise ParseError("root must be a node without parent")
        seen: set[str] = set()
        for i, node in enumerate(nodes):
            if (node.name is None) == node.is_leaf:
                raise ParseError(f"node {i}: a node is a leaf iff it carries a name")
            if node.name is not None:
                if node.name in seen:
                    raise DuplicateLeaf(f"leaf name {node.name!r} occurs twice")
                seen.add(node.name)
            if i != self.root and node.parent is None:
                raise ParseError(f"node {i} has no parent but is not the root")
            for c in node.children:
                if not 0 <= c < len(nodes) or nodes[c].parent != i:
                    raise ParseError(f"node {i}: inconsistent child link to {c}")
        # every node must be reachable from the root (rules out cycles)
        if len(self._preorder()) != len(nodes):
            raise ParseError("node table is not a single rooted tree")

    def _preorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            if len(out) > len(self.nodes):
                break
            stack.extend(reversed(self.nodes[v].children))
        return out

    # -- construction ---------------------------------------------------

    @classmethod
    def from_nested(cls, obj: Nested) -> "Tree":
        """Build from a leaf name or a nested sequence, e.g. ``("a", ("b", "c"))``."""
        records: list[list[Any]] = []

        def build(o: Nested, parent: int | None) -> int:
            idx = len(records)
            if isinstance(o, str):
                records.append([parent, [], o])
                return idx
            if not isinstance(o, Sequence) or len(o) == 0:
                raise ParseError("internal node needs at least one child")
            records.append([parent, [], None])
            for child in o:
                records[idx][1].append(build(child, idx))
            return idx

        build(obj, None)
        return cls(tuple(Node(p, tuple(ch), nm) for p, ch, nm in records))

    def to_nested(self, v: int | None = None) -> Nested:
        v = self.root if v is None else v
        node = self.nodes[v]
        if node.is_leaf:
            return node.name  # type: ignore[return-value]
        return tuple(self.to_nested(c) for c in node.children)

    # -- basic queries --------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.leaf_names)

    @cached_property
    def leaf_names(self) -> tuple[str, ...]:
        return tuple(self.nodes[v].name for v in self._preorder() if self.nodes[v].is_leaf)  # type: ignore[misc]

    @cached_property
    def leaf_node(self) -> Mapping[str, int]:
        return MappingProxyType({nd.name: i for i, nd in enumerate(self.nodes) if nd.name is not None})

    def children(self, v: int) -> tuple[int, ...]:
        return self.nodes[v].children

    def is_leaf(self, v: int) -> bool:
        return self.nodes[v].is_leaf

    def internal_nodes(self) -> list[int]:
        return [v for v in self._preorder() if not self.nodes[v].is_leaf]

    @cached_property
    def _leaves_under(self) -> tuple[tuple[str, ...], ...]:
        out: list[tuple[str, ...]] = [()] * len(self.nodes)
        for v in reversed(self._preorder()):
            nd = self.nodes[v]
            if nd.is_leaf:
                out[v] = (nd.name,)  # type: ignore[assignment]
            else:
                out[v] = tuple(x for c in nd.children for x in out[c])
        return tuple(out)

    def leaves(self, v: int | None = None) -> tuple[str, ...]:
        """Leaf names of the subtree at ``v`` in document order."""
        return self._leaves_under[self.root if v is None else v]

    def leaf_count(self, v: int) -> int:
        return len(self._leaves_under[v])

    def leaf_child_set(self, v: int) -> tuple[str, ...]:
        return tuple(self.nodes[c].name for c in self.nodes[v].children if self.nodes[c].is_leaf)  # type: ignore[misc]

    @property
    def degree(self) -> int:
        return max((len(nd.children) for nd in self.nodes), default=0)

    def ancestors(self, v: int) -> list[int]:
        out = []
        p = self.nodes[v].parent
        while p is not None:
            out.append(p)
            p = self.nodes[p].parent
        return out

    def path_to_root(self, v: int) -> list[int]:
        return [v] + self.ancestors(v)

    def lca(self, x: str, y: str) -> int:
        up = set(self.path_to_root(self.leaf_node[x]))
        for v in self.path_to_root(self.leaf_node[y]):
            if v in up:
                return v
        raise AssertionError("tree is not connected")  # pragma: no cover

    def child_toward(self, v: int, leaf: str) -> int:
        """The child of ``v`` whose subtree contains ``leaf``."""
        u = self.leaf_node[leaf]
        while self.nodes[u].parent != v:
            u = self.nodes[u].parent  # type: ignore[assignment]
            if u is None:
                raise MissingNode(f"leaf {leaf!r} is not below node {v}")
        return u

    def is_binary(self) -> bool:
        return all(len(nd.children) in (0, 2) for nd in self.nodes)

    def subtree(self, v: int) -> "Tree":
        return Tree.from_nested(self.to_nested(v))

    def shape(self, v: int | None = None) -> str:
        """Canonical string of the unordered, unlabeled shape."""
        v = self.root if v is None else v
        nd = self.nodes[v]
        if nd.is_leaf:
            return "*"
        return "(" + ",".join(sorted(self.shape(c) for c in nd.children)) + ")"

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes)


@dataclass(frozen=True)
class Ranking:
    """Bijection from names to 1..n, stored as the rank-ordered name tuple."""

    inverse: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.inverse)) != len(self.inverse):
            raise DuplicateLeaf("ranking lists an item twice")

    @classmethod
    def from_order(cls, names: Iterable[str]) -> "Ranking":
        return cls(tuple(names))

    @classmethod
    def from_ranks(cls, rank_of: Mapping[str, int]) -> "Ranking":
        n = len(rank_of)
        inv: list[str | None] = [None] * n
        for name, r in rank_of.items():
            if isinstance(r, bool) or not isinstance(r, int) or not 1 <= r <= n:
                raise OutOfRange(f"rank of {name!r} must be an integer in 1..{n}, got {r!r}")
            if inv[r - 1] is not None:
                raise OutOfRange(f"rank {r} assigned twice")
            inv[r - 1] = name
        return cls(tuple(inv))  # type: ignore[arg-type]

    @cached_property
    def rank_of(self) -> Mapping[str, int]:
        return MappingProxyType({x: i + 1 for i, x in enumerate(self.inverse)})

    @property
    def n(self) -> int:
        return len(self.inverse)

    def __getitem__(self, name: str) -> int:
        return self.rank_of[name]

    def item(self, r: int) -> str:
        return self.inverse[r - 1]

    @property
    def items(self) -> frozenset[str]:
        return frozenset(self.inverse)


@dataclass(frozen=True)
class Ordering:
    """Per-internal-node child order: node index -> reordered child indices."""

    child_perm: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "child_perm", MappingProxyType({k: tuple(v) for k, v in self.child_perm.items()})
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.child_perm.items())))


@dataclass(frozen=True)
class Transposition:
    """Swap of the items holding ranks r and r+1."""

    r: int

    def __post_init__(self) -> None:
        if isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
            raise OutOfRange(f"transposition rank must be >= 1, got {self.r!r}")


# -- JSON -------------------------------------------------------------------


def _nested_from_json(obj: Any, path: str = "$") -> Nested:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    keys = set(obj)
    if keys == {"leaf"}:
        if not isinstance(obj["leaf"], str):
            raise ParseError(f"{path}.leaf: expected a string")
        return obj["leaf"]
    if keys == {"children"}:
        ch = obj["children"]
        if not isinstance(ch, list) or not ch:
            raise ParseError(f"{path}.children: expected a non-empty array")
        return [_nested_from_json(c, f"{path}.children[{i}]") for i, c in enumerate(ch)]
    raise ParseError(f"{path}: expected exactly one of 'leaf' or 'children'")


def _load(text: str | bytes) -> Any:
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def parse_tree(text: str | bytes) -> Tree:
    return Tree.from_nested(_nested_from_json(_load(text)))


def tree_to_obj(tree: Tree, v: int | None = None) -> dict:
    v = tree.root if v is None else v
    nd = tree.nodes[v]
    if nd.is_leaf:
        return {"leaf": nd.name}
    return {"children": [tree_to_obj(tree, c) for c in nd.children]}


def serialize_tree(tree: Tree) -> str:
    return json.dumps(tree_to_obj(tree), ensure_ascii=False)


def parse_ranking(text: str | bytes) -> Ranking:
    obj = _load(text)
    if not isinstance(obj, dict) or set(obj) != {"ranks"} or not isinstance(obj["ranks"], dict):
        raise ParseError('ranking JSON must be {"ranks": {name: rank, ...}}')
    return Ranking.from_ranks(obj["ranks"])


def serialize_ranking(ranking: Ranking) -> str:
    return json.dumps({"ranks": dict(ranking.rank_of)}, ensure_ascii=False)


# -- operations -------------------------------------------------------------


def normalize(tree: Tree) -> Tree:
    """Short-cut every internal node with exactly one child."""

    def walk(v: int) -> Nested:
        while len(tree.children(v)) == 1:
            v = tree.children(v)[0]
        nd = tree.nodes[v]
        if nd.is_leaf:
            return nd.name  # type: ignore[return-value]
        return tuple(walk(c) for c in nd.children)

    return Tree.from_nested(walk(tree.root))


def identity_ordering(tree: Tree) -> Ordering:
    return Ordering({v: tree.children(v) for v in tree.internal_nodes()})


def induced_ranking(tree: Tree, ordering: Ordering) -> Ranking:
    """Left-to-right leaf ranking under the per-node child permutations."""
    perms = ordering.child_perm
    out: list[str] = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        nd = tree.nodes[v]
        if nd.is_leaf:
            out.append(nd.name)  # type: ignore[arg-type]
            continue
        if v not in perms:
            raise MissingNode(f"ordering lacks internal node {v}")
        perm = perms[v]
        if sorted(perm) != sorted(nd.children):
            raise BadPermutation(f"ordering at node {v} is not a permutation of its children")
        stack.extend(reversed(perm))
    return Ranking(tuple(out))


def apply_transposition(ranking: Ranking, t: Transposition) -> Ranking:
    if not 1 <= t.r <= ranking.n - 1:
        raise OutOfRange(f"transposition ({t.r},{t.r + 1}) outside 1..{ranking.n}")
    inv = list(ranking.inverse)
    inv[t.r - 1], inv[t.r] = inv[t.r], inv[t.r - 1]
    return Ranking(tuple(inv))


def replace_subtree(tree: Tree, v: int, replacement: Tree) -> Tree:
    """Tree with the subtree at ``v`` swapped for ``replacement`` (leaf names kept as given)."""

    def walk(u: int) -> Nested:
        if u == v:
            return replacement.to_nested()
        nd = tree.nodes[u]
        if nd.is_leaf:
            return nd.name  # type: ignore[return-value]
        return tuple(walk(c) for c in nd.children)

    return Tree.from_nested(walk(tree.root))
