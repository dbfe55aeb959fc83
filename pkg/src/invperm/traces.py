"""Comparison DAGs, linear extensions and the lucky-item trace encoding.

The outcomes of the comparisons an algorithm made form a DAG; the rankings
consistent with them are its linear extensions.  A ranking whose consecutive
ranks are joined by d DAG paths can be rebuilt from a set of d+1 "lucky"
items plus the order of the rest, which caps the number of such rankings at
n!/(d+1)!.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .core_model import Ranking
from .errors import Cyclic, InvalidEncoding, LimitExceeded, NotAnExtension, ParseError

EXTENSION_COUNT_LIMIT = 12
ENCODING_CHECK_LIMIT = 8


@dataclass(frozen=True)
class ComparisonDAG:
    items: tuple[str, ...]
    edges: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.items)) != len(self.items):
            raise ParseError("duplicate item in DAG")
        known = set(self.items)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ParseError(f"edge ({u}, {v}) uses an unknown item")
            if u == v:
                raise Cyclic(f"self-loop on {u}")
        _ = self.reach  # validates acyclicity eagerly

    @property
    def n(self) -> int:
        return len(self.items)

    @cached_property
    def index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.items)}

    @cached_property
    def preds(self) -> tuple[int, ...]:
        """Bitmask of direct predecessors per item."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[self.index[v]] |= 1 << self.index[u]
        return tuple(masks)

    @cached_property
    def reach(self) -> tuple[int, ...]:
        """Bitmask of items reachable by a non-empty path, per item."""
        n, idx = self.n, self.index
        succ = [[] for _ in range(n)]
        indeg = [0] * n
        for u, v in self.edges:
            succ[idx[u]].append(idx[v])
            indeg[idx[v]] += 1
        order = [i for i in range(n) if indeg[i] == 0]
        for i in order:
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
        if len(order) != n:
            raise Cyclic("comparison graph has a cycle")
        reach = [0] * n
        for i in reversed(order):
            for j in succ[i]:
                reach[i] |= (1 << j) | reach[j]
        return tuple(reach)

    @cached_property
    def ancestors(self) -> tuple[int, ...]:
        anc = [0] * self.n
        for i, r in enumerate(self.reach):
            for j in range(self.n):
                if r >> j & 1:
                    anc[j] |= 1 << i
        return tuple(anc)

    def path(self, u: str, v: str) -> bool:
        return bool(self.reach[self.index[u]] >> self.index[v] & 1)

    def is_extension(self, ranking: Ranking) -> bool:
        if ranking.items != frozenset(self.items):
            return False
        return all(ranking[u] < ranking[v] for u, v in self.edges)

    def to_json(self) -> str:
        return json.dumps({"items": list(self.items), "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str | bytes) -> "ComparisonDAG":
        try:
            obj = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"malformed JSON: {exc}") from None
        if not isinstance(obj, dict) or not isinstance(obj.get("items"), list):
            raise ParseError('DAG JSON must be {"items": [...], "edges": [[u, v], ...]}')
        edges = obj.get("edges", [])
        if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
            raise ParseError("edges must be a list of [u, v] pairs")
        if any(not isinstance(x, str) for x in obj["items"]):
            raise ParseError("items must be strings")
        return cls(tuple(obj["items"]), tuple((str(u), str(v)) for u, v in edges))


@dataclass(frozen=True)
class TraceEncoding:
    lucky: frozenset[str]
    nonlucky_order: tuple[str, ...]


def _require_extension(ranking: Ranking, dag: ComparisonDAG) -> None:
    if not dag.is_extension(ranking):
        raise NotAnExtension("ranking is not a linear extension of the comparison DAG")


def linear_extensions(dag: ComparisonDAG, limit: int = EXTENSION_COUNT_LIMIT) -> int:
    """Number of linear extensions, by DP over the sets of already placed items."""
    n = dag.n
    if n > limit:
        raise LimitExceeded(f"{n} items exceed the extension-count limit {limit}")
    count = [0] * (1 << n)
    count[0] = 1
    preds = dag.preds
    for s in range(1 << n):
        c = count[s]
        if not c:
            continue
        for v in range(n):
            if not s >> v & 1 and preds[v] & ~s == 0:
                count[s | 1 << v] += c
    return count[-1]


def iter_linear_extensions(dag: ComparisonDAG) -> Iterator[Ranking]:
    n, preds = dag.n, dag.preds
    prefix: list[int] = []

    def rec(placed: int) -> Iterator[Ranking]:
        if len(prefix) == n:
            yield Ranking(tuple(dag.items[i] for i in prefix))
            return
        for v in range(n):
            if not placed >> v & 1 and preds[v] & ~placed == 0:
                prefix.append(v)
                yield from rec(placed | 1 << v)
                prefix.pop()

    yield from rec(0)


def _lucky_ranks(ranking: Ranking, dag: ComparisonDAG) -> list[int]:
    return [r for r in range(2, ranking.n + 1) if dag.path(ranking.item(r - 1), ranking.item(r))]


def degree_in_complement(ranking: Ranking, dag: ComparisonDAG) -> int:
    """Number of r in 2..n with a DAG path from the rank r-1 item to the rank r item."""
    _require_extension(ranking, dag)
    return len(_lucky_ranks(ranking, dag))


def encode(ranking: Ranking, dag: ComparisonDAG) -> TraceEncoding:
    _require_extension(ranking, dag)
    lucky = {ranking.item(1)} | {ranking.item(r) for r in _lucky_ranks(ranking, dag)}
    rest = tuple(x for x in ranking.inverse if x not in lucky)
    return TraceEncoding(frozenset(lucky), rest)


def decode(enc: TraceEncoding, dag: ComparisonDAG) -> Ranking:
    """Run BuildRanking, taking the lucky item when one is available, else the next non-lucky one."""
    if enc.lucky & set(enc.nonlucky_order) or (enc.lucky | set(enc.nonlucky_order)) != set(dag.items) \
            or len(enc.lucky) + len(enc.nonlucky_order) != dag.n or not enc.lucky:
        raise InvalidEncoding("lucky set and non-lucky order must partition the items")
    idx, anc = dag.index, dag.ancestors
    unplaced = (1 << dag.n) - 1
    lucky = {idx[x] for x in enc.lucky}
    queue = [idx[x] for x in enc.nonlucky_order]
    q = 0
    out: list[str] = []
    for _ in range(dag.n):
        avail = [v for v in range(dag.n) if unplaced >> v & 1 and anc[v] & unplaced == 0]
        hits = [v for v in avail if v in lucky]
        if len(hits) > 1:
            raise InvalidEncoding("more than one lucky item available at once")
        if hits:
            x = hits[0]
        else:
            while q < len(queue) and not unplaced >> queue[q] & 1:
                q += 1
            if q == len(queue) or queue[q] not in avail:
                raise InvalidEncoding("next non-lucky item is not available")
            x = queue[q]
        unplaced &= ~(1 << x)
        out.append(dag.items[x])
    return Ranking(tuple(out))


def encoding_count_check(dag: ComparisonDAG, d: int, limit: int = ENCODING_CHECK_LIMIT) -> tuple[int, int]:
    """(extensions with degree d, n!/(d+1)!)."""
    if dag.n > limit:
        raise LimitExceeded(f"{dag.n} items exceed the encoding-check limit {limit}")
    actual = sum(1 for rk in iter_linear_extensions(dag) if len(_lucky_ranks(rk, dag)) == d)
    bound = math.factorial(dag.n) // math.factorial(d + 1) if d + 1 <= dag.n else 0
    return actual, bound


def degree_histogram(dag: ComparisonDAG) -> dict[int, int]:
    hist: dict[int, int] = {}
    for rk in iter_linear_extensions(dag):
        d = len(_lucky_ranks(rk, dag))
        hist[d] = hist.get(d, 0) + 1
    return dict(sorted(hist.items()))


def chain(items: Sequence[str]) -> ComparisonDAG:
    return ComparisonDAG(tuple(items), tuple(zip(items, items[1:])))
