"""Reductions between inversion minimization and minimum feedback arc set."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .core_model import Ranking, Tree
from .counting import CrossInvMatrix
from .errors import (
    InconsistentTable,
    Infeasible,
    IsolatedVertex,
    LimitExceeded,
    ParallelArcs,
    ParseError,
)
from .minimizer import min_ordering_dp

MFAS_BRUTE_LIMIT = 10


@dataclass(frozen=True)
class WeightedDigraph:
    n: int
    arcs: tuple[tuple[int, int, int], ...]  # (u, v, weight), 0-based

    def __post_init__(self):
        seen = set()
        for u, v, w in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParseError(f"arc ({u}, {v}) uses a vertex outside 0..{self.n - 1}")
            if u == v:
                raise ParseError(f"self-loop on {u}")
            if w < 1:
                raise ParseError(f"arc ({u}, {v}) has weight {w} < 1")
            if (u, v) in seen:
                raise ParallelArcs(f"arc ({u}, {v}) appears twice")
            seen.add((u, v))

    @classmethod
    def unweighted(cls, n: int, arcs) -> "WeightedDigraph":
        return cls(n, tuple((u, v, 1) for u, v in arcs))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "arcs": [list(a) for a in self.arcs]})

    @classmethod
    def from_json(cls, text) -> "WeightedDigraph":
        try:
            obj = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ParseError(f"malformed JSON: {exc}") from None
        if not isinstance(obj, dict) or not isinstance(obj.get("n"), int) or not isinstance(obj.get("arcs", []), list):
            raise ParseError('digraph JSON must be {"n": int, "arcs": [[u, v, w?], ...]}')
        arcs = []
        for a in obj.get("arcs", []):
            if not isinstance(a, list) or len(a) not in (2, 3) or not all(isinstance(x, int) for x in a):
                raise ParseError(f"bad arc {a!r}")
            arcs.append((a[0], a[1], a[2] if len(a) == 3 else 1))
        return cls(obj["n"], tuple(arcs))

    def weight_matrix(self) -> list[list[int]]:
        m = [[0] * self.n for _ in range(self.n)]
        for u, v, w in self.arcs:
            m[u][v] += w
        return m


def fas_cost(g: WeightedDigraph, order) -> int:
    """Weight of arcs pointing backward when vertices are laid out in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    return sum(w for u, v, w in g.arcs if pos[u] > pos[v])


def brute_force_mfas(g: WeightedDigraph, limit: int = MFAS_BRUTE_LIMIT) -> int:
    if g.n > limit:
        raise LimitExceeded(f"{g.n} vertices exceed the brute-force limit {limit}")
    if g.n == 0:
        return 0
    return min(fas_cost(g, p) for p in itertools.permutations(range(g.n)))


def solve_mfas(g: WeightedDigraph) -> tuple[int, tuple[int, ...]]:
    """Exact MFAS through the subset DP: placing v before u costs the weight of arc u -> v."""
    w = g.weight_matrix()
    cost = [[w[j][i] for j in range(g.n)] for i in range(g.n)]
    return min_ordering_dp(cost)


def mrinv_to_mfas(table: CrossInvMatrix) -> tuple[WeightedDigraph, int]:
    """Arc i -> j weighted XInv(L_j, L_i) - XInv(L_i, L_j) when positive; MRInv = offset + MFAS."""
    if not table.consistent():
        raise InconsistentTable("cross-inversion table does not satisfy x_ij + x_ji = |L_i||L_j|")
    x, k = table.xinv, table.k
    arcs, offset = [], 0
    for i in range(k):
        for j in range(i + 1, k):
            offset += min(x[i][j], x[j][i])
            if x[j][i] > x[i][j]:
                arcs.append((i, j, x[j][i] - x[i][j]))
            elif x[i][j] > x[j][i]:
                arcs.append((j, i, x[i][j] - x[j][i]))
    return WeightedDigraph(k, tuple(arcs)), offset


def mfas_to_tree_gadget(g: WeightedDigraph) -> tuple[Tree, Ranking]:
    """Depth-2 tree with one root child per vertex and four leaves per arc.

    Arc e_k = (v_i -> v_j) puts pre-ranks -2k and 2k-1 under v_i and -2k+1 and
    2k under v_j; the pre-ranks are then replaced by their order positions.
    """
    if any(w != 1 for _, _, w in g.arcs):
        raise ParseError("the gadget takes an unweighted digraph")
    pairs = set()
    for u, v, _ in g.arcs:
        key = frozenset((u, v))
        if key in pairs:
            raise ParallelArcs(f"more than one arc between {u} and {v}")
        pairs.add(key)
    touched = {u for u, _, _ in g.arcs} | {v for _, v, _ in g.arcs}
    if len(touched) != g.n:
        raise IsolatedVertex(f"vertices {sorted(set(range(g.n)) - touched)} have no arcs")
    under: list[list[tuple[str, int]]] = [[] for _ in range(g.n)]
    for k, (u, v, _) in enumerate(g.arcs, start=1):
        under[u] += [(f"e{k}a", -2 * k), (f"e{k}b", 2 * k - 1)]
        under[v] += [(f"e{k}c", -2 * k + 1), (f"e{k}d", 2 * k)]
    tree = Tree.from_nested(tuple(tuple(name for name, _ in leaves) for leaves in under))
    pre = sorted((r, name) for leaves in under for name, r in leaves)
    return tree, Ranking(tuple(name for _, name in pre))


def shared_endpoint_pairs(g: WeightedDigraph) -> int:
    """Pairs of arcs meeting at a vertex: sum over v of C(deg v, 2)."""
    deg = [0] * g.n
    for u, v, _ in g.arcs:
        deg[u] += 1
        deg[v] += 1
    return sum(d * (d - 1) // 2 for d in deg)


def gadget_offset(m: int, shared: int = 0) -> int:
    """MInv of the gadget minus twice the MFAS.

    Two arcs with no common endpoint contribute 8 cross inversions whatever
    the vertex order; each common endpoint puts two of those leaf pairs under
    the same vertex, where they can be ordered freely, saving 2.
    """
    return 4 * m * (m - 1) - 2 * shared + m


def extract_fas(minv_value: int, m: int, shared: int = 0) -> int:
    """Invert the gadget: (MInv - offset) / 2.  ``shared`` is shared_endpoint_pairs(graph)."""
    diff = minv_value - gadget_offset(m, shared)
    if diff < 0 or diff % 2:
        raise Infeasible(f"MInv {minv_value} is not offset + 2 * FAS for m = {m}, shared = {shared}")
    return diff // 2


def fas_from_gadget(g: WeightedDigraph, minv_value: int) -> int:
    return extract_fas(minv_value, len(g.arcs), shared_endpoint_pairs(g))


def drop_isolated(g: WeightedDigraph) -> WeightedDigraph:
    """Remove vertices without arcs and renumber the rest; MFAS is unchanged."""
    used = sorted({u for u, _, _ in g.arcs} | {v for _, v, _ in g.arcs})
    new = {v: i for i, v in enumerate(used)}
    return WeightedDigraph(len(used), tuple((new[u], new[v], w) for u, v, w in g.arcs))
