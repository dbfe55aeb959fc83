import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from invperm.core_model import (
    Ordering,
    Ranking,
    Transposition,
    Tree,
    apply_transposition,
    identity_ordering,
    induced_ranking,
    normalize,
    parse_ranking,
    parse_tree,
    replace_subtree,
    serialize_ranking,
    serialize_tree,
)
from invperm.errors import BadPermutation, DuplicateLeaf, MissingNode, OutOfRange, ParseError
from invperm.generators import all_trees, make_rng, random_tree
from invperm.minimizer import minv

import oracles

BODY = ((((("knee", "thigh"), "toe"), ("chest", "waist")), (("cheek", "mouth"), "ear")))


def test_parse_single_leaf():
    t = parse_tree('{"leaf": "a"}')
    assert t.n == 1 and t.leaf_names == ("a",) and t.internal_nodes() == []


def test_parse_two_leaves():
    t = parse_tree('{"children": [{"leaf": "a"}, {"leaf": "b"}]}')
    assert t.n == 2 and len(t.children(t.root)) == 2 and t.leaf_names == ("a", "b")


def test_parse_duplicate_leaf():
    with pytest.raises(DuplicateLeaf):
        parse_tree('{"children": [{"leaf": "a"}, {"leaf": "a"}]}')


@pytest.mark.parametrize("text", [
    "{", "[]", '{"children": []}', '{"leaf": 3}', '{"leaf": "a", "children": []}',
    '{"children": [{"leaf": "a"}, 7]}', b"\xff\xfe",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_tree(text)


def test_child_order_preserved():
    t = parse_tree('{"children": [{"leaf": "z"}, {"children": [{"leaf": "y"}, {"leaf": "x"}]}]}')
    assert t.to_nested() == ("z", ("y", "x"))
    assert all(c > v for v in t.internal_nodes() for c in t.children(v))


def test_serialize_roundtrip_unicode():
    t = Tree.from_nested(("é", ("ü", "ß")))
    assert parse_tree(serialize_tree(t)) == t


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_serialize_roundtrip_random(n, seed):
    t = random_tree(n, make_rng(seed))
    assert parse_tree(serialize_tree(t)) == t


def test_tree_validation_rejects_bad_tables():
    from invperm.core_model import Node
    with pytest.raises(ParseError):
        Tree((Node(None, (1,)), Node(None, (), "a")))  # child without parent link
    with pytest.raises(ParseError):
        Tree((Node(None, (), None),))  # internal node without children
    with pytest.raises(ParseError):
        Tree(())


def test_ranking_json():
    r = parse_ranking('{"ranks": {"a": 2, "b": 1}}')
    assert r.inverse == ("b", "a") and r["a"] == 2
    assert parse_ranking(serialize_ranking(r)) == r
    for bad in ['{"ranks": {"a": 0}}', '{"ranks": {"a": 1, "b": 1}}', '{"ranks": {"a": 1.0}}', '{"ranks": {"a": true}}']:
        with pytest.raises(OutOfRange):
            parse_ranking(bad)
    with pytest.raises(ParseError):
        parse_ranking('{"rank": {}}')


def test_normalize_chain_collapses():
    t = Tree.from_nested((("a",),))
    assert normalize(t).to_nested() == "a"


def test_normalize_keeps_normal_tree():
    t = Tree.from_nested((("a", "b"), "c"))
    assert normalize(t) == t
    assert normalize(normalize(t)) == normalize(t)


def test_normalize_preserves_minv():
    t = Tree.from_nested(((("a",), ("b", ("c",))), (("d", "e"),)))
    nt = normalize(t)
    assert nt.to_nested() == (("a", ("b", "c")), ("d", "e"))
    for perm in itertools.permutations("abcde"):
        rk = Ranking(perm)
        assert minv(t, rk)[0] == minv(nt, rk)[0]


def test_induced_ranking_identity_and_swap():
    t = Tree.from_nested(("a", "b"))
    assert induced_ranking(t, identity_ordering(t)).rank_of == {"a": 1, "b": 2}
    assert induced_ranking(t, Ordering({0: (2, 1)})).rank_of == {"a": 2, "b": 1}


def test_induced_ranking_errors():
    t = Tree.from_nested(("a", ("b", "c")))
    with pytest.raises(MissingNode):
        induced_ranking(t, Ordering({0: (1, 2)}))
    with pytest.raises(BadPermutation):
        induced_ranking(t, Ordering({0: (1, 1), 2: (3, 4)}))


def test_body_parts_marked_swaps():
    t = Tree.from_nested(BODY)
    # swap the root, the (cheek, mouth, ear) node, the left child and (knee, thigh)
    perms = dict(identity_ordering(t).child_perm)
    left, right = t.children(0)
    perms[0] = (right, left)
    perms[right] = tuple(reversed(t.children(right)))
    perms[left] = tuple(reversed(t.children(left)))
    knee_thigh = t.children(t.children(left)[0])[0]
    perms[knee_thigh] = tuple(reversed(t.children(knee_thigh)))
    got = induced_ranking(t, Ordering(perms)).inverse
    assert got == ("ear", "cheek", "mouth", "chest", "waist", "thigh", "knee", "toe")


def test_depth_one_realizes_all_rankings():
    t = Tree.from_nested(tuple("abcd"))
    seen = {induced_ranking(t, Ordering({0: p})) for p in itertools.permutations(t.children(0))}
    assert len(seen) == 24


def test_realizable_rankings_match_oracle():
    t = Tree.from_nested((("a", "b"), "c", ("d", "e")))
    root = t.children(0)
    got = set()
    for p0 in itertools.permutations(root):
        for p1 in itertools.permutations(t.children(root[0])):
            for p2 in itertools.permutations(t.children(root[2])):
                got.add(induced_ranking(t, Ordering({0: p0, root[0]: p1, root[2]: p2})).inverse)
    assert got == {tuple(s) for s in oracles.orderings(t.to_nested())}


def test_transposition_examples():
    r = Ranking.from_order("ab")
    assert apply_transposition(r, Transposition(1)).rank_of == {"a": 2, "b": 1}
    r3 = Ranking.from_order("abc")
    assert apply_transposition(r3, Transposition(2)).rank_of == {"a": 1, "b": 3, "c": 2}
    with pytest.raises(OutOfRange):
        apply_transposition(r3, Transposition(3))
    with pytest.raises(OutOfRange):
        Transposition(0)


@given(st.permutations(list("abcdef")), st.integers(1, 5))
def test_transposition_involution(perm, r):
    rk = Ranking(tuple(perm))
    t = Transposition(r)
    assert apply_transposition(apply_transposition(rk, t), t) == rk


@pytest.mark.parametrize("n", range(1, 7))
def test_transpositions_generate_all_rankings(n):
    start = Ranking(tuple(f"x{i}" for i in range(n)))
    seen, frontier = {start}, [start]
    while frontier:
        cur = frontier.pop()
        for r in range(1, n):
            nxt = apply_transposition(cur, Transposition(r))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    assert len(seen) == len(list(itertools.permutations(range(n))))


def test_tree_queries():
    t = Tree.from_nested(((("a", "b"), "c"), ("d", "e", "f")))
    assert t.lca("a", "c") == 1 and t.lca("a", "d") == 0
    assert t.child_toward(0, "e") == 6
    assert t.leaf_child_set(1) == ("c",) and t.leaf_child_set(6) == ("d", "e", "f")
    assert t.degree == 3 and not t.is_binary()
    assert t.subtree(1).to_nested() == (("a", "b"), "c")
    assert t.shape() == Tree.from_nested((("x", "y", "z"), ("w", ("u", "v")))).shape()
    assert replace_subtree(t, 2, Tree.from_nested(("b", "a"))).to_nested() == ((("b", "a"), "c"), ("d", "e", "f"))
    with pytest.raises(MissingNode):
        t.child_toward(2, "d")


def test_all_small_trees_valid():
    for n in range(1, 7):
        for t in all_trees(n):
            assert sorted(t.leaf_names) == sorted(f"x{i}" for i in range(1, n + 1))
            assert normalize(t) == t
