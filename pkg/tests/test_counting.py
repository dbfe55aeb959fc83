import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from invperm.core_model import Ranking, Tree
from invperm.counting import (
    CrossInvMatrix,
    count_inversions,
    count_inversions_bruteforce,
    cross_inv_tables,
    dinv,
    inv,
    inv_bruteforce,
    mann_whitney_u,
    wilcoxon_w,
    xinv,
    xinv_via_wilcoxon,
)
from invperm.errors import DomainMismatch, InvalidRankSum, NotAPartition, Overlap


def rk(**ranks):
    return Ranking.from_ranks(ranks)


def test_inv_examples():
    r = Ranking.from_order("abcd")
    assert inv(r, r) == 0
    assert inv(Ranking.from_order("dcba"), r) == 6
    assert count_inversions([3, 1, 2]) == 2
    sigma = Ranking.from_order("cab")  # rho-values in sigma order: 3, 1, 2
    assert inv(sigma, Ranking.from_order("abc")) == 2 == inv_bruteforce(sigma, Ranking.from_order("abc"))


def test_inv_domain_mismatch():
    with pytest.raises(DomainMismatch):
        inv(Ranking.from_order("ab"), Ranking.from_order("ac"))


@given(st.lists(st.integers(-50, 50), max_size=60))
def test_merge_count_matches_bruteforce(seq):
    assert count_inversions(seq) == count_inversions_bruteforce(seq)


def test_xinv_examples():
    r = rk(a=1, b=2, c=3, d=4)
    assert xinv("bd", "ac", r) == 3 and xinv("ac", "bd", r) == 1
    assert dinv("bd", "ac", r) == 2
    assert xinv([], "ab", r) == 0
    assert xinv("ab", "cd", r) == 0 and xinv("cd", "ab", r) == 4
    assert dinv("ab", "cd", r) == -4
    assert dinv("a", "b", r) in (-1, 1)
    with pytest.raises(Overlap):
        xinv("ab", "bc", r)
    with pytest.raises(DomainMismatch):
        xinv("az", "b", r)
    with pytest.raises(ValueError):
        xinv("a", "b", r, method="nope")


def test_xinv_methods_agree_random():
    rng = random.Random(7)
    for _ in range(1000):
        a, b = rng.randint(0, 64), rng.randint(0, 64)
        names = [f"i{k}" for k in range(a + b)]
        rng.shuffle(names)
        r = Ranking(tuple(names))
        A, B = names[:a], names[a:]
        vals = {m: xinv(A, B, r, method=m) for m in ("merge", "bisect", "brute", "auto")}
        assert len(set(vals.values())) == 1
        assert vals["merge"] + xinv(B, A, r) == a * b
        assert dinv(A, B, r) % 2 == (a * b) % 2


@given(st.permutations(list(range(12))), st.integers(0, 12))
@settings(max_examples=100)
def test_concatenation_identity(perm, cut):
    names = [f"x{v}" for v in perm]
    r = Ranking.from_ranks({f"x{v}": v + 1 for v in range(12)})
    A, B = names[:cut], names[cut:]
    inv_of = lambda seq: count_inversions([r[x] for x in seq])
    assert inv_of(A + B) == inv_of(A) + inv_of(B) + xinv(A, B, r)


def test_mann_whitney_examples():
    r = rk(a=1, b=2, c=3, d=4)
    assert mann_whitney_u("ad", "bc", r) == 2
    assert mann_whitney_u("ab", "cd", r) == 0
    n = 7
    for pos in range(1, n + 1):
        names = [f"b{i}" for i in range(1, n)]
        names.insert(pos - 1, "a")
        r = Ranking(tuple(names))
        assert mann_whitney_u(["a"], names[:pos - 1] + names[pos:], r) == min(pos - 1, n - pos)
    with pytest.raises(NotAPartition):
        mann_whitney_u("a", "b", rk(a=1, b=2, c=3))


def test_wilcoxon_examples():
    r = rk(a=1, b=2, c=3, d=4)
    assert wilcoxon_w("bc", r) == 5 and xinv_via_wilcoxon(2, 2, 5) == 2 == xinv("ad", "bc", r)
    assert xinv_via_wilcoxon(2, 2, 7) == 0 and xinv_via_wilcoxon(2, 2, 3) == 4
    with pytest.raises(InvalidRankSum):
        xinv_via_wilcoxon(2, 2, 2)
    with pytest.raises(InvalidRankSum):
        xinv_via_wilcoxon(2, 2, 8)


@pytest.mark.parametrize("n", range(1, 9))
def test_wilcoxon_identity_exhaustive(n):
    names = tuple(f"x{i}" for i in range(1, n + 1))
    r = Ranking(names)
    for b in range(n + 1):
        for B in itertools.combinations(names, b):
            A = [x for x in names if x not in B]
            assert xinv_via_wilcoxon(len(A), b, wilcoxon_w(B, r)) == xinv(A, B, r)


def test_cross_inv_tables_match_bruteforce():
    rng = random.Random(3)
    t = Tree.from_nested(((("a", "b"), "c", ("d", "e", "f")), ("g", "h"), "i"))
    for _ in range(50):
        names = list(t.leaf_names)
        rng.shuffle(names)
        r = Ranking(tuple(names))
        tables = cross_inv_tables(t, r)
        for v, tab in tables.items():
            kids = t.children(v)
            assert tab.consistent()
            for i, ci in enumerate(kids):
                for j, cj in enumerate(kids):
                    if i != j:
                        assert tab.xinv[i][j] == xinv(t.leaves(ci), t.leaves(cj), r, method="brute")


def test_cross_inv_matrix_consistency_check():
    assert CrossInvMatrix((1, 2), ((0, 1), (1, 0))).consistent()
    assert not CrossInvMatrix((1, 2), ((0, 1), (2, 0))).consistent()
    assert not CrossInvMatrix((1, 1), ((1, 0), (1, 0))).consistent()
