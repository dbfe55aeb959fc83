"""The cross-inversion distribution X_{a,b}.

X_{a,b} = XInv(A, B) when A (a items) and B (b items) are ranked by a uniform
random permutation of [a+b].  Its counts are the coefficients of the Gaussian
polynomial [a+b choose a]_q, and its characteristic function is

    phi(t) = e^{i ab t/2} * prod_{j=1..a} (j/(b+j)) sin((b+j)t/2) / sin(jt/2).

The product without the phase, R(t), is real and even, which is what the
quadrature routines integrate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.special import roots_legendre

from .errors import LimitExceeded, OutOfRange, QuadratureFailure

TABLE_LIMIT = 10**6
SINGULAR_THRESHOLD = 1e-4
EVAL_BUDGET = 10**6
POLE_SLACK = 1e-12


# -- exact counts -------------------------------------------------------------


@dataclass(frozen=True)
class DistributionTable:
    a: int
    b: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return math.comb(self.a + self.b, self.a)

    def probability(self, k: int) -> Fraction:
        if not 0 <= k <= self.a * self.b:
            return Fraction(0)
        return Fraction(self.counts[k], self.total)

    def probabilities(self) -> np.ndarray:
        tot = self.total
        return np.array([c / tot for c in self.counts])

    def csv_rows(self) -> Iterator[tuple[int, int, int, int, int, int]]:
        tot = self.total
        for k, c in enumerate(self.counts):
            p = Fraction(c, tot)
            yield self.a, self.b, k, c, p.numerator, p.denominator


def _step(prev_a: np.ndarray, prev_b: np.ndarray, b: int) -> np.ndarray:
    """C(a,b,.) from C(a-1,b,.) and C(a,b-1,.): the largest rank lies in A (b crossings) or in B."""
    out = np.zeros(len(prev_a) + b, dtype=object)
    out[b:] += prev_a
    out[:len(prev_b)] += prev_b
    return out


def cross_inv_grid(max_a: int, max_b: int) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield (a, b, counts) for all 0 <= a <= max_a, 0 <= b <= max_b, row by row."""
    one = np.array([1], dtype=object)
    row = [one] * (max_b + 1)  # a = 0
    for b in range(max_b + 1):
        yield 0, b, row[b]
    for a in range(1, max_a + 1):
        cur = [one]
        yield a, 0, one
        for b in range(1, max_b + 1):
            cur.append(_step(row[b], cur[b - 1], b))
            yield a, b, cur[b]
        row = cur


def cross_inv_counts(a: int, b: int) -> DistributionTable:
    if a < 0 or b < 0:
        raise OutOfRange("a and b must be non-negative")
    if a * b > TABLE_LIMIT:
        raise LimitExceeded(f"ab = {a * b} exceeds the table limit {TABLE_LIMIT}")
    return _table(min(a, b), max(a, b), a, b)


@lru_cache(maxsize=256)
def _table(lo: int, hi: int, a: int, b: int) -> DistributionTable:
    counts = None
    for x, y, c in cross_inv_grid(lo, hi):
        if (x, y) == (lo, hi):
            counts = c
    # the table is symmetric in a and b
    return DistributionTable(a, b, tuple(int(v) for v in counts))  # type: ignore[union-attr]


def cross_inv_counts_bruteforce(a: int, b: int) -> tuple[int, ...]:
    """Enumerate the rank sets of A; XInv(A, B) = sum of ranks - 1 minus the A-A pairs."""
    counts = [0] * (a * b + 1)
    base = a * (a - 1) // 2
    for ranks in combinations(range(a + b), a):
        counts[sum(ranks) - base] += 1
    return tuple(counts)


def inversion_counts(m: int) -> tuple[int, ...]:
    """Number of permutations of [m] with k inversions (Mahonian numbers)."""
    counts = [1]
    for j in range(1, m + 1):
        # convolve with 1 + q + ... + q^{j-1} via a running window sum
        out = [0] * (len(counts) + j - 1)
        acc = 0
        for k in range(len(out)):
            acc += counts[k] if k < len(counts) else 0
            if k - j >= 0:
                acc -= counts[k - j]
            out[k] = acc
        counts = out
    return tuple(counts)


def convolve(p, q) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return tuple(out)


# -- maximum probability --------------------------------------------------------


def max_probability(a: int, b: int) -> tuple[Fraction, float]:
    if a < 1 or b < 1:
        raise OutOfRange("a and b must be positive")
    t = cross_inv_counts(a, b)
    p = Fraction(max(t.counts), t.total)
    return p, float(p) * math.sqrt(a * b * (a + b))


@dataclass(frozen=True)
class GridReport:
    size: int
    sup: float
    argmax: tuple[int, int]
    values: dict[tuple[int, int], float]

    def sup_within(self, size: int) -> float:
        return max(v for (a, b), v in self.values.items() if b <= size)


def max_probability_grid(size: int) -> GridReport:
    """p_max * sqrt(ab(a+b)) for all 1 <= a <= b <= size."""
    values: dict[tuple[int, int], float] = {}
    for a, b, c in cross_inv_grid(size, size):
        if 1 <= a <= b:
            # the Gaussian coefficients are unimodal, so the middle one is the largest
            p = Fraction(int(c[a * b // 2]), math.comb(a + b, a))
            values[(a, b)] = float(p) * math.sqrt(a * b * (a + b))
    arg = max(values, key=lambda k: (values[k], -k[0], -k[1]))
    return GridReport(size, values[arg], arg, values)


# -- characteristic function ----------------------------------------------------


def _poly_real(a: int, b: int, t: np.ndarray) -> np.ndarray:
    """R(t) from the exact table: sum_k p_k cos((k - ab/2) t)."""
    p = cross_inv_counts(a, b).probabilities()
    shift = np.arange(a * b + 1) - a * b / 2
    return np.cos(np.outer(t, shift)) @ p


def real_part(a: int, b: int, t) -> np.ndarray:
    """R(t) = phi(t) e^{-i ab t/2}, vectorized over t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if a == 0 or b == 0:
        return np.ones_like(t)
    a, b = min(a, b), max(a, b)  # X_{a,b} and X_{b,a} are equal in law; the shorter product is cheaper
    half = t / 2
    out = np.ones_like(t)
    bad = np.zeros(t.shape, dtype=bool)
    for j in range(1, a + 1):
        den = np.sin(j * half)
        small = np.abs(den) < SINGULAR_THRESHOLD
        bad |= small
        out *= (j / (b + j)) * np.sin((b + j) * half) / np.where(small, 1.0, den)
    if bad.any():
        out[bad] = _poly_real(a, b, t[bad])
    return out


def charfn(a: int, b: int, t):
    t_arr = np.asarray(t, dtype=float)
    val = np.exp(1j * a * b * t_arr / 2) * real_part(a, b, t_arr).reshape(t_arr.shape)
    return complex(val) if val.ndim == 0 else val


def charfn_abs(a: int, b: int, t):
    t_arr = np.asarray(t, dtype=float)
    val = np.abs(real_part(a, b, t_arr)).reshape(t_arr.shape)
    return float(val) if val.ndim == 0 else val


def charfn_poly(a: int, b: int, t) -> complex:
    """Oracle: the generating polynomial evaluated at e^{it}, divided by the total."""
    tab = cross_inv_counts(a, b)
    z = np.exp(1j * np.asarray(t, dtype=float))
    return sum(c * z**k for k, c in enumerate(tab.counts)) / tab.total


# -- adaptive quadrature ---------------------------------------------------------


@lru_cache(maxsize=8)
def _gauss(m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(m)
    return x, w


def adaptive_gauss(f, breaks, tol: float, order: int = 10, budget: int = EVAL_BUDGET) -> np.ndarray:
    """Integrate a vectorized f over the union of [breaks[i], breaks[i+1]].

    f maps an array of points to an array whose last axis runs over the points.
    Each piece compares an order-m and an order-2m Gauss rule; pieces whose
    estimates differ by more than their share of ``tol`` are bisected.
    """
    breaks = np.asarray(breaks, dtype=float)
    lo, hi = breaks[:-1], breaks[1:]
    span = float(hi.sum() - lo.sum())
    xc, wc = _gauss(order)
    xf, wf = _gauss(2 * order)
    total = None
    used = 0
    while len(lo):
        used += len(lo) * 3 * order
        if used > budget:
            raise QuadratureFailure(f"tolerance {tol} not reached within {budget} evaluations")
        mid, rad = (lo + hi) / 2, (hi - lo) / 2
        pts = np.concatenate([(mid[:, None] + rad[:, None] * xc).ravel(),
                              (mid[:, None] + rad[:, None] * xf).ravel()])
        vals = np.asarray(f(pts))
        lead = vals.shape[:-1]
        npc = len(lo) * order
        coarse = (vals[..., :npc].reshape(*lead, len(lo), order) @ wc) * rad
        fine = (vals[..., npc:].reshape(*lead, len(lo), 2 * order) @ wf) * rad
        err = np.abs(fine - coarse).reshape(-1, len(lo)).max(axis=0)
        ok = err <= tol * (hi - lo) / span
        part = fine[..., ok].sum(axis=-1)
        total = part if total is None else total + part
        lo, hi = lo[~ok], hi[~ok]
        mid = (lo + hi) / 2
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    return total  # type: ignore[return-value]


def _pole_breaks(qmax: int, lo_q: int = 1) -> np.ndarray:
    """0, pi and every 2 pi m / q in between for lo_q <= q <= qmax."""
    pts = {0.0, math.pi}
    for q in range(lo_q, qmax + 1):
        for m in range(1, q // 2 + 1):
            x = 2 * math.pi * m / q
            if x < math.pi:
                pts.add(x)
    return np.array(sorted(pts))


def _refine(breaks: np.ndarray, pieces: int) -> np.ndarray:
    grid = np.linspace(0, math.pi, pieces + 1)
    return np.unique(np.concatenate([breaks, grid]))


def probabilities_via_inverse_ft(a: int, b: int, tol: float = 1e-9, budget: int = EVAL_BUDGET) -> np.ndarray:
    """Pr[X = k] for all k = 0..ab as (1/pi) int_0^pi R(t) cos((ab/2 - k) t) dt."""
    n = a * b
    if n == 0:
        return np.ones(1)
    freq = n / 2 - np.arange(n + 1)

    def f(t):
        return np.cos(np.outer(freq, t)) * real_part(a, b, t)

    breaks = _refine(_pole_breaks(min(a, b)), max(4, n // 4))
    return adaptive_gauss(f, breaks, tol * math.pi, budget=budget) / math.pi


def probability_via_inverse_ft(a: int, b: int, k: int, tol: float = 1e-9, budget: int = EVAL_BUDGET) -> float:
    n = a * b
    if not 0 <= k <= n:
        raise OutOfRange(f"k = {k} outside the support 0..{n}")
    if n == 0:
        return 1.0
    freq = n / 2 - k

    def f(t):
        return np.cos(freq * t) * real_part(a, b, t)

    breaks = _refine(_pole_breaks(min(a, b)), max(4, n // 4))
    return float(adaptive_gauss(f, breaks, tol * math.pi, budget=budget)) / math.pi


def integral_abs_charfn(a: int, b: int, tol: float = 1e-9, budget: int = EVAL_BUDGET) -> tuple[float, float]:
    """(int_{-pi}^{pi} |phi|, that value * b * sqrt(a)).  Pieces split at every zero of a sine factor."""
    if not 2 <= a <= b:
        raise OutOfRange("integral_abs_charfn needs b >= a >= 2")
    breaks = _pole_breaks(a + b)
    value = 2 * float(adaptive_gauss(lambda t: np.abs(real_part(a, b, t)), breaks, tol / 2, budget=budget))
    return value, value * b * math.sqrt(a)


def integral_abs_charfn_riemann(a: int, b: int, points: int = 200_000) -> float:
    """Midpoint-rule cross-check."""
    h = math.pi / points
    t = (np.arange(points) + 0.5) * h
    return 2 * float(np.abs(real_part(a, b, t)).sum() * h)


# -- interval matching and pole reduction ------------------------------------------
# Intervals use period 1: the k-interval of t is [n/k, (n+1)/k) with n = floor(k t).


def _encloses_exact(k: int, ell: int, p: int, q: int) -> bool:
    """Does k enclose ell at t = p/q (integers, q > 0)?"""
    nk, nl = (k * p) // q, (ell * p) // q
    return nk * ell <= nl * k and (nl + 1) * k <= (nk + 1) * ell


def encloses(k: int, ell: int, t) -> bool:
    fr = Fraction(t)
    return _encloses_exact(k, ell, fr.numerator, fr.denominator)


@dataclass(frozen=True)
class IntervalBijection:
    a: int
    b: int
    t: Fraction
    map: dict[int, int]

    def is_valid(self) -> bool:
        left = set(self.map) == set(range(1, self.a + 1))
        right = sorted(self.map.values()) == list(range(self.b + 1, self.b + self.a + 1))
        return left and right and all(encloses(k, ell, self.t) for k, ell in self.map.items())


def interval_matching(a: int, b: int, t) -> IntervalBijection:
    """A bijection {1..a} -> {b+1..b+a} with k enclosing its image at t, via bipartite matching."""
    if a < 1 or b < 1:
        raise OutOfRange("a and b must be positive")
    fr = Fraction(t) % 1
    p, q = fr.numerator, fr.denominator
    adj = np.array([[_encloses_exact(k, b + j, p, q) for j in range(1, a + 1)] for k in range(1, a + 1)])
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    if (match < 0).any():  # pragma: no cover - excluded by Hall's condition
        raise AssertionError(f"no perfect interval matching for a={a}, b={b}, t={t}")
    return IntervalBijection(a, b, fr, {k + 1: b + 1 + int(match[k]) for k in range(a)})


def in_neighborhood(ell: int, ks) -> bool:
    """True when some k in ks encloses ell at every t.

    Enclosure is constant between consecutive interval endpoints, so checking
    each endpoint in [0, 1) decides it exactly.
    """
    pts = sorted({Fraction(j, d) for d in list(ks) + [ell] for j in range(d)})
    return all(any(encloses(k, ell, x) for k in ks) for x in pts)


def _batch_matching(a: int, b: int, num: np.ndarray, den: int) -> tuple[np.ndarray, np.ndarray]:
    """Matchings for many t = num/den at once, as one block-diagonal bipartite graph.

    Returns (images, ok): images[s, k-1] = sigma_t(k) for sample s.
    """
    ks = np.arange(1, a + 1)
    ls = np.arange(b + 1, b + a + 1)
    nk = (num[:, None] * ks) // den  # floor(k t)
    nl = (num[:, None] * ls) // den
    adj = ((nk[:, :, None] * ls[None, None, :] <= nl[:, None, :] * ks[None, :, None])
           & ((nl[:, None, :] + 1) * ks[None, :, None] <= (nk[:, :, None] + 1) * ls[None, None, :]))
    s, i, j = np.nonzero(adj)
    T = len(num)
    graph = csr_matrix((np.ones(len(s), dtype=np.int8), (s * a + i, s * a + j)), shape=(T * a, T * a))
    match = maximum_bipartite_matching(graph, perm_type="column").reshape(T, a)
    ok = (match >= 0).all(axis=1)
    return b + 1 + (match % a), ok


@dataclass(frozen=True)
class PoleReport:
    a: int
    b: int
    samples: int
    matching_failures: int
    violations: tuple[tuple[float, int, int, float, float], ...]  # (t, k, ell, lhs, rhs)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.matching_failures


def pole_reduction_check(a: int, b: int, samples) -> PoleReport:
    """Check |sin(kt)/k| >= |sin(sigma(k) t)/sigma(k)| for sample points t in [0, pi].

    The matching is taken at x = t/pi, rounded to a multiple of 2^-53 so that
    the interval arithmetic is exact in int64.
    """
    t = np.asarray(samples, dtype=float)
    den = 1 << 53
    x = np.mod(t / math.pi, 1.0)
    num = np.minimum(np.round(x * den), den - 1).astype(np.int64)
    images, ok = _batch_matching(a, b, num, den)
    tt = num / den * math.pi
    ks = np.arange(1, a + 1)
    lhs = np.abs(np.sin(ks[None, :] * tt[:, None])) / ks
    rhs = np.abs(np.sin(images * tt[:, None])) / images
    bad = np.nonzero((rhs > lhs + POLE_SLACK) & ok[:, None])
    viol = tuple((float(t[s]), int(k + 1), int(images[s, k]), float(lhs[s, k]), float(rhs[s, k]))
                 for s, k in zip(*bad))
    return PoleReport(a, b, len(t), int((~ok).sum()), viol)
