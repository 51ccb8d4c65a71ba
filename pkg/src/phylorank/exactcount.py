"""Exact counting of k-phylogenetic trees and their vertex-rank statistics.

Everything here is integer or rational arithmetic, bit-exact at any size.
Each counting sequence is computed along two independent routes:

* closed forms obtained by coefficient extraction from the tree series
  (``coeff_T_pow`` and its consequences), and
* integer convolution recurrences over labeled structures
  (root removal: a tree is a root plus an unordered set of k subtrees).

A :class:`CountTable` cross-checks the two routes against each other while it
fills; any disagreement or inexact division raises :class:`ConsistencyError`.

Notation used throughout: a tree on n leaves exists iff (n-1) is divisible by
(k-1); then s = (n-1)/(k-1) counts internal vertices and k*s+1 all vertices.
The rank-i exponent is c_i = (k^i - 1)/(k - 1), satisfying c_{i+1} = k*c_i + 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .errors import ConsistencyError, DomainError, TableCoverageError

__all__ = [
    "is_admissible",
    "internal_vertices",
    "c_index",
    "coeff_T_pow",
    "tree_count_closed",
    "rank_ge_limit",
    "rank_eq_limit",
    "LimitEntry",
    "LimitDistribution",
    "limit_distribution",
    "LogConcavityReport",
    "log_concavity_check",
    "log_concavity_over_ranks",
    "negligibility_ratio",
    "RankCensus",
    "CountTable",
]


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise DomainError(f"branching factor must be an integer >= 2, got {k!r}")


def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"leaf count must be an integer >= 1, got {n!r}")


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError(f"inexact division while computing {what}: {num} / {den}")
    return q


def is_admissible(k: int, n: int) -> bool:
    """True iff k-phylogenetic trees on n leaves exist: (n-1) divisible by (k-1)."""
    _check_k(k)
    _check_n(n)
    return (n - 1) % (k - 1) == 0


def internal_vertices(k: int, n: int) -> int:
    """The internal-vertex count s = (n-1)/(k-1); raises for inadmissible n."""
    if not is_admissible(k, n):
        raise DomainError(f"n={n} is inadmissible for k={k}: no trees exist")
    return (n - 1) // (k - 1)


def c_index(k: int, i: int) -> int:
    """The exponent c_i = (k^i - 1)/(k - 1) = 1 + k + ... + k^(i-1)."""
    _check_k(k)
    if not isinstance(i, int) or i < 0:
        raise DomainError(f"rank index must be an integer >= 0, got {i!r}")
    return (k**i - 1) // (k - 1)


def coeff_T_pow(k: int, power: int, n: int) -> Fraction:
    """[x^n] of the power'th power of the tree series, as an exact rational.

    Nonzero only when n - power = s*(k-1) for an integer s >= 0, in which case
    the value is  power/(s*(k-1)+power) * C(k*s+power-1, s) / k!^s.
    """
    _check_k(k)
    _check_n(n)
    if not isinstance(power, int) or power < 1:
        raise DomainError(f"series power must be an integer >= 1, got {power!r}")
    if n < power or (n - power) % (k - 1) != 0:
        return Fraction(0)
    s = (n - power) // (k - 1)
    num = power * comb(k * s + power - 1, s)
    den = (s * (k - 1) + power) * factorial(k) ** s
    return Fraction(num, den)


def _labeled_pow_count(k: int, power: int, n: int, fact_n: int, kfac_pow_s: Sequence[int] | None = None) -> int:
    """n! * [x^n] T^power: the number of ordered `power`-tuples of disjoint trees
    whose leaf sets partition {1..n}.  Always an integer; exactness asserted."""
    if n < power or (n - power) % (k - 1) != 0:
        return 0
    s = (n - power) // (k - 1)
    kfs = kfac_pow_s[s] if kfac_pow_s is not None else factorial(k) ** s
    num = fact_n * power * comb(k * s + power - 1, s)
    den = (s * (k - 1) + power) * kfs
    return _exact_div(num, den, f"ordered {power}-forest count at n={n}")


def tree_count_closed(k: int, n: int) -> int:
    """The number of k-phylogenetic trees on {1..n}, by the closed form alone."""
    _check_k(k)
    _check_n(n)
    return _labeled_pow_count(k, 1, n, factorial(n))


def rank_ge_limit(k: int, i: int) -> Fraction:
    """Limiting fraction of vertices of rank at least i: exactly 1/k^(c_i)."""
    return Fraction(1, k ** c_index(k, i))


def rank_eq_limit(k: int, i: int) -> Fraction:
    """Limiting fraction of vertices of rank exactly i:
    1/k^(c_i) - 1/k^(c_{i+1}) = 1/k^(c_i) - 1/k^(k*c_i + 1)."""
    return rank_ge_limit(k, i) - rank_ge_limit(k, i + 1)


@dataclass(frozen=True)
class LimitEntry:
    rank: int
    c: int
    tail_prob: Fraction  # limiting P(rank >= i) = k^(-c_i)
    point_prob: Fraction  # limiting P(rank == i)


@dataclass(frozen=True)
class LimitDistribution:
    k: int
    entries: tuple[LimitEntry, ...]


def limit_distribution(k: int, max_rank: int) -> LimitDistribution:
    """The limiting rank distribution for ranks 0..max_rank."""
    _check_k(k)
    if max_rank < 0:
        raise DomainError("max_rank must be >= 0")
    entries = []
    for i in range(max_rank + 1):
        c = c_index(k, i)
        if i > 0:
            assert c == k * c_index(k, i - 1) + 1
        tail = rank_ge_limit(k, i)
        point = rank_eq_limit(k, i)
        if point <= 0:
            raise ConsistencyError(f"point probability at rank {i} is not positive")
        entries.append(LimitEntry(rank=i, c=c, tail_prob=tail, point_prob=point))
    return LimitDistribution(k=k, entries=tuple(entries))


def _point_prob_pair(k: int, i: int) -> tuple[int, int]:
    """P_{k,i} as an exact (numerator, denominator) integer pair.

    P = k^(-c_i) - k^(-c_{i+1}) = (k^m - 1) / k^(c_{i+1}) with
    m = c_{i+1} - c_i = (k-1)*c_i + 1.  The pair is already in lowest terms
    (the numerator is -1 mod k), but nothing below relies on that.
    """
    c_hi = c_index(k, i + 1)
    m = c_hi - c_index(k, i)
    t = k**m
    return t - 1, t * k ** (c_hi - m)


def _compare_products(lhs_factors: Sequence[int], rhs_factors: Sequence[int]) -> int:
    """Sign of prod(lhs) - prod(rhs) for positive integers, multiplying out
    only when bit-length certificates cannot decide.

    A product of t factors whose bit lengths sum to S lies in [2^(S-t), 2^S),
    so disjoint ranges settle the comparison without any big multiplication;
    the exponents here are typically astronomically far apart.
    """
    s_l = sum(x.bit_length() for x in lhs_factors)
    s_r = sum(x.bit_length() for x in rhs_factors)
    if s_l - len(lhs_factors) >= s_r:
        return 1
    if s_r - len(rhs_factors) >= s_l:
        return -1
    lhs = 1
    for x in lhs_factors:
        lhs *= x
    rhs = 1
    for x in rhs_factors:
        rhs *= x
    return (lhs > rhs) - (lhs < rhs)


@dataclass(frozen=True)
class LogConcavityReport:
    """Result of checking middle^2 >= left*right along one axis of P_{k,i}.

    ``axis`` is "k" for the claimed direction (k varies, rank fixed) or
    "rank" for the exploratory one (rank varies, k fixed); ``checked`` lists
    the middle values tested.  Each violation carries the exact values of the
    two sides as integer (numerator, denominator) pairs, not necessarily in
    lowest terms: the numbers involved reach millions of digits, where
    rational normalization would dominate the runtime without adding rigor.
    """

    axis: str
    fixed_value: int
    checked: tuple[int, ...]
    violations: tuple[tuple[int, tuple[int, int], tuple[int, int]], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _concavity_scan(axis, fixed_value, middles, pair_of) -> LogConcavityReport:
    pairs = {}

    def get(j):
        if j not in pairs:
            pairs[j] = pair_of(j)
        return pairs[j]

    checked = []
    violations = []
    for mid in middles:
        a_lo, b_lo = get(mid - 1)
        a_mid, b_mid = get(mid)
        a_hi, b_hi = get(mid + 1)
        checked.append(mid)
        # P_mid^2 >= P_lo * P_hi  <=>  a_mid^2 b_lo b_hi >= a_lo a_hi b_mid^2
        sign = _compare_products([a_mid, a_mid, b_lo, b_hi], [a_lo, a_hi, b_mid, b_mid])
        if sign < 0:
            violations.append((mid, (a_mid * a_mid, b_mid * b_mid), (a_lo * a_hi, b_lo * b_hi)))
    return LogConcavityReport(
        axis=axis,
        fixed_value=fixed_value,
        checked=tuple(checked),
        violations=tuple(violations),
    )


def log_concavity_check(i: int, k_max: int) -> LogConcavityReport:
    """Check, in exact integer arithmetic, whether k -> P_{k,i} satisfies
    P_k^2 >= P_{k-1} * P_{k+1} for 3 <= k < k_max.

    A violation is reported with its exact values, not raised.
    """
    if i < 0:
        raise DomainError("rank must be >= 0")
    if k_max < 4:
        raise DomainError("k_max must be >= 4 to have anything to check")
    return _concavity_scan(
        "k", i, range(3, k_max), lambda k: _point_prob_pair(k, i)
    )


def log_concavity_over_ranks(k: int, i_max: int) -> LogConcavityReport:
    """Exploratory: the same inequality along the rank index at fixed k.

    This direction is not a claimed property; the report is informational.
    """
    _check_k(k)
    if i_max < 2:
        raise DomainError("i_max must be >= 2")
    return _concavity_scan(
        "rank", k, range(1, i_max), lambda i: _point_prob_pair(k, i)
    )


def negligibility_ratio(k: int, power: int, n: int) -> Fraction:
    """Exact ratio of [x^n] T^power to the same coefficient of the all-vertex series.

    The denominator coefficient is (k*s+1) times the tree coefficient, hence
    nonzero exactly for admissible n.  Returns 0 when the numerator vanishes;
    the ratio tends to 0 as n grows with k and power fixed.
    """
    if not is_admissible(k, n):
        raise DomainError(
            f"all-vertex coefficient vanishes at inadmissible n={n} (k={k}): ratio undefined"
        )
    num = coeff_T_pow(k, power, n)
    if num == 0:
        return Fraction(0)
    s = internal_vertices(k, n)
    den = (k * s + 1) * coeff_T_pow(k, 1, n)
    return num / den


@dataclass(frozen=True)
class RankCensus:
    """Exact aggregate rank counts over every tree at one (k, n).

    ``exact[i]`` is the number of vertices of rank exactly i summed over all
    trees; ``ratios[i]`` divides by the total vertex count; ``tail`` counts
    vertices of rank > max_rank; empty (all-zero) for inadmissible n.
    """

    k: int
    n: int
    exact: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    tail: int
    total: int

    @property
    def max_rank(self) -> int:
        return len(self.exact) - 1


class CountTable:
    """All counting sequences for one branching factor k, exact through n_max.

    Construction fills the tree counts and ordered-forest counts eagerly; the
    root-rank and rank-at-least sequences are filled on first use (guarded by
    a lock, so tables are safe to share across threads).

    ``verify_to`` bounds how far the quadratic-time convolution recurrences
    are recomputed as cross-checks of the closed forms (default: everywhere).
    The rank-at-least sequence keeps its convolution route at full depth; the
    closed decomposition check runs alongside it at every n.
    """

    def __init__(self, k: int, n_max: int, verify_to: int | None = None):
        _check_k(k)
        _check_n(n_max)
        if verify_to is None:
            verify_to = n_max
        if verify_to < 1:
            raise DomainError("verify_to must be >= 1")
        self.k = k
        self.n_max = n_max
        self.verify_to = min(verify_to, n_max)

        self._fact = [1] * (n_max + 1)
        for i in range(1, n_max + 1):
            self._fact[i] = self._fact[i - 1] * i
        self._kfac = factorial(k)
        self._km1fac = factorial(k - 1)
        # powers of k! indexed by s; s never exceeds n_max
        self._kfac_pows = [1] * (n_max // (k - 1) + 2)
        for s in range(1, len(self._kfac_pows)):
            self._kfac_pows[s] = self._kfac_pows[s - 1] * self._kfac

        # ordered j-forest counts g_j(n) = n! [x^n] T^j for j = 1..k, closed form
        self._g: dict[int, list[int]] = {}
        for j in range(1, k + 1):
            self._g[j] = self._closed_g_array(j)
        self._t = self._g[1]
        self._verify_g_tower()
        # forests of k-1 trees (unordered), used by the rank-at-least recurrence
        self._fkm1 = [
            _exact_div(v, self._km1fac, f"(k-1)-forest count at n={b}")
            for b, v in enumerate(self._g[k - 1])
        ] if k > 2 else list(self._t)

        self._r: dict[int, list[int]] = {0: self._t}
        self._m: dict[int, list[int]] = {}
        self._extra_g: dict[int, list[int]] = {}
        self._lock = threading.RLock()

    # ----- closed forms -------------------------------------------------

    def _closed_g(self, j: int, n: int) -> int:
        return _labeled_pow_count(self.k, j, n, self._fact[n], self._kfac_pows)

    def _closed_g_array(self, j: int) -> list[int]:
        return [0] + [self._closed_g(j, n) for n in range(1, self.n_max + 1)]

    def _closed_r(self, i: int, n: int) -> int:
        if i == 0:
            return self._t[n]
        power = self.k**i
        if power > n:
            return 0
        c = c_index(self.k, i)
        return _exact_div(
            self._closed_g(power, n),
            self._kfac_pows[c] if c < len(self._kfac_pows) else self._kfac**c,
            f"root-rank count r_{i}({n})",
        )

    def _m_zero(self, n: int) -> int:
        if (n - 1) % (self.k - 1) != 0:
            return 0
        s = (n - 1) // (self.k - 1)
        return (self.k * s + 1) * self._t[n]

    def _closed_m(self, i: int, n: int) -> int:
        """n! [x^n] of the rank-i vertex series, via the polynomial split:
        the rank-i series equals (all-vertex series minus a short polynomial
        in T) divided by k^(c_i); every division is exact."""
        if i == 0:
            return self._m_zero(n)
        if self.k**i > n:
            return 0
        c = c_index(self.k, i)
        acc = self._m_zero(n)
        km1fac_pow = 1
        for j in range(c):
            power = (self.k - 1) * j + 1
            if power > n:
                break
            term = self._closed_g(power, n)
            if term:
                acc -= _exact_div(term, km1fac_pow, f"poly term j={j} of m_{i}({n})")
            km1fac_pow *= self._km1fac
        val = _exact_div(acc, self.k**c, f"rank-at-least count m_{i}({n})")
        if val < 0:
            raise ConsistencyError(f"negative rank-at-least count m_{i}({n}) = {val}")
        return val

    # ----- convolution recurrences & cross-checks -----------------------

    def _binomial_convolution(self, u: Sequence[int], v: Sequence[int], upto: int) -> list[int]:
        """w(n) = sum_a C(n,a) u(a) v(n-a) for n <= upto, with u(0)=v(0)=0."""
        out = [0] * (upto + 1)
        for n in range(2, upto + 1):
            acc = 0
            c = n  # C(n, 1)
            for a in range(1, n):
                ua = u[a]
                if ua:
                    vb = v[n - a]
                    if vb:
                        acc += c * ua * vb
                c = c * (n - a) // (a + 1)
            out[n] = acc
        return out

    def _verify_g_tower(self) -> None:
        """Re-derive the forest tower by convolution from the tree counts and
        compare with the closed forms, through verify_to."""
        upto = self.verify_to
        prev = self._t[: upto + 1]
        for j in range(2, self.k + 1):
            conv = self._binomial_convolution(self._t, prev, upto)
            for n in range(1, upto + 1):
                if conv[n] != self._g[j][n]:
                    raise ConsistencyError(
                        f"ordered {j}-forest count at n={n}: convolution {conv[n]} "
                        f"!= closed form {self._g[j][n]}"
                    )
            prev = conv
        # the k-fold product recovers k! times the tree count (root removal)
        for n in range(2, upto + 1):
            if prev[n] != self._kfac * self._t[n]:
                raise ConsistencyError(
                    f"tree count at n={n}: recurrence {prev[n]} != k! * closed {self._t[n]}"
                )

    def _build_r(self, i: int) -> list[int]:
        if self.k**i > self.n_max:
            # a root of rank i needs k^i descendant leaves
            return [0] * (self.n_max + 1)
        prev = self._r[i - 1]
        closed = [0] + [self._closed_r(i, n) for n in range(1, self.n_max + 1)]
        # recurrence: k-fold labeled product of the previous sequence, / k!
        upto = self.verify_to
        power = prev[: upto + 1]
        for _ in range(self.k - 1):
            power = self._binomial_convolution(prev, power, upto)
        for n in range(2, upto + 1):
            rec = _exact_div(power[n], self._kfac, f"root-rank recurrence r_{i}({n})")
            if rec != closed[n]:
                raise ConsistencyError(
                    f"root-rank count r_{i}({n}): recurrence {rec} != closed {closed[n]}"
                )
        if upto >= 1 and closed[1] != (1 if i == 0 else 0):
            raise ConsistencyError(f"r_{i}(1) must be {1 if i == 0 else 0}")
        return closed

    def _build_m(self, i: int) -> list[int]:
        if i > 0 and self.k**i > self.n_max:
            # a vertex of rank i needs k^i descendant leaves
            return [0] * (self.n_max + 1)
        r_i = self._get_r(i)
        fkm1 = self._fkm1
        m = [0] * (self.n_max + 1)
        for n in range(1, self.n_max + 1):
            acc = r_i[n]
            c = n  # C(n, 1)
            for a in range(1, n):
                ma = m[a]
                if ma:
                    fb = fkm1[n - a]
                    if fb:
                        acc += c * ma * fb
                c = c * (n - a) // (a + 1)
            closed = self._closed_m(i, n)
            if acc != closed:
                raise ConsistencyError(
                    f"rank-at-least count m_{i}({n}): convolution {acc} != closed {closed}"
                )
            m[n] = acc
        return m

    def _get_r(self, i: int) -> list[int]:
        if i not in self._r:
            with self._lock:
                for j in range(1, i + 1):
                    if j not in self._r:
                        self._r[j] = self._build_r(j)
        return self._r[i]

    def _get_m(self, i: int) -> list[int]:
        if i not in self._m:
            with self._lock:
                if i not in self._m:
                    self._m[i] = self._build_m(i)
        return self._m[i]

    def _check_cover(self, n: int) -> None:
        _check_n(n)
        if n > self.n_max:
            raise TableCoverageError(
                f"table for k={self.k} covers n <= {self.n_max}, asked for n={n}"
            )

    # ----- public operations --------------------------------------------

    def tree_count(self, n: int) -> int:
        """t_{k,n}: the number of trees on leaf set {1..n} (0 for inadmissible n)."""
        self._check_cover(n)
        return self._t[n]

    def forest_count(self, j: int, n: int) -> int:
        """Unordered forests of j disjoint trees whose leaf sets partition {1..n}."""
        if not isinstance(j, int) or j < 1:
            raise DomainError(f"forest size must be an integer >= 1, got {j!r}")
        self._check_cover(n)
        if j <= self.k:
            g = self._g[j][n]
        elif j in self._extra_g:
            g = self._extra_g[j][n]
        else:
            with self._lock:
                if j not in self._extra_g:
                    arr = self._closed_g_array(j)
                    # cross-check against one further convolution step
                    base = self._g[self.k] if j == self.k + 1 else self._extra_g.get(j - 1)
                    if base is not None:
                        conv = self._binomial_convolution(self._t, base, self.verify_to)
                        for nn in range(1, self.verify_to + 1):
                            if conv[nn] != arr[nn]:
                                raise ConsistencyError(
                                    f"ordered {j}-forest count at n={nn}: "
                                    f"convolution {conv[nn]} != closed {arr[nn]}"
                                )
                    self._extra_g[j] = arr
            g = self._extra_g[j][n]
        return _exact_div(g, factorial(j), f"unordered {j}-forest count at n={n}")

    def root_rank_count(self, i: int, n: int) -> int:
        """r_{i,k}(n): trees on {1..n} whose root has rank at least i."""
        if not isinstance(i, int) or i < 0:
            raise DomainError(f"rank must be an integer >= 0, got {i!r}")
        self._check_cover(n)
        return self._get_r(i)[n]

    def rank_ge_count(self, i: int, n: int) -> int:
        """m_{i,k}(n): vertices of rank at least i summed over all trees on {1..n}."""
        if not isinstance(i, int) or i < 0:
            raise DomainError(f"rank must be an integer >= 0, got {i!r}")
        self._check_cover(n)
        return self._get_m(i)[n]

    def total_vertex_count(self, n: int) -> int:
        """(k*s+1) * t_{k,n}: all vertices over all trees; 0 for inadmissible n."""
        self._check_cover(n)
        return self._m_zero(n)

    def rank_census(self, n: int, max_rank: int) -> RankCensus:
        """Exact counts of vertices of rank exactly 0..max_rank over all trees.

        For inadmissible n the census is empty (all zero).
        """
        if max_rank < 0:
            raise DomainError("max_rank must be >= 0")
        self._check_cover(n)
        if not is_admissible(self.k, n):
            return RankCensus(k=self.k, n=n, exact=(), ratios=(), tail=0, total=0)
        m_vals = [self.rank_ge_count(i, n) for i in range(max_rank + 2)]
        for lo, hi in zip(m_vals[1:], m_vals):
            if lo > hi:
                raise ConsistencyError("rank-at-least counts are not monotone")
        total = m_vals[0]
        if total != self.total_vertex_count(n):
            raise ConsistencyError(
                f"m_0({n}) = {total} != (k*s+1)*t = {self.total_vertex_count(n)}"
            )
        exact = tuple(m_vals[i] - m_vals[i + 1] for i in range(max_rank + 1))
        tail = m_vals[max_rank + 1]
        if sum(exact) + tail != total:
            raise ConsistencyError("rank census does not sum to the vertex total")
        ratios = tuple(Fraction(e, total) for e in exact)
        return RankCensus(
            k=self.k, n=n, exact=exact, ratios=ratios, tail=tail, total=total
        )
