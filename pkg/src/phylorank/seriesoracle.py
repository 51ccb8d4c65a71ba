"""Independent verification path: exact-rational truncated power series.

The tree series T(x) satisfies T = x + T^k/k! and is the compositional
inverse of F(x) = x - x^k/k!.  This module solves that fixed point on
truncated series with :class:`fractions.Fraction` coefficients and evaluates
every generating-function identity used elsewhere coefficientwise, so any
disagreement with the counting module is detected bit-exactly.

No floating point appears anywhere here; that is the whole point.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import ConsistencyError, DomainError
from .exactcount import c_index

__all__ = [
    "TruncatedSeries",
    "solve_T",
    "verify_inverse",
    "oracle_R",
    "oracle_M",
    "verify_theorem_decomposition",
]


class TruncatedSeries:
    """A formal power series truncated at a fixed order, with exact coefficients.

    Arithmetic is closed under the truncation: all terms above ``order`` are
    dropped.  Division requires a unit (nonzero constant term) denominator.
    Instances are immutable.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order: int):
        if order < 0:
            raise DomainError("truncation order must be >= 0")
        cs = [Fraction(c) for c in coeffs[: order + 1]]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @classmethod
    def x(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    def coeff(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise DomainError(f"coefficient index {n} outside 0..{self.order}")
        return self.coeffs[n]

    def labeled(self, n: int) -> Fraction:
        """n! times the coefficient of x^n (the labeled count when integral)."""
        return self.coeff(n) * factorial(n)

    def _match(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise DomainError("truncation orders differ")

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._match(other)
            return TruncatedSeries(
                [a + b for a, b in zip(self.coeffs, other.coeffs)], self.order
            )
        cs = list(self.coeffs)
        cs[0] += other
        return TruncatedSeries(cs, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            q = Fraction(other)
            return TruncatedSeries([a * q for a in self.coeffs], self.order)
        self._match(other)
        N = self.order
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (N + 1)
        for i in range(N + 1):
            ai = a[i]
            if ai:
                for j in range(N + 1 - i):
                    bj = b[j]
                    if bj:
                        out[i + j] += ai * bj
        return TruncatedSeries(out, N)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise DomainError("series powers must be nonnegative integers")
        result = TruncatedSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other: "TruncatedSeries"):
        """Division by a unit series (nonzero constant term), exact."""
        if not isinstance(other, TruncatedSeries):
            return self * (1 / Fraction(other))
        self._match(other)
        d0 = other.coeffs[0]
        if d0 == 0:
            raise DomainError("series division requires a unit denominator")
        N = self.order
        a, d = self.coeffs, other.coeffs
        out = [Fraction(0)] * (N + 1)
        for n in range(N + 1):
            acc = a[n]
            for j in range(1, n + 1):
                dj = d[j]
                if dj:
                    acc -= dj * out[n - j]
            out[n] = acc / d0
        return TruncatedSeries(out, N)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[: min(8, self.order + 1)])
        tail = ", ..." if self.order > 7 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"


def solve_T(k: int, order: int) -> TruncatedSeries:
    """The tree series through ``order``: the unique fixed point of
    T = x + T^k/k! with zero constant term, by iteration from T = x.

    Each pass fixes at least k-1 further coefficients, so the iteration
    stabilizes within ``order`` passes; stabilization is asserted.
    """
    if k < 2:
        raise DomainError("branching factor must be >= 2")
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    x = TruncatedSeries.x(order)
    inv_kfac = Fraction(1, factorial(k))
    T = x
    for _ in range(order + 1):
        nxt = x + (T**k) * inv_kfac
        if nxt == T:
            return T
        T = nxt
    raise ConsistencyError("fixed-point iteration for the tree series did not stabilize")


def verify_inverse(k: int, order: int) -> bool:
    """Check that F(T(x)) = x through ``order``, where F(y) = y - y^k/k!."""
    T = solve_T(k, order)
    F_of_T = T - (T**k) * Fraction(1, factorial(k))
    return F_of_T == TruncatedSeries.x(order)


def oracle_R(k: int, i: int, order: int, T: TruncatedSeries | None = None) -> TruncatedSeries:
    """Root-rank series: trees whose root has rank >= i, as T^(k^i) / k!^(c_i)."""
    if i < 0:
        raise DomainError("rank must be >= 0")
    if T is None:
        T = solve_T(k, order)
    return (T ** (k**i)) * Fraction(1, factorial(k) ** c_index(k, i))


def oracle_M(k: int, i: int, order: int, T: TruncatedSeries | None = None) -> TruncatedSeries:
    """Rank->=i vertex series: R_i / (1 - T^(k-1)/(k-1)!), evaluated exactly.

    n! times its x^n coefficient counts vertices of rank at least i over all
    trees on {1..n}.
    """
    if T is None:
        T = solve_T(k, order)
    one = TruncatedSeries.one(order)
    denom = one - (T ** (k - 1)) * Fraction(1, factorial(k - 1))
    return oracle_R(k, i, order, T) / denom


def verify_theorem_decomposition(k: int, i: int, order: int) -> bool:
    """Check, coefficientwise, the split of T^(k^i)/(1 - T^(k-1)/(k-1)!)
    into a polynomial part in T plus (k-1)!^(c_i) times the all-vertex series.

    The polynomial part is -(k-1)!^(c_i) * T * sum_{j<c_i} (T^(k-1)/(k-1)!)^j,
    from the factorization f^c - 1 = (f-1)(f^(c-1) + ... + 1).
    """
    if i < 0:
        raise DomainError("rank must be >= 0")
    T = solve_T(k, order)
    one = TruncatedSeries.one(order)
    c = c_index(k, i)
    km1fac = factorial(k - 1)
    f = (T ** (k - 1)) * Fraction(1, km1fac)
    lhs = (T ** (k**i)) / (one - f)

    geo = TruncatedSeries.zero(order)
    f_pow = one
    for _ in range(c):
        geo = geo + f_pow
        f_pow = f_pow * f
    scale = Fraction(km1fac**c)
    poly_part = -(T * geo) * scale
    M0 = T / (one - f)
    rhs = poly_part + M0 * scale
    return lhs == rhs
