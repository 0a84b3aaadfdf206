"""The staircase semigroup S, its rank-2 extension T, and growth bounds.

S is the subsemigroup of the nonnegative rationals whose elements are
(2^m + j) + alpha / 2^((m+1)r) with 0 <= j < 2^m and
0 <= alpha < 2^((m+1)r); each unit interval [n, n+1[ with n = 2^m + j
contains exactly 2^((m+1)r) members.  T stacks scaled copies (1/c(m)) S
over the integers, with c(0) = 1 and c(m) = m for m >= 1.

All counting here is exact integer arithmetic; unit-interval counts use
the closed formula and window sums collapse whole power-of-two blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import List, Sequence

from .errors import CapExceeded, UsageError
from .exact import Dyadic

DEFAULT_MEMBER_CAP = 1_000_000


def stair_decompose(n: int):
    """Unique m, j with n = 2^m + j and 0 <= j < 2^m."""
    if n <= 0:
        raise UsageError("staircase decomposition needs a positive integer")
    m = n.bit_length() - 1
    return m, n - (1 << m)


def stair_count(r: int, n: int) -> int:
    """#(S intersect [n, n+1[) = 2^((m+1)r); exact, with the sandwich
    n^r < count <= 2^r * n^r guaranteed by 2^m <= n < 2^(m+1)."""
    if r < 1:
        raise UsageError("staircase parameter r must be positive")
    m, _ = stair_decompose(n)
    count = 1 << ((m + 1) * r)
    assert n**r < count <= (n**r) << r
    return count


def stair_count_upto(r: int, hi: int) -> int:
    """#(S intersect [0, hi[) for integer hi, by whole-block sums."""
    if r < 1:
        raise UsageError("staircase parameter r must be positive")
    if hi <= 1:
        return 0
    total = 0
    m = 0
    while (1 << (m + 1)) <= hi:
        # full block [2^m, 2^(m+1)[: 2^m unit intervals of 2^((m+1)r) each
        total += 1 << (m + (m + 1) * r)
        m += 1
    lo = 1 << m
    if lo < hi:
        total += (hi - lo) << ((m + 1) * r)
    return total


def _to_fraction(x) -> Fraction:
    if isinstance(x, Dyadic):
        return x.as_fraction()
    return Fraction(x)


def stair_members(r: int, lo, hi, cap: int = DEFAULT_MEMBER_CAP) -> List[Dyadic]:
    """All members of S in [lo, hi[, exact dyadics, strictly increasing."""
    if r < 1:
        raise UsageError("staircase parameter r must be positive")
    lo = _to_fraction(lo)
    hi = _to_fraction(hi)
    if not 0 <= lo < hi:
        raise UsageError("window must satisfy 0 <= lo < hi")
    n_hi = hi.numerator // hi.denominator + 1
    expected = stair_count_upto(r, max(1, n_hi + 1))
    if expected > cap:
        raise CapExceeded("staircase window too large to enumerate", cap)
    def frac_ceil(q: Fraction) -> int:
        return -((-q.numerator) // q.denominator)

    out: List[Dyadic] = []
    n = max(1, lo.numerator // lo.denominator)
    while n < hi:
        m, _ = stair_decompose(n)
        k = (m + 1) * r
        scale = 1 << k
        a_lo = max(0, frac_ceil((lo - n) * scale))
        a_hi = min(scale, frac_ceil((hi - n) * scale))
        base = n << k
        out.extend(Dyadic(base + a, k) for a in range(a_lo, a_hi))
        n += 1
    return out


def stair_member(r: int, q) -> bool:
    """Membership test via the defining decomposition."""
    q = _to_fraction(q)
    if q < 1:
        return False
    n = q.numerator // q.denominator
    m, _ = stair_decompose(n)
    k = (m + 1) * r
    frac = q - n
    scaled = frac * (1 << k)
    return scaled.denominator == 1 and 0 <= scaled.numerator < (1 << k)


_BERNOULLI: List[Fraction] = [Fraction(1)]


def _bernoulli(m: int) -> Fraction:
    """B_m with the B_1 = -1/2 convention, via the defining recurrence."""
    while len(_BERNOULLI) <= m:
        j = len(_BERNOULLI)
        acc = sum(comb(j + 1, i) * _BERNOULLI[i] for i in range(j))
        _BERNOULLI.append(-acc / (j + 1))
    return _BERNOULLI[m]


def powersum(y: int, r: int) -> int:
    """f(y) = sum_{n=1}^{y-1} n^r, exact, by Faulhaber's formula."""
    if y < 1:
        raise UsageError("powersum needs y >= 1")
    total = sum(
        comb(r + 1, j) * _bernoulli(j) * y ** (r + 1 - j) for j in range(r + 1)
    ) / (r + 1)
    assert total.denominator == 1
    return total.numerator


def c_of(i: int) -> int:
    """Scaling denominators for T: c(0) = 1, c(i) = i for i >= 1."""
    if i < 0:
        raise UsageError("c(i) needs i >= 0")
    return 1 if i == 0 else i


def scaled_count(c: int, r: int, y: int) -> int:
    """#((1/c) S intersect [0, y[) = #(S intersect [0, c*y[)."""
    if c < 1 or y < 0:
        raise UsageError("scaled_count needs c >= 1 and y >= 0")
    return stair_count_upto(r, c * y)


def t_box_count(r: int, y1: int, y2: int) -> int:
    """#(T intersect ([0, y2[ x [0, y1[)), summed slice by slice."""
    if y1 < 1 or y2 < 1:
        raise UsageError("t_box_count needs y1, y2 >= 1")
    return sum(scaled_count(c_of(m), r, y1) for m in range(y2))


@dataclass
class ContradictionRow:
    y2: int
    lower_bound: int
    exact_count: int
    claimed_bound: int
    crossed: bool


def contradiction_table(
    r: int, y1: int, y2_list: Sequence[int], d: int
) -> List[ContradictionRow]:
    """Rows comparing the exact slice-sum lower bound against the claimed
    polynomial bound d * y1^(r+1) * y2; a crossed row certifies that no
    constant d can bound the box counts with exponent 1 in y2.

    The lower bound is f(y1) + sum_{i=1}^{y2-1} f(i*y1), which never
    exceeds the exact box count.
    """
    if r < 1 or y1 < 1:
        raise UsageError("contradiction_table needs r, y1 >= 1")
    rows = []
    for y2 in y2_list:
        if y2 < 1:
            raise UsageError("y2 values must be positive")
        lower = powersum(y1, r) + sum(powersum(i * y1, r) for i in range(1, y2))
        count = t_box_count(r, y1, y2)
        bound = d * y1 ** (r + 1) * y2
        rows.append(ContradictionRow(y2, lower, count, bound, lower > bound))
    return rows


def hs_length(d: int, y: int) -> int:
    """Colength of the y-th power of the maximal ideal in a d-dimensional
    regular local ring: binomial(y + d - 1, d)."""
    if d < 1 or y < 0:
        raise UsageError("hs_length needs d >= 1 and y >= 0")
    return comb(y + d - 1, d)


def theorem1_bound(
    dims: Sequence[int], mults: Sequence[int], ys: Sequence[int], epsilon
) -> Fraction:
    """Exact value of (1 + eps) * prod(mults) / prod(dims!) * prod(y_i^dim_i).

    ``mults`` carries one multiplicity per center including the base
    level, so it is one entry longer than ``dims``.
    """
    if len(mults) != len(dims) + 1 or len(ys) != len(dims):
        raise UsageError("expected len(mults) == len(dims) + 1 == len(ys) + 1")
    if any(d < 0 for d in dims) or any(e < 1 for e in mults):
        raise UsageError("dims must be >= 0 and mults >= 1")
    value = (1 + Fraction(epsilon)) if epsilon else Fraction(1)
    for e in mults:
        value *= e
    for d, y in zip(dims, ys):
        value = value * Fraction(y**d, factorial(d))
    return value
