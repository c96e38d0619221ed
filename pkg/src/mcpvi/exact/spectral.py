"""Jordan data from rank sequences, root-of-unity eigenvalues, square roots."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .cyclo import CycloNum, as_cyclo, check_order, common_order, zeta
from .matrix import Matrix, poly_eval


@dataclass(frozen=True)
class JordanData:
    """Multiset of Jordan blocks (eigenvalue, length) of one matrix."""

    blocks: tuple[tuple[CycloNum, int], ...]
    dimension: int
    complete: bool = True

    @property
    def total(self) -> int:
        return sum(length for _, length in self.blocks)

    def counter(self) -> Counter:
        return Counter(self.blocks)

    def same_blocks(self, other: "JordanData") -> bool:
        return self.counter() == other.counter()

    def eigenvalues(self) -> list[CycloNum]:
        seen: list[CycloNum] = []
        for a, _ in self.blocks:
            if a not in seen:
                seen.append(a)
        return seen

    def to_json(self) -> dict:
        return {
            "blocks": [{"eigenvalue": str(a), "order": a.order, "length": n} for a, n in self.blocks],
            "dimension": self.dimension,
            "complete": self.complete,
        }


def jordan_matrix(blocks: Sequence[tuple], order: int | None = None) -> Matrix:
    """Block-diagonal Jordan matrix with the given (eigenvalue, length) blocks."""
    vals = [as_cyclo(a, order or 1) for a, _ in blocks]
    n = common_order(*(v.order for v in vals), order or 1) if vals else (order or 1)
    size = sum(length for _, length in blocks)
    one, zero = CycloNum.one(n), CycloNum.zero(n)
    rows = [[zero] * size for _ in range(size)]
    pos = 0
    for v, (_, length) in zip(vals, blocks):
        for i in range(length):
            rows[pos + i][pos + i] = v.embed(n)
            if i + 1 < length:
                rows[pos + i][pos + i + 1] = one
        pos += length
    return Matrix._raw(n, rows)


def rank_sequence(m: Matrix, alpha: CycloNum) -> list[int]:
    """Ranks of (m - alpha)^k for k = 0, 1, ..., ending at the first repeated value."""
    a = m.minus_scalar(alpha)
    ranks = [m.rows]
    power = Matrix.identity(m.rows, a.order)
    while True:
        power = power @ a
        r = power.rank()
        if r == ranks[-1]:
            return ranks
        ranks.append(r)


def jordan_data(m: Matrix, candidates: Sequence) -> JordanData:
    """Jordan blocks of ``m`` for the candidate eigenvalues.

    The number of blocks of length >= k for eigenvalue a is
    rank((m-a)^(k-1)) - rank((m-a)^k).  Blocks are listed per candidate in
    the given order, longest first.  ``complete`` is False when the
    candidates do not exhaust the spectrum.
    """
    if not m.is_square():
        raise ValueError("Jordan data of a non-square matrix")
    blocks = []
    seen: list[CycloNum] = []
    for cand in candidates:
        a = as_cyclo(cand, m.order)
        if a in seen:
            continue
        seen.append(a)
        r = rank_sequence(m, a)
        at_least = [r[k - 1] - r[k] for k in range(1, len(r))] + [0]
        for k in range(len(at_least) - 1, 0, -1):
            exact = at_least[k - 1] - at_least[k]
            blocks.extend([(a, k)] * exact)
    total = sum(length for _, length in blocks)
    return JordanData(tuple(blocks), m.rows, total == m.rows)


class Eigenvalue(NamedTuple):
    value: CycloNum
    multiplicity: int
    scalar: Fraction
    root_order: int
    root_exponent: int


@dataclass
class EigenReport:
    eigenvalues: list[Eigenvalue] = field(default_factory=list)
    dimension: int = 0

    @property
    def resolved(self) -> bool:
        return sum(e.multiplicity for e in self.eigenvalues) == self.dimension

    def values(self) -> list[CycloNum]:
        return [e.value for e in self.eigenvalues]

    def spectrum(self) -> list[CycloNum]:
        """Eigenvalues repeated by multiplicity."""
        return [e.value for e in self.eigenvalues for _ in range(e.multiplicity)]

    def is_distinct(self) -> bool:
        return self.resolved and all(e.multiplicity == 1 for e in self.eigenvalues)


def generalized_multiplicity(m: Matrix, a: CycloNum) -> int:
    a_m = m.minus_scalar(a)
    return m.rows - (a_m ** m.rows).rank()


def roots_of_unity_eigenvalues(m: Matrix, max_order: int,
                               scalars: Sequence = (1, -1)) -> EigenReport:
    """Find eigenvalues of the form c * mu, mu a primitive d-th root of unity, d <= max_order.

    Candidates are screened with the characteristic polynomial.  The reported
    multiplicity is the algebraic one (dimension of the generalized
    eigenspace).  The scan stops as soon as the spectrum is accounted for.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if not m.is_square():
        raise ValueError("eigenvalues of a non-square matrix")
    n = m.rows
    report = EigenReport([], n)
    cp = m.charpoly()
    tested: set = set()
    found = 0
    for d in range(1, max_order + 1):
        for k in range(d):
            if math.gcd(k, d) != 1:
                continue
            mu = zeta(d, k) if d > 1 else CycloNum.one(1)
            for c in scalars:
                c = Fraction(c)
                value = mu * c
                if value in tested:
                    continue
                tested.add(value)
                if poly_eval(cp, value):
                    continue
                mult = generalized_multiplicity(m, value)
                report.eigenvalues.append(Eigenvalue(value, mult, c, d, k))
                found += mult
                if found == n:
                    return report
    return report


def _divisors_of(n: int, limit: int = 10**7) -> list[int] | None:
    n = abs(n)
    if n > limit:
        return None
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def rational_eigenvalues(m: Matrix) -> list[CycloNum]:
    """Rational roots of the characteristic polynomial when it has rational coefficients.

    Uses the rational root test; returns [] for non-rational polynomials or
    when the coefficients are too large to factor by trial division.
    """
    cp = m.charpoly()
    if not all(c.is_rational() for c in cp):
        return []
    qs = [c.to_fraction() for c in cp]
    den = math.lcm(*(q.denominator for q in qs))
    ints = [int(q * den) for q in qs]
    shift = next(i for i, c in enumerate(ints) if c)
    out = [CycloNum.zero(m.order)] if shift else []
    ints = ints[shift:]
    if len(ints) == 1:
        return out
    ps, qd = _divisors_of(ints[0]), _divisors_of(ints[-1])
    if ps is None or qd is None:
        return out
    seen = set()
    for p in ps:
        for q in qd:
            for sign in (1, -1):
                x = Fraction(sign * p, q)
                if x in seen:
                    continue
                seen.add(x)
                if sum(c * x ** k for k, c in enumerate(ints)) == 0:
                    out.append(CycloNum.rational(x, m.order))
    return sorted(out, key=lambda c: c.to_fraction())


def root_of_unity_log(a: CycloNum) -> tuple[int, int] | None:
    """(w, e) with a == zeta_w^e if a is a root of unity, else None."""
    if a.is_zero():
        return None
    w = math.lcm(2, a.order)
    if not (a ** w).is_one():
        return None
    check_order(w)
    target = a.embed(w)
    for e in range(w):
        if zeta(w, e) == target:
            return w, e
    return None


def _isqrt_fraction(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def sqrt_cyclo(a: CycloNum) -> CycloNum:
    """One square root of ``a`` in a cyclotomic field.

    Handles roots of unity and rational numbers whose absolute value is a
    rational square; anything else raises ValueError.
    """
    if a.is_zero():
        return a
    if a.is_rational():
        q = a.to_fraction()
        r = _isqrt_fraction(abs(q))
        if r is not None:
            if q > 0:
                return CycloNum.rational(r, a.order)
            return zeta(4) * r
    log = root_of_unity_log(a)
    if log is None:
        raise ValueError(f"no cyclotomic square root found for {a}")
    w, e = log
    if e % 2 == 0:
        return zeta(w, e // 2)
    return zeta(2 * w, e)
