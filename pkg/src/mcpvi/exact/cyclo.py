"""Exact arithmetic in cyclotomic fields Q(zeta_n).

An element of Q(zeta_n) is stored in the power basis 1, z, ..., z^(phi(n)-1),
reduced modulo the n-th cyclotomic polynomial, as a tuple of integer
numerators over one positive common denominator.  The representation is
canonical, so equality inside one field is a tuple comparison.

Mixed-order arithmetic promotes both operands to the lcm of the orders.
The lcm is capped (see :func:`set_field_order_cap`).
"""

from __future__ import annotations

import ast
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Rational = Union[int, Fraction]

_FIELD_ORDER_CAP = 1000


class FieldOrderError(ValueError):
    """Raised when promotion would exceed the configured field order cap."""


class CycloParseError(ValueError):
    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


def get_field_order_cap() -> int:
    return _FIELD_ORDER_CAP


def set_field_order_cap(cap: int) -> None:
    global _FIELD_ORDER_CAP
    if cap < 1:
        raise ValueError("field order cap must be positive")
    _FIELD_ORDER_CAP = int(cap)


@contextmanager
def field_order_cap(cap: int):
    old = get_field_order_cap()
    set_field_order_cap(cap)
    try:
        yield
    finally:
        set_field_order_cap(old)


def check_order(n: int) -> int:
    if n < 1:
        raise ValueError(f"field order must be positive, got {n}")
    if n > _FIELD_ORDER_CAP:
        raise FieldOrderError(f"field order {n} exceeds cap {_FIELD_ORDER_CAP}")
    return n


def common_order(*orders: int) -> int:
    return check_order(math.lcm(*orders))


# ---------------------------------------------------------------------------
# field tables

def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def totient(n: int) -> int:
    result, p, m = n, 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        den = cyclotomic_polynomial(d)
        # exact division by a monic polynomial
        q = [0] * (len(num) - len(den) + 1)
        rem = list(num)
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + len(den) - 1]
            q[k] = c
            if c:
                for j, dj in enumerate(den):
                    rem[k + j] -= c * dj
        num = q
    return tuple(num)


@dataclass(frozen=True)
class _Field:
    n: int
    phi: int
    poly: tuple[int, ...]
    # (index, coeff) for the non-leading nonzero terms of Phi_n
    tail: tuple[tuple[int, int], ...]
    # normalized-trace weights: Tr(z^k) / phi(n)
    trace_weights: tuple[Fraction, ...]


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    poly = cyclotomic_polynomial(n)
    phi = len(poly) - 1
    tail = tuple((j, c) for j, c in enumerate(poly[:-1]) if c)
    weights = []
    for k in range(phi):
        m = n // math.gcd(n, k)
        weights.append(Fraction(_mobius(m), totient(m)))
    return _Field(n, phi, poly, tail, tuple(weights))


def _reduce(n: int, coeffs: list[int]) -> list[int]:
    """Reduce an integer coefficient list modulo Phi_n (in place safe)."""
    f = _field(n)
    phi = f.phi
    if len(coeffs) > n:
        folded = [0] * n
        for k, c in enumerate(coeffs):
            if c:
                folded[k % n] += c
        coeffs = folded
    else:
        coeffs = list(coeffs)
    tail = f.tail
    for k in range(len(coeffs) - 1, phi - 1, -1):
        c = coeffs[k]
        if c:
            coeffs[k] = 0
            base = k - phi
            for j, pj in tail:
                coeffs[base + j] -= c * pj
    if len(coeffs) < phi:
        coeffs.extend([0] * (phi - len(coeffs)))
    return coeffs[:phi]


# ---------------------------------------------------------------------------

def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class CycloNum:
    """An exact element of Q(zeta_order).

    >>> i = zeta(4)
    >>> i * i
    CycloNum(4, '-1')
    >>> zeta(6) ** 2 == zeta(6) - 1
    True
    """

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, coeffs: Iterable = ()):
        check_order(order)
        fr = [_to_fraction(c) for c in coeffs]
        den = math.lcm(*(c.denominator for c in fr)) if fr else 1
        num = [int(c * den) for c in fr]
        self._set(order, _reduce(order, num) if num else [0] * _field(order).phi, den)

    def _set(self, order: int, num: list[int], den: int) -> None:
        g = math.gcd(den, *num)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        if not any(num):
            den = 1
        self.order = order
        self.num = tuple(num)
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, order: int, num: list[int], den: int) -> "CycloNum":
        obj = cls.__new__(cls)
        obj._set(order, num, den)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, q: Rational | str, order: int = 1) -> "CycloNum":
        q = _to_fraction(q)
        phi = _field(check_order(order)).phi
        return cls._raw(order, [q.numerator] + [0] * (phi - 1), q.denominator)

    @classmethod
    def zero(cls, order: int = 1) -> "CycloNum":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CycloNum":
        return cls.rational(1, order)

    # -- inspection --------------------------------------------------------
    @property
    def phi(self) -> int:
        return len(self.num)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_one(self) -> bool:
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_n)/Q}(self) / phi(n); independent of the ambient field."""
        w = _field(self.order).trace_weights
        return sum((c * wk for c, wk in zip(self.num, w) if c), Fraction(0)) / self.den

    def sort_key(self) -> tuple:
        return (self.order,) + self.coeffs

    def __complex__(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * z**k for k, c in enumerate(self.num)) / self.den

    # -- field changes -----------------------------------------------------
    def embed(self, target_order: int) -> "CycloNum":
        """Image under Q(zeta_m) -> Q(zeta_n), zeta_m -> zeta_n^(n/m)."""
        if target_order == self.order:
            return self
        if target_order % self.order:
            raise ValueError(f"cannot embed order {self.order} into order {target_order}")
        check_order(target_order)
        step = target_order // self.order
        out = [0] * target_order
        for k, c in enumerate(self.num):
            if c:
                out[(k * step) % target_order] += c
        return CycloNum._raw(target_order, _reduce(target_order, out), self.den)

    def restrict(self, order: int) -> "CycloNum":
        """Express self in the subfield Q(zeta_order); ValueError if it is not there."""
        if order == self.order:
            return self
        if self.order % order:
            raise ValueError(f"Q(zeta_{order}) is not a subfield of Q(zeta_{self.order})")
        phi_small = _field(order).phi
        images = [CycloNum._raw(order, [int(j == k) for j in range(phi_small)], 1).embed(self.order)
                  for k in range(phi_small)]
        # solve sum_k x_k images[k] = self over Q
        rows = [[Fraction(images[k].num[i], images[k].den) for k in range(phi_small)]
                + [Fraction(self.num[i], self.den)] for i in range(self.phi)]
        sol = _solve_rational(rows, phi_small)
        if sol is None:
            raise ValueError(f"{self} does not lie in Q(zeta_{order})")
        return CycloNum(order, sol)

    def minimal_order(self) -> int:
        for d in _divisors(self.order):
            if d % 4 == 2 and d != self.order:
                continue
            try:
                self.restrict(d)
            except ValueError:
                continue
            return d
        return self.order

    def conj(self) -> "CycloNum":
        """Complex conjugate (zeta -> zeta^-1)."""
        return self.galois(-1)

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> tuple["CycloNum", "CycloNum"]:
        if isinstance(other, CycloNum):
            if other.order == self.order:
                return self, other
            n = common_order(self.order, other.order)
            return self.embed(n), other.embed(n)
        if isinstance(other, (int, Fraction)):
            return self, CycloNum.rational(other, self.order)
        return NotImplemented, NotImplemented

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if b.is_zero():
            return a
        if a.is_zero():
            return b
        da, db = a.den, b.den
        if da == db:
            num = [x + y for x, y in zip(a.num, b.num)]
        else:
            num = [x * db + y * da for x, y in zip(a.num, b.num)]
            da *= db
        return CycloNum._raw(a.order, num, da)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw(self.order, [-x for x in self.num], self.den)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if a.is_zero() or b.is_zero():
            return CycloNum.zero(a.order)
        an, bn = a.num, b.num
        if len(an) == 1:
            return CycloNum._raw(a.order, [an[0] * bn[0]], a.den * b.den)
        if b.is_rational():
            c = bn[0]
            return CycloNum._raw(a.order, [x * c for x in an], a.den * b.den)
        if a.is_rational():
            c = an[0]
            return CycloNum._raw(a.order, [x * c for x in bn], a.den * b.den)
        out = [0] * (2 * len(an) - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        out[i + j] += x * y
        return CycloNum._raw(a.order, _reduce(a.order, out), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            q = Fraction(self.den, self.num[0])
            return CycloNum.rational(q, self.order)
        # a^-1 = (product of the other Galois conjugates) / norm(a)
        n = self.order
        rest = CycloNum.one(n)
        for k in range(2, n):
            if math.gcd(k, n) == 1:
                rest = rest * self.galois(k)
        norm = (self * rest).to_fraction()
        return rest * (1 / norm)

    def galois(self, k: int) -> "CycloNum":
        """Image under the automorphism zeta -> zeta^k (gcd(k, order) = 1)."""
        n = self.order
        out = [0] * n
        for j, c in enumerate(self.num):
            if c:
                out[(j * k) % n] += c
        return CycloNum._raw(n, _reduce(n, out), self.den)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = CycloNum.one(self.order)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycloNum):
            if other.order == self.order:
                return self.den == other.den and self.num == other.num
            try:
                a, b = self._coerce(other)
            except FieldOrderError:
                return False
            return a.den == b.den and a.num == b.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.normalized_trace())
        return self._hash

    # -- text --------------------------------------------------------------
    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"CycloNum({self.order}, {render(self)!r})"


def zeta(n: int, k: int = 1) -> CycloNum:
    """zeta_n^k as an element of Q(zeta_n)."""
    check_order(n)
    out = [0] * n
    out[k % n] = 1
    return CycloNum._raw(n, _reduce(n, out), 1)


def as_cyclo(x, order: int = 1) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, str):
        return parse(x, order)
    return CycloNum.rational(x, order)


def _solve_rational(rows: list[list[Fraction]], nvars: int) -> list[Fraction] | None:
    """Solve an augmented rational system; None if inconsistent."""
    rows = [list(r) for r in rows]
    piv_cols = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][-1]
    return sol


# ---------------------------------------------------------------------------
# literal grammar:  polynomial in z with rational coefficients

def parse(text: str, order: int) -> CycloNum:
    """Parse a literal such as ``"1/2*z^3 - z + 2"`` into Q(zeta_order).

    ``^`` and ``**`` both denote powers; negative powers of ``z`` are allowed.
    """
    check_order(order)
    src = text.strip().replace("^", "**")
    if not src:
        raise CycloParseError("empty literal", 1)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise CycloParseError(f"invalid literal {text!r}: {exc.msg}", exc.offset) from None
    z = zeta(order)

    def ev(node):
        col = getattr(node, "col_offset", 0) + 1
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return CycloNum.rational(node.value, order)
        if isinstance(node, ast.Name):
            if node.id != "z":
                raise CycloParseError(f"unknown symbol {node.id!r}", col)
            return z
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise CycloParseError("exponent must be an integer", col)
                return ev(node.left) ** (sign * exp.value)
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                try:
                    return left / right
                except ZeroDivisionError:
                    raise CycloParseError("division by zero", col) from None
        raise CycloParseError(f"unsupported syntax in {text!r}", col)

    return ev(tree.body)


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(a: CycloNum) -> str:
    """Canonical literal, highest power first: ``1/2*z^3 - z + 2``."""
    parts = []
    for k in range(len(a.num) - 1, -1, -1):
        c = Fraction(a.num[k], a.den)
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _render_coeff(mag)
        else:
            mono = "z" if k == 1 else f"z^{k}"
            body = mono if mag == 1 else f"{_render_coeff(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
