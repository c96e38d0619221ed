"""Dense matrices over a cyclotomic field and exact linear algebra.

Elimination is Gauss-Jordan with the first nonzero entry (scanning rows
downward) as pivot, so every basis produced here is deterministic.  Each
pivot row costs one field inversion; all other updates are multiply-subtract.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import CycloNum, as_cyclo, common_order

Vector = tuple  # tuple[CycloNum, ...]


def _common(values: Iterable, order: int | None) -> int:
    orders = [v.order for v in values if isinstance(v, CycloNum)]
    if order is not None:
        orders.append(order)
    return common_order(*orders) if orders else 1


class Matrix:
    """Immutable rows x cols matrix with entries in one field Q(zeta_order)."""

    __slots__ = ("order", "rows", "cols", "entries", "_inv", "_det")

    def __init__(self, entries: Sequence[Sequence], order: int | None = None):
        raw = [list(r) for r in entries]
        rows = len(raw)
        cols = len(raw[0]) if rows else 0
        if any(len(r) != cols for r in raw):
            raise ValueError("ragged matrix rows")
        n = _common((x for r in raw for x in r), order)
        conv = []
        for r in raw:
            conv.append(tuple(as_cyclo(x, n).embed(n) for x in r))
        self._init(n, rows, cols, tuple(conv))

    def _init(self, order, rows, cols, entries):
        self.order = order
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._inv = None
        self._det = None

    @classmethod
    def _raw(cls, order: int, entries) -> "Matrix":
        obj = cls.__new__(cls)
        entries = tuple(tuple(r) for r in entries)
        obj._init(order, len(entries), len(entries[0]) if entries else 0, entries)
        return obj

    # -- constructors ------------------------------------------------------
    @classmethod
    def identity(cls, n: int, order: int = 1) -> "Matrix":
        one, zero = CycloNum.one(order), CycloNum.zero(order)
        return cls._raw(order, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, order: int = 1) -> "Matrix":
        zero = CycloNum.zero(order)
        return cls._raw(order, [[zero] * cols for _ in range(rows)])

    @classmethod
    def diag(cls, values: Sequence, order: int | None = None) -> "Matrix":
        n = _common(values, order)
        vals = [as_cyclo(v, n).embed(n) for v in values]
        zero = CycloNum.zero(n)
        return cls._raw(n, [[vals[i] if i == j else zero for j in range(len(vals))]
                            for i in range(len(vals))])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], order: int | None = None) -> "Matrix":
        cols = [list(c) for c in columns]
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))], order)

    # -- basics --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def embed(self, order: int) -> "Matrix":
        if order == self.order:
            return self
        return Matrix._raw(order, [[x.embed(order) for x in r] for r in self.entries])

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.order, [list(c) for c in zip(*self.entries)]) if self.rows else self

    T = property(transpose)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(x for r in self.entries for x in r)))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix(order={self.order}, [{body}])"

    def _align(self, other: "Matrix") -> tuple["Matrix", "Matrix"]:
        if other.order == self.order:
            return self, other
        n = common_order(self.order, other.order)
        return self.embed(n), other.embed(n)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._align(other)
        if a.shape != b.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(a.order, [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b = self._align(other)
        if a.shape != b.shape:
            raise ValueError("shape mismatch")
        return Matrix._raw(a.order, [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])

    def __neg__(self):
        return Matrix._raw(self.order, [[-x for x in r] for r in self.entries])

    def scale(self, c) -> "Matrix":
        c = as_cyclo(c, self.order)
        a = self
        if c.order != self.order:
            n = common_order(c.order, self.order)
            a, c = self.embed(n), c.embed(n)
        return Matrix._raw(a.order, [[c * x for x in r] for r in a.entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        if isinstance(other, (CycloNum, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (CycloNum, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __matmul__(self, other: "Matrix") -> "Matrix":
        a, b = self._align(other)
        if a.cols != b.rows:
            raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
        bcols = list(zip(*b.entries)) if b.rows else [()] * b.cols
        zero = CycloNum.zero(a.order)
        out = []
        for r in a.entries:
            nz = [(k, x) for k, x in enumerate(r) if x]
            row = []
            for col in bcols:
                acc = zero
                for k, x in nz:
                    y = col[k]
                    if y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return Matrix._raw(a.order, out)

    def apply(self, v: Sequence[CycloNum]) -> Vector:
        """Matrix-vector product."""
        zero = CycloNum.zero(self.order)
        out = []
        for r in self.entries:
            acc = zero
            for x, y in zip(r, v):
                if x and y:
                    acc = acc + x * y
            out.append(acc)
        return tuple(out)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of non-square matrix")
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = Matrix.identity(self.rows, self.order)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def minus_scalar(self, c) -> "Matrix":
        """self - c*I."""
        c = as_cyclo(c, self.order)
        a = self
        if c.order != self.order:
            n = common_order(c.order, self.order)
            a, c = self.embed(n), c.embed(n)
        return Matrix._raw(a.order, [[x - c if i == j else x for j, x in enumerate(r)]
                                     for i, r in enumerate(a.entries)])

    def trace(self) -> CycloNum:
        acc = CycloNum.zero(self.order)
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    def is_zero(self) -> bool:
        return not any(x for r in self.entries for x in r)

    # -- linear algebra --------------------------------------------------------
    def det(self) -> CycloNum:
        if not self.is_square():
            raise ValueError("determinant of non-square matrix")
        if self._det is None:
            self._det = _det(self.entries, self.order)
        return self._det

    def is_invertible(self) -> bool:
        return self.is_square() and bool(self.det())

    def inverse(self) -> "Matrix":
        if self._inv is None:
            if not self.is_square():
                raise ValueError("inverse of non-square matrix")
            n = self.rows
            one, zero = CycloNum.one(self.order), CycloNum.zero(self.order)
            aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.entries)]
            red, pivots = rref(aug, n)
            if len(pivots) < n:
                raise ZeroDivisionError("matrix is singular")
            self._inv = Matrix._raw(self.order, [r[n:] for r in red[:n]])
        return self._inv

    def rank(self) -> int:
        return len(rref([list(r) for r in self.entries], self.cols)[1])

    def kernel(self) -> list[Vector]:
        return kernel_from_rows(self.entries, self.cols, self.order)

    def charpoly(self) -> list[CycloNum]:
        """Characteristic polynomial det(xI - M), coefficients lowest degree first."""
        return _charpoly(self)


def rref(rows: list[list[CycloNum]], ncols: int | None = None) -> tuple[list[list[CycloNum]], list[int]]:
    """Reduced row echelon form over the first ``ncols`` columns.

    Returns the reduced rows (a new list) and the pivot columns.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    width = len(rows[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = r
        while p < nrows and not rows[p][c]:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = prow[c].inverse()
        if not inv.is_one():
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [(j, x) for j, x in enumerate(prow) if x and j >= c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            for j, x in nz:
                row[j] = row[j] - f * x
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def kernel_from_rows(rows, ncols: int, order: int) -> list[Vector]:
    """Canonical reduced-echelon kernel basis of the matrix with the given rows."""
    one, zero = CycloNum.one(order), CycloNum.zero(order)
    if not rows:
        return [tuple(one if i == j else zero for i in range(ncols)) for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(pivots):
            x = red[i][f]
            if x:
                v[p] = -x
        basis.append(tuple(v))
    return basis


def rank_and_kernel(m: Matrix) -> tuple[int, list[Vector]]:
    basis = m.kernel()
    return m.cols - len(basis), basis


def row_space(vectors: Sequence[Sequence[CycloNum]], ncols: int) -> tuple[list[list[CycloNum]], list[int]]:
    """Reduced echelon basis (nonzero rows only) of the span of ``vectors``."""
    if not vectors:
        return [], []
    red, pivots = rref([list(v) for v in vectors], ncols)
    return red[: len(pivots)], pivots


def span_dim(vectors: Sequence[Sequence[CycloNum]], ncols: int) -> int:
    return len(row_space(vectors, ncols)[1])


def _det(entries, order: int) -> CycloNum:
    rows = [list(r) for r in entries]
    n = len(rows)
    if n == 0:
        return CycloNum.one(order)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    det = CycloNum.one(order)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return CycloNum.zero(order)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det = det * piv
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = rows[i][c]
            if f:
                f = f * inv
                for j in range(c + 1, n):
                    if rows[c][j]:
                        rows[i][j] = rows[i][j] - f * rows[c][j]
    return det


def _charpoly(m: Matrix) -> list[CycloNum]:
    # Faddeev-LeVerrier; exact over a field of characteristic zero
    n = m.rows
    coeffs = [CycloNum.zero(m.order)] * (n + 1)
    coeffs[n] = CycloNum.one(m.order)
    mk = Matrix.zeros(n, n, m.order)
    ident = Matrix.identity(n, m.order)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() * Fraction(1, k)
    return coeffs


def poly_eval(coeffs: Sequence[CycloNum], x: CycloNum) -> CycloNum:
    acc = CycloNum.zero(x.order)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc
