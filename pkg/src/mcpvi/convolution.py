"""Middle convolution MC_lambda of a tuple of invertible matrices.

For M = (M_1, ..., M_r) acting on V and a nonzero scalar lam, the block
matrices N_1, ..., N_r act on V^r; N_k is the identity except for block row
k, which reads

    (M_1 - 1) ... (M_{k-1} - 1) | lam*M_k | lam*(M_{k+1} - 1) ... lam*(M_r - 1)

The subspaces K_k = ker(M_k - 1) (in slot k) and L = intersection of
ker(N_k - 1) are invariant, and MC_lambda(M) is the induced action on
V^r / (K + L).

With this block structure the matrix that controls L is the product
lam * M_r ... M_1 (tuple order), and that is the product used by
:func:`convolution_dimension` and by the point at infinity.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

from .exact import (
    CycloNum,
    JordanData,
    Matrix,
    as_cyclo,
    common_order,
    jordan_data,
    kernel_from_rows,
    row_space,
)
from .tuples import MatrixTuple

Position = Union[int, str]
INFINITY = "infinity"


class InconclusiveError(RuntimeError):
    """An isomorphism search found intertwiners but no invertible one."""


def _lam(lam, order: int) -> tuple[CycloNum, int]:
    lam = as_cyclo(lam, order)
    if lam.is_zero():
        raise ValueError("lambda must be nonzero")
    n = common_order(order, lam.order)
    return lam.embed(n), n


def build_c_lambda(t: MatrixTuple, lam) -> MatrixTuple:
    """The tuple (N_1, ..., N_r) on V^r."""
    lam, n = _lam(lam, t.order)
    mats = [m.embed(n) for m in t]
    r, m = t.length, t.dimension
    one, zero = CycloNum.one(n), CycloNum.zero(n)
    shifted = [mat.minus_scalar(1) for mat in mats]
    out = []
    for k in range(r):
        rows = [[one if i == j else zero for j in range(r * m)] for i in range(r * m)]
        for j in range(r):
            if j < k:
                block = shifted[j]
            elif j == k:
                block = mats[k].scale(lam)
            else:
                block = shifted[j].scale(lam)
            for a in range(m):
                rows[k * m + a][j * m:(j + 1) * m] = block.entries[a]
        out.append(Matrix._raw(n, rows))
    return MatrixTuple(out, check=False)


def _in_slot(vec, k: int, r: int, m: int, zero: CycloNum) -> tuple:
    out = [zero] * (r * m)
    out[k * m:(k + 1) * m] = vec
    return tuple(out)


def _fixed_space(mats: Sequence[Matrix]) -> list[tuple]:
    """Intersection of ker(A - 1) over the given matrices."""
    rows = []
    for a in mats:
        rows.extend(a.minus_scalar(1).entries)
    return kernel_from_rows(rows, mats[0].cols, mats[0].order)


def invariant_subspaces(t: MatrixTuple, lam, big: MatrixTuple | None = None):
    """Bases of K_1, ..., K_r (embedded in V^r) and of L."""
    lam, n = _lam(lam, t.order)
    big = big or build_c_lambda(t, lam)
    r, m = t.length, t.dimension
    zero = CycloNum.zero(n)
    k_bases = []
    for k, mat in enumerate(t):
        ker = mat.embed(n).minus_scalar(1).kernel()
        k_bases.append([_in_slot(v, k, r, m, zero) for v in ker])
    l_basis = _fixed_space(list(big))
    return k_bases, l_basis


def l_via_product(t: MatrixTuple, lam, big: MatrixTuple | None = None) -> list[tuple]:
    """ker(N_1 ... N_r - 1), the other description of L."""
    big = big or build_c_lambda(t, lam)
    prod = big.matrices[0]
    for nk in big.matrices[1:]:
        prod = prod @ nk
    return prod.minus_scalar(1).kernel()


def same_subspace(a: Sequence[tuple], b: Sequence[tuple], ncols: int) -> bool:
    ra, _ = row_space(a, ncols)
    rb, _ = row_space(b, ncols)
    return len(ra) == len(rb) and all(x == y for u, v in zip(ra, rb) for x, y in zip(u, v))


def check_hypotheses(t: MatrixTuple) -> list[str]:
    """Look for 1-dimensional submodules or factors on which at most one M_i acts nontrivially.

    A submodule of that kind is an eigenvector of M_i fixed by every other
    M_j.  The largest M_i-stable subspace of the common fixed space of the
    other M_j is the kernel of the stacked (M_j - 1) M_i^k, k < dim V; it is
    nonzero exactly when such an eigenvector exists.  Factors are submodules
    of the dual, which is the same test on transposes.  Returns one message
    per violation (empty list: hypotheses hold).
    """
    warnings = []
    dim = t.dimension
    for label, tup in (("submodule", t), ("factor", t.transpose())):
        mats = list(tup)
        for i, mi in enumerate(mats):
            others = [mj.minus_scalar(1) for j, mj in enumerate(mats) if j != i]
            if not others:
                ok = dim == 0
            else:
                rows = []
                power = Matrix.identity(dim, tup.order)
                for _ in range(dim):
                    for o in others:
                        rows.extend((o @ power).entries)
                    power = mi @ power
                ok = not kernel_from_rows(rows, dim, tup.order)
            if not ok:
                warnings.append(f"1-dimensional {label} on which only M_{i + 1} (or none) acts nontrivially")
    return warnings


@dataclass
class ConvolutionResult:
    tuple: MatrixTuple
    big_tuple: MatrixTuple
    k_bases: list
    l_basis: list
    quotient_basis: list[int]
    lam: CycloNum
    warnings: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.quotient_basis)

    @property
    def degenerate(self) -> bool:
        return self.dimension == 0

    @property
    def hypotheses_ok(self) -> bool:
        return not any(w.startswith("1-dimensional") for w in self.warnings)

    def to_json(self) -> dict:
        from .io import tuple_to_document, vector_to_json
        return {
            "lambda": str(self.lam),
            "field_order": self.tuple.order,
            "dimension": self.dimension,
            "degenerate": self.degenerate,
            "warnings": list(self.warnings),
            "tuple": tuple_to_document(self.tuple),
            "big_tuple": tuple_to_document(self.big_tuple),
            "k_bases": [[vector_to_json(v) for v in basis] for basis in self.k_bases],
            "l_basis": [vector_to_json(v) for v in self.l_basis],
            "quotient_basis": [i + 1 for i in self.quotient_basis],
        }


def middle_convolution(t: MatrixTuple, lam, check: bool = True) -> ConvolutionResult:
    """MC_lambda(t) with the complement basis made of non-pivot coordinate vectors."""
    lam, n = _lam(lam, t.order)
    t = t.embed(n)
    big = build_c_lambda(t, lam)
    k_bases, l_basis = invariant_subspaces(t, lam, big)
    size = t.length * t.dimension
    span = [v for basis in k_bases for v in basis] + list(l_basis)
    red, pivots = row_space(span, size)
    pivset = set(pivots)
    complement = [j for j in range(size) if j not in pivset]
    quotient = []
    for nk in big:
        cols = []
        for c in complement:
            x = list(nk.column(c))
            for row, p in zip(red, pivots):
                f = x[p]
                if f:
                    x = [a - f * b if b else a for a, b in zip(x, row)]
            cols.append([x[j] for j in complement])
        entries = [[cols[j][i] for j in range(len(complement))] for i in range(len(complement))]
        quotient.append(Matrix._raw(n, entries))
    warnings = check_hypotheses(t) if check else []
    result_tuple = MatrixTuple(quotient, check=False)
    if complement:
        for k, q in enumerate(quotient, 1):
            if not q.det():
                raise ArithmeticError(f"induced matrix N~_{k} is singular")
    else:
        warnings.append("degenerate: quotient has dimension 0")
    return ConvolutionResult(result_tuple, big, k_bases, l_basis, complement, lam, warnings)


def convolution_dimension(t: MatrixTuple, lam) -> int:
    """sum_k rk(M_k - 1) - (dim V - rk(lam * M_r...M_1 - 1)); requires lam != 1."""
    lam, n = _lam(lam, t.order)
    if lam.is_one():
        raise ValueError("the dimension formula needs lambda != 1")
    total = sum(m.minus_scalar(1).rank() for m in t)
    prod = t.product().embed(n).scale(lam).minus_scalar(1)
    return total - (t.dimension - prod.rank())


# ---------------------------------------------------------------------------
# Jordan block transfer

def infinity_matrix(t: MatrixTuple) -> Matrix:
    """M_{r+1} := M_r ... M_1, the monodromy at infinity for this construction."""
    return t.product()


def jordan_transfer_predict(blocks: JordanData, lam, position: Position) -> JordanData:
    """Blocks J(alpha*lam, l') contributed to N~ at ``position`` (k or "infinity").

    Finite positions:  l' = l, l-1, l+1 for alpha != 1, lam^-1 / alpha = 1 /
    alpha = lam^-1.  At infinity the two special cases swap.  The free
    J(1,1) (resp. J(lam,1)) blocks are not part of the prediction.
    """
    lam = as_cyclo(lam)
    inv = lam.inverse()
    at_infinity = position == INFINITY
    out = []
    for alpha, length in blocks.blocks:
        if alpha == 1:
            new = length + 1 if at_infinity else length - 1
        elif alpha == inv:
            new = length - 1 if at_infinity else length + 1
        else:
            new = length
        if new > 0:
            out.append((alpha * lam, new))
    total = sum(length for _, length in out)
    return JordanData(tuple(out), total, complete=False)


class JordanTransferCheck(NamedTuple):
    ok: bool
    predicted: JordanData
    actual: JordanData
    free_blocks: int
    message: str


def check_jordan_transfer(t: MatrixTuple, lam, result: ConvolutionResult, position: Position,
                          candidates: Sequence) -> JordanTransferCheck:
    """Compare the predicted blocks with the Jordan data of the actual MC output."""
    lam = as_cyclo(lam)
    if position == INFINITY:
        source = infinity_matrix(t)
        target = infinity_matrix(result.tuple)
        free = lam
    else:
        source = t.slot(position)
        target = result.tuple.slot(position)
        free = CycloNum.one(lam.order)
    given = jordan_data(source, candidates)
    if not given.complete:
        raise ValueError("candidate eigenvalues do not exhaust the spectrum of the input matrix")
    predicted = jordan_transfer_predict(given, lam, position)
    if result.dimension == 0:
        actual = JordanData((), 0, True)
    else:
        actual = jordan_data(target, [a for a, _ in predicted.blocks] + [free])
    remaining = actual.counter()
    remaining.subtract(predicted.counter())
    if any(c < 0 for c in remaining.values()):
        return JordanTransferCheck(False, predicted, actual, 0, "predicted block missing from output")
    extra = {k: c for k, c in remaining.items() if c > 0}
    if any(k != (free, 1) for k in extra):
        return JordanTransferCheck(False, predicted, actual, 0, f"unexpected extra blocks {extra}")
    if not actual.complete:
        return JordanTransferCheck(False, predicted, actual, 0, "output spectrum not exhausted")
    return JordanTransferCheck(True, predicted, actual, sum(extra.values()), "ok")


# ---------------------------------------------------------------------------
# module isomorphism and irreducibility

def intertwiners(a: MatrixTuple, b: MatrixTuple) -> list[Matrix]:
    """Basis of {X : X A_i = B_i X for all i}."""
    n = a.dimension
    order = common_order(a.order, b.order)
    a, b = a.embed(order), b.embed(order)
    one, zero = CycloNum.one(order), CycloNum.zero(order)
    basis = []
    for p in range(n):
        for q in range(n):
            rows = [[zero] * n for _ in range(n)]
            rows[p][q] = one
            basis.append(Matrix._raw(order, rows))
    for ai, bi in zip(a, b):
        if not basis:
            break
        diffs = [x @ ai - bi @ x for x in basis]
        rows = [[d.entries[p][q] for d in diffs] for p in range(n) for q in range(n)]
        ker = kernel_from_rows(rows, len(basis), order)
        new = []
        for c in ker:
            acc = None
            for cj, xj in zip(c, basis):
                if cj:
                    term = xj.scale(cj)
                    acc = term if acc is None else acc + term
            new.append(acc)
        basis = new
    return basis


class IsoResult(NamedTuple):
    isomorphic: bool | None  # None: inconclusive
    witness: Matrix | None
    reason: str


def _combinations(d: int, bound: int, limit: int, seed: int = 0):
    if (2 * bound + 1) ** d <= limit:
        rng = range(-bound, bound + 1)
        for c in itertools.product(rng, repeat=d):
            if sum(1 for x in c if x) > 1:
                yield c
        return
    gen = random.Random(seed)
    for _ in range(limit):
        yield tuple(gen.randint(-bound, bound) for _ in range(d))


def module_isomorphic(a: MatrixTuple, b: MatrixTuple, bound: int = 2, limit: int = 2000) -> IsoResult:
    """Decide whether B_i = X A_i X^-1 for one invertible X.

    Certified negatives: different lengths/dimensions or traces, no
    intertwiner at all, a one-dimensional Hom(A, B) spanned by a singular
    matrix, or dim Hom(A, B) differing from dim End(A) or dim End(B).  Otherwise basis intertwiners and then small integer
    combinations are tried; if none is invertible the answer is None.
    """
    if a.length != b.length or a.dimension != b.dimension:
        return IsoResult(False, None, "different length or dimension")
    if a.dimension == 0:
        return IsoResult(True, Matrix._raw(1, []), "zero-dimensional")
    for k, (x, y) in enumerate(zip(a, b), 1):
        if x.trace() != y.trace():
            return IsoResult(False, None, f"trace of M_{k} differs")
    hom = intertwiners(a, b)
    if not hom:
        return IsoResult(False, None, "no nonzero intertwiner")
    for x in hom:
        if x.det():
            return IsoResult(True, x, "basis intertwiner is invertible")
    if len(hom) == 1:
        return IsoResult(False, None, "every intertwiner is a multiple of one singular matrix")
    if len(hom) > 1:
        for c in _combinations(len(hom), bound, limit):
            acc = None
            for cj, xj in zip(c, hom):
                if cj:
                    acc = xj.scale(cj) if acc is None else acc + xj.scale(cj)
            if acc is not None and acc.det():
                return IsoResult(True, acc, "integer combination of intertwiners is invertible")
    if len(intertwiners(a, a)) != len(hom) or len(intertwiners(b, b)) != len(hom):
        return IsoResult(False, None, "dim Hom(A,B) differs from dim End")
    return IsoResult(None, None, "intertwiners exist but none invertible within search bound")


def is_irreducible(t: MatrixTuple) -> bool:
    """Absolute irreducibility by Burnside: the words span all dim x dim matrices."""
    n = t.dimension
    if n <= 1:
        return True
    order = t.order
    target = n * n
    gens = list(t)
    basis: list[tuple[int, list[CycloNum]]] = []  # (pivot, normalized row) in insertion order
    elements: list[Matrix] = []

    def reduce(vec):
        vec = list(vec)
        for p, row in basis:
            f = vec[p]
            if f:
                vec = [x - f * y if y else x for x, y in zip(vec, row)]
        return vec

    def add(m: Matrix) -> bool:
        vec = reduce([x for r in m.entries for x in r])
        p = next((i for i, x in enumerate(vec) if x), None)
        if p is None:
            return False
        inv = vec[p].inverse()
        basis.append((p, [x * inv for x in vec]))
        elements.append(m)
        return True

    add(Matrix.identity(n, order))
    i = 0
    while i < len(elements) and len(basis) < target:
        for g in gens:
            add(g @ elements[i])
            if len(basis) == target:
                break
        i += 1
    return len(basis) == target
