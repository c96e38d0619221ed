"""Seeded random generators for matrices, tuples and pseudo-reflection triples.

Every generator takes a ``random.Random`` instance so that corpora are
reproducible from a single integer seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .convolution import check_hypotheses
from .exact import CycloNum, Matrix, jordan_matrix, totient, zeta
from .tuples import MatrixTuple


def rng_from(seed: int | random.Random | None) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def random_cyclo(rng: random.Random, order: int, bound: int = 1, density: float = 0.5) -> CycloNum:
    """Small integer combination of powers of zeta_order."""
    coeffs = [rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(totient(order))]
    if not any(coeffs):
        coeffs[0] = rng.choice([c for c in range(-bound, bound + 1) if c]) if bound else 1
    return CycloNum(order, coeffs)


def random_entry(rng: random.Random, order: int, bound: int = 2) -> CycloNum:
    if order <= 2 or rng.random() < 0.6:
        return CycloNum.rational(rng.randint(-bound, bound), order)
    return random_cyclo(rng, order, 1, 0.4)


def random_matrix(rng: random.Random, dim: int, order: int = 1, bound: int = 2) -> Matrix:
    """Random invertible dim x dim matrix."""
    while True:
        m = Matrix([[random_entry(rng, order, bound) for _ in range(dim)] for _ in range(dim)], order)
        if m.det():
            return m


def random_root_of_unity(rng: random.Random, order: int, exclude_one: bool = True) -> CycloNum:
    choices = [k for k in range(order) if not (exclude_one and k == 0)]
    if not choices:
        return CycloNum.one(order)
    return zeta(order, rng.choice(choices))


def random_scalar(rng: random.Random, order: int) -> CycloNum:
    """A nonzero scalar that is a root of unity, a small rational, or a product of both."""
    kind = rng.random()
    if kind < 0.4 and order > 1:
        return random_root_of_unity(rng, order)
    q = Fraction(rng.choice([-3, -2, 2, 3, 5]), rng.choice([1, 1, 2, 3]))
    if kind < 0.7 or order == 1:
        return CycloNum.rational(q, order)
    return random_root_of_unity(rng, order, exclude_one=False) * q


def random_pseudo_reflection(rng: random.Random, dim: int, order: int = 1, det: CycloNum | None = None) -> Matrix:
    """1 + e (x) alpha with alpha(e) = det - 1, det a given or random nonzero scalar != 1."""
    if det is None:
        det = random_scalar(rng, order)
        while det.is_one():
            det = random_scalar(rng, order)
    order = max(order, det.order)
    det = det.embed(order) if det.order != order else det
    while True:
        e = [random_entry(rng, order) for _ in range(dim)]
        alpha = [random_entry(rng, order) for _ in range(dim)]
        pivot = next((i for i, x in enumerate(e) if x), None)
        if pivot is None:
            continue
        # fix alpha[pivot] so that alpha(e) = det - 1
        rest = sum((a * x for i, (a, x) in enumerate(zip(alpha, e)) if i != pivot), CycloNum.zero(order))
        alpha[pivot] = (det - 1 - rest) / e[pivot]
        return reflection_matrix(e, alpha, order)


def reflection_matrix(e: Sequence, alpha: Sequence, order: int) -> Matrix:
    dim = len(e)
    rows = [[(1 if i == j else 0) + e[i] * alpha[j] for j in range(dim)] for i in range(dim)]
    return Matrix(rows, order)


def random_kernel_matrix(rng: random.Random, dim: int, order: int, fixed: int) -> Matrix:
    """Invertible matrix with a ``fixed``-dimensional eigenspace for 1 and generic other eigenvalues."""
    p = random_matrix(rng, dim, order)
    diag = [CycloNum.one(order)] * fixed
    while len(diag) < dim:
        s = random_scalar(rng, order)
        if not s.is_one():
            diag.append(s)
    core = Matrix.diag(diag, order)
    if dim - fixed >= 2 and rng.random() < 0.5:
        core = core + Matrix([[1 if (i, j) == (dim - 2, dim - 1) else 0 for j in range(dim)]
                              for i in range(dim)], order)
    return p @ core @ p.inverse()


def random_tuple(rng: random.Random, r: int, dim: int, order: int = 1) -> MatrixTuple:
    """Mixture of generic matrices and matrices with planted fixed spaces."""
    mats = []
    for _ in range(r):
        kind = rng.random()
        if kind < 0.35 or dim == 1:
            mats.append(random_matrix(rng, dim, order))
        elif kind < 0.7:
            mats.append(random_pseudo_reflection(rng, dim, order))
        else:
            mats.append(random_kernel_matrix(rng, dim, order, rng.randint(1, dim - 1)))
    return MatrixTuple(mats)


def plant_product(rng: random.Random, mats: list[Matrix], target: Matrix) -> MatrixTuple:
    """Replace the last matrix so that M_r ... M_1 = target."""
    rest = mats[0]
    for x in mats[1:-1]:
        rest = x @ rest
    if len(mats) == 1:
        return MatrixTuple([target])
    mats = list(mats[:-1]) + [target @ rest.inverse()]
    return MatrixTuple(mats)


def hypothesis_corpus(seed: int, count: int, rs: Sequence[int] = (2, 3), dims: Sequence[int] = (1, 2, 3),
                      orders: Sequence[int] = (1, 3, 4, 5, 6, 8, 12)) -> list[tuple[MatrixTuple, CycloNum]]:
    """(tuple, lambda) pairs satisfying the MC hypotheses, lambda != 1.

    About half the instances have lambda^-1 planted in the spectrum of the
    product, so that L is nonzero.
    """
    rng = rng_from(seed)
    out = []
    while len(out) < count:
        r, dim, order = rng.choice(rs), rng.choice(dims), rng.choice(orders)
        t = random_tuple(rng, r, dim, order)
        lam = random_scalar(rng, order)
        if lam.is_one():
            continue
        if rng.random() < 0.5:
            mu = lam.inverse()
            diag = [mu] + [random_scalar(rng, order) for _ in range(dim - 1)]
            p = random_matrix(rng, dim, order)
            target = p @ Matrix.diag(diag, order) @ p.inverse()
            try:
                t = plant_product(rng, list(t), target)
            except ValueError:
                continue
        if check_hypotheses(t):
            continue
        out.append((t, lam))
    return out


def random_sl2(rng: random.Random, order: int = 8, bound: int = 2) -> Matrix:
    """Random element of SL_2(Q(zeta_order)) as a product of elementary matrices and a torus element."""
    one, zero = CycloNum.one(order), CycloNum.zero(order)
    m = Matrix.identity(2, order)
    for _ in range(rng.randint(2, 4)):
        x = random_cyclo(rng, order, bound, 0.5) if order > 1 else CycloNum.rational(rng.randint(-bound, bound))
        if rng.random() < 0.5:
            m = m @ Matrix._raw(order, [[one, x], [zero, one]])
        else:
            m = m @ Matrix._raw(order, [[one, zero], [x, one]])
    if rng.random() < 0.5:
        u = random_root_of_unity(rng, order, exclude_one=False)
        m = m @ Matrix._raw(order, [[u, zero], [zero, u.inverse()]])
    return m


def random_sl2_triple(rng: random.Random, order: int = 8) -> MatrixTuple:
    return MatrixTuple([random_sl2(rng, order) for _ in range(3)])


def random_irreducible_tuple(rng: random.Random, r: int, dim: int, order: int = 1,
                             reflections: bool = True) -> MatrixTuple:
    """Irreducible tuple satisfying the MC hypotheses (pseudo-reflections by default)."""
    from .convolution import is_irreducible
    if reflections and dim > r:
        # r pseudo-reflections fix the intersection of r hyperplanes
        raise ValueError(f"{r} pseudo-reflections cannot act irreducibly in dimension {dim}")
    while True:
        if reflections:
            t = MatrixTuple([random_pseudo_reflection(rng, dim, order) for _ in range(r)])
        else:
            t = MatrixTuple([random_matrix(rng, dim, order) for _ in range(r)])
        if is_irreducible(t) and not check_hypotheses(t):
            return t


def planted_jordan_tuple(rng: random.Random, r: int, blocks: Sequence[tuple], position, order: int = 1) -> MatrixTuple:
    """Tuple whose matrix at ``position`` (k or "infinity") is conjugate to the given Jordan blocks."""
    dim = sum(length for _, length in blocks)
    p = random_matrix(rng, dim, order)
    target = p @ jordan_matrix(blocks, order) @ p.inverse()
    mats = [random_matrix(rng, dim, order) for _ in range(r)]
    if position == "infinity":
        return plant_product(rng, mats, target)
    mats[position - 1] = target
    return MatrixTuple(mats)
