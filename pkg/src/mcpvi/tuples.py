"""Tuples of invertible matrices.

Index convention: the tuple written (M_r, ..., M_1) in the literature is
stored as ``matrices = (M_1, ..., M_r)``, so ``slot(k)`` is M_k and
``matrices[k - 1]`` is the same matrix.  All file formats carry explicit
1-based ``index`` labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .exact import Matrix, common_order


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    matrices: tuple[Matrix, ...]

    def __init__(self, matrices: Sequence[Matrix], check: bool = True):
        mats = tuple(matrices)
        if not mats:
            raise ValueError("empty matrix tuple")
        order = common_order(*(m.order for m in mats))
        mats = tuple(m.embed(order) for m in mats)
        dim = mats[0].rows
        if check:
            for k, m in enumerate(mats, 1):
                if m.shape != (dim, dim):
                    raise ValueError(f"M_{k} has shape {m.shape}, expected {(dim, dim)}")
                if dim and not m.det():
                    raise ValueError(f"M_{k} is not invertible")
        object.__setattr__(self, "matrices", mats)

    @property
    def dimension(self) -> int:
        return self.matrices[0].rows

    @property
    def length(self) -> int:
        return len(self.matrices)

    @property
    def order(self) -> int:
        return self.matrices[0].order

    def slot(self, k: int) -> Matrix:
        """M_k, 1-based."""
        if not 1 <= k <= self.length:
            raise IndexError(f"slot {k} out of range 1..{self.length}")
        return self.matrices[k - 1]

    def __iter__(self) -> Iterator[Matrix]:
        return iter(self.matrices)

    def __len__(self) -> int:
        return len(self.matrices)

    def __eq__(self, other):
        if not isinstance(other, MatrixTuple):
            return NotImplemented
        return self.matrices == other.matrices

    def __hash__(self):
        return hash(self.matrices)

    def product(self) -> Matrix:
        """M_r ... M_1 (tuple order); the product the braid action preserves."""
        out = self.matrices[-1]
        for m in reversed(self.matrices[:-1]):
            out = out @ m
        return out

    def embed(self, order: int) -> "MatrixTuple":
        return MatrixTuple([m.embed(order) for m in self.matrices], check=False)

    def conjugate(self, g: Matrix) -> "MatrixTuple":
        """(g M_k g^-1)_k."""
        gi = g.inverse()
        return MatrixTuple([g @ m @ gi for m in self.matrices], check=False)

    def transpose(self) -> "MatrixTuple":
        return MatrixTuple([m.transpose() for m in self.matrices], check=False)

    def __repr__(self):
        return f"MatrixTuple(r={self.length}, dim={self.dimension}, order={self.order})"
