"""Artin braid group action on matrix tuples and braid orbit enumeration.

The generator beta_i acts on the adjacent slots (i, i+1) by

    M_i   <- M_{i+1}
    M_{i+1} <- M_{i+1} M_i M_{i+1}^-1

which preserves the product M_r ... M_1 in tuple order; inverse letters
apply the inverse substitution.  Words are integer lists such as
``[1, -2, 1]``, applied left to right.

Orbits are computed on conjugacy classes of tuples.  Each tuple is keyed
by its trace fingerprint: the traces of all words of length <= depth in
the tuple's matrices, listed in lexicographic word order.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .convolution import InconclusiveError, middle_convolution, module_isomorphic
from .exact import CycloNum, Matrix, render
from .tuples import MatrixTuple

BraidWord = Sequence[int]
DEFAULT_CAP = 100_000
DEFAULT_DEPTH = 3


def _check_word(word: BraidWord, r: int) -> None:
    for letter in word:
        if letter == 0 or abs(letter) > r - 1:
            raise IndexError(f"braid letter {letter} out of range for r = {r}")


def apply_braid(t: MatrixTuple, word: BraidWord) -> MatrixTuple:
    _check_word(word, t.length)
    mats = list(t.matrices)
    for letter in word:
        i = abs(letter) - 1
        a, b = mats[i], mats[i + 1]
        if letter > 0:
            mats[i], mats[i + 1] = b, b @ a @ b.inverse()
        else:
            mats[i], mats[i + 1] = a.inverse() @ b @ a, a
    return MatrixTuple(mats, check=False)


def invert_word(word: BraidWord) -> list[int]:
    return [-x for x in reversed(word)]


def pure_braid_generators(r: int = 3) -> list[list[int]]:
    """Generators beta_1^2, beta_2^2, beta_2 beta_1^2 beta_2^-1 of the pure braid group P_3."""
    if r != 3:
        raise ValueError("pure braid generators are only provided for r = 3")
    return [[1, 1], [2, 2], [2, 1, 1, -2]]


def full_braid_generators(r: int) -> list[list[int]]:
    return [[i] for i in range(1, r)]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fingerprint:
    depth: int
    traces: tuple[CycloNum, ...]

    def key(self) -> tuple:
        return tuple(x.sort_key() for x in self.traces)

    def __eq__(self, other):
        if not isinstance(other, Fingerprint):
            return NotImplemented
        return self.depth == other.depth and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other: "Fingerprint") -> bool:
        return self.key() < other.key()

    def to_json(self) -> list[str]:
        return [render(x) for x in self.traces]


def words(r: int, depth: int) -> list[tuple[int, ...]]:
    """All index words of length 1..depth over 1..r, shortest first, then lexicographic."""
    out = []
    for k in range(1, depth + 1):
        out.extend(itertools.product(range(1, r + 1), repeat=k))
    return out


def fingerprint(t: MatrixTuple, depth: int = DEFAULT_DEPTH) -> Fingerprint:
    """Traces of all words M_{i1} ... M_{ik}, k <= depth; a conjugation invariant."""
    if depth < 1:
        raise ValueError("fingerprint depth must be >= 1")
    mats = t.matrices
    cache: dict[tuple[int, ...], Matrix] = {}
    traces = []
    for w in words(t.length, depth):
        if len(w) == 1:
            m = mats[w[0] - 1]
        else:
            m = cache[w[:-1]] @ mats[w[-1] - 1]
        if len(w) < depth:
            cache[w] = m
        traces.append(m.trace())
    return Fingerprint(depth, tuple(traces))


@dataclass
class OrbitReport:
    representatives: list[Fingerprint]
    size: int
    finite: bool
    cap_hit: bool
    generator_set: str
    depth: int
    cap: int
    tuples: list[MatrixTuple] = field(default_factory=list, repr=False)
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "generator_set": self.generator_set,
            "size": self.size,
            "finite": self.finite,
            "cap_hit": self.cap_hit,
            "cap": self.cap,
            "fingerprint_depth": self.depth,
            "representatives": [fp.to_json() for fp in self.representatives],
            "warnings": list(self.warnings),
        }


GeneratorSpec = Union[str, Sequence[BraidWord]]


def resolve_generators(spec: GeneratorSpec, r: int) -> tuple[str, list[list[int]]]:
    if isinstance(spec, str):
        if spec in ("full", "full_B3", "B"):
            return "full_B3" if r == 3 else "full", full_braid_generators(r)
        if spec in ("pure", "pure_P3", "P"):
            return "pure_P3", pure_braid_generators(r)
        raise ValueError(f"unknown generator set {spec!r}")
    return "custom", [list(w) for w in spec]


class _Escalate(Exception):
    pass


def orbit_enumerate(t: MatrixTuple, generators: GeneratorSpec = "full", cap: int = DEFAULT_CAP,
                    depth: int = DEFAULT_DEPTH, verify_collisions: bool = True,
                    max_depth: int = 6) -> OrbitReport:
    """Breadth-first closure of the conjugacy class of ``t`` under the generators and their inverses.

    The orbit is finite when the closure stabilizes with at most ``cap``
    classes.  With ``verify_collisions`` every fingerprint collision is
    checked with :func:`module_isomorphic`; a certified non-isomorphic
    collision restarts the search with a deeper fingerprint.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    name, gens = resolve_generators(generators, t.length)
    for w in gens:
        _check_word(w, t.length)
    moves = []
    for w in gens:
        moves.append(list(w))
        moves.append(invert_word(w))
    while True:
        try:
            return _bfs(t, name, moves, cap, depth, verify_collisions)
        except _Escalate:
            if depth >= max_depth:
                raise RuntimeError("fingerprint depth escalation limit reached") from None
            depth += 1


def _bfs(t, name, moves, cap, depth, verify) -> OrbitReport:
    warnings = []
    seen: dict[Fingerprint, MatrixTuple] = {fingerprint(t, depth): t}
    queue = deque([t])
    cap_hit = False
    while queue and not cap_hit:
        cur = queue.popleft()
        for w in moves:
            nxt = apply_braid(cur, w)
            fp = fingerprint(nxt, depth)
            if fp in seen:
                if verify:
                    res = module_isomorphic(seen[fp], nxt)
                    if res.isomorphic is False:
                        raise _Escalate()
                    if res.isomorphic is None:
                        msg = "fingerprint collision with inconclusive isomorphism test"
                        if msg not in warnings:
                            warnings.append(msg)
                continue
            if len(seen) >= cap:
                cap_hit = True
                break
            seen[fp] = nxt
            queue.append(nxt)
    reps = sorted(seen)
    return OrbitReport(
        representatives=reps,
        size=len(reps),
        finite=not cap_hit,
        cap_hit=cap_hit,
        generator_set=name,
        depth=depth,
        cap=cap,
        tuples=[seen[fp] for fp in reps],
        warnings=warnings,
    )


def equivariance_check(t: MatrixTuple, lam, word: BraidWord) -> bool:
    """MC_lam(beta(M)) is conjugate to beta(MC_lam(M)).

    Raises InconclusiveError when the isomorphism search cannot decide.
    """
    left = middle_convolution(apply_braid(t, word), lam, check=False).tuple
    right = apply_braid(middle_convolution(t, lam, check=False).tuple, word)
    res = module_isomorphic(left, right)
    if res.isomorphic is None:
        raise InconclusiveError(res.reason)
    return res.isomorphic
