"""Pseudo-reflection triples in GL_3 and the trace map phi to SL_2 triples.

A pseudo-reflection is r = 1 + e (x) alpha with rank(r - 1) = 1.  For a
triple (r_1, r_2, r_3) with det(r_i) = t_i^2 and spectrum
{n_1^2, n_2^2, n_3^2} of r_3 r_2 r_1 (roots chosen with
t_1 t_2 t_3 = n_1 n_2 n_3), phi sends

    (t_1, t_2, t_3, n_1, n_2, n_3, t_12, t_23, t_13),  t_ij = Tr(r_i r_j) - 1,

to a seven-tuple of SL_2 trace coordinates.  :func:`verify_theorem`
compares phi(t) with the traces of the rescaled middle convolution
MC_lambda(r_1, r_2, r_3) over a grid of conventions (lambda, root choice,
scaling, formula reading) and reports which grid points agree.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .convolution import middle_convolution
from .exact import (
    CycloNum,
    EigenReport,
    Matrix,
    common_order,
    render,
    roots_of_unity_eigenvalues,
    sqrt_cyclo,
)
from .fricke import KEYS, TraceSeven
from .tuples import MatrixTuple


class HypothesisError(ValueError):
    """The input violates a hypothesis of the construction (named in the message)."""


# ---------------------------------------------------------------------------
# pseudo-reflections

def is_pseudo_reflection(m: Matrix) -> bool:
    if not m.is_square():
        return False
    return m.minus_scalar(1).rank() == 1 and not m.det().is_zero()


@dataclass(frozen=True, eq=False)
class PseudoReflection:
    e: tuple[CycloNum, ...]
    alpha: tuple[CycloNum, ...]
    matrix: Matrix

    def __init__(self, e: Sequence, alpha: Sequence, order: int | None = None):
        from .samples import reflection_matrix
        if len(e) != len(alpha):
            raise ValueError("e and alpha have different lengths")
        if order is None:
            order = common_order(*(getattr(x, "order", 1) for x in list(e) + list(alpha)))
        m = reflection_matrix(list(e), list(alpha), order)
        if not is_pseudo_reflection(m):
            raise ValueError("1 + e (x) alpha is not an invertible pseudo-reflection")
        object.__setattr__(self, "e", tuple(CycloNum.zero(order) + x for x in e))
        object.__setattr__(self, "alpha", tuple(CycloNum.zero(order) + x for x in alpha))
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "PseudoReflection":
        """Recover (e, alpha) from a matrix; e is the first nonzero column of m - 1."""
        if not is_pseudo_reflection(m):
            raise ValueError("matrix is not a pseudo-reflection")
        d = m.minus_scalar(1)
        j = next(c for c in range(d.cols) if any(d.column(c)))
        e = d.column(j)
        p = next(i for i, x in enumerate(e) if x)
        alpha = [x / e[p] for x in d.row(p)]
        return cls(e, alpha, m.order)

    @property
    def det(self) -> CycloNum:
        return self.matrix.det()


def as_triple(triple) -> MatrixTuple:
    if isinstance(triple, MatrixTuple):
        t = triple
    else:
        t = MatrixTuple([r.matrix if isinstance(r, PseudoReflection) else r for r in triple])
    if t.length != 3 or t.dimension != 3:
        raise ValueError("expected three 3x3 matrices")
    for k, m in enumerate(t, 1):
        if not is_pseudo_reflection(m):
            raise HypothesisError(f"r_{k} is not a pseudo-reflection")
    return t


# ---------------------------------------------------------------------------
# invariants

@dataclass(frozen=True)
class TInvariants:
    t1sq: CycloNum
    t2sq: CycloNum
    t3sq: CycloNum
    t12: CycloNum
    t23: CycloNum
    t13: CycloNum
    t321: CycloNum
    t321p: CycloNum
    spectrum: tuple[CycloNum, ...]
    degenerate: bool

    def to_json(self) -> dict:
        out = {k: render(getattr(self, k)) for k in
               ("t1sq", "t2sq", "t3sq", "t12", "t23", "t13", "t321", "t321p")}
        out["spectrum"] = [render(x) for x in self.spectrum]
        out["degenerate"] = self.degenerate
        return out


def product_spectrum(t: MatrixTuple, max_order: int | None = None) -> EigenReport:
    """Spectrum of r_3 r_2 r_1 among (+-) roots of unity."""
    if max_order is None:
        max_order = 2 * math.lcm(2, t.order)
    return roots_of_unity_eigenvalues(t.product(), max_order)


def t_invariants(triple, max_order: int | None = None) -> TInvariants:
    t = as_triple(triple)
    r1, r2, r3 = t.matrices
    report = product_spectrum(t, max_order)
    if not report.resolved:
        raise HypothesisError("spectrum of r_3 r_2 r_1 is not resolved by roots of unity")
    spec = report.spectrum()
    n = common_order(t.order, *(x.order for x in spec))
    spec = [x.embed(n) for x in spec]
    t321 = spec[0] + spec[1] + spec[2]
    t321p = spec[0] * spec[1] + spec[1] * spec[2] + spec[0] * spec[2]
    prod = t.product()
    cp = prod.charpoly()
    if t321 != prod.trace() or t321p != cp[1]:
        raise ArithmeticError("spectrum is inconsistent with the characteristic polynomial")
    return TInvariants(
        r1.det(), r2.det(), r3.det(),
        (r1 @ r2).trace() - 1, (r2 @ r3).trace() - 1, (r1 @ r3).trace() - 1,
        t321, t321p, tuple(spec), not report.is_distinct(),
    )


@dataclass(frozen=True)
class TTuple:
    t1: CycloNum
    t2: CycloNum
    t3: CycloNum
    n1: CycloNum
    n2: CycloNum
    n3: CycloNum
    t12: CycloNum
    t23: CycloNum
    t13: CycloNum
    t321: CycloNum
    t321p: CycloNum
    labeling: tuple[int, int, int] = (0, 1, 2)
    signs: tuple[int, ...] = (1, 1, 1, 1, 1, 1)

    @property
    def order(self) -> int:
        return self.t1.order

    def label(self) -> str:
        lab = "".join(str(i + 1) for i in self.labeling)
        sig = "".join("+" if s > 0 else "-" for s in self.signs)
        return f"spec{lab}/{sig}"

    def to_json(self) -> dict:
        out = {k: render(getattr(self, k)) for k in
               ("t1", "t2", "t3", "n1", "n2", "n3", "t12", "t23", "t13", "t321", "t321p")}
        out["labeling"] = [i + 1 for i in self.labeling]
        out["signs"] = list(self.signs)
        return out


def choose_roots(triple, field_order: int | None = None, labelings: Iterable | None = None,
                 inv: TInvariants | None = None) -> list[TTuple]:
    """All root choices with t_1 t_2 t_3 = n_1 n_2 n_3.

    For each labeling of the spectrum as (n_1^2, n_2^2, n_3^2) (all six by
    default, ``labelings=[(0, 1, 2)]`` for the order found) the 2^6 sign
    assignments are filtered by the constraint.  The field is promoted as
    far as needed for the square roots.
    """
    t = as_triple(triple)
    inv = inv or t_invariants(t)
    base = [sqrt_cyclo(x) for x in (inv.t1sq, inv.t2sq, inv.t3sq)]
    nroots = [sqrt_cyclo(x) for x in inv.spectrum]
    n = common_order(field_order or 1, inv.t12.order, *(x.order for x in base + nroots))
    base = [x.embed(n) for x in base]
    nroots = [x.embed(n) for x in nroots]
    t12, t23, t13 = (x.embed(n) for x in (inv.t12, inv.t23, inv.t13))
    t321, t321p = inv.t321.embed(n), inv.t321p.embed(n)
    if labelings is None:
        labelings = list(itertools.permutations(range(3)))
    out = []
    seen = set()
    for lab in labelings:
        lab = tuple(lab)
        ns = [nroots[i] for i in lab]
        key_spec = tuple(x.sort_key() for x in ns)
        for signs in itertools.product((1, -1), repeat=6):
            ts = [b * s for b, s in zip(base, signs[:3])]
            nn = [b * s for b, s in zip(ns, signs[3:])]
            if ts[0] * ts[1] * ts[2] != nn[0] * nn[1] * nn[2]:
                continue
            key = (tuple(x.sort_key() for x in ts + nn), key_spec)
            if key in seen:
                continue
            seen.add(key)
            out.append(TTuple(*ts, *nn, t12, t23, t13, t321, t321p, lab, signs))
    return out


# ---------------------------------------------------------------------------
# phi and scaling

READINGS = ("displayed", "symmetric")


def phi(t: TTuple, reading: str = "displayed") -> TraceSeven:
    """The trace map.

    ``displayed``: m_1 = t_1/n_1, m_i = t_i/n_1 + n_1/t_i for i = 2, 3.
    ``symmetric``: m_i = t_i/n_1 + n_1/t_i for all i.
    Both: m_ij = t_ij/(t_i t_j), m321 = n_2/n_3 + n_3/n_2.
    """
    if reading not in READINGS:
        raise ValueError(f"unknown phi reading {reading!r}")
    for name in ("t1", "t2", "t3", "n1", "n2", "n3"):
        if getattr(t, name).is_zero():
            raise ZeroDivisionError(f"{name} = 0 in phi")
    inv_n1 = t.n1.inverse()
    it = [x.inverse() for x in (t.t1, t.t2, t.t3)]

    def m(i: int) -> CycloNum:
        ti = (t.t1, t.t2, t.t3)[i]
        return ti * inv_n1 + t.n1 * it[i]

    m1 = t.t1 * inv_n1 if reading == "displayed" else m(0)
    return TraceSeven(
        m1, m(1), m(2),
        t.t12 * it[0] * it[1], t.t23 * it[1] * it[2], t.t13 * it[0] * it[2],
        t.n2 / t.n3 + t.n3 / t.n2,
    )


def scale_tuple(t: MatrixTuple, scalars: Sequence) -> MatrixTuple:
    """(c_k M_k)_k."""
    if len(scalars) != t.length:
        raise ValueError(f"need {t.length} scalars, got {len(scalars)}")
    for c in scalars:
        if not c:
            raise ValueError("zero scalar")
    return MatrixTuple([m.scale(c) for m, c in zip(t, scalars)], check=False)


SCALINGS = ("displayed", "reversed", "det_normalized")


def scaling_scalars(t: TTuple, scaling: str) -> tuple[CycloNum, CycloNum, CycloNum]:
    """Scalars (c_1, c_2, c_3) multiplying (M'_1, M'_2, M'_3).

    ``displayed``: M_i = n_i M'_i.  ``reversed``: M_i = n_{4-i} M'_i.
    ``det_normalized``: M_i = (n_1/t_i) M'_i.
    """
    if scaling == "displayed":
        return t.n1, t.n2, t.n3
    if scaling == "reversed":
        return t.n3, t.n2, t.n1
    if scaling == "det_normalized":
        return t.n1 / t.t1, t.n1 / t.t2, t.n1 / t.t3
    raise ValueError(f"unknown scaling {scaling!r}")


# ---------------------------------------------------------------------------
# theorem verifier

@dataclass(frozen=True)
class _RawTraces:
    """Traces of the unscaled MC output, from which scaled traces follow arithmetically."""
    tr: tuple[CycloNum, CycloNum, CycloNum]
    tr_pairs: tuple[CycloNum, CycloNum, CycloNum]  # (12, 23, 13)
    tr321: CycloNum
    dets: tuple[CycloNum, CycloNum, CycloNum]

    @classmethod
    def of(cls, t: MatrixTuple) -> "_RawTraces":
        a, b, c = t.matrices
        return cls((a.trace(), b.trace(), c.trace()),
                   ((a @ b).trace(), (b @ c).trace(), (a @ c).trace()),
                   (c @ b @ a).trace(),
                   (a.det(), b.det(), c.det()))

    def scaled(self, s: Sequence[CycloNum]) -> tuple[TraceSeven, bool]:
        n = s[0].order
        tr = [x.embed(n) * c for x, c in zip(self.tr, s)]
        p = [x.embed(n) for x in self.tr_pairs]
        seven = TraceSeven(tr[0], tr[1], tr[2], p[0] * s[0] * s[1], p[1] * s[1] * s[2], p[2] * s[0] * s[2],
                           self.tr321.embed(n) * s[0] * s[1] * s[2])
        sl2 = all((d.embed(n) * c * c).is_one() for d, c in zip(self.dets, s))
        return seven, sl2


@dataclass
class GridPoint:
    lam: CycloNum
    lam_source: str
    roots: TTuple
    scaling: str
    reading: str
    matches: tuple[bool, ...]
    sl2: bool
    traces: TraceSeven
    predicted: TraceSeven

    @property
    def full_match(self) -> bool:
        return all(self.matches)

    def to_json(self, values: bool = False) -> dict:
        out = {
            "lambda": render(self.lam),
            "lambda_source": self.lam_source,
            "roots": self.roots.label(),
            "scaling": self.scaling,
            "reading": self.reading,
            "matches": dict(zip(KEYS, self.matches)),
            "sl2": self.sl2,
        }
        if values:
            out["t"] = self.roots.to_json()
            out["traces"] = self.traces.to_json()
            out["phi"] = self.predicted.to_json()
        return out


@dataclass
class LambdaAttempt:
    lam: CycloNum
    source: str
    dimension: int
    warnings: list[str]

    def to_json(self) -> dict:
        return {"lambda": render(self.lam), "source": self.source, "dimension": self.dimension,
                "warnings": list(self.warnings)}


@dataclass
class VerificationReport:
    invariants: TInvariants
    attempts: list[LambdaAttempt]
    grid: list[GridPoint]
    field_order: int
    images: dict = field(default_factory=dict, repr=False)  # (lam render, scaling, roots label) -> MatrixTuple

    @property
    def verdict(self) -> bool:
        return any(p.full_match for p in self.grid)

    def matching(self) -> list[GridPoint]:
        return [p for p in self.grid if p.full_match]

    def coordinate_stats(self) -> dict:
        """For each (scaling, reading): does some grid point match each coordinate / all of them."""
        stats: dict[str, dict] = {}
        for p in self.grid:
            key = f"{p.scaling}/{p.reading}"
            s = stats.setdefault(key, {"points": 0, "full": 0, "sl2": 0, **{k: 0 for k in KEYS}})
            s["points"] += 1
            s["full"] += p.full_match
            s["sl2"] += p.sl2
            for k, ok in zip(KEYS, p.matches):
                s[k] += ok
        return stats

    def matched_conventions(self) -> list[tuple[str, str, str]]:
        """Distinct (lambda source, scaling, reading) combinations with a full match."""
        return sorted({(p.lam_source, p.scaling, p.reading) for p in self.matching()})

    def phi_image(self) -> MatrixTuple | None:
        """The rescaled MC output of the first fully matching SL_2 grid point."""
        for p in self.matching():
            if p.sl2:
                return self.images.get((render(p.lam), p.scaling, p.roots.label()))
        return None

    def to_json(self, full_grid: bool = False) -> dict:
        points = self.grid if full_grid else self.matching()
        return {
            "verdict": self.verdict,
            "field_order": self.field_order,
            "invariants": self.invariants.to_json(),
            "lambda_attempts": [a.to_json() for a in self.attempts],
            "grid_size": len(self.grid),
            "matched_conventions": [list(c) for c in self.matched_conventions()],
            "coordinate_stats": self.coordinate_stats(),
            "matching_points": [p.to_json(values=not full_grid) for p in points[:1]] +
                               [p.to_json() for p in points[1:]],
        }

    def table(self) -> str:
        head = ["lambda", "src", "roots", "scaling", "reading", *KEYS, "sl2"]
        rows = [head]
        for p in self.grid:
            rows.append([render(p.lam), p.lam_source, p.roots.label(), p.scaling, p.reading,
                         *("Y" if ok else "." for ok in p.matches), "Y" if p.sl2 else "."])
        widths = [max(len(r[i]) for r in rows) for i in range(len(head))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
        lines.append(f"verdict: {'verified' if self.verdict else 'no grid point matches all seven coordinates'}")
        return "\n".join(lines)


def lambda_candidates(inv: TInvariants) -> list[tuple[CycloNum, str]]:
    """Each eigenvalue of r_3 r_2 r_1 and each inverse eigenvalue."""
    out = []
    for k, mu in enumerate(inv.spectrum, 1):
        out.append((mu, f"eigenvalue{k}"))
    for k, mu in enumerate(inv.spectrum, 1):
        out.append((mu.inverse(), f"inverse{k}"))
    return out


def verify_theorem(triple, scalings: Sequence[str] = SCALINGS, readings: Sequence[str] = READINGS,
                   max_order: int | None = None) -> VerificationReport:
    """Compare phi(t) with the traces of the rescaled MC_lambda(triple) over the convention grid.

    Raises HypothesisError if the spectrum of r_3 r_2 r_1 is not three
    distinct values, and ValueError if no lambda candidate gives a
    2-dimensional convolution.
    """
    t = as_triple(triple)
    inv = t_invariants(t, max_order)
    if inv.degenerate:
        raise HypothesisError("r_3 r_2 r_1 does not have three distinct eigenvalues")
    roots = choose_roots(t, inv=inv)
    n = roots[0].order
    attempts, grid, images = [], [], {}
    for lam, source in lambda_candidates(inv):
        res = middle_convolution(t, lam)
        attempts.append(LambdaAttempt(lam, source, res.dimension, res.warnings))
        if res.dimension != 2:
            continue
        raw = _RawTraces.of(res.tuple)
        for rt in roots:
            for scaling in scalings:
                s = scaling_scalars(rt, scaling)
                seven, sl2 = raw.scaled(s)
                for reading in readings:
                    pred = phi(rt, reading)
                    grid.append(GridPoint(lam, source, rt, scaling, reading, seven.matches(pred), sl2, seven, pred))
                    if all(grid[-1].matches) and sl2:
                        key = (render(lam), scaling, rt.label())
                        if key not in images:
                            images[key] = scale_tuple(res.tuple.embed(n), s)
    if not grid:
        dims = ", ".join(f"{render(a.lam)}: {a.dimension}" for a in attempts)
        raise ValueError(f"no lambda candidate gives a 2-dimensional convolution ({dims})")
    return VerificationReport(inv, attempts, grid, n, images)


# ---------------------------------------------------------------------------
# random triples with a prescribed product spectrum

def random_distinct_triple(rng, order: int = 12) -> MatrixTuple:
    """Pseudo-reflection triple over Q(zeta_order) whose product has three distinct root-of-unity eigenvalues.

    r_1, r_2 are random; r_3 = 1 + e (x) beta is solved for so that
    r_3 r_2 r_1 has a chosen spectrum (mu_1, mu_2, mu_3).
    """
    from .exact import zeta
    from .exact.matrix import kernel_from_rows
    from .samples import random_entry, random_pseudo_reflection, reflection_matrix
    w = math.lcm(2, order)
    while True:
        a, b = rng.randrange(1, w), rng.randrange(1, w)
        mus = rng.sample(range(w), 3)
        if (sum(mus) - a - b) % w == 0 and rng.random() < 0.7:
            continue
        r1 = random_pseudo_reflection(rng, 3, order, zeta(w, a).embed(common_order(order, w)))
        r2 = random_pseudo_reflection(rng, 3, order, zeta(w, b).embed(common_order(order, w)))
        n = r1.order
        x = r2 @ r1
        e = [random_entry(rng, n) for _ in range(3)]
        if not any(e):
            continue
        # char poly of x + e gamma equals prod (t - mu_i):  p_x(t) - gamma adj(t - x) e = target
        cp = x.charpoly()  # lowest degree first, monic cubic
        mu = [zeta(w, k).embed(n) for k in mus]
        target = [-(mu[0] * mu[1] * mu[2]), mu[0] * mu[1] + mu[1] * mu[2] + mu[0] * mu[2],
                  -(mu[0] + mu[1] + mu[2])]
        tr = x.trace()
        e2 = cp[1]
        a2 = Matrix.identity(3, n)
        a1 = x.minus_scalar(tr)
        a0 = (x @ x) - x.scale(tr) + Matrix.identity(3, n).scale(e2)
        rows = []
        rhs = []
        for deg, adj in ((2, a2), (1, a1), (0, a0)):
            v = adj.apply(e)
            rows.append(list(v))
            rhs.append(cp[deg] - target[deg])
        aug = [row + [-c] for row, c in zip(rows, rhs)]
        ker = kernel_from_rows(aug, 4, n)
        sol = [k for k in ker if k[3]]
        if len(ker) != 1 or not sol:
            continue
        k = sol[0]
        gamma = [c / k[3] for c in k[:3]]
        xi = x.inverse().entries
        beta = [sum((gamma[i] * xi[i][j] for i in range(3)), CycloNum.zero(n)) for j in range(3)]
        if not any(beta):
            continue
        r3 = reflection_matrix(e, beta, n)
        if not is_pseudo_reflection(r3):
            continue
        t = MatrixTuple([r1, r2, r3])
        spec = product_spectrum(t)
        if spec.is_distinct():
            return t
