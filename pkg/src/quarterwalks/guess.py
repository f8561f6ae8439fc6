"""Ansatz-based discovery of candidate annihilating operators.

An ansatz template fixes a finite support of monomials
n^e1 i^e2 j^e3 S_n^e4 S_i^e5 S_j^e6 with undetermined coefficients.
Applying the template to the counting oracle at a sample point turns
"the operator annihilates f" into one exact linear constraint on the
coefficients; many points give a linear system whose right kernel holds
every annihilator with that support.  An empty kernel is a proof that no
such annihilator exists, because each row is a necessary condition.

The kernel is computed exactly: a modular rank check first (a full-column
rank modulo a prime already proves the kernel trivial, since the rank can
only drop under reduction), then fraction-free Bareiss elimination over
the integers with exact rational back-substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmath import MultiPoly
from .ore import LEX, MonomialOrder, OreOperator

Tuple6 = tuple[int, int, int, int, int, int]

_MOD_PRIME = 2_147_483_629  # < 2^31, so int64 products cannot overflow


class TemplateError(ValueError):
    """Raised for an ansatz with empty support or bad caps."""


@dataclass(frozen=True)
class Bounds:
    """Per-symbol caps for an ansatz: polynomial degrees in n, i, j and
    shift orders, plus an optional cap on the total polynomial degree."""

    deg_n: int = 0
    deg_i: int = 0
    deg_j: int = 0
    ord_sn: int = 0
    ord_si: int = 0
    ord_sj: int = 0
    total_poly_deg: int | None = None

    def validate(self):
        caps = (self.deg_n, self.deg_i, self.deg_j, self.ord_sn, self.ord_si, self.ord_sj)
        if any(c < 0 for c in caps):
            raise TemplateError("all caps must be >= 0")
        if self.total_poly_deg is not None and self.total_poly_deg < 0:
            raise TemplateError("total degree cap must be >= 0")


@dataclass(frozen=True)
class AnsatzTemplate:
    """An ordered support of exponent 6-tuples (the unknown vector index)."""

    support: tuple[Tuple6, ...]
    shape: str = "custom"

    def __post_init__(self):
        if not self.support:
            raise TemplateError("empty ansatz support")
        if len(set(self.support)) != len(self.support):
            raise TemplateError("duplicate tuples in ansatz support")

    def __len__(self):
        return len(self.support)

    def max_shift(self) -> tuple[int, int, int]:
        return (
            max(t[3] for t in self.support),
            max(t[4] for t in self.support),
            max(t[5] for t in self.support),
        )

    def max_degrees(self) -> tuple[int, int, int]:
        return (
            max(t[0] for t in self.support),
            max(t[1] for t in self.support),
            max(t[2] for t in self.support),
        )

    def materialize(self, vector: Sequence[Fraction]) -> OreOperator:
        """Turn a coefficient vector over the support into an operator."""
        if len(vector) != len(self.support):
            raise ValueError("vector length does not match support")
        by_shift: dict[tuple[int, int, int], dict] = {}
        for (e1, e2, e3, e4, e5, e6), c in zip(self.support, vector):
            if not c:
                continue
            mono = by_shift.setdefault((e4, e5, e6), {})
            exp = (e1, e2, e3)
            mono[exp] = mono.get(exp, Fraction(0)) + Fraction(c)
        terms = {s: MultiPoly(m) for s, m in by_shift.items()}
        return OreOperator(terms)


def quasiholonomic_ok(t: Tuple6) -> bool:
    """A term survives i = j = 0 only if it is free of S_i and S_j."""
    e1, e2, e3, e4, e5, e6 = t
    if e2 == 0 and e3 == 0:
        return (e5, e6) == (0, 0)
    return True


def build_template(bounds: Bounds, shape: str = "full") -> AnsatzTemplate:
    """Enumerate the exponent tuples within the caps and shape restriction."""
    bounds.validate()
    if shape not in ("full", "quasiholonomic"):
        raise TemplateError(f"unknown ansatz shape {shape!r}")
    support = []
    for e1 in range(bounds.deg_n + 1):
        for e2 in range(bounds.deg_i + 1):
            for e3 in range(bounds.deg_j + 1):
                if bounds.total_poly_deg is not None and e1 + e2 + e3 > bounds.total_poly_deg:
                    continue
                for e4 in range(bounds.ord_sn + 1):
                    for e5 in range(bounds.ord_si + 1):
                        for e6 in range(bounds.ord_sj + 1):
                            t = (e1, e2, e3, e4, e5, e6)
                            if shape == "quasiholonomic" and not quasiholonomic_ok(t):
                                continue
                            support.append(t)
    if not support:
        raise TemplateError("caps and shape leave an empty support")
    return AnsatzTemplate(tuple(support), shape)


def template_from_support(support: Sequence[Tuple6]) -> AnsatzTemplate:
    return AnsatzTemplate(tuple(support), "custom")


# ---------------------------------------------------------------------------
# Sample points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointPlan:
    """Deterministic sample grid plus disjoint fresh points for filtering."""

    points: tuple[tuple[int, int, int], ...]
    fresh_points: tuple[tuple[int, int, int], ...]
    required_n_max: int


def plan_points(template: AnsatzTemplate, margin: int = 20) -> PointPlan:
    """Grid n in [1, N], i, j in [0, J] with at least len(template) + margin
    points whose n is not below i and j (rows sampled at i > n or j > n are
    mostly forced zeros and carry little information, so they are not
    counted against the quota)."""
    sn, si, sj = template.max_shift()
    dn, di, dj = template.max_degrees()
    J = max(si, sj, di, dj) + 2
    need = len(template) + margin
    per_level = (J + 1) ** 2
    N = J + 1 + max(4, -(-need // per_level))
    points = [
        (n, i, j)
        for n in range(1, N + 1)
        for i in range(J + 1)
        for j in range(J + 1)
    ]
    fresh = [
        (n, i, j)
        for n in range(N + 1, N + 3)
        for i in range(J + 1)
        for j in range(J + 1)
    ]
    return PointPlan(tuple(points), tuple(fresh), N + 2 + sn)


# ---------------------------------------------------------------------------
# System assembly
# ---------------------------------------------------------------------------


@dataclass
class LinearSystem:
    """Exact evaluation matrix: one row per point, one column per tuple."""

    matrix: list[list[int]]
    points: list[tuple[int, int, int]]
    template: AnsatzTemplate = field(repr=False)


def assemble_system(
    template: AnsatzTemplate, oracle, points: Sequence[tuple[int, int, int]]
) -> LinearSystem:
    rows = []
    for (n, i, j) in points:
        row = []
        for (e1, e2, e3, e4, e5, e6) in template.support:
            if (i == 0 and e2) or (j == 0 and e3):
                row.append(0)
                continue
            v = oracle.value(n + e4, i + e5, j + e6)
            if v:
                row.append(n**e1 * i**e2 * j**e3 * v)
            else:
                row.append(0)
        rows.append(row)
    return LinearSystem(rows, list(points), template)


# ---------------------------------------------------------------------------
# Exact nullspace
# ---------------------------------------------------------------------------


def _modular_rank(matrix: list[list[int]], p: int = _MOD_PRIME) -> int:
    """Rank of the matrix over GF(p).  Since reduction mod p can only lower
    the rank, full column rank here is a proof that the rational kernel is
    trivial."""
    if not matrix:
        return 0
    a = np.array([[x % p for x in row] for row in matrix], dtype=np.int64)
    m, n = a.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        pr = rank + int(nz[0])
        if pr != rank:
            a[[rank, pr]] = a[[pr, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1 :, col]
        mask = below != 0
        if mask.any():
            rows = a[rank + 1 :][mask]
            a[rank + 1 :][mask] = (rows - np.outer(below[mask], a[rank])) % p
        rank += 1
    return rank


def _bareiss_echelon(matrix: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination; returns (echelon rows, pivot cols).

    After step k every entry is a k+1 minor of the original matrix, and the
    divisions by the previous pivot are exact.
    """
    m = [row[:] for row in matrix]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = None
        for rr in range(r, nrows):
            if m[rr][c]:
                pr = rr
                break
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for rr in range(r + 1, nrows):
            f = m[rr][c]
            row = m[rr]
            top = m[r]
            if f:
                for cc in range(c, ncols):
                    row[cc] = (piv * row[cc] - f * top[cc]) // prev
            elif prev != 1 or piv != 1:
                for cc in range(c, ncols):
                    row[cc] = piv * row[cc] // prev
        pivots.append(c)
        prev = piv
        r += 1
    return m[: len(pivots)], pivots


def _normalize_vector(vec: list[Fraction]) -> tuple[Fraction, ...]:
    """Scale to a primitive integer vector whose first nonzero entry is positive."""
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(Fraction(0) for _ in vec)
    first = next(v for v in ints if v)
    if first < 0:
        g = -g
    return tuple(Fraction(v, g) for v in ints)


def nullspace(system: LinearSystem | list[list[int]]) -> list[tuple[Fraction, ...]]:
    """Exact basis of the right kernel, one vector per free column.

    Vectors are primitive integer-scaled, with a 1 in their free column,
    in free-column order; the empty list means the kernel is trivial.
    Rational rows are scaled to integers first (the kernel is unchanged).
    """
    matrix = system.matrix if isinstance(system, LinearSystem) else system
    if not matrix:
        return []
    ncols = len(matrix[0])
    if ncols == 0:
        return []
    if any(isinstance(x, Fraction) for row in matrix for x in row):
        cleaned = []
        for row in matrix:
            den = 1
            for x in row:
                if isinstance(x, Fraction):
                    den = den * x.denominator // math.gcd(den, x.denominator)
            cleaned.append([int(x * den) for x in row])
        matrix = cleaned
    if _modular_rank(matrix) == ncols:
        return []
    echelon, pivots = _bareiss_echelon(matrix)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        x: list[Fraction] = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = echelon[k]
            s = Fraction(0)
            for cc in range(c + 1, ncols):
                if row[cc] and x[cc]:
                    s += Fraction(row[cc]) * x[cc]
            x[c] = -s / row[c]
        basis.append(_normalize_vector(x))
    return basis


def filter_candidates(
    basis: Sequence[Sequence[Fraction]],
    template: AnsatzTemplate,
    oracle,
    fresh_points: Sequence[tuple[int, int, int]],
    order: MonomialOrder = LEX,
) -> list[OreOperator]:
    """Materialize kernel vectors and keep those with zero residual on the
    fresh points, normalized.

    For the quasi-holonomic shape, a candidate whose coefficients all
    vanish at i = j = 0 is dropped: its restriction to the origin column
    is the empty recurrence, so it is not a quasi-holonomic operator in
    the useful sense, merely an i- or j-multiple of other annihilators.
    """
    kept = []
    for vec in basis:
        op = template.materialize(vec)
        if op.is_zero():
            continue
        if template.shape == "quasiholonomic" and op.substitute_zero(("i", "j")).is_zero():
            continue
        if all(op.apply_at(oracle, *pt) == 0 for pt in fresh_points):
            kept.append(op.normalized(order))
    return kept


def guess_operators(
    template: AnsatzTemplate,
    oracle,
    margin: int = 20,
    order: MonomialOrder = LEX,
) -> list[OreOperator]:
    """Full guessing round: plan points, assemble, solve, filter."""
    plan = plan_points(template, margin)
    if plan.required_n_max > oracle.max_level:
        from .walks import OracleRangeError

        raise OracleRangeError(plan.required_n_max, oracle.max_level)
    system = assemble_system(template, oracle, plan.points)
    basis = nullspace(system)
    return filter_candidates(basis, template, oracle, plan.fresh_points, order)
