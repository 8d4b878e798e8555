"""Filiform Lie algebras of the first kind: ``[X0, X_{j-1}] = X_j`` for ``j = 2..s``.

Vectors are tuples of length ``s + 1`` over ``X0..Xs``.  All routines work
with ``fractions.Fraction`` entries for exact results and with floats
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from ._symbolic import ReductionStep, SymbolicReport, label, leading, poly_coefficients

EXACT_MAX_STEP = 12


@dataclass(frozen=True)
class FiliformAlgebra:
    """Step-``s`` filiform algebra of the first kind.

    ``table`` maps ``(i, j)`` with ``i < j`` to ``(k, c)`` meaning
    ``[X_i, X_j] = c X_k``; only ``(0, j - 1) -> (j, 1)`` entries occur.
    Step 1 (the abelian plane ``X0, X1``) is accepted as a degenerate case.
    """

    step: int
    table: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.step, (int, np.integer)) or self.step < 1:
            raise ValueError("step must be a positive integer")
        object.__setattr__(self, "table", {(0, j - 1): (j, 1) for j in range(2, self.step + 1)})

    @property
    def dim(self) -> int:
        return self.step + 1

    @property
    def names(self) -> list[str]:
        return [f"X{k}" for k in range(self.dim)]

    def basis(self, k: int, one=1) -> tuple:
        zero = one - one
        return tuple(one if i == k else zero for i in range(self.dim))

    def bracket(self, v: Sequence, w: Sequence) -> tuple:
        if len(v) != self.dim or len(w) != self.dim:
            raise ValueError(f"vectors must have {self.dim} components")
        out = [v[0] - v[0] for _ in range(self.dim)]
        for (i, j), (k, c) in self.table.items():
            out[k] += c * (v[i] * w[j] - v[j] * w[i])
        return tuple(out)

    def jacobi_violations(self) -> list[tuple[int, int, int]]:
        """Basis triples where ``[a,[b,c]] + [b,[c,a]] + [c,[a,b]] != 0``."""
        bad = []
        e = [self.basis(k, Fraction(1)) for k in range(self.dim)]
        for a, b, c in product(range(self.dim), repeat=3):
            x, y, z = e[a], e[b], e[c]
            s = [p + q + r for p, q, r in zip(self.bracket(x, self.bracket(y, z)),
                                               self.bracket(y, self.bracket(z, x)),
                                               self.bracket(z, self.bracket(x, y)))]
            if any(s):
                bad.append((a, b, c))
        return bad

    def lower_central_series_dims(self) -> list[int]:
        """Dimensions of ``g, [g,g], [g,[g,g]], ...`` down to 0."""
        current = [self.basis(k, Fraction(1)) for k in range(self.dim)]
        dims = [self.dim]
        while current:
            brs = [self.bracket(self.basis(i, Fraction(1)), v) for i in range(self.dim) for v in current]
            current = _span_basis(brs)
            dims.append(len(current))
        return dims

    def is_nilpotent_of_step(self, s: int | None = None) -> bool:
        """``(s+1)``-fold brackets vanish and ``s``-fold ones do not."""
        s = self.step if s is None else s
        dims = self.lower_central_series_dims()
        return len(dims) == s + 1 and dims[-1] == 0


def _span_basis(vectors: list[tuple]) -> list[tuple]:
    """Row-echelon basis of the span (exact for Fraction entries)."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    while rows:
        pivot_row = rows.pop()
        col = next((i for i, c in enumerate(pivot_row) if c), None)
        if col is None:
            continue
        basis.append(tuple(pivot_row))
        rows = [[a - r[col] / pivot_row[col] * b for a, b in zip(r, pivot_row)] for r in rows]
        rows = [r for r in rows if any(r)]
    return basis


def ad_exp(alg: FiliformAlgebra, v: Sequence, w: Sequence) -> tuple:
    """``Ad_{exp v} w = sum_k ad(v)**k w / k!`` (the series stops after ``step`` terms)."""
    term = tuple(w)
    total = list(term)
    for k in range(1, alg.step + 1):
        term = alg.bracket(v, term)
        if not any(term):
            break
        term = tuple(c / k for c in term)
        total = [a + b for a, b in zip(total, term)]
    return tuple(total)


def filiform_adjoint(alg: FiliformAlgebra, t) -> tuple:
    """``Ad_{exp(t X0)} X1 = sum_{k=0}^{s-1} t**k / k! X_{k+1}``."""
    one = Fraction(1) if isinstance(t, (int, Fraction)) else 1.0
    v = tuple(t * c for c in alg.basis(0, one))
    return ad_exp(alg, v, alg.basis(1, one))


def _det_fraction(m: list[list[Fraction]]) -> tuple[Fraction, int]:
    """Exact determinant and rank by Gaussian elimination."""
    a = [row[:] for row in m]
    n = len(a)
    det = Fraction(1)
    rank = 0
    cols = len(a[0]) if a else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            det = Fraction(0)
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            det = -det
        det *= a[r][c]
        for i in range(r + 1, n):
            f = a[i][c] / a[r][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        rank += 1
        if r == n:
            break
    return (det if rank == n else Fraction(0)), rank


@dataclass
class BasisReport:
    ts: list
    matrix: list[list]  # row j: coefficients of Y_j over X1..Xs
    determinant: float
    formula: float  # (prod 1/k!) * prod_{i<j} (t_j - t_i)
    vandermonde_product: float  # prod_{i<j} (t_j - t_i)
    rank: int
    full_rank: bool
    exact: bool

    def to_dict(self) -> dict:
        return {
            "ts": [float(t) for t in self.ts],
            "determinant": float(self.determinant),
            "formula": float(self.formula),
            "vandermonde_product": float(self.vandermonde_product),
            "rank": self.rank,
            "full_rank": self.full_rank,
            "exact": self.exact,
        }


def vandermonde_basis(alg: FiliformAlgebra, ts: Sequence) -> BasisReport:
    """Coefficient matrix of ``Y_j = Ad_{exp(t_j X0)} X1`` over ``X1..Xs``.

    Exact rational arithmetic is used up to step 12 (floats are converted
    exactly); beyond that numpy's determinant and rank on the column-rescaled
    matrix.
    """
    s = alg.step
    if len(ts) != s:
        raise ValueError(f"need {s} values of t, got {len(ts)}")
    exact = s <= EXACT_MAX_STEP
    if exact:
        tq = [Fraction(t) for t in ts]
        rows = [list(filiform_adjoint(alg, t)[1:]) for t in tq]
        det, rank = _det_fraction(rows)
        prod = Fraction(1)
        for i in range(s):
            for j in range(i + 1, s):
                prod *= tq[j] - tq[i]
        scale = Fraction(1)
        for k in range(s):
            scale /= math.factorial(k)
        return BasisReport(list(ts), rows, det, scale * prod, prod, rank, rank == s, True)
    tf = np.asarray(ts, dtype=float)
    rows = np.array([filiform_adjoint(alg, float(t))[1:] for t in tf])
    prod = float(np.prod([tf[j] - tf[i] for i in range(s) for j in range(i + 1, s)]))
    fact = np.array([math.factorial(k) for k in range(s)], dtype=float)
    scale = float(np.prod(1.0 / fact))
    # column k carries 1/k!; undo it so rank and det see a plain Vandermonde matrix
    plain = rows * fact[None, :]
    rank = int(np.linalg.matrix_rank(plain))
    det = float(np.linalg.det(plain)) * scale
    return BasisReport(list(ts), rows.tolist(), det, scale * prod, prod, rank, rank == s, False)


def half_space_reduction_filiform(alg: FiliformAlgebra) -> SymbolicReport:
    """Invariant directions forced when ``X1`` is the normal.

    ``X0`` is then invariant.  ``Ad_{exp(t X_j)} X0 = X0 - t X_{j+1}`` stays
    invariant for every ``t``; its ``t``-coefficient has odd degree, so
    both signs of ``X_{j+1}`` are monotone and ``X_{j+1}`` is invariant.
    Iterating ``j = 1..s-1`` gives ``X2..Xs``.
    """
    names = alg.names
    rep = SymbolicReport()
    x0 = alg.basis(0, Fraction(1))
    for j in range(1, alg.step):
        xj = alg.basis(j, Fraction(1))
        coeffs = poly_coefficients(lambda t: ad_exp(alg, tuple(t * c for c in xj), x0), alg.step)
        deg, vec = leading(coeffs)
        derived = [names[k] for k, c in enumerate(vec) if c != 0]
        if deg % 2 == 1 and len(derived) == 1:
            rep.invariants.append(derived[0])
        rep.steps.append(
            ReductionStep(
                conjugate_by=f"exp(t {names[j]})",
                applied_to="X0",
                expansion=[label(c, names) for c in coeffs[: deg + 1]],
                leading_degree=deg,
                leading_term=label(vec, names),
                derived=derived[0] if len(derived) == 1 else label(vec, names),
            )
        )
    expected = names[2:]
    rep.conclusion = "half-space" if rep.invariants == expected else "reduction incomplete"
    return rep
