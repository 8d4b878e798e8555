"""Exact polynomial-in-t bookkeeping for adjoint expansions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence


def poly_coefficients(fn: Callable[[Fraction], Sequence], degree: int) -> list[tuple[Fraction, ...]]:
    """Coefficient vectors ``c_0..c_degree`` of a vector polynomial ``fn(t) = sum c_k t**k``.

    ``fn`` is sampled at ``t = 0..degree`` with exact fractions and the
    Vandermonde system is solved by Newton divided differences, so the
    result is exact whenever ``fn`` is a polynomial of at most that degree.
    """
    nodes = [Fraction(k) for k in range(degree + 1)]
    values = [tuple(Fraction(c) for c in fn(t)) for t in nodes]
    dim = len(values[0])
    # divided-difference table, one column per component
    table = [list(v) for v in values]
    newton = [table[0]]
    for level in range(1, degree + 1):
        table = [
            [(table[i + 1][d] - table[i][d]) / (nodes[i + level] - nodes[i]) for d in range(dim)]
            for i in range(len(table) - 1)
        ]
        newton.append(table[0])
    # expand the Newton form into monomial coefficients
    coeffs = [[Fraction(0)] * dim for _ in range(degree + 1)]
    basis = [Fraction(1)]  # coefficients of prod_{i<level} (t - nodes[i])
    for level in range(degree + 1):
        for k, b in enumerate(basis):
            for d in range(dim):
                coeffs[k][d] += b * newton[level][d]
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, b in enumerate(basis):
            nxt[k + 1] += b
            nxt[k] -= b * nodes[level]
        basis = nxt
    return [tuple(c) for c in coeffs]


def leading(coeffs: list[tuple[Fraction, ...]]) -> tuple[int, tuple[Fraction, ...]]:
    """Highest degree with a non-zero coefficient vector, and that vector."""
    for k in range(len(coeffs) - 1, -1, -1):
        if any(c != 0 for c in coeffs[k]):
            return k, coeffs[k]
    return 0, coeffs[0]


def label(vec: Sequence, names: Sequence[str]) -> str:
    """Readable linear combination, e.g. ``X1 - X3``."""
    parts = []
    for c, n in zip(vec, names):
        if c == 0:
            continue
        c = Fraction(c)
        if c == 1:
            term = n
        elif c == -1:
            term = f"-{n}"
        else:
            term = f"{c}*{n}"
        parts.append(term)
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


@dataclass
class ReductionStep:
    conjugate_by: str
    applied_to: str
    expansion: list[str]  # coefficient of t**k, k = 0, 1, ...
    leading_degree: int
    leading_term: str
    derived: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SymbolicReport:
    steps: list[ReductionStep] = field(default_factory=list)
    invariants: list[str] = field(default_factory=list)
    conclusion: str = ""

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps], "invariants": self.invariants, "conclusion": self.conclusion}

    def summary(self) -> str:
        lines = [f"{s.conjugate_by} acting on {s.applied_to}: t-coefficient {s.leading_term} -> {s.derived} invariant" for s in self.steps]
        lines.append(f"invariant directions: {', '.join(self.invariants)}; {self.conclusion}")
        return "\n".join(lines)
