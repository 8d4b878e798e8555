"""
Filiform groups and Vandermonde bases
=====================================

Conjugating ``X1`` by ``exp(t X0)`` in a step-``s`` filiform algebra gives
``sum t^k / k! X_{k+1}``.  Distinct times give a basis of ``X1..Xs``, with
determinant ``(prod 1/k!) * Vandermonde``.
"""

from fractions import Fraction

from engel_normal.filiform import FiliformAlgebra, filiform_adjoint, half_space_reduction_filiform, vandermonde_basis

alg = FiliformAlgebra(5)
print("Ad_exp(2 X0) X1 =", filiform_adjoint(alg, Fraction(2)))

for s in range(2, 9):
    rep = vandermonde_basis(FiliformAlgebra(s), list(range(s)))
    print(f"s = {s}: det = {rep.determinant}, Vandermonde product = {rep.vandermonde_product}, rank = {rep.rank}")

rep = vandermonde_basis(FiliformAlgebra(4), [0, Fraction(1, 2), Fraction(1, 2), 3])
print("repeated time: rank", rep.rank, "of 4")

print(half_space_reduction_filiform(FiliformAlgebra(5)).summary())
