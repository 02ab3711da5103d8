"""
Rank of a product exceeding the sum of ranks
=============================================

Two torus automorphisms of coprime period give mapping tori whose product
has one more commuting field than the two factors together.
"""

from torusrank import IntMatrix, MappingTorus, decompose, order, power, rank, rank_gap
from torusrank.intmat import block_diag

# minus the identity (period 2) and an order-3 rotation of the square lattice
A = IntMatrix.from_rows([[-1, 0], [0, -1]])
B = IntMatrix.from_rows([[0, 1], [-1, -1]])
print("period of A:", order(A))
print("period of B:", order(B))

# each mapping torus is a non-trivial T^2 bundle, so its rank is 2
for name, X in (("A", A), ("B", B)):
    r = rank(MappingTorus.of(X))
    print(f"rank M({name}) = {r.value}  via {r.justification}")

###############################################################################
# The product is a single mapping torus over T^5 with monodromy H.

dec = decompose(A, B)
print("Bezout:", f"{dec.m}*{dec.bezout.c} + {dec.n}*{dec.bezout.d} = 1")
print("new Z^2 basis:", dec.basis.lam, dec.basis.mu)
print("H =")
for row in dec.H.matrix.tolist():
    print("   ", row)

# H^(m-n) recovers (id, A, B) exactly
print("H^(m-n) == blockdiag(1, A, B):",
      power(dec.H.matrix, dec.m - dec.n) == block_diag([[1]], A, B))

###############################################################################
# Ranks: 5 for the product, 2 + 2 for the factors.

print(rank_gap(A, B))
