"""
A non-orientable variant with the Klein bottle
==============================================

The mapping torus of x -> -x on the circle is the Klein bottle.
"""

from torusrank import IntMatrix, MappingTorus, decompose, is_orientable, pi1, rank_gap

K = IntMatrix.from_rows([[-1]])
B = IntMatrix.from_rows([[0, 1], [-1, -1]])

klein = MappingTorus.of(K)
print("orientable:", is_orientable(klein))
print("H_1 = Z^{free} + torsion:", pi1(klein).abelianization)

# the fundamental group is non-abelian: conjugating the fiber loop by the
# circle loop reverses it
G = pi1(klein)
fiber, circle = ((1,), 0), ((0,), 1)
print("commutator of fiber and circle loops:", G.commutator(fiber, circle))

dec = decompose(K, B)
print("H in GL(4, Z), det", dec.H.det)
print(rank_gap(K, B))
