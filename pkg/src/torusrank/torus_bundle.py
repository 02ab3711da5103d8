"""Mapping tori of linear torus automorphisms.

A matrix ``A`` in GL(k, Z) induces a diffeomorphism of the k-torus.  Its
mapping torus is a (k+1)-manifold fibred over the circle; everything we need
about it (fundamental group, orientability, rank) is read off ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

from .intmat import (
    DEFAULT_ORDER_CAP,
    IntMatrix,
    MatrixOrder,
    NotUnimodular,
    det,
    order,
    parse_matrix,
    power,
    smith_normal_form,
)

__all__ = [
    "TorusAutomorphism",
    "MappingTorus",
    "Pi1Data",
    "RankResult",
    "pi1",
    "is_torus",
    "is_orientable",
    "rank",
]


@dataclass(frozen=True)
class TorusAutomorphism:
    """Automorphism of the k-torus induced by a unimodular integer matrix."""

    matrix: IntMatrix
    order_cap: int = field(default=DEFAULT_ORDER_CAP, compare=False)

    def __post_init__(self):
        if not isinstance(self.matrix, IntMatrix):
            object.__setattr__(self, "matrix", parse_matrix(self.matrix))
        if abs(det(self.matrix)) != 1:
            raise NotUnimodular(f"det = {det(self.matrix)}; not in GL(k, Z)")

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @cached_property
    def order(self) -> MatrixOrder:
        return order(self.matrix, self.order_cap)

    @property
    def det(self) -> int:
        return det(self.matrix)

    def is_trivial(self) -> bool:
        return self.matrix.is_identity()

    def __pow__(self, e: int) -> "TorusAutomorphism":
        return TorusAutomorphism(power(self.matrix, e), self.order_cap)


@dataclass(frozen=True)
class MappingTorus:
    """Mapping torus of a torus automorphism, described by its monodromy."""

    fiber: TorusAutomorphism

    @classmethod
    def of(cls, A, order_cap: int = DEFAULT_ORDER_CAP) -> "MappingTorus":
        if isinstance(A, MappingTorus):
            return A
        if isinstance(A, TorusAutomorphism):
            return cls(A)
        return cls(TorusAutomorphism(parse_matrix(A), order_cap))

    @property
    def k(self) -> int:
        return self.fiber.dim

    @property
    def dim(self) -> int:
        return self.fiber.dim + 1

    @property
    def monodromy(self) -> IntMatrix:
        return self.fiber.matrix

    def to_json(self) -> dict:
        return {"k": self.k, "A": self.monodromy.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "MappingTorus":
        A = parse_matrix(obj["A"])
        if "k" in obj and obj["k"] != A.dim:
            raise ValueError(f"k={obj['k']} does not match matrix dimension {A.dim}")
        return cls(TorusAutomorphism(A))


@dataclass(frozen=True)
class Pi1Data:
    """The group Z^k x|_A Z, with its abelianization Z (+) coker(A - I).

    Elements are pairs ``(v, s)`` with ``v`` a length-k integer tuple and
    ``s`` an integer; the circle generator acts on the fiber group by ``A``.
    """

    fiber_rank: int
    monodromy: IntMatrix
    free_rank: int
    torsion: Tuple[int, ...]

    @property
    def abelianization(self):
        return self.free_rank, self.torsion

    @property
    def is_abelian(self) -> bool:
        return self.monodromy.is_identity()

    def multiply(self, g, h):
        """Group law ``(v, s)(w, t) = (v + A^s w, s + t)``."""
        v, s = g
        w, t = h
        As = power(self.monodromy, s)
        Aw = tuple(sum(As[i, j] * w[j] for j in range(self.fiber_rank)) for i in range(self.fiber_rank))
        return tuple(a + b for a, b in zip(v, Aw)), s + t

    def inverse(self, g):
        v, s = g
        Ainv = power(self.monodromy, -s)
        w = tuple(-sum(Ainv[i, j] * v[j] for j in range(self.fiber_rank)) for i in range(self.fiber_rank))
        return w, -s

    def identity(self):
        return (0,) * self.fiber_rank, 0

    def commutator(self, g, h):
        return self.multiply(self.multiply(g, h), self.multiply(self.inverse(g), self.inverse(h)))

    def to_json(self) -> dict:
        return {
            "fiber_rank": self.fiber_rank,
            "monodromy": self.monodromy.tolist(),
            "abelian": self.is_abelian,
            "abelianization": {"free_rank": self.free_rank, "torsion": list(self.torsion)},
        }


@dataclass(frozen=True)
class RankResult:
    """Rank of a mapping torus together with how it was established.

    ``justification`` is either ``{"exact": "is_torus"}`` or
    ``{"lower": "commuting_frame", "upper": "torus_theorem"}``.
    """

    value: int
    justification: dict

    def __int__(self) -> int:
        return self.value

    def to_json(self) -> dict:
        return {"rank": self.value, "justification": dict(self.justification)}


def pi1(M) -> Pi1Data:
    M = MappingTorus.of(M)
    A = M.monodromy
    snf = smith_normal_form(A - IntMatrix.identity(A.dim))
    free, torsion = snf.cokernel()
    return Pi1Data(A.dim, A, 1 + free, torsion)


def is_torus(M) -> bool:
    """True iff the monodromy is the identity.

    Any other monodromy makes the fundamental group non-abelian: the
    commutator of a fiber element ``v`` with the circle generator is
    ``(v - A v, 0)``.
    """
    return MappingTorus.of(M).monodromy.is_identity()


def is_orientable(M) -> bool:
    return MappingTorus.of(M).fiber.det == 1


def rank(M) -> RankResult:
    """Rank of the mapping torus.

    The coordinate fields on the fiber can always be made to descend (see
    :func:`torusrank.frame.build_frame`), giving ``rank >= k``.  Rank ``k+1``
    would force a torus, which happens only for trivial monodromy.
    """
    M = MappingTorus.of(M)
    if is_torus(M):
        return RankResult(M.k + 1, {"exact": "is_torus"})
    return RankResult(M.k, {"lower": "commuting_frame", "upper": "torus_theorem"})
