"""Products of mapping tori with coprime periods.

If ``A`` has order ``m`` and ``B`` has order ``n`` with ``gcd(m, n) = 1``,
write ``m*c + n*d = 1``.  The product of the two mapping tori is the mapping
torus of ``H = blockdiag(1, A^-d, B^c)`` acting on the (k+r+1)-torus, and
``H^(m-n) = blockdiag(1, A, B)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from .intmat import IntMatrix, block_diag, det, power
from .torus_bundle import MappingTorus, TorusAutomorphism, rank

__all__ = [
    "NotCoprime",
    "PeriodsNotCoprime",
    "InfiniteOrder",
    "ext_gcd",
    "BezoutPair",
    "BasisChange",
    "ProductDecomposition",
    "RankGap",
    "bezout",
    "rebase_action",
    "fiber_action",
    "decompose",
    "rank_gap",
    "certificate",
]


class NotCoprime(ValueError):
    pass


class PeriodsNotCoprime(NotCoprime):
    """The two automorphisms have periods sharing a common factor."""


class InfiniteOrder(ValueError):
    """An automorphism has no finite period (within the order cap)."""


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True)
class BezoutPair:
    m: int
    n: int
    c: int
    d: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("periods must be positive")
        if self.m * self.c + self.n * self.d != 1:
            raise ValueError(f"{self.m}*{self.c} + {self.n}*{self.d} != 1")

    def check(self) -> bool:
        return self.m * self.c + self.n * self.d == 1


def bezout(m: int, n: int) -> BezoutPair:
    """Canonical Bezout coefficients: the unique ``(c, d)`` with ``0 <= d < m``.

    Raises
    ------
    NotCoprime
        If ``gcd(m, n) != 1``.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    g, _, y = ext_gcd(m, n)
    if g != 1:
        raise NotCoprime(f"gcd({m}, {n}) = {g}")
    d = y % m
    c, rem = divmod(1 - n * d, m)
    assert rem == 0
    return BezoutPair(m, n, c, d)


def fiber_action(z, A, B) -> Tuple[IntMatrix, IntMatrix]:
    """Fiber part of the Z^2 action on the product: ``z -> (A^z1, B^z2)``."""
    z1, z2 = z
    return power(_mat(A), z1), power(_mat(B), z2)


@dataclass(frozen=True)
class BasisChange:
    """New basis ``{lam, mu}`` of Z^2 adapted to the product action.

    ``lambda_action`` / ``mu_action`` hold the fiber actions of the two new
    generators when the automorphisms were supplied.
    """

    lam: Tuple[int, int]
    mu: Tuple[int, int]
    lambda_action: Optional[Tuple[IntMatrix, IntMatrix]] = None
    mu_action: Optional[Tuple[IntMatrix, IntMatrix]] = None

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix((tuple(self.lam), tuple(self.mu)))

    @property
    def det(self) -> int:
        return det(self.matrix)

    def coordinates(self, z) -> Tuple[int, int]:
        """Integer ``(k, r)`` with ``z = k*lam + r*mu``."""
        (a, b), (p, q) = self.lam, self.mu
        D = a * q - b * p
        if abs(D) != 1:
            raise ValueError("basis is not unimodular")
        z1, z2 = z
        # Cramer's rule; exact because |D| = 1
        return D * (z1 * q - z2 * p), D * (a * z2 - b * z1)


def rebase_action(pair: BezoutPair, A=None, B=None) -> BasisChange:
    """Change of Z^2 basis to ``lam = (m, n)``, ``mu = (-d, c)``.

    With ``A`` and ``B`` given, the fiber actions of both generators are
    attached: ``lam`` acts by ``(A^m, B^n)`` (trivial when the periods are
    ``m`` and ``n``) and ``mu`` by ``(A^-d, B^c)``.
    """
    lam = (pair.m, pair.n)
    mu = (-pair.d, pair.c)
    if A is None or B is None:
        return BasisChange(lam, mu)
    return BasisChange(lam, mu, fiber_action(lam, A, B), fiber_action(mu, A, B))


def _mat(X) -> IntMatrix:
    if isinstance(X, TorusAutomorphism):
        return X.matrix
    if isinstance(X, IntMatrix):
        return X
    return IntMatrix.from_rows(X)


def _auto(X) -> TorusAutomorphism:
    if isinstance(X, TorusAutomorphism):
        return X
    return TorusAutomorphism(_mat(X))


@dataclass(frozen=True)
class ProductDecomposition:
    A: TorusAutomorphism
    B: TorusAutomorphism
    bezout: BezoutPair
    H: TorusAutomorphism
    basis: BasisChange

    @property
    def m(self) -> int:
        return self.bezout.m

    @property
    def n(self) -> int:
        return self.bezout.n

    def checks(self) -> dict:
        """Re-run every exact identity the decomposition relies on."""
        one = IntMatrix.identity(1)
        return {
            "bezout": self.bezout.check(),
            "h_power": power(self.H.matrix, self.m - self.n)
            == block_diag(one, self.A.matrix, self.B.matrix),
            "basis_unimodular": self.basis.det == 1,
        }


class RankGap(NamedTuple):
    rank_product: int
    rank_A: int
    rank_B: int
    gap: int


def decompose(A, B) -> ProductDecomposition:
    """Write the product of the two mapping tori as one mapping torus.

    Every identity is checked exactly before returning.

    Raises
    ------
    InfiniteOrder
        If ``A`` or ``B`` has no finite period up to its order cap.
    PeriodsNotCoprime
        If the periods share a factor.
    """
    A = _auto(A)
    B = _auto(B)
    for name, X in (("A", A), ("B", B)):
        if not X.order.is_finite:
            raise InfiniteOrder(f"{name} = {X.matrix} has infinite order (cap {X.order_cap})")
    m, n = A.order.value, B.order.value
    try:
        pair = bezout(m, n)
    except NotCoprime:
        raise PeriodsNotCoprime(f"periods {m} and {n} are not coprime") from None
    basis = rebase_action(pair, A, B)
    H = TorusAutomorphism(
        block_diag(IntMatrix.identity(1), power(A.matrix, -pair.d), power(B.matrix, pair.c)),
        max(A.order_cap, B.order_cap),
    )
    dec = ProductDecomposition(A, B, pair, H, basis)
    failed = [k for k, ok in dec.checks().items() if not ok]
    if failed:
        raise AssertionError(f"decomposition identities failed: {failed}")
    I_A, I_B = IntMatrix.identity(A.dim), IntMatrix.identity(B.dim)
    if basis.lambda_action != (I_A, I_B):
        raise AssertionError("first rebased generator acts nontrivially on the fiber")
    return dec


def rank_gap(A, B) -> RankGap:
    dec = decompose(A, B)
    rp = rank(MappingTorus(dec.H)).value
    ra = rank(MappingTorus(dec.A)).value
    rb = rank(MappingTorus(dec.B)).value
    return RankGap(rp, ra, rb, rp - ra - rb)


def certificate(A, B) -> dict:
    """JSON-ready record of the decomposition and the rank comparison."""
    dec = decompose(A, B)
    rp = rank(MappingTorus(dec.H)).value
    ra = rank(MappingTorus(dec.A)).value
    rb = rank(MappingTorus(dec.B)).value
    return {
        "A": dec.A.matrix.tolist(),
        "B": dec.B.matrix.tolist(),
        "m": dec.m,
        "n": dec.n,
        "c": dec.bezout.c,
        "d": dec.bezout.d,
        "H": dec.H.matrix.tolist(),
        "rank_product": rp,
        "rank_A": ra,
        "rank_B": rb,
        "gap": rp - ra - rb,
        "checks": dec.checks(),
    }
