"""Brute-force search for finite-order torus automorphisms and rank counterexamples."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import asdict, dataclass
from math import gcd
from typing import Dict, List, Optional, Tuple

from .intmat import DEFAULT_ORDER_CAP, IntMatrix, det, order
from .product_theorem import certificate

__all__ = [
    "SearchConfig",
    "CounterexampleCertificate",
    "enumerate_finite_order",
    "group_by_period",
    "find_counterexamples",
]


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of the entry-bounded scan.

    ``other_dim`` sets the fiber dimension of the second factor (defaults to
    ``dim``); ``periods`` restricts certificates to one ``(m, n)`` pair.
    """

    dim: int = 2
    entry_bound: int = 3
    order_cap: int = DEFAULT_ORDER_CAP
    require_orientable: bool = False
    other_dim: Optional[int] = None
    periods: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")
        if self.order_cap < 6:
            raise ValueError("order_cap must be >= 6")
        if self.dim < 1 or (self.other_dim is not None and self.other_dim < 1):
            raise ValueError("dimensions must be positive")


@dataclass(frozen=True)
class CounterexampleCertificate:
    A: IntMatrix
    B: IntMatrix
    m: int
    n: int
    c: int
    d: int
    H: IntMatrix
    rank_product: int
    rank_A: int
    rank_B: int
    gap: int
    orientable_A: bool
    orientable_B: bool
    checks: dict

    def __post_init__(self):
        if self.gap != 1 or not all(self.checks.values()):
            raise ValueError(f"not a counterexample: gap={self.gap}, checks={self.checks}")

    @classmethod
    def from_pair(cls, A, B) -> "CounterexampleCertificate":
        cert = certificate(A, B)
        return cls(
            A=IntMatrix.from_rows(cert["A"]),
            B=IntMatrix.from_rows(cert["B"]),
            m=cert["m"],
            n=cert["n"],
            c=cert["c"],
            d=cert["d"],
            H=IntMatrix.from_rows(cert["H"]),
            rank_product=cert["rank_product"],
            rank_A=cert["rank_A"],
            rank_B=cert["rank_B"],
            gap=cert["gap"],
            orientable_A=det(cert["A"]) == 1,
            orientable_B=det(cert["B"]) == 1,
            checks=cert["checks"],
        )

    def to_json(self) -> dict:
        out = asdict(self)
        for key in ("A", "B", "H"):
            out[key] = getattr(self, key).tolist()
        return out


def _unimodular_candidates(k: int, bound: int):
    values = range(-bound, bound + 1)
    for flat in itertools.product(values, repeat=k * k):
        A = IntMatrix(tuple(tuple(flat[i * k : (i + 1) * k]) for i in range(k)))
        if abs(det(A)) == 1:
            yield A


def _gl2_maybe_finite(A: IntMatrix) -> bool:
    t = A.trace()
    return abs(t) <= 2 if det(A) == 1 else t == 0


def enumerate_finite_order(cfg: SearchConfig = SearchConfig()) -> List[Tuple[IntMatrix, int]]:
    """All finite-order matrices in GL(dim, Z) with entries in ``[-B, B]``.

    Returned as ``(matrix, period)`` pairs sorted lexicographically by
    entries.
    """
    found = []
    for A in _unimodular_candidates(cfg.dim, cfg.entry_bound):
        if cfg.dim == 2 and not _gl2_maybe_finite(A):
            continue
        o = order(A, cfg.order_cap)
        if o.is_finite:
            found.append((A, o.value))
    found.sort(key=lambda item: item[0].rows)
    return found


def group_by_period(items) -> Dict[int, List[IntMatrix]]:
    groups = defaultdict(list)
    for A, m in items:
        groups[m].append(A)
    return dict(sorted(groups.items()))


def find_counterexamples(cfg: SearchConfig = SearchConfig(), limit: Optional[int] = None) -> List[CounterexampleCertificate]:
    """Pair finite-order matrices with coprime periods > 1 into certificates.

    Pairs are visited in lexicographic order of ``(A, B)``; every returned
    certificate has been re-verified exactly.
    """
    first = enumerate_finite_order(cfg)
    if cfg.other_dim is None or cfg.other_dim == cfg.dim:
        second = first
    else:
        second = enumerate_finite_order(
            SearchConfig(cfg.other_dim, cfg.entry_bound, cfg.order_cap, cfg.require_orientable)
        )
    if cfg.require_orientable:
        first = [(A, m) for A, m in first if det(A) == 1]
        second = [(B, n) for B, n in second if det(B) == 1]

    out = []
    for (A, m), (B, n) in itertools.product(first, second):
        if limit is not None and len(out) >= limit:
            break
        if m == 1 or n == 1 or gcd(m, n) != 1:
            continue
        if cfg.periods is not None and (m, n) != tuple(cfg.periods):
            continue
        out.append(CounterexampleCertificate.from_pair(A, B))
    return out
