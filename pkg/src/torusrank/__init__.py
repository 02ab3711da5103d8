"""Rank of products of mapping tori of torus automorphisms.

Exact integer tools for torus bundles over the circle, the coprime-period
product decomposition, and numerically verified commuting frames.
"""

from .intmat import (
    IntMatrix,
    MatrixOrder,
    NonInvertible,
    NotUnimodular,
    SmithNormalForm,
    block_diag,
    charpoly,
    det,
    inverse,
    is_unimodular,
    order,
    parse_matrix,
    power,
    smith_normal_form,
)
from .torus_bundle import MappingTorus, Pi1Data, RankResult, TorusAutomorphism, is_orientable, is_torus, pi1, rank
from .product_theorem import (
    BasisChange,
    BezoutPair,
    InfiniteOrder,
    NotCoprime,
    PeriodsNotCoprime,
    ProductDecomposition,
    bezout,
    certificate,
    decompose,
    rank_gap,
    rebase_action,
)
from .frame import build_frame, glplus_path, smooth_step, flip_profile, verify_frame
from .search import CounterexampleCertificate, SearchConfig, enumerate_finite_order, find_counterexamples

__version__ = "0.1.0"
