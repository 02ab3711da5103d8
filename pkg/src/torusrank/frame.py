"""Commuting frames on mapping tori of torus automorphisms.

On ``I x T^k`` with coordinates ``(t, theta)`` we build k vector fields

    X_i = sum_j phi_ij(t) d/dtheta_j + tau_i(t) d/dt

whose coefficients depend on ``t`` only.  The fields equal the coordinate
fields near ``t = 0`` and their push-forward by the monodromy near ``t = 1``,
so they descend to the mapping torus.  For such fields

    [X_i, X_l] = sum_j (tau_i phi'_lj - tau_l phi'_ij) d/dtheta_j
                 + (tau_i tau'_l - tau_l tau'_i) d/dt.

Orientation-preserving monodromy is reached through a path in GL+(k, R);
orientation-reversing monodromy first flips ``X_1`` through ``d/dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh, expm, polar, schur

from .intmat import IntMatrix, NotUnimodular, det, parse_matrix, power

__all__ = [
    "BadInterval",
    "NegativeDeterminant",
    "LogFailure",
    "SmoothStep",
    "FlipProfile",
    "PolarPath",
    "CoefficientFrame",
    "VerificationReport",
    "smooth_step",
    "flip_profile",
    "glplus_path",
    "log_special_orthogonal",
    "build_frame",
    "bracket_coefficients",
    "bracket_fd",
    "verify_frame",
    "concatenate",
    "perturb_frame",
    "DEFAULT_STEP",
    "DEFAULT_FLIP",
]

DEFAULT_STEP = (0.25, 0.75)
DEFAULT_FLIP = (0.125, 0.375)
FD_STEP = 1e-5


class BadInterval(ValueError):
    pass


class NegativeDeterminant(ValueError):
    pass


class LogFailure(ArithmeticError):
    pass


def _psi(x):
    # exp(-1/x) for x > 0, 0 otherwise
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def _scalar_or_array(x, like):
    return float(x) if np.ndim(like) == 0 else x


@dataclass(frozen=True)
class SmoothStep:
    """C-infinity monotone step: 0 on ``[0, a]``, 1 on ``[b, 1]``.

    Built as ``psi(s) / (psi(s) + psi(1 - s))`` with ``psi(x) = exp(-1/x)``
    and ``s = (t - a) / (b - a)``, so it is flat to all orders at ``a`` and
    ``b`` and symmetric about the midpoint.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (0 < self.a < self.b < 1):
            raise BadInterval(f"need 0 < a < b < 1, got a={self.a}, b={self.b}")

    def _s(self, t):
        return np.clip((np.asarray(t, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def __call__(self, t):
        s = self._s(t)
        p, q = _psi(s), _psi(1.0 - s)
        return _scalar_or_array(p / (p + q), t)

    def derivative(self, t):
        s = np.atleast_1d(self._s(t))
        out = np.zeros_like(s)
        inside = (s > 0) & (s < 1)
        si = s[inside]
        p, q = _psi(si), _psi(1.0 - si)
        # d/ds psi(x) = psi(x) / x**2
        out[inside] = (p / si**2 * q + p * q / (1 - si) ** 2) / (p + q) ** 2 / (self.b - self.a)
        return float(out[0]) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class FlipProfile:
    """Smooth ``rho`` on ``[0, 1/2]``: 1 on ``[0, c]``, -1 on ``[d, 1/2]``."""

    c: float
    d: float

    def __post_init__(self):
        if not (0 < self.c < self.d < 0.5):
            raise BadInterval(f"need 0 < c < d < 1/2, got c={self.c}, d={self.d}")

    @property
    def _step(self) -> SmoothStep:
        return SmoothStep(self.c, self.d)

    def __call__(self, t):
        return 1.0 - 2.0 * self._step(t)

    def derivative(self, t):
        return -2.0 * self._step.derivative(t)


def smooth_step(a: float = DEFAULT_STEP[0], b: float = DEFAULT_STEP[1]) -> SmoothStep:
    return SmoothStep(a, b)


def flip_profile(c: float = DEFAULT_FLIP[0], d: float = DEFAULT_FLIP[1]) -> FlipProfile:
    return FlipProfile(c, d)


def log_special_orthogonal(Q, atol: float = 1e-9) -> np.ndarray:
    """Real skew-symmetric logarithm of a rotation matrix.

    The real Schur form of ``Q`` is block diagonal with 2x2 rotation blocks
    and +-1 entries.  Eigenvalues -1 come in pairs; consecutive pairs (in
    Schur order) are joined into a rotation by +pi in their plane.
    """
    Q = np.asarray(Q, dtype=float)
    k = Q.shape[0]
    T, Z = schur(Q, output="real")
    L = np.zeros_like(T)
    minus = []
    i = 0
    while i < k:
        if i + 1 < k and abs(T[i + 1, i]) > atol:
            theta = math.atan2(T[i + 1, i] - T[i, i + 1], T[i, i] + T[i + 1, i + 1])
            L[i, i + 1], L[i + 1, i] = -theta, theta
            i += 2
            continue
        if T[i, i] < 0:
            minus.append(i)
        i += 1
    if len(minus) % 2:
        raise LogFailure("odd number of -1 eigenvalues; matrix is not in SO(k)")
    for p, q in zip(minus[::2], minus[1::2]):
        L[p, q], L[q, p] = -math.pi, math.pi
    L = Z @ L @ Z.T
    L = 0.5 * (L - L.T)
    if not np.allclose(expm(L), Q, atol=1e-10, rtol=0):
        raise LogFailure("rotation logarithm does not reproduce the input")
    return L


class PolarPath:
    """Path ``t -> exp(s log Q) exp(s log P)`` from I to ``A = Q P``, ``s = step(t)``.

    ``Q`` is special orthogonal and ``P`` symmetric positive definite, so the
    determinant stays positive along the whole path.
    """

    def __init__(self, target, step: SmoothStep):
        A = np.asarray(target, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("target must be a square matrix")
        if np.linalg.det(A) <= 0:
            raise NegativeDeterminant("GL+ path needs det(target) > 0")
        self.target = A
        self.step = step
        Q, P = polar(A, side="right")
        self.log_Q = log_special_orthogonal(Q)
        w, V = eigh(P)
        self._w = w
        self._logw = np.log(w)
        self._V = V

    def _exp_parts(self, s):
        EQ = expm(s * self.log_Q)
        EP = (self._V * self._w**s) @ self._V.T
        return EQ, EP

    def at_parameter(self, s) -> np.ndarray:
        EQ, EP = self._exp_parts(s)
        return EQ @ EP

    def __call__(self, t) -> np.ndarray:
        return self.at_parameter(self.step(t))

    def derivative(self, t) -> np.ndarray:
        ds = self.step.derivative(t)
        if ds == 0.0:
            return np.zeros_like(self.target)
        s = self.step(t)
        EQ, EP = self._exp_parts(s)
        dEP = (self._V * (self._logw * self._w**s)) @ self._V.T
        return ds * (self.log_Q @ EQ @ EP + EQ @ dEP)


def glplus_path(A_target, step: Optional[SmoothStep] = None) -> PolarPath:
    """Smooth path in GL+(k, R) from the identity to ``A_target``.

    Raises
    ------
    NegativeDeterminant
        If ``det(A_target) <= 0``.
    LogFailure
        If the rotation part has no real logarithm (numerically).
    """
    if isinstance(A_target, IntMatrix):
        A_target = A_target.to_numpy()
    return PolarPath(A_target, step or smooth_step())


@dataclass
class CoefficientFrame:
    """Frame on ``I x T^k`` given by t-dependent coefficients.

    ``phi(t)`` is the k x k matrix of ``d/dtheta`` coefficients (row i is
    field i), ``tau(t)`` the length-k vector of ``d/dt`` coefficients.
    ``dphi`` and ``dtau`` are their exact t-derivatives.
    """

    k: int
    monodromy: IntMatrix
    phi: Callable[[float], np.ndarray]
    tau: Callable[[float], np.ndarray]
    dphi: Callable[[float], np.ndarray]
    dtau: Callable[[float], np.ndarray]
    flip_row: Optional[int] = None
    kind: str = "glplus"

    def stacked(self, t) -> np.ndarray:
        """The k x (k+1) coefficient matrix ``[phi | tau]``."""
        return np.column_stack([self.phi(t), self.tau(t)])

    def field(self, i: int) -> Callable:
        """Field ``i`` as a function of ``(t, theta)`` returning ``(d/dtheta..., d/dt)``."""

        def X(t, theta=None):
            return np.append(self.phi(t)[i], self.tau(t)[i])

        return X


def build_frame(A, step: Optional[SmoothStep] = None, flip: Optional[FlipProfile] = None) -> CoefficientFrame:
    """Commuting frame descending to the mapping torus of ``A``.

    For ``det A = 1`` the coefficients follow a GL+ path from I to A.  For
    ``det A = -1`` the interval is split: on ``[0, 1/2]`` field 1 is rotated
    through ``d/dt`` into ``-X_1``, then on ``[1/2, 1]`` a GL+ path runs from
    ``D = diag(-1, 1, ..., 1)`` to ``A`` (the target ``A D`` has positive
    determinant).
    """
    A = parse_matrix(A)
    D_int = det(A)
    if abs(D_int) != 1:
        raise NotUnimodular(f"det = {D_int}; frame needs A in GL(k, Z)")
    k = A.dim
    step = step or smooth_step()
    zeros = np.zeros(k)

    if D_int == 1:
        path = glplus_path(A, step)
        return CoefficientFrame(
            k, A, path, lambda t: zeros.copy(), path.derivative, lambda t: zeros.copy(), None, "glplus"
        )

    flip = flip or flip_profile()
    Dm = np.eye(k)
    Dm[0, 0] = -1.0
    AD = A.to_numpy() @ Dm
    if not np.linalg.det(AD) > 0:
        raise AssertionError("A D must have positive determinant")
    path = glplus_path(AD, step)
    eye = np.eye(k)

    def phi(t):
        if t <= 0.5:
            M = eye.copy()
            M[0, 0] = flip(t)
            return M
        return path(2.0 * t - 1.0) @ Dm

    def tau(t):
        v = np.zeros(k)
        if t <= 0.5:
            v[0] = 1.0 - flip(t) ** 2
        return v

    def dphi(t):
        if t <= 0.5:
            M = np.zeros((k, k))
            M[0, 0] = flip.derivative(t)
            return M
        return 2.0 * path.derivative(2.0 * t - 1.0) @ Dm

    def dtau(t):
        v = np.zeros(k)
        if t <= 0.5:
            v[0] = -2.0 * flip(t) * flip.derivative(t)
        return v

    return CoefficientFrame(k, A, phi, tau, dphi, dtau, 0, "flip")


def bracket_coefficients(F: CoefficientFrame, i: int, l: int, t: float, h: Optional[float] = None) -> np.ndarray:
    """Coefficients of ``[X_i, X_l]`` at ``t`` on ``(d/dtheta_1..k, d/dt)``.

    With ``h`` given, t-derivatives come from central differences instead of
    the frame's exact derivatives.
    """
    P, tau = F.phi(t), F.tau(t)
    if h is None:
        dP, dtau = F.dphi(t), F.dtau(t)
    else:
        dP = (F.phi(t + h) - F.phi(t - h)) / (2 * h)
        dtau = (F.tau(t + h) - F.tau(t - h)) / (2 * h)
    out = np.empty(F.k + 1)
    out[:-1] = tau[i] * dP[l] - tau[l] * dP[i]
    out[-1] = tau[i] * dtau[l] - tau[l] * dtau[i]
    return out


def bracket_fd(F: CoefficientFrame, i: int, l: int, t: float, theta=None, h: float = FD_STEP) -> np.ndarray:
    """``[X_i, X_l]`` from sampled field values only.

    Jacobians of both fields in all k+1 coordinates ``(theta, t)`` are taken by
    central differences and combined as ``J_l X_i - J_i X_l``.  Nothing about
    the coefficient structure is assumed.
    """
    k = F.k
    theta = np.zeros(k) if theta is None else np.asarray(theta, dtype=float)
    Xi, Xl = F.field(i), F.field(l)
    x0 = np.append(theta, t)

    def jac(X):
        J = np.empty((k + 1, k + 1))
        for c in range(k + 1):
            e = np.zeros(k + 1)
            e[c] = h
            xp, xm = x0 + e, x0 - e
            J[:, c] = (X(xp[-1], xp[:-1]) - X(xm[-1], xm[:-1])) / (2 * h)
        return J

    return jac(Xl) @ Xi(t, theta) - jac(Xi) @ Xl(t, theta)


def _one_sided_derivatives(f, t0: float, direction: int, h: float, orders=(1, 2, 3)):
    # forward (direction=+1) or backward (-1) differences of order n
    # stencil weights sum to zero, so differencing against f(t0) first is
    # exact and keeps a constant function at exactly zero
    base = f(t0)
    samples = [f(t0 + direction * j * h) - base for j in range(max(orders) + 1)]
    out = {}
    for n in orders:
        acc = 0.0
        for j in range(n + 1):
            acc = acc + (-1) ** (n - j) * math.comb(n, j) * samples[j]
        out[n] = np.max(np.abs(acc)) / h**n
    return out


@dataclass
class VerificationReport:
    bracket_max: float
    gram_min: float
    seam: dict
    flatness: dict
    grid_n: int
    tol: float
    gram_floor: float
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "bracket_max": self.bracket_max,
            "gram_min": self.gram_min,
            "seam": dict(self.seam),
            "flatness": dict(self.flatness),
            "checks": dict(self.checks),
            "pass": self.passed,
            "grid_n": self.grid_n,
            "tol": self.tol,
        }


def verify_frame(
    F: CoefficientFrame,
    grid_n: int = 4096,
    tol: float = 1e-8,
    gram_floor: float = 1e-6,
    flat_step: float = 1e-3,
) -> VerificationReport:
    """Check commutation, independence, gluing and flatness on a t-grid.

    Bracket norms use the exact derivatives.  Independence is measured by
    ``sqrt(det(M M^T))`` for ``M = [phi | tau]``, which must stay above
    ``gram_floor``.  Flatness uses one-sided differences of orders 1-3 at
    both ends.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    k = F.k
    ts = np.linspace(0.0, 1.0, grid_n)
    bracket_max = 0.0
    gram_min = math.inf
    for t in ts:
        P, tau = F.phi(t), F.tau(t)
        dP, dtau = F.dphi(t), F.dtau(t)
        # all pairs at once: B[i, l] = tau_i dP_l - tau_l dP_i
        Bth = tau[:, None, None] * dP[None, :, :] - tau[None, :, None] * dP[:, None, :]
        Bt = np.outer(tau, dtau) - np.outer(dtau, tau)
        norms = np.sqrt(np.sum(Bth**2, axis=2) + Bt**2)
        bracket_max = max(bracket_max, float(norms.max()))
        M = np.column_stack([P, tau])
        g = np.linalg.det(M @ M.T)
        gram_min = min(gram_min, math.sqrt(max(g, 0.0)))

    A = F.monodromy.to_numpy()
    seam = {
        "phi0": float(np.linalg.norm(F.phi(0.0) - np.eye(k))),
        "phi1": float(np.linalg.norm(F.phi(1.0) - A)),
        "tau0": float(np.linalg.norm(F.tau(0.0))),
        "tau1": float(np.linalg.norm(F.tau(1.0))),
    }
    flat = {}
    for end, t0, direction in (("t0", 0.0, 1), ("t1", 1.0, -1)):
        dp = _one_sided_derivatives(F.phi, t0, direction, flat_step)
        dt = _one_sided_derivatives(F.tau, t0, direction, flat_step)
        for n in dp:
            flat[f"{end}_d{n}"] = float(max(dp[n], dt[n]))

    checks = {
        "bracket": bracket_max <= tol,
        "independence": gram_min > gram_floor,
        "seam": max(seam.values()) <= tol,
        "flatness": max(flat.values()) <= tol,
    }
    return VerificationReport(bracket_max, gram_min, seam, flat, grid_n, tol, gram_floor, checks)


def concatenate(F: CoefficientFrame, q: int) -> CoefficientFrame:
    """Run the frame ``q`` times around the circle, reparametrised to ``[0, 1]``.

    On lap ``j`` the coefficients are ``phi(q t - j) A^j``, so the endpoint is
    ``A^q``.
    """
    if q < 1:
        raise ValueError("q must be positive")
    powers = [power(F.monodromy, j).to_numpy() for j in range(q)]

    def lap(t):
        j = min(max(int(math.floor(t * q)), 0), q - 1)
        return j, t * q - j

    def phi(t):
        j, s = lap(t)
        return F.phi(s) @ powers[j]

    def tau(t):
        return F.tau(lap(t)[1])

    def dphi(t):
        j, s = lap(t)
        return q * F.dphi(s) @ powers[j]

    def dtau(t):
        return q * F.dtau(lap(t)[1])

    return CoefficientFrame(F.k, power(F.monodromy, q), phi, tau, dphi, dtau, F.flip_row, F.kind)


def perturb_frame(F: CoefficientFrame, row: int = 1, amplitude: float = 1e-2, window=None) -> CoefficientFrame:
    """Add a smooth bump to one row of ``phi`` inside ``window``.

    Used as a negative control: when the bump overlaps a nonzero ``tau`` in
    another row, the fields stop commuting.  The default window is the flip
    transition ``DEFAULT_FLIP``.
    """
    lo, hi = window or DEFAULT_FLIP
    mid = 0.5 * (lo + hi)
    up, down = SmoothStep(lo, mid), SmoothStep(mid, hi)
    k = F.k
    if not 0 <= row < k:
        raise IndexError(f"row {row} out of range for k={k}")

    def bump(t):
        return up(t) * (1.0 - down(t))

    def dbump(t):
        return up.derivative(t) * (1.0 - down(t)) - up(t) * down.derivative(t)

    E = np.zeros((k, k))
    E[row, row] = amplitude

    return CoefficientFrame(
        k,
        F.monodromy,
        lambda t: F.phi(t) + bump(t) * E,
        F.tau,
        lambda t: F.dphi(t) + dbump(t) * E,
        F.dtau,
        F.flip_row,
        F.kind + "+perturbed",
    )
