"""Floating-point moment maps for U(2) acting on P(W).

Convention: every u(2)-valued moment map ``Phi`` is reported through the
Hermitian matrix ``H = -i Phi``. The diagonal ``(h11, h22)`` is the torus
moment map, ``h12`` is the off-diagonal part (identified with C).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .errors import BadLength, LengthMismatch, NotSkewHermitian, ZeroVector
from .rep import RepDescriptor

# basis of u(2): (eta, xi) span the off-diagonal part, (rho, gamma) the torus
ETA = np.array([[0, 1], [-1, 0]], dtype=complex)
XI = np.array([[0, 1j], [1j, 0]], dtype=complex)
RHO = np.array([[1j, 0], [0, 0]], dtype=complex)
GAMMA = np.array([[0, 0], [0, 1j]], dtype=complex)
LIE_BASIS = {"eta": ETA, "xi": XI, "rho": RHO, "gamma": GAMMA}

_SINC_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class Hermitian2:
    h11: float
    h22: float
    h12: complex

    @classmethod
    def from_matrix(cls, m) -> "Hermitian2":
        m = np.asarray(m)
        return cls(float(m[0, 0].real), float(m[1, 1].real), complex(m[0, 1]))

    @property
    def h21(self) -> complex:
        return self.h12.conjugate()

    def matrix(self) -> np.ndarray:
        return np.array([[self.h11, self.h12], [self.h21, self.h22]], dtype=complex)

    @property
    def trace(self) -> float:
        return self.h11 + self.h22

    @property
    def det(self) -> float:
        return self.h11 * self.h22 - abs(self.h12) ** 2

    def eigvals(self) -> tuple[float, float]:
        """Eigenvalues in decreasing order."""
        lo, hi = np.linalg.eigvalsh(self.matrix())
        return float(hi), float(lo)

    def diag(self) -> tuple[float, float]:
        return self.h11, self.h22


def lie_element(m, tol: float = 1e-12) -> np.ndarray:
    """Validate a 2x2 skew-Hermitian matrix and return it as an array."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise BadLength("Lie algebra element must be 2x2")
    if np.max(np.abs(m + m.conj().T)) > tol:
        raise NotSkewHermitian("matrix is not skew-Hermitian")
    return m


def _norm2(Z) -> float:
    return float(np.vdot(Z, Z).real)


def f_pair(k: int, Zb) -> tuple[np.ndarray, np.ndarray]:
    """The two weighted shifts ``F1_j = sqrt(k-j+1) z_{j-1}``, ``F2_j = sqrt(j) z_j``."""
    Zb = np.asarray(Zb, dtype=complex).ravel()
    if k < 1 or Zb.shape[0] != k + 1:
        raise BadLength(f"need k >= 1 and k+1 coordinates, got k={k}, len={Zb.shape[0]}")
    j = np.arange(1, k + 1)
    return np.sqrt(k - j + 1) * Zb[:-1], np.sqrt(j) * Zb[1:]


def phi_block(k: int, l: int, Zb) -> Hermitian2:
    Zb = np.asarray(Zb, dtype=complex).ravel()
    if Zb.shape[0] != k + 1:
        raise BadLength(f"block of degree {k} needs {k + 1} coordinates")
    n2 = _norm2(Zb)
    if n2 == 0.0:
        raise ZeroVector("block vector is zero")
    if k == 0:
        return Hermitian2(float(l), float(l), 0j)
    F1, F2 = f_pair(k, Zb)
    return Hermitian2(
        _norm2(F1) / n2 + l,
        _norm2(F2) / n2 + l,
        complex(F2 @ F1.conj()) / n2,
    )


def phi_rep(rep: RepDescriptor, Z) -> Hermitian2:
    """Convex combination of block moment maps, weighted by block mass."""
    blocks = rep.split(Z) if not _is_blocks(Z) else [np.asarray(b, complex) for b in Z]
    total = sum(_norm2(b) for b in blocks)
    if total == 0.0:
        raise ZeroVector("vector is zero")
    h11 = h22 = 0.0
    h12 = 0j
    for s, b in zip(rep.summands, blocks):
        m = _norm2(b)
        if m == 0.0:
            continue
        hb = phi_block(s.k, s.l, b)
        w = m / total
        h11 += w * hb.h11
        h22 += w * hb.h22
        h12 += w * hb.h12
    return Hermitian2(h11, h22, h12)


def _is_blocks(Z) -> bool:
    return isinstance(Z, (list, tuple)) and len(Z) > 0 and np.ndim(Z[0]) == 1


def psi_rep(rep: RepDescriptor, Z) -> tuple[float, float]:
    return phi_rep(rep, Z).diag()


def upsilon(rep: RepDescriptor, Z) -> complex:
    return phi_rep(rep, Z).h12


def lie_action_block(k: int, l: int, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=complex)
    tr = alpha[0, 0] + alpha[1, 1]
    M = np.zeros((k + 1, k + 1), dtype=complex)
    for j in range(k + 1):
        M[j, j] = -(l * tr + (k - j) * alpha[0, 0] + j * alpha[1, 1])
        if j >= 1:
            M[j - 1, j] = -np.sqrt(j * (k - j + 1)) * alpha[1, 0]
        if j < k:
            M[j + 1, j] = -np.sqrt((k - j) * (j + 1)) * alpha[0, 1]
    return M


def lie_action_matrix(rep: RepDescriptor, alpha) -> np.ndarray:
    """Infinitesimal action of ``alpha`` in u(2) on C^dim (block diagonal)."""
    alpha = lie_element(alpha)
    A = np.zeros((rep.dim, rep.dim), dtype=complex)
    for o, s in zip(rep.offsets, rep.summands):
        A[o:o + s.k + 1, o:o + s.k + 1] = lie_action_block(s.k, s.l, alpha)
    return A


def group_action(rep: RepDescriptor, alpha, t: float = 1.0) -> np.ndarray:
    """``exp(t * lie_action_matrix(rep, alpha))``."""
    return expm(t * lie_action_matrix(rep, alpha))


def equivariance_residual(rep: RepDescriptor, Z, alpha, h: float) -> float:
    """Frobenius gap between a central difference of H along the flow of
    ``alpha`` and the commutator ``[alpha, H]``."""
    if h <= 0:
        raise ValueError("step must be positive")
    Z = np.asarray(Z, dtype=complex).ravel()
    n = np.sqrt(_norm2(Z))
    if n == 0.0:
        raise ZeroVector("vector is zero")
    Z = Z / n
    A = lie_action_matrix(rep, alpha)
    Hp = phi_rep(rep, expm(h * A) @ Z).matrix()
    Hm = phi_rep(rep, expm(-h * A) @ Z).matrix()
    H = phi_rep(rep, Z).matrix()
    alpha = np.asarray(alpha, dtype=complex)
    comm = alpha @ H - H @ alpha
    return float(np.linalg.norm((Hp - Hm) / (2 * h) - comm))


def _sinc(r: float) -> float:
    if r < _SINC_SERIES_CUTOFF:
        r2 = r * r
        return 1.0 - r2 / 6.0 + r2 * r2 / 120.0
    return np.sin(r) / r


def b_matrix(z: complex) -> np.ndarray:
    """``B_z = i [[0, z], [conj z, 0]]``."""
    z = complex(z)
    return np.array([[0, 1j * z], [1j * z.conjugate(), 0]], dtype=complex)


def exp_antidiag(z: complex) -> np.ndarray:
    """Closed form of ``exp(B_z)``: ``cos|z| I + B_{sin|z| z/|z|}``."""
    z = complex(z)
    r = abs(z)
    c = np.cos(r)
    w = _sinc(r) * z
    return np.array([[c, 1j * w], [1j * w.conjugate(), c]], dtype=complex)


def exp_antidiag_series(z: complex, n: int) -> np.ndarray:
    """Truncated exponential series of ``B_z`` through degree ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    B = b_matrix(z)
    term = np.eye(2, dtype=complex)
    total = term.copy()
    for m in range(1, n + 1):
        term = term @ B / m
        total = total + term
    return total


def conjugate_diag(z: complex, nu: Sequence[float]) -> Hermitian2:
    """``exp(B_z) diag(nu) exp(-B_z)`` in closed form."""
    z = complex(z)
    nu1, nu2 = float(nu[0]), float(nu[1])
    r = abs(z)
    c, s = np.cos(r), np.sin(r)
    # sin(r) z / r, with the analytic extension at z = 0
    u = _sinc(r) * z
    return Hermitian2(
        nu1 * c * c + nu2 * s * s,
        nu2 * c * c + nu1 * s * s,
        1j * (nu2 - nu1) * c * u,
    )


def nu_perp_pairing(H: Hermitian2, nu: Sequence[float]) -> float:
    """Pair the diagonal of ``H`` with ``nu_perp = (-nu2, nu1)``.

    This is the moment map of the circle ``diag(e^{-i nu2 t}, e^{i nu1 t})``.
    For ``H = conjugate_diag(z, nu)`` it equals ``(nu1^2 - nu2^2) sin(|z|)^2``.
    """
    return -nu[1] * H.h11 + nu[0] * H.h22


def weighted_moment(a, d, Z) -> float:
    """``sum a_j d_j |z_j|^2 / sum d_j |z_j|^2``."""
    a = np.asarray(a, dtype=float).ravel()
    d = np.asarray(d, dtype=float).ravel()
    Z = np.asarray(Z, dtype=complex).ravel()
    if not (a.shape == d.shape == Z.shape):
        raise LengthMismatch("weights and coordinates differ in length")
    m = np.abs(Z) ** 2
    if not np.any(m > 0):
        raise ZeroVector("vector is zero")
    return float(np.sum(a * d * m) / np.sum(d * m))
