"""Dense complex-matrix primitives: tensor product, Hermitian eigensolver, partial trace.

Everything here works on plain ``numpy`` arrays of ``complex128``. The
eigensolver is a cyclic complex Jacobi iteration, which is robust and
accurate for the small dimensions (d <= 9) this package needs; all
operations are pure functions with no shared mutable state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError, NotSquareError

# Relative tolerance for accepting a matrix as Hermitian.
HERMITIAN_RTOL = 1e-12
# Off-diagonal Frobenius mass, relative to ||H||_F, at which sweeps stop.
JACOBI_SWEEP_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# Eigenvalues closer than this (relative to max(1, |lambda_max|)) are one eigenspace.
DEGENERACY_RTOL = 1e-8


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def is_hermitian(m: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    """True when max |M[i,j] - conj(M[j,i])| <= rtol * max(1, ||M||_F)."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    dev = np.abs(m - m.conj().T).max() if m.size else 0.0
    return dev <= rtol * max(1.0, frobenius(m))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product, (a (x) b)[i*rb+k, j*cb+l] = a[i,j] * b[k,l].

    The tensor product of two Hermitian matrices is Hermitian, so the
    Hermitian property propagates through this operation.
    """
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; column k of ``eigenvectors``
    is the unit eigenvector paired with ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def max_eigenvector(self) -> np.ndarray:
        return self.eigenvectors[:, -1]

    def top_eigenspace(self, rtol: float = DEGENERACY_RTOL) -> tuple[np.ndarray, bool]:
        """Orthonormal basis (columns) of the top eigenspace.

        Eigenvalues within ``rtol * max(1, |lambda_max|)`` of the maximum are
        clustered into one space. Returns ``(basis, degenerate)``.
        """
        lam = self.eigenvalues
        tol = rtol * max(1.0, abs(float(lam[-1])))
        members = np.nonzero(lam >= lam[-1] - tol)[0]
        basis = self.eigenvectors[:, members]
        return basis, basis.shape[1] > 1

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(h: np.ndarray, rtol: float = HERMITIAN_RTOL) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass drops below
    ``JACOBI_SWEEP_TOL * ||H||_F`` (at most ``JACOBI_MAX_SWEEPS`` sweeps).

    Raises ``NotSquareError`` / ``NotHermitianError`` when the input fails
    the preconditions.
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {h.shape}")
    if not is_hermitian(h, rtol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")

    n = h.shape[0]
    # Symmetrize away representation noise so the iteration sees an exactly
    # Hermitian matrix; this stays within the acceptance tolerance above.
    a = (h + h.conj().T) / 2.0
    v = np.eye(n, dtype=complex)
    hnorm = frobenius(a)
    if hnorm == 0.0 or n == 1:
        return EigenSystem(np.real(np.diag(a)).copy(), v)

    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        # Off-diagonal mass must be measured directly from the entries; the
        # difference ||A||^2 - ||diag||^2 cancels catastrophically near
        # convergence and would stall around sqrt(eps) * ||H||.
        off = np.sqrt(np.sum(np.abs(a[off_mask]) ** 2))
        if off <= JACOBI_SWEEP_TOL * hnorm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                # Inner rotation angle: the classical stable tangent root,
                # |t| <= 1, after factoring the phase out of the pivot.
                zeta = (a[p, p].real - a[q, q].real) / (2.0 * r)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(zeta * zeta + 1.0))
                else:
                    t = 1.0 / (zeta - np.sqrt(zeta * zeta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J differs from identity only at (p,p)=(q,q)=c,
                # (p,q) = -phase*s, (q,p) = conj(phase)*s; apply A <- J^H A J.
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p + np.conj(phase) * s * col_q
                a[:, q] = -phase * s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p + phase * s * row_q
                a[q, :] = -np.conj(phase) * s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + np.conj(phase) * s * vq
                v[:, q] = -phase * s * vp + c * vq

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], v[:, order])


def max_eigenvalue(h: np.ndarray) -> float:
    return eig_hermitian(h).max_eigenvalue


def partial_trace_first(m: np.ndarray, d_first: int, d_second: int) -> np.ndarray:
    """Trace out the first tensor factor of a (d_first*d_second)-dim operator.

    Preserves the trace: tr(result) = tr(m).
    """
    m = np.asarray(m, dtype=complex)
    d = d_first * d_second
    if m.shape != (d, d):
        raise DimensionMismatchError(
            f"expected shape ({d}, {d}) for dims ({d_first}, {d_second}), got {m.shape}"
        )
    return m.reshape(d_first, d_second, d_first, d_second).trace(axis1=0, axis2=2)
