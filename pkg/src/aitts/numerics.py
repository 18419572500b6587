"""Small dense complex linear algebra for two-qutrit operators.

Matrices are plain ``numpy`` complex arrays.  The composite basis index of
``|jk>`` is ``3*j + k``.
"""
from __future__ import annotations

import math

import numpy as np

TOL_HERM = 1e-12
NEG_TOL = 1e-10
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 50


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def as_cmatrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    """Largest entrywise deviation ``max |M - M^dagger|``."""
    m = as_cmatrix(m)
    if m.shape[0] != m.shape[1]:
        return math.inf
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> np.ndarray:
    m = as_cmatrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"matrix of shape {m.shape} is not Hermitian: max|M - M^H| = {err:.3e}")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*rb + k, j*cb + l)`` is ``a[i, j] * b[k, l]``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def partial_transpose(rho, subsystem: str = "A") -> np.ndarray:
    """Partial transpose of a 9x9 two-qutrit operator on subsystem ``"A"`` or ``"B"``."""
    rho = as_cmatrix(rho)
    if rho.shape != (9, 9):
        raise ValueError(f"partial transpose needs a 9x9 matrix, got {rho.shape}")
    t = rho.reshape(3, 3, 3, 3)  # [j, k, j', k']
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return np.ascontiguousarray(t.reshape(9, 9))


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eigh(h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS,
                   check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then applies the real symmetric Jacobi rotation that
    annihilates it.  Sweeps stop once the off-diagonal Frobenius mass drops
    below ``tol * max(1, ||h||_F)``.

    Returns
    -------
    values : ndarray of float, ascending
    vectors : ndarray, columns are the matching orthonormal eigenvectors
    """
    a = check_hermitian(h) if check else as_cmatrix(h)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {a.shape}")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = tol * scale

    off = _off_norm(a)
    sweeps = 0
    while off >= threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                angle = 0.5 * math.atan2(2.0 * mag, app - aqq)
                c = math.cos(angle)
                s = math.sin(angle)
                rot = np.array([[c, -s], [s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ rot
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
        sweeps += 1
        off = _off_norm(a)

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def hermitian_eigenvalues(h, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    return hermitian_eigh(h, tol=tol, max_sweeps=max_sweeps)[0]


def expectation(m, rho) -> complex:
    """``Tr(m @ rho)``."""
    m = as_cmatrix(m)
    rho = as_cmatrix(rho)
    if m.shape[0] != m.shape[1] or m.shape != rho.shape:
        raise ValueError(f"dimension mismatch: {m.shape} vs {rho.shape}")
    return complex(np.einsum("ij,ji->", m, rho))
