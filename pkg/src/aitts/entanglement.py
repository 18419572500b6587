"""Negativity under partial transposition for two-qutrit states."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import NEG_TOL, hermitian_eigenvalues, partial_transpose
from .states import AittsParams, DensityMatrix, aitts, aitts_entries

THRESHOLD_TOL = 1e-7


@dataclass(frozen=True)
class PtSpectrum:
    """Eigenvalues of the partially transposed AITTS, in closed-form order."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        if len(self.lambdas) != 9:
            raise ValueError("a two-qutrit PT spectrum has nine eigenvalues")
        total = sum(self.lambdas)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"PT spectrum must sum to 1, got {total!r}")

    def sorted(self) -> np.ndarray:
        return np.sort(np.asarray(self.lambdas))

    def negativity(self) -> float:
        return _negativity_from_spectrum(np.asarray(self.lambdas))


def pt_spectrum_analytic(params: AittsParams) -> PtSpectrum:
    e = aitts_entries(params)
    eps = e["eps"]
    lambdas = [e["kappa1"], e["kappa2"], e["kappa3"]]
    for tau in (e["tau1"], e["tau2"], e["tau3"]):
        lambdas += [eps - tau, eps + tau]
    return PtSpectrum(tuple(lambdas))


def _negativity_from_spectrum(lambdas: np.ndarray) -> float:
    neg = lambdas[lambdas < -NEG_TOL]
    value = float(-neg.sum())
    return value if value > NEG_TOL else 0.0


def negativity(rho) -> float:
    """Entanglement negativity ``-sum(lambda_i < 0)`` of ``rho^{T_A}``.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero, and a total within
    1e-10 of zero is reported as exactly 0.
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return _negativity_from_spectrum(hermitian_eigenvalues(partial_transpose(matrix, "A")))


def negativity_aitts(theta, phi, p):
    """Vectorized negativity of the AITTS family from the closed-form PT spectrum.

    Broadcasts over ``theta``, ``phi`` and ``p``; only the ``eps - |tau_i|``
    eigenvalues can go negative.
    """
    theta, phi, p = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (theta, phi, p)))
    eps = (1.0 - p) / 9.0
    st = np.sin(theta)
    taus = (
        p * st**2 * np.sin(2 * phi) / 2,
        p * np.sin(2 * theta) * np.cos(phi) / 2,
        p * np.sin(2 * theta) * np.sin(phi) / 2,
    )
    total = np.zeros(theta.shape)
    for tau in taus:
        lam = eps - np.abs(tau)
        total -= np.where(lam < -NEG_TOL, lam, 0.0)
    return np.where(total > NEG_TOL, total, 0.0)


def pure_state_negativity(theta, phi):
    """``|ab| + |ac| + |bc|`` for the Schmidt coefficients of psi(theta, phi)."""
    a = np.sin(theta) * np.cos(phi)
    b = np.sin(theta) * np.sin(phi)
    c = np.cos(theta)
    return np.abs(a * b) + np.abs(a * c) + np.abs(b * c)


def entanglement_threshold(theta: float, phi: float, tol: float = THRESHOLD_TOL) -> float | None:
    """Smallest p in [0, 1] with nonzero negativity, or None if the state stays PPT.

    Uses bisection on the sign of ``E(p) - 1e-10``; E is non-decreasing in p
    along the AITTS family.
    """
    def entangled(p):
        return negativity(aitts(AittsParams(theta, phi, p))) > NEG_TOL

    if not entangled(1.0):
        return None
    lo, hi = 0.0, 1.0
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
