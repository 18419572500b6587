"""Anisotropic two-qutrit states and the named Schmidt-class catalog."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .numerics import NEG_TOL, TOL_HERM, as_cmatrix, check_hermitian, hermitian_eigenvalues

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
SCHMIDT_TOL = 1e-12

THETA_ISO = math.acos(1 / math.sqrt(3))
PHI_ISO = math.pi / 4

# |00>, |11>, |22> in the composite 3j+k ordering
DIAGONAL_INDICES = (0, 4, 8)


class AngleRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PureTwoQutrit:
    """Normalized pure state with amplitudes ``c_jk`` at index ``3j+k``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (9,):
            raise ValueError(f"need 9 amplitudes, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |c|^2 = {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def coefficient_matrix(self) -> np.ndarray:
        return self.amplitudes.reshape(3, 3)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.projector())


@dataclass(frozen=True)
class AittsParams:
    theta: float
    phi: float
    p: float

    def __post_init__(self):
        for name in ("theta", "phi", "p"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixing weight p must lie in [0, 1], got {self.p!r}")
        if not (0.0 <= self.theta <= math.pi and 0.0 <= self.phi <= 2 * math.pi):
            warnings.warn(
                f"(theta, phi) = ({self.theta}, {self.phi}) lies outside [0, pi] x [0, 2pi]",
                AngleRangeWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class DensityMatrix:
    """9x9 Hermitian, unit-trace, positive semidefinite matrix.

    Construction validates all three properties; pass ``check=False`` only for
    matrices that are valid by construction.
    """

    matrix: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        m = as_cmatrix(self.matrix).copy()
        if m.shape != (9, 9):
            raise ValueError(f"two-qutrit density matrix must be 9x9, got {m.shape}")
        if self.check:
            check_hermitian(m, TOL_HERM)
            tr = np.trace(m)
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"trace must be 1, got {tr!r}")
            lmin = hermitian_eigenvalues(m)[0]
            if lmin < -NEG_TOL:
                raise ValueError(f"matrix is not positive semidefinite: min eigenvalue {lmin:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


def diagonal_amplitudes(theta, phi):
    """``(sin t cos f, sin t sin f, cos t)``; broadcasts over arrays."""
    t, f = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    st = np.sin(t)
    return st * np.cos(f), st * np.sin(f), np.cos(t)


def psi(theta: float, phi: float) -> PureTwoQutrit:
    """``sin t cos f |00> + sin t sin f |11> + cos t |22>``."""
    _check_finite(theta=theta, phi=phi)
    amps = np.zeros(9, dtype=complex)
    amps[list(DIAGONAL_INDICES)] = diagonal_amplitudes(theta, phi)
    return PureTwoQutrit(amps)


def aitts_matrix(theta: float, phi: float, p: float) -> np.ndarray:
    """Unvalidated ``p |psi><psi| + (1-p) I/9`` as a raw array."""
    vec = psi(theta, phi).amplitudes
    return p * np.outer(vec, vec.conj()) + (1.0 - p) / 9.0 * np.eye(9)


def aitts(params: AittsParams) -> DensityMatrix:
    return DensityMatrix(aitts_matrix(params.theta, params.phi, params.p))


def noise() -> DensityMatrix:
    return DensityMatrix(np.eye(9, dtype=complex) / 9.0, check=False)


def aitts_entries(params: AittsParams) -> dict[str, float]:
    """The scalar entries eps, kappa_1..3, tau_1..3 of the AITTS matrix."""
    t, f, p = params.theta, params.phi, params.p
    eps = (1.0 - p) / 9.0
    return {
        "eps": eps,
        "kappa1": p * math.sin(t) ** 2 * math.cos(f) ** 2 + eps,
        "kappa2": p * math.sin(t) ** 2 * math.sin(f) ** 2 + eps,
        "kappa3": p * math.cos(t) ** 2 + eps,
        "tau1": p * math.sin(t) ** 2 * math.sin(2 * f) / 2,
        "tau2": p * math.sin(2 * t) * math.cos(f) / 2,
        "tau3": p * math.sin(2 * t) * math.sin(f) / 2,
    }


def schmidt_number(state: PureTwoQutrit) -> int:
    """Rank of the 3x3 coefficient matrix (singular values above 1e-12)."""
    sv = np.linalg.svd(state.coefficient_matrix(), compute_uv=False)
    return int(np.count_nonzero(sv > SCHMIDT_TOL))


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    theta: float | None
    phi: float | None

    @property
    def is_noise(self) -> bool:
        return self.theta is None

    def params(self, p: float = 1.0) -> AittsParams:
        if self.is_noise:
            return AittsParams(0.0, 0.0, 0.0)
        return AittsParams(self.theta, self.phi, p)

    def density(self, p: float = 1.0) -> DensityMatrix:
        return noise() if self.is_noise else aitts(self.params(p))


_PI = math.pi
_CATALOG = (
    CatalogEntry("S1_1", _PI / 2, 0.0),
    CatalogEntry("S1_2", _PI / 2, _PI / 2),
    CatalogEntry("S1_3", 0.0, 0.0),
    CatalogEntry("S2_1", _PI / 2, _PI / 4),
    CatalogEntry("S2_2", _PI / 4, 0.0),
    CatalogEntry("S2_3", _PI / 4, _PI / 2),
    CatalogEntry("S2_4", _PI / 2, _PI / 6),
    CatalogEntry("S2_5", _PI / 6, 0.0),
    CatalogEntry("S2_6", _PI / 6, _PI / 2),
    CatalogEntry("S3_1", THETA_ISO, PHI_ISO),
    CatalogEntry("S3_2", THETA_ISO, _PI / 6),
    CatalogEntry("noise", None, None),
)


def catalog(include_noise: bool = True) -> list[CatalogEntry]:
    return [e for e in _CATALOG if include_noise or not e.is_noise]


def lookup(name: str) -> CatalogEntry:
    for entry in _CATALOG:
        if entry.name == name:
            return entry
    valid = ", ".join(e.name for e in _CATALOG)
    raise KeyError(f"unknown catalog state {name!r}; valid names: {valid}")
