"""Qutrit Weyl-Heisenberg operators and the two-qutrit discrete Wigner function.

Two phase conventions are supported for the displacement operator
``D(x, z) = phase * X^x Z^z``:

``PAPER``
    phase ``omega**(x*z/2)`` with fractional powers read as
    ``omega**t = exp(2j*pi*t/3)``, so the phase for ``x*z = 1`` is
    ``exp(i*pi/3)``.  The resulting phase-point operators are not Hermitian.
``GROSS``
    phase ``omega**(2*x*z mod 3)``, using 2 as the inverse of 2 modulo 3.
    Phase-point operators are Hermitian and stabilizer states have a
    non-negative Wigner function.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .states import DIAGONAL_INDICES, DensityMatrix, diagonal_amplitudes

OMEGA = np.exp(2j * np.pi / 3)
TOL_IMAG = 1e-10
NEG_CUTOFF = 1e-12
CLUSTER_TOL = 1e-9
SNAP_DENOMINATOR = 324

SHIFT_X = np.roll(np.eye(3, dtype=complex), 1, axis=0)  # X|k> = |k+1 mod 3>
CLOCK_Z = np.diag([1.0, OMEGA, OMEGA**2])


class WignerConvention(str, enum.Enum):
    PAPER = "paper"
    GROSS = "gross"


def omega_power(t) -> complex:
    """``omega**t`` for real t, defined as ``exp(2j*pi*t/3)``."""
    return np.exp(2j * np.pi * t / 3)


@dataclass(frozen=True)
class PhaseLabel:
    x: int
    z: int

    def __post_init__(self):
        _check_label(self.x, self.z)


def _check_label(x, z):
    for name, v in (("x", x), ("z", z)):
        if not isinstance(v, (int, np.integer)) or not 0 <= v <= 2:
            raise ValueError(f"phase-space coordinate {name} must be 0, 1 or 2, got {v!r}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def pauli_word(x: int, z: int) -> np.ndarray:
    """``X^x Z^z`` built by repeated multiplication."""
    _check_label(x, z)
    m = np.eye(3, dtype=complex)
    for _ in range(x):
        m = m @ SHIFT_X
    for _ in range(z):
        m = m @ CLOCK_Z
    return _readonly(m)


@lru_cache(maxsize=None)
def displacement(x: int, z: int, conv: WignerConvention = WignerConvention.PAPER) -> np.ndarray:
    _check_label(x, z)
    conv = WignerConvention(conv)
    if conv is WignerConvention.PAPER:
        phase = np.exp(1j * np.pi * x * z / 3)
    else:
        phase = OMEGA ** ((2 * x * z) % 3)
    return _readonly(phase * pauli_word(x, z))


@lru_cache(maxsize=None)
def phase_point_operator(ux: int, uz: int, conv: WignerConvention = WignerConvention.PAPER) -> np.ndarray:
    """``A(ux, uz) = 1/3 sum_v omega**(uz*vx - ux*vz) D(vx, vz)``."""
    _check_label(ux, uz)
    conv = WignerConvention(conv)
    a = np.zeros((3, 3), dtype=complex)
    for vx in range(3):
        for vz in range(3):
            a += omega_power(uz * vx - ux * vz) * displacement(vx, vz, conv)
    return _readonly(a / 3)


@lru_cache(maxsize=None)
def _dwf_kernel(conv: WignerConvention) -> np.ndarray:
    """Rows map ``rho.ravel()`` to 9*W at label (x1, z1, x2, z2), row-major."""
    rows = []
    for x1 in range(3):
        for z1 in range(3):
            a1 = phase_point_operator(x1, z1, conv)
            for x2 in range(3):
                for z2 in range(3):
                    # Tr(M rho) = sum_ij M[i, j] rho[j, i]
                    rows.append(np.kron(a1, phase_point_operator(x2, z2, conv)).T.ravel())
    return _readonly(np.array(rows))


@dataclass(frozen=True)
class DwfGrid:
    """Two-qutrit discrete Wigner function, ``values[x1, z1, x2, z2]`` (complex)."""

    values: np.ndarray
    conv: WignerConvention = WignerConvention.PAPER

    def __post_init__(self):
        object.__setattr__(self, "conv", WignerConvention(self.conv))
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (3, 3, 3, 3):
            v = v.reshape(3, 3, 3, 3)
        object.__setattr__(self, "values", _readonly(v.copy()))

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def max_imag(self) -> float:
        return float(np.max(np.abs(self.values.imag)))

    def argmax_imag(self) -> tuple[int, int, int, int]:
        return tuple(int(i) for i in np.unravel_index(np.argmax(np.abs(self.values.imag)), self.values.shape))

    def total(self) -> complex:
        return complex(self.values.sum())

    def table(self) -> np.ndarray:
        """9x9 real table: row ``x1 + 3*x2``, column ``z1 + 3*z2``."""
        # values[x1, z1, x2, z2] -> t[x2, x1, z2, z1]
        return np.ascontiguousarray(self.real.transpose(2, 0, 3, 1).reshape(9, 9))

    def to_csv(self, digits: int = 9) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.table():
            writer.writerow(format(float(v), f".{digits}g") for v in row)
        return buf.getvalue()


def _matrix_of(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def dwf(rho, conv: WignerConvention = WignerConvention.PAPER) -> DwfGrid:
    """``W(x1,z1;x2,z2) = Tr[(A(x1,z1) (x) A(x2,z2)) rho] / 9`` on all 81 points."""
    m = _matrix_of(rho)
    if m.shape != (9, 9):
        raise ValueError(f"expected a 9x9 density matrix, got {m.shape}")
    conv = WignerConvention(conv)
    return DwfGrid(_dwf_kernel(conv) @ m.ravel() / 9.0, conv)


class ImaginaryDwfError(ValueError):
    """A Wigner value has an imaginary part above tolerance."""

    def __init__(self, label, value: complex, tol: float):
        self.label = label
        self.value = value
        x1, z1, x2, z2 = label
        super().__init__(
            f"DWF at phase point (x1,z1;x2,z2)=({x1},{z1};{x2},{z2}) has |Im W| = "
            f"{abs(value.imag):.3e} > {tol:.1e}; the phase convention does not yield a real DWF for this state"
        )


def default_imag_tol(conv: WignerConvention) -> float | None:
    """Imaginary-part tolerance applied when none is given.

    Under ``GROSS`` every value is real and the strict 1e-10 check applies.
    The ``PAPER`` kernel is non-Hermitian, so values carry an intrinsic
    imaginary part; there the real part is used and no check is made.
    """
    return None if WignerConvention(conv) is WignerConvention.PAPER else TOL_IMAG


_DEFAULT = object()


def checked_real(grid: DwfGrid, imag_tol: float | None) -> np.ndarray:
    if imag_tol is not None and grid.max_imag() > imag_tol:
        label = grid.argmax_imag()
        raise ImaginaryDwfError(label, complex(grid.values[label]), imag_tol)
    return grid.real


def negativity_of_values(values) -> float:
    w = np.asarray(values, dtype=float)
    total = float(-w[w < -NEG_CUTOFF].sum())
    return total if total > 0.0 else 0.0


def wigner_negativity(rho, conv: WignerConvention = WignerConvention.PAPER, imag_tol=_DEFAULT) -> float:
    """Minus the sum of the negative (real) DWF values.

    ``imag_tol`` bounds ``max |Im W|``; exceeding it raises
    :class:`ImaginaryDwfError`.  Pass ``None`` to skip the check.
    """
    grid = dwf(rho, conv)
    if imag_tol is _DEFAULT:
        imag_tol = default_imag_tol(grid.conv)
    return negativity_of_values(checked_real(grid, imag_tol))


def snap_fraction(value: float, tol: float = CLUSTER_TOL, max_denominator: int = SNAP_DENOMINATOR) -> Fraction | None:
    frac = Fraction(value).limit_denominator(max_denominator)
    return frac if abs(float(frac) - value) <= tol else None


def dwf_multiset(grid: DwfGrid, tol: float = CLUSTER_TOL, imag_tol=_DEFAULT) -> list[tuple[float, int]]:
    """Distinct DWF values with multiplicities, ascending.

    Values closer than ``tol`` share a cluster; a cluster within ``tol`` of a
    fraction with denominator <= 324 is reported as that fraction.
    """
    if imag_tol is _DEFAULT:
        imag_tol = default_imag_tol(grid.conv)
    values = np.sort(checked_real(grid, imag_tol).ravel())
    clusters: list[list[float]] = []
    for v in values:
        if clusters and v - clusters[-1][-1] <= tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    out = []
    for members in clusters:
        centre = float(np.mean(members))
        frac = snap_fraction(centre, tol)
        out.append((float(frac) if frac is not None else centre, len(members)))
    return out


def format_multiset(ms) -> str:
    parts = []
    for value, count in ms:
        frac = snap_fraction(value)
        parts.append(f"{frac if frac is not None else f'{value:.9g}'} -> {count}")
    return "{" + ", ".join(parts) + "}"


# -- vectorized AITTS path ---------------------------------------------------

@lru_cache(maxsize=None)
def _diagonal_kernel(conv: WignerConvention) -> np.ndarray:
    """Kernel restricted to the |00>,|11>,|22> block: shape (81, 3, 3), real part."""
    k = _dwf_kernel(conv).reshape(81, 9, 9)
    idx = np.array(DIAGONAL_INDICES)
    return _readonly(np.ascontiguousarray(k[:, idx[:, None], idx[None, :]].real / 9.0))


def pure_dwf_real(theta, phi, conv: WignerConvention = WignerConvention.PAPER) -> np.ndarray:
    """Real DWF values of psi(theta, phi), shape ``broadcast(theta, phi).shape + (81,)``."""
    c = np.stack(diagonal_amplitudes(theta, phi), axis=-1)
    return np.einsum("lij,...i,...j->...l", _diagonal_kernel(WignerConvention(conv)), c, c)


def negativity_from_pure_dwf(w_pure: np.ndarray, p) -> np.ndarray:
    """Wigner negativity of ``p |psi><psi| + (1-p) I/9`` given the pure-state DWF.

    Every phase-point operator has unit trace, so the noise contributes 1/81
    at each point.
    """
    p = np.asarray(p, dtype=float)
    w = p[..., None] * w_pure + ((1.0 - p) / 81.0)[..., None]
    total = -np.where(w < -NEG_CUTOFF, w, 0.0).sum(axis=-1)
    return np.where(total > 0.0, total, 0.0)


def wigner_negativity_aitts(theta, phi, p, conv: WignerConvention = WignerConvention.PAPER) -> np.ndarray:
    """Vectorized Wigner negativity (real-part DWF) of the AITTS family.

    The pure-state DWF is computed once per (theta, phi) and broadcast over p.
    """
    return negativity_from_pure_dwf(pure_dwf_real(theta, phi, conv), p)


def max_imag_aitts(theta, phi, conv: WignerConvention = WignerConvention.PAPER) -> np.ndarray:
    """``max |Im W|`` of psi(theta, phi); scaling by p gives the AITTS value."""
    k = _dwf_kernel(WignerConvention(conv)).reshape(81, 9, 9)
    idx = np.array(DIAGONAL_INDICES)
    kim = k[:, idx[:, None], idx[None, :]].imag / 9.0
    c = np.stack(diagonal_amplitudes(theta, phi), axis=-1)
    return np.abs(np.einsum("lij,...i,...j->...l", kim, c, c)).max(axis=-1)


def phase_point_sum(conv: WignerConvention) -> np.ndarray:
    return sum(phase_point_operator(x, z, conv) for x in range(3) for z in range(3))
