"""CGLMP Bell functional for two qutrits with phase-shifted Fourier bases."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import kron
from .states import DIAGONAL_INDICES, DensityMatrix, diagonal_amplitudes
from .wigner import omega_power

PROB_IMAG_TOL = 1e-12


class Party(str, enum.Enum):
    ALICE = "A"
    BOB = "B"


@dataclass(frozen=True)
class MeasurementPhases:
    alpha1: float = 0.0
    alpha2: float = 0.5
    beta1: float = 0.25
    beta2: float = -0.25

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"phase {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, text: str) -> "MeasurementPhases":
        """Parse ``"a1,a2,b1,b2"``."""
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated phases, got {text!r}")
        return cls(*(float(s) for s in parts))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)


DEFAULT_PHASES = MeasurementPhases()


@dataclass(frozen=True)
class MeasurementContext:
    party: Party
    setting: int
    outcome: int

    def __post_init__(self):
        object.__setattr__(self, "party", Party(self.party))
        if self.setting not in (1, 2):
            raise ValueError(f"setting must be 1 or 2, got {self.setting!r}")
        if self.outcome not in (0, 1, 2):
            raise ValueError(f"outcome must be 0, 1 or 2, got {self.outcome!r}")


def measurement_vector(ctx: MeasurementContext, phases: MeasurementPhases = DEFAULT_PHASES) -> np.ndarray:
    """Basis vector with components ``omega**(n*(o + alpha_s)) / sqrt 3`` (Alice)
    or ``omega**(n*(-o + beta_s)) / sqrt 3`` (Bob)."""
    n = np.arange(3)
    if ctx.party is Party.ALICE:
        shift = ctx.outcome + (phases.alpha1 if ctx.setting == 1 else phases.alpha2)
    else:
        shift = -ctx.outcome + (phases.beta1 if ctx.setting == 1 else phases.beta2)
    return omega_power(n * shift) / math.sqrt(3)


def projector(ctx: MeasurementContext, phases: MeasurementPhases = DEFAULT_PHASES) -> np.ndarray:
    v = measurement_vector(ctx, phases)
    return np.outer(v, v.conj())


def _joint_operator(a_setting, b_setting, a_out, b_out, phases) -> np.ndarray:
    pa = projector(MeasurementContext(Party.ALICE, a_setting, a_out), phases)
    pb = projector(MeasurementContext(Party.BOB, b_setting, b_out), phases)
    return kron(pa, pb)


def _matrix_of(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def joint_probability(rho, a_setting: int, b_setting: int, a_out: int, b_out: int,
                      phases: MeasurementPhases = DEFAULT_PHASES) -> float:
    """``Tr[(Pi_A (x) Pi_B) rho]`` with the negligible imaginary part dropped."""
    m = _matrix_of(rho)
    value = complex(np.einsum("ij,ji->", _joint_operator(a_setting, b_setting, a_out, b_out, phases), m))
    if abs(value.imag) > PROB_IMAG_TOL:
        raise ValueError(f"joint probability has imaginary part {value.imag:.3e}; is rho Hermitian?")
    return value.real


# Each aggregate probability lists its (Alice setting, Bob setting) and the
# three (Alice outcome, Bob outcome) summands, written out term by term.
CGLMP_TERMS = (
    (+1, "P(A1=B1)", 1, 1, ((0, 0), (1, 1), (2, 2))),
    (+1, "P(B1=A2+1)", 2, 1, ((0, 1), (1, 2), (2, 0))),
    (+1, "P(A2=B2)", 2, 2, ((0, 0), (1, 1), (2, 2))),
    (+1, "P(B2=A1)", 1, 2, ((0, 0), (1, 1), (2, 2))),
    (-1, "P(A1=B1-1)", 1, 1, ((2, 0), (0, 1), (1, 2))),
    (-1, "P(B1=A2)", 2, 1, ((0, 0), (1, 1), (2, 2))),
    (-1, "P(A2=B2-1)", 2, 2, ((2, 0), (0, 1), (1, 2))),
    (-1, "P(B2=A1-1)", 1, 2, ((0, 2), (1, 0), (2, 1))),
)


def joint_table(rho, phases: MeasurementPhases = DEFAULT_PHASES) -> dict[tuple[int, int, int, int], float]:
    """All 36 joint probabilities keyed by ``(a_setting, b_setting, a_out, b_out)``."""
    return {
        (sa, sb, a, b): joint_probability(rho, sa, sb, a, b, phases)
        for sa in (1, 2) for sb in (1, 2) for a in range(3) for b in range(3)
    }


def cglmp_terms(rho, phases: MeasurementPhases = DEFAULT_PHASES) -> dict[str, float]:
    table = joint_table(rho, phases)
    return {
        name: sum(table[(sa, sb, a, b)] for a, b in pairs)
        for _, name, sa, sb, pairs in CGLMP_TERMS
    }


def cglmp_i3(rho, phases: MeasurementPhases = DEFAULT_PHASES) -> float:
    terms = cglmp_terms(rho, phases)
    return float(sum(sign * terms[name] for sign, name, *_ in CGLMP_TERMS))


@lru_cache(maxsize=64)
def bell_operator(phases: MeasurementPhases = DEFAULT_PHASES) -> np.ndarray:
    """Hermitian 9x9 operator ``B`` with ``I3(rho) = Tr(B rho)``."""
    b = np.zeros((9, 9), dtype=complex)
    for sign, _, sa, sb, pairs in CGLMP_TERMS:
        for a, o in pairs:
            b += sign * _joint_operator(sa, sb, a, o, phases)
    b.flags.writeable = False
    return b


def i3_aitts(theta, phi, p, phases: MeasurementPhases = DEFAULT_PHASES):
    """Vectorized I3 of the AITTS family, ``p <psi|B|psi> + (1-p) Tr(B)/9``.

    ``Tr(B)`` vanishes for the CGLMP functional, so this is ``p * I3(psi)``.
    """
    b = bell_operator(phases)
    idx = np.array(DIAGONAL_INDICES)
    sub = b[idx[:, None], idx[None, :]].real
    c = np.stack(diagonal_amplitudes(theta, phi), axis=-1)
    pure = np.einsum("ij,...i,...j->...", sub, c, c)
    p = np.asarray(p, dtype=float)
    return p * pure + (1.0 - p) * np.trace(b).real / 9.0
