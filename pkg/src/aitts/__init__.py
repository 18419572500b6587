"""Entanglement, Wigner negativity and CGLMP nonlocality of anisotropic two-qutrit states."""

__version__ = "0.1.0"

from .bell import DEFAULT_PHASES, MeasurementPhases, cglmp_i3
from .entanglement import negativity
from .explore import Metric, MetricKind, maximize, maximize_i3, region_mask, sweep_p
from .states import AittsParams, DensityMatrix, aitts, catalog, lookup, noise, psi
from .wigner import WignerConvention, dwf, wigner_negativity

__all__ = [
    "AittsParams", "DEFAULT_PHASES", "DensityMatrix", "MeasurementPhases", "Metric", "MetricKind",
    "WignerConvention", "aitts", "catalog", "cglmp_i3", "dwf", "lookup", "maximize", "maximize_i3",
    "negativity", "noise", "psi", "region_mask", "sweep_p", "wigner_negativity",
]
