"""Parameter-space exploration over (theta, phi, p) for the three AITTS metrics.

Grid work uses the vectorized closed forms (``negativity_aitts``,
``wigner_negativity_aitts``, ``i3_aitts``); :meth:`Metric.of_state` evaluates
the reference path on an explicit density matrix.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import ndimage

from .bell import DEFAULT_PHASES, MeasurementPhases, cglmp_i3, i3_aitts
from .entanglement import negativity, negativity_aitts
from .states import AittsParams, aitts
from .wigner import WignerConvention, max_imag_aitts, wigner_negativity, wigner_negativity_aitts

THRESHOLD_TOL = 1e-7
BREAKPOINT_TOL = 1e-5
SIMPLEX_TOL = 1e-7
NEAR_TIE_TOL = 1e-4
EXACT_TIE_TOL = 1e-9

DEFAULT_THETA_STEPS = 181
DEFAULT_PHI_STEPS = 361
DEFAULT_P_STEPS = 101


class MetricKind(str, enum.Enum):
    ENTANGLEMENT = "entanglement"
    WIGNER_NEGATIVITY = "wigner_negativity"
    BELL_I3 = "cglmp_i3"


_ALIASES = {
    "e": MetricKind.ENTANGLEMENT, "entanglement": MetricKind.ENTANGLEMENT,
    "n": MetricKind.WIGNER_NEGATIVITY, "wigner": MetricKind.WIGNER_NEGATIVITY,
    "wigner_negativity": MetricKind.WIGNER_NEGATIVITY,
    "i3": MetricKind.BELL_I3, "bell": MetricKind.BELL_I3, "cglmp_i3": MetricKind.BELL_I3,
}


@dataclass(frozen=True)
class Metric:
    kind: MetricKind
    convention: WignerConvention = WignerConvention.PAPER
    phases: MeasurementPhases = DEFAULT_PHASES

    @classmethod
    def entanglement(cls) -> "Metric":
        return cls(MetricKind.ENTANGLEMENT)

    @classmethod
    def wigner(cls, convention=WignerConvention.PAPER) -> "Metric":
        return cls(MetricKind.WIGNER_NEGATIVITY, convention=WignerConvention(convention))

    @classmethod
    def bell(cls, phases: MeasurementPhases = DEFAULT_PHASES) -> "Metric":
        return cls(MetricKind.BELL_I3, phases=phases)

    @classmethod
    def parse(cls, name: str, convention=WignerConvention.PAPER, phases=DEFAULT_PHASES) -> "Metric":
        try:
            kind = _ALIASES[name.lower()]
        except KeyError:
            raise ValueError(f"unknown metric {name!r}; choose from e, n, i3") from None
        return cls(kind, WignerConvention(convention), phases)

    @property
    def symbol(self) -> str:
        return {MetricKind.ENTANGLEMENT: "E", MetricKind.WIGNER_NEGATIVITY: "N", MetricKind.BELL_I3: "I3"}[self.kind]

    def evaluate(self, theta, phi, p):
        """Vectorized metric of ``aitts(theta, phi, p)``; broadcasts its arguments."""
        if self.kind is MetricKind.ENTANGLEMENT:
            return negativity_aitts(theta, phi, p)
        if self.kind is MetricKind.WIGNER_NEGATIVITY:
            return wigner_negativity_aitts(theta, phi, p, self.convention)
        return i3_aitts(theta, phi, p, self.phases)

    def __call__(self, theta: float, phi: float, p: float) -> float:
        return float(self.evaluate(theta, phi, p))

    def of_state(self, rho) -> float:
        """Reference evaluation on an explicit density matrix."""
        if self.kind is MetricKind.ENTANGLEMENT:
            return negativity(rho)
        if self.kind is MetricKind.WIGNER_NEGATIVITY:
            return wigner_negativity(rho, self.convention)
        return cglmp_i3(rho, self.phases)


class CurveSample(NamedTuple):
    p: float
    value: float


def sweep_p(theta: float, phi: float, p_grid: Sequence[float], metric: Metric,
            reference: bool = False) -> list[CurveSample]:
    """Metric along p at fixed angles, in the order of ``p_grid``.

    ``reference=True`` builds each density matrix and uses the eigensolver /
    full-DWF path instead of the closed forms.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if p_grid.size and (p_grid.min() < 0.0 or p_grid.max() > 1.0):
        raise ValueError("p values must lie in [0, 1]")
    if reference:
        values = [metric.of_state(aitts(AittsParams(theta, phi, float(p)))) for p in p_grid]
    else:
        values = metric.evaluate(theta, phi, p_grid)
    return [CurveSample(float(p), float(v)) for p, v in zip(p_grid, values)]


def find_threshold(theta: float, phi: float, metric: Metric, level: float = 0.0,
                   tol: float = THRESHOLD_TOL) -> float | None:
    """Smallest p in [0, 1] with ``metric > level``, by bisection; None if never exceeded."""
    def above(p):
        return metric(theta, phi, p) > level

    if not above(1.0):
        return None
    if above(0.0):
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _uniform_spacing(p: np.ndarray) -> float:
    steps = np.diff(p)
    h = float(steps.mean())
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError("breakpoint detection needs strictly ascending, uniformly spaced samples")
    return h


def _intersect_lines(p0, v0, s0, p1, v1, s1):
    if abs(s1 - s0) < 1e-15:
        return None
    return (v1 - v0 + s0 * p0 - s1 * p1) / (s0 - s1)


def detect_breakpoints(samples: Sequence[CurveSample], func: Callable[[float], float] | None = None,
                       tol: float = BREAKPOINT_TOL, floor: float = 1e-9) -> np.ndarray:
    """Kink locations of a sampled curve.

    A sample is flagged where ``|second difference|`` exceeds ten times its
    median magnitude (and ``floor``); runs of flagged samples form one kink.
    With ``func`` the kink is refined by bisection against the left segment's
    line to ``tol``; without it the neighbouring segment lines are intersected.
    """
    if len(samples) < 5:
        raise ValueError(f"need at least 5 samples for breakpoint detection, got {len(samples)}")
    p = np.array([s.p for s in samples], dtype=float)
    v = np.array([s.value for s in samples], dtype=float)
    h = _uniform_spacing(p)
    d2 = np.abs(np.diff(v, 2))
    cut = max(10.0 * float(np.median(d2)), floor)
    flagged = np.flatnonzero(d2 > cut)
    if flagged.size == 0:
        return np.array([])

    runs = np.split(flagged, np.flatnonzero(np.diff(flagged) > 1) + 1)
    out = []
    for run in runs:
        k0, k1 = int(run[0]), int(run[-1])
        # the kink lies in (p[k1], p[k0 + 2]); flanking samples are linear
        lo_i, hi_i = k1, k0 + 2
        if lo_i >= hi_i:
            lo_i, hi_i = k0, k1 + 2
        left_ok = k0 >= 1
        right_ok = k1 + 3 < len(p)
        s_left = (v[k0] - v[k0 - 1]) / h if left_ok else None
        s_right = (v[k1 + 3] - v[k1 + 2]) / h if right_ok else None
        if func is not None and left_ok:
            out.append(_bisect_kink(func, p[k0], v[k0], s_left, p[lo_i], p[hi_i], tol))
            continue
        guess = None
        if left_ok and right_ok:
            guess = _intersect_lines(p[k0], v[k0], s_left, p[k1 + 2], v[k1 + 2], s_right)
        if guess is None or not (p[k0] - h <= guess <= p[k1 + 2] + h):
            guess = 0.5 * (p[lo_i] + p[hi_i])
        out.append(float(guess))
    return np.array(out)


def _bisect_kink(func, p0, v0, slope, lo, hi, tol, eps=1e-9):
    def on_left_line(x):
        return abs(func(x) - (v0 + slope * (x - p0))) <= eps * max(1.0, abs(v0))

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if on_left_line(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def angle_grid(steps: int, upper: float) -> np.ndarray:
    if steps < 1:
        raise ValueError("grid needs at least one point")
    return np.linspace(0.0, upper, steps)


@dataclass(frozen=True)
class RegionMask:
    theta_grid: np.ndarray
    phi_grid: np.ndarray
    p_grid: np.ndarray
    mask: np.ndarray
    values: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        for name in ("theta_grid", "phi_grid", "p_grid"):
            g = np.asarray(getattr(self, name), dtype=float)
            if g.ndim != 1 or g.size == 0 or np.any(np.diff(g) <= 0):
                raise ValueError(f"{name} must be a non-empty strictly ascending 1-D array")
            object.__setattr__(self, name, g)
        shape = (self.theta_grid.size, self.phi_grid.size, self.p_grid.size)
        if self.mask.shape != shape:
            raise ValueError(f"mask shape {self.mask.shape} does not match grids {shape}")

    def any_at(self, k: int) -> bool:
        return bool(self.mask[:, :, k].any())

    def slab_boxes(self, k: int) -> list[tuple[float, float, float, float]]:
        """(theta_min, theta_max, phi_min, phi_max) per connected component of the p-slab."""
        labels, count = ndimage.label(self.mask[:, :, k])
        boxes = []
        for sl in ndimage.find_objects(labels):
            ti, pj = sl
            boxes.append((self.theta_grid[ti.start], self.theta_grid[ti.stop - 1],
                          self.phi_grid[pj.start], self.phi_grid[pj.stop - 1]))
        return sorted(boxes)

    def lowest_p(self) -> float | None:
        """Smallest grid p whose slab contains a true cell."""
        hits = np.flatnonzero(self.mask.any(axis=(0, 1)))
        return float(self.p_grid[hits[0]]) if hits.size else None


def _map_rows(fn, n_rows: int, threads: int) -> list:
    if threads <= 1:
        return [fn(i) for i in range(n_rows)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_rows)))


def evaluate_grid(metric: Metric, theta_grid, phi_grid, p_grid, threads: int = 1) -> np.ndarray:
    """Metric on the full (theta, phi, p) product grid, one theta row per task.

    Each row is computed by the same operations regardless of ``threads``, so
    the result is bitwise independent of scheduling.
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    phi_col = np.asarray(phi_grid, dtype=float)[:, None]
    p_row = np.asarray(p_grid, dtype=float)[None, :]

    def row(i):
        return np.asarray(metric.evaluate(theta_grid[i], phi_col, p_row), dtype=float)

    return np.stack(_map_rows(row, theta_grid.size, threads))


def region_mask(metric: Metric, level: float, theta_grid, phi_grid, p_grid,
                threads: int = 1, keep_values: bool = False) -> RegionMask:
    values = evaluate_grid(metric, theta_grid, phi_grid, p_grid, threads)
    return RegionMask(np.asarray(theta_grid), np.asarray(phi_grid), np.asarray(p_grid),
                      values > level, values if keep_values else None)


# -- derivative-free optimization -------------------------------------------

def nelder_mead(f: Callable[[np.ndarray], float], x0, step, xtol: float = SIMPLEX_TOL,
                max_iter: int = 20000) -> tuple[np.ndarray, float]:
    """Minimize ``f`` with a reflect/expand/contract/shrink simplex.

    Stops once the simplex diameter (largest vertex distance) is below ``xtol``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    simplex = [x0]
    for i in range(n):
        x = x0.copy()
        x[i] += step[i] if np.ndim(step) else step
        simplex.append(x)
    simplex = np.array(simplex)
    fs = np.array([f(x) for x in simplex])

    for _ in range(max_iter):
        order = np.argsort(fs, kind="stable")
        simplex, fs = simplex[order], fs[order]
        diam = max(np.linalg.norm(simplex[i] - simplex[j]) for i in range(n + 1) for j in range(i))
        if diam < xtol:
            break
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = f(xr)
        if fr < fs[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = f(xe)
            simplex[-1], fs[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fs[-2]:
            simplex[-1], fs[-1] = xr, fr
        else:
            if fr < fs[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (worst - centroid)
            fc = f(xc)
            if fc < min(fr, fs[-1]):
                simplex[-1], fs[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
                fs[1:] = [f(x) for x in simplex[1:]]
    best = int(np.argmin(fs))
    return simplex[best], float(fs[best])


class Optimum(NamedTuple):
    theta: float
    phi: float
    value: float


@dataclass(frozen=True)
class MaximizeResult:
    best: Optimum
    optima: list[Optimum]
    grid_value: float

    @property
    def theta(self) -> float:
        return self.best.theta

    @property
    def phi(self) -> float:
        return self.best.phi

    @property
    def value(self) -> float:
        return self.best.value


def _grid_local_maxima(values: np.ndarray) -> list[tuple[int, int]]:
    padded = np.pad(values, 1, constant_values=-np.inf)
    centre = padded[1:-1, 1:-1]
    is_max = np.ones_like(values, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_max &= centre >= padded[1 + di:padded.shape[0] - 1 + di, 1 + dj:padded.shape[1] - 1 + dj]
    idx = np.argwhere(is_max)
    order = np.argsort(-values[is_max], kind="stable")
    return [tuple(int(v) for v in idx[k]) for k in order]


def _canonical_angles(theta: float, phi: float) -> tuple[float, float]:
    return theta, phi % (2 * math.pi)


def maximize(metric: Metric, p: float = 1.0, theta_steps: int = DEFAULT_THETA_STEPS,
             phi_steps: int = DEFAULT_PHI_STEPS, near_tie_tol: float = NEAR_TIE_TOL,
             xtol: float = SIMPLEX_TOL, max_candidates: int = 24) -> MaximizeResult:
    """Grid search over theta in [0, pi], phi in [0, 2 pi], then simplex refinement.

    Every grid-local maximum near the top is refined; all refined optima within
    ``near_tie_tol`` of the best are returned.  Among exact ties the smallest
    (theta, phi) is reported as ``best``.
    """
    theta_grid = angle_grid(theta_steps, math.pi)
    phi_grid = angle_grid(phi_steps, 2 * math.pi)
    values = np.asarray(metric.evaluate(theta_grid[:, None], phi_grid[None, :], p), dtype=float)
    grid_best = float(values.max())
    dt = theta_grid[1] - theta_grid[0] if theta_steps > 1 else 0.1
    dp = phi_grid[1] - phi_grid[0] if phi_steps > 1 else 0.1
    spread = max(grid_best - float(values.min()), 1e-12)

    refined: list[Optimum] = []
    for i, j in _grid_local_maxima(values)[:max_candidates]:
        if values[i, j] < grid_best - 0.05 * spread:
            break
        x, fval = nelder_mead(lambda x: -metric(x[0], x[1], p), [theta_grid[i], phi_grid[j]],
                              [dt, dp], xtol=xtol)
        t, f = _canonical_angles(float(x[0]), float(x[1]))
        cand = Optimum(t, f, -fval)
        if all(math.hypot(cand.theta - o.theta, cand.phi - o.phi) > 1e-3 for o in refined):
            refined.append(cand)

    top = max(o.value for o in refined)
    optima = sorted((o for o in refined if o.value >= top - near_tie_tol), key=lambda o: (o.theta, o.phi))
    best = next(o for o in optima if o.value >= top - EXACT_TIE_TOL)
    return MaximizeResult(best, optima, grid_best)


def maximize_i3(phases: MeasurementPhases = DEFAULT_PHASES, **kwargs) -> MaximizeResult:
    return maximize(Metric.bell(phases), p=1.0, **kwargs)


def global_threshold(metric: Metric, level: float, theta_steps: int = DEFAULT_THETA_STEPS,
                     phi_steps: int = DEFAULT_PHI_STEPS, tol: float = THRESHOLD_TOL) -> Optimum | None:
    """Smallest p at which some (theta, phi) has ``metric > level``.

    Thresholds are bisected on the whole angle grid at once, then the best cell
    is polished by a simplex search over the angles.  Returns the angles and
    threshold as an :class:`Optimum` whose ``value`` is the threshold p.
    """
    theta_grid = angle_grid(theta_steps, math.pi)
    phi_grid = angle_grid(phi_steps, 2 * math.pi)
    T, F = np.meshgrid(theta_grid, phi_grid, indexing="ij")
    reachable = np.asarray(metric.evaluate(T, F, 1.0)) > level
    if not reachable.any():
        return None
    lo = np.zeros(T.shape)
    hi = np.ones(T.shape)
    while float(np.max(hi - lo)) >= tol:
        mid = 0.5 * (lo + hi)
        above = np.asarray(metric.evaluate(T, F, mid)) > level
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    thresholds = np.where(reachable, hi, np.inf)
    i, j = np.unravel_index(np.argmin(thresholds), thresholds.shape)

    def objective(x):
        t = find_threshold(x[0], x[1], metric, level, tol)
        return 2.0 if t is None else t

    dt = theta_grid[1] - theta_grid[0] if theta_steps > 1 else 0.1
    dp = phi_grid[1] - phi_grid[0] if phi_steps > 1 else 0.1
    x, fval = nelder_mead(objective, [T[i, j], F[i, j]], [dt, dp], xtol=1e-6)
    if fval > thresholds[i, j]:
        return Optimum(float(T[i, j]), float(F[i, j]), float(thresholds[i, j]))
    t, f = _canonical_angles(float(x[0]), float(x[1]))
    return Optimum(t, f, fval)


# -- contour tables -----------------------------------------------------------

BELL_LOCAL_BOUND = 2.0


@dataclass(frozen=True)
class ContourGrid:
    theta_grid: np.ndarray
    phi_grid: np.ndarray
    values: np.ndarray
    isoline: np.ndarray | None = None


def isoline_cells(values: np.ndarray, level: float) -> np.ndarray:
    """Cells whose sign of ``value - level`` differs from a 4-neighbour's."""
    side = values > level
    flag = np.zeros_like(side)
    flag[1:, :] |= side[1:, :] != side[:-1, :]
    flag[:-1, :] |= side[1:, :] != side[:-1, :]
    flag[:, 1:] |= side[:, 1:] != side[:, :-1]
    flag[:, :-1] |= side[:, 1:] != side[:, :-1]
    return flag


def contour_grid(metric: Metric, theta_grid, phi_grid) -> ContourGrid:
    """Metric of the pure state (p = 1) on a theta x phi table."""
    theta_grid = np.asarray(theta_grid, dtype=float)
    phi_grid = np.asarray(phi_grid, dtype=float)
    if theta_grid.size == 0 or phi_grid.size == 0:
        raise ValueError("contour grids must be non-empty")
    values = np.asarray(metric.evaluate(theta_grid[:, None], phi_grid[None, :], 1.0), dtype=float)
    iso = isoline_cells(values, BELL_LOCAL_BOUND) if metric.kind is MetricKind.BELL_I3 else None
    return ContourGrid(theta_grid, phi_grid, values, iso)


def periodicity_discrepancy(metric: Metric, period: float, axis: str, theta_grid, phi_grid,
                            p: float = 1.0) -> float:
    """``max |f(x + period) - f(x)|`` along ``axis`` ("theta" or "phi") over the grid."""
    T, F = np.meshgrid(np.asarray(theta_grid, float), np.asarray(phi_grid, float), indexing="ij")
    base = np.asarray(metric.evaluate(T, F, p))
    if axis == "theta":
        shifted = np.asarray(metric.evaluate(T + period, F, p))
    elif axis == "phi":
        shifted = np.asarray(metric.evaluate(T, F + period, p))
    else:
        raise ValueError("axis must be 'theta' or 'phi'")
    return float(np.max(np.abs(shifted - base)))


def max_imag_scan(theta_grid, phi_grid, conv=WignerConvention.PAPER) -> tuple[float, float, float]:
    """Largest ``|Im W|`` over pure states on the grid, with its location.

    For the AITTS the imaginary part scales with p (the noise term is real),
    so the pure states bound the whole family.
    """
    T, F = np.meshgrid(np.asarray(theta_grid, float), np.asarray(phi_grid, float), indexing="ij")
    im = max_imag_aitts(T, F, conv)
    i, j = np.unravel_index(np.argmax(im), im.shape)
    return float(im[i, j]), float(T[i, j]), float(F[i, j])
