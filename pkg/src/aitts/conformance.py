"""Replay of the published AITTS numbers against this implementation.

Each check compares a computed value with the published one at a fixed
tolerance.  Status ``paper-inconsistent`` marks published values that are
known to contradict themselves or the underlying definitions; those never
fail the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bell import DEFAULT_PHASES, MeasurementPhases, cglmp_i3
from .entanglement import entanglement_threshold, negativity
from .explore import (
    Metric,
    angle_grid,
    detect_breakpoints,
    global_threshold,
    max_imag_scan,
    maximize,
    periodicity_discrepancy,
    region_mask,
    sweep_p,
)
from .states import THETA_ISO, AittsParams, aitts, aitts_entries, catalog, lookup, schmidt_number, psi
from .wigner import WignerConvention, dwf, dwf_multiset, format_multiset

PASS = "pass"
FAIL = "fail"
INCONSISTENT = "paper-inconsistent"

PI = math.pi


@dataclass
class Check:
    id: str
    description: str
    expected: object
    computed: object
    tolerance: float
    status: str
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "id": self.id, "description": self.description, "expected": self.expected,
            "computed": self.computed, "tolerance": self.tolerance, "status": self.status,
            "note": self.note,
        }


@dataclass
class ConformanceReport:
    convention: WignerConvention
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check) -> None:
        if any(c.id == check.id for c in self.checks):
            raise ValueError(f"duplicate check id {check.id!r}")
        self.checks.append(check)

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.count(FAIL) == 0


def _status(ok: bool, flagged: bool) -> str:
    if ok:
        return PASS
    return INCONSISTENT if flagged else FAIL


def scalar_check(id, description, expected, computed, tol, flagged=False, note="") -> Check:
    ok = abs(float(computed) - float(expected)) <= tol
    return Check(id, description, float(expected), float(computed), tol, _status(ok, flagged), note)


def values_check(id, description, expected, computed, tol, flagged=False, note="") -> Check:
    """Compare two lists of reals elementwise after sorting."""
    e = sorted(float(v) for v in expected)
    c = sorted(float(v) for v in computed)
    ok = len(e) == len(c) and all(abs(a - b) <= tol for a, b in zip(e, c))
    return Check(id, description, e, c, tol, _status(ok, flagged), note)


def multiset_check(id, description, expected, computed, tol, flagged=False, note="") -> Check:
    """Compare ``[(value, count), ...]`` multisets."""
    e = sorted((float(v), int(n)) for v, n in expected)
    c = sorted((float(v), int(n)) for v, n in computed)
    ok = len(e) == len(c) and all(abs(a[0] - b[0]) <= tol and a[1] == b[1] for a, b in zip(e, c))
    return Check(id, description, [list(x) for x in e], [list(x) for x in c], tol, _status(ok, flagged), note)


def distinct(values, tol: float = 1e-6) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _density(name: str, p: float = 1.0):
    return lookup(name).density(p)


F = Fraction
S1 = ("S1_1", "S1_2", "S1_3")
S2_MAX = ("S2_1", "S2_2", "S2_3")
S2_NONMAX = ("S2_4", "S2_5", "S2_6")


def _state_checks(report: ConformanceReport) -> None:
    s31 = lookup("S3_1")
    report.add(scalar_check("states.S3_1.theta", "arccos(1/sqrt 3) ~ 0.955317", 0.955317, s31.theta, 1e-6))
    report.add(scalar_check("states.S3_1.phi", "pi/4 ~ 0.785398", 0.785398, s31.phi, 1e-6))
    e = aitts_entries(AittsParams(s31.theta, s31.phi, 0.5))
    report.add(values_check("states.iso.kappa", "kappa_i = (2p+1)/9 at p = 0.5",
                            [2 / 9] * 3, [e["kappa1"], e["kappa2"], e["kappa3"]], 1e-12))
    report.add(values_check("states.iso.tau", "tau_i = p/3 at p = 0.5",
                            [1 / 6] * 3, [e["tau1"], e["tau2"], e["tau3"]], 1e-12))
    expected = [1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3]
    computed = [schmidt_number(psi(c.theta, c.phi)) for c in catalog(include_noise=False)]
    report.add(Check("states.schmidt_numbers", "Schmidt numbers of the eleven catalog states",
                     expected, computed, 0, PASS if expected == computed else FAIL))


_E_EXPECTED = {
    "S1_1": 0.0, "S1_2": 0.0, "S1_3": 0.0,
    "S2_1": 0.5, "S2_2": 0.5, "S2_3": 0.5,
    "S2_4": 0.433013, "S2_5": 0.433013, "S2_6": 0.433013,
    "S3_1": 1.0, "S3_2": 0.932626, "noise": 0.0,
}

# (name, (theta, phi), [(p_lo, p_hi, slope, intercept), ...])
_E_LINES = (
    ("eL2", (PI / 2, PI / 6), [(0.204202, 1.0, 0.544124, -1 / 9)]),
    ("eL3", (PI / 2, PI / 4), [(2 / 11, 1.0, 11 / 18, -1 / 9)]),
    ("eL4", (THETA_ISO, PI / 6), [(0.213939, 0.277926, 0.519359, -1 / 9),
                                  (0.277926, 0.320377, 0.919146, -2 / 9),
                                  (0.320377, 1.0, 1.26596, -1 / 3)]),
    ("eL5", (THETA_ISO, PI / 4), [(0.25, 1.0, 4 / 3, -1 / 3)]),
)


def _segment_error(metric: Metric, angles, segments, margin=0.01) -> float:
    worst = 0.0
    for lo, hi, slope, intercept in segments:
        ps = np.linspace(lo + margin, hi - margin if hi < 1.0 else 1.0, 9)
        vals = metric.evaluate(angles[0], angles[1], ps)
        worst = max(worst, float(np.max(np.abs(vals - (slope * ps + intercept)))))
    return worst


def _curve_breakpoints(metric: Metric, angles, steps: int = 201) -> np.ndarray:
    ps = np.linspace(0.0, 1.0, steps)
    samples = sweep_p(angles[0], angles[1], ps, metric)
    return detect_breakpoints(samples, func=lambda p: metric(angles[0], angles[1], p))


def _entanglement_checks(report: ConformanceReport) -> None:
    em = Metric.entanglement()
    computed = {}
    for entry in catalog():
        computed[entry.name] = negativity(entry.density(1.0))
        report.add(scalar_check(f"entanglement.E.{entry.name}", f"E({entry.name}) at p = 1",
                                _E_EXPECTED[entry.name], computed[entry.name], 1e-5))
    report.add(scalar_check(
        "entanglement.E.S2_4.quoted", "E(S2_4) quoted separately as 0.481481",
        0.481481, computed["S2_4"], 1e-5, flagged=True,
        note="the published p = 1 value set and the eL2 line both give 0.433013 = sqrt(3)/4"))
    report.add(values_check("entanglement.p1_values", "distinct E values at p = 1",
                            [0, 0.433013, 0.5, 0.932626, 1], distinct(computed.values()), 1e-5))

    report.add(scalar_check("entanglement.threshold.eL5", "iso direction: E = 0 for p <= 0.25",
                            0.25, entanglement_threshold(THETA_ISO, PI / 4), 1e-6))
    report.add(scalar_check("entanglement.threshold.eL3", "(pi/2, pi/4): E = 0 for p <= 2/11",
                            2 / 11, entanglement_threshold(PI / 2, PI / 4), 1e-6))
    report.add(scalar_check("entanglement.threshold.eL2", "(pi/2, pi/6): E = 0 for p <~ 0.204202",
                            0.204202, entanglement_threshold(PI / 2, PI / 6), 1e-3))
    t = entanglement_threshold(PI / 2, 0.0)
    report.add(Check("entanglement.threshold.eL1", "(pi/2, 0): E == 0 for every p", None, t, 0,
                     PASS if t is None else FAIL))
    report.add(values_check("entanglement.breakpoints.eL4", "eL4 kinks",
                            [0.213939, 0.277926, 0.320377],
                            _curve_breakpoints(em, (THETA_ISO, PI / 6)), 1e-3))
    for name, angles, segments in _E_LINES:
        report.add(scalar_check(f"entanglement.lines.{name}", f"{name} segment formulas, max deviation",
                                0.0, _segment_error(em, angles, segments), 1e-5))

    best = maximize(em).best
    report.add(scalar_check("entanglement.max.value", "max E = 1", 1.0, best.value, 1e-6))
    report.add(values_check("entanglement.max.location", "argmax E ~ (0.955317, 0.785398)",
                            [0.955317, 0.785398], [best.theta, best.phi], 1e-2))


_N_EXPECTED = {
    "S1_1": 0.0, "S1_2": 0.0, "S1_3": 0.0,
    "S2_1": 13 / 27, "S2_2": 13 / 27, "S2_3": 13 / 27,
    "S2_4": 0.416975, "S2_5": 0.416975, "S2_6": 0.416975,
    "S3_1": 4 / 9, "S3_2": 0.421011, "noise": 0.0,
}

_W_LINES = (
    ("wL2", (PI / 2, PI / 6), True,
     [(0.315949, 0.535898, 0.234449, -0.0740741), (0.535898, 1.0, 0.787346, -0.37037)]),
    ("wL3", (PI / 2, PI / 4), False,
     [(0.285714, 0.5, 0.259259, -0.0740741), (0.5, 1.0, 23 / 27, -10 / 27)]),
    ("wL4", (THETA_ISO, PI / 6), True,
     [(0.463361, 0.500194, 0.319725, -0.148148), (0.500194, 0.61731, 0.615907, -0.296296)]),
    ("wL5", (THETA_ISO, PI / 4), False, [(0.5, 1.0, 8 / 9, -4 / 9)]),
)

_W_BREAKPOINTS = (
    ("wL2", (PI / 2, PI / 6), [0.315949, 0.535898], True),
    ("wL3", (PI / 2, PI / 4), [0.285714, 0.5], False),
    ("wL4", (THETA_ISO, PI / 6), [0.463361, 0.500194, 0.61731], True),
    ("wL5", (THETA_ISO, PI / 4), [0.5], False),
)

_S2_MULTISET = [(F(5, 81), 3), (F(-5, 162), 6), (F(1, 162), 24), (F(-1, 81), 24),
                (F(7, 162), 12), (F(13, 162), 6), (F(2, 81), 6)]
_S3_MULTISET = [(F(5, 81), 8), (F(2, 81), 36), (F(-1, 81), 36), (F(7, 162), 1)]
_NOISE_MULTISET = [(F(0), 36), (F(1, 54), 36), (F(1, 27), 9)]


def _wigner_checks(report: ConformanceReport) -> None:
    conv = report.convention
    wm = Metric.wigner(conv)
    prefix = f"wigner[{conv.value}]"

    grids = {e.name: dwf(e.density(1.0), conv) for e in catalog()}
    worst_norm = max(abs(g.total() - 1.0) for g in grids.values())
    report.add(scalar_check(f"{prefix}.normalization", "sum of all 81 DWF values is 1 (catalog states)",
                            0.0, worst_norm, 1e-12))

    for name in S1:
        report.add(multiset_check(f"{prefix}.multiset.{name}", f"DWF of {name}: {{1/9 -> 9, 0 -> 72}}",
                                  [(1 / 9, 9), (0.0, 72)], dwf_multiset(grids[name], imag_tol=None), 1e-12))
    for name in S2_MAX:
        report.add(multiset_check(f"{prefix}.multiset.{name}", f"DWF of {name}: seven-cluster multiset",
                                  _S2_MULTISET, dwf_multiset(grids[name], imag_tol=None), 1e-12))
    report.add(multiset_check(
        f"{prefix}.multiset.S3_1", "DWF of S3_1 as published", _S3_MULTISET,
        dwf_multiset(grids["S3_1"], imag_tol=None), 1e-12, flagged=True,
        note="published multiset sums to 79.5/81; computed " + format_multiset(dwf_multiset(grids["S3_1"], imag_tol=None))))
    report.add(multiset_check(
        f"{prefix}.multiset.noise", "DWF of white noise as published", _NOISE_MULTISET,
        dwf_multiset(grids["noise"], imag_tol=None), 1e-12, flagged=True,
        note="unit-trace phase-point operators force W = 1/81 everywhere"))

    computed = {}
    for entry in catalog():
        computed[entry.name] = wigner_value = _negativity_real(grids[entry.name])
        tol = 1e-9 if entry.name in S2_MAX or entry.name in S1 or entry.is_noise else 1e-5
        report.add(scalar_check(f"{prefix}.N.{entry.name}", f"N({entry.name}) at p = 1",
                                _N_EXPECTED[entry.name], wigner_value, tol))
    report.add(values_check(f"{prefix}.p1_values", "distinct N values at p = 1",
                            [0, 0.416975, 0.421011, 4 / 9, 13 / 27], distinct(computed.values()), 1e-5))

    for name, angles, expected, flagged in _W_BREAKPOINTS:
        report.add(values_check(f"{prefix}.breakpoints.{name}", f"{name} kinks", expected,
                                _curve_breakpoints(wm, angles), 1e-3, flagged=flagged))
    for name, angles, flagged, segments in _W_LINES:
        report.add(scalar_check(f"{prefix}.lines.{name}", f"{name} segment formulas, max deviation",
                                0.0, _segment_error(wm, angles, segments), 1e-5, flagged=flagged))
    quad = [wm(THETA_ISO, PI / 6, p) - (0.0787166 * p * p + 0.753744 * p - 0.411381)
            for p in np.linspace(0.63, 1.0, 9)]
    report.add(scalar_check(f"{prefix}.lines.wL4.quadratic", "wL4 quadratic tail for p >~ 0.61731",
                            0.0, max(abs(v) for v in quad), 1e-5, flagged=True,
                            note="the computed curve is piecewise linear with a further kink near p = 0.8505"))
    report.add(scalar_check(f"{prefix}.points.wL3.half", "wL3 passes through (0.5, 1/18)",
                            1 / 18, wm(PI / 2, PI / 4, 0.5), 1e-9))
    report.add(scalar_check(f"{prefix}.points.wL3.one", "wL3 passes through (1, 23/27)",
                            23 / 27, wm(PI / 2, PI / 4, 1.0), 1e-9, flagged=True,
                            note="the stated segment 23p/27 - 10/27 gives 13/27 at p = 1"))

    best = maximize(wm)
    report.add(scalar_check(f"{prefix}.N.max", "maximum N over all AITTS is 13/27 (at the S2 maximally entangled states)",
                            13 / 27, best.value, 1e-5, flagged=True,
                            note=f"computed maximum at (theta, phi) = ({best.theta:.6f}, {best.phi:.6f})"))

    grid_t = angle_grid(181, PI)
    grid_f = angle_grid(361, 2 * PI)
    im, t, f = max_imag_scan(grid_t, grid_f, conv)
    im_cat = max(g.max_imag() for g in grids.values())
    report.add(scalar_check(
        f"{prefix}.imaginary_part", "DWF values are real (max |Im W| over a 181 x 361 grid and the catalog)",
        0.0, max(im, im_cat), 1e-10, flagged=True,
        note=f"largest |Im W| at (theta, phi) = ({t:.6f}, {f:.6f}); N uses Re W"))


def _negativity_real(grid) -> float:
    from .wigner import negativity_of_values

    return negativity_of_values(grid.real)


_I3_P1_VALUES = [0.0, 1.0, 1.1547, 1.73205, 2.0, 2.84399, 2.87293]

# per-state assignments, in the order they are published (mutually contradictory)
_I3_TEXT = (
    ("S2_1", 0.0), ("S2_2", 0.0), ("S2_3", 0.0),
    ("S2_4", 1.0), ("S2_6", 1.0),
    ("S2_1", 1.1547), ("S2_3", 1.1547),
    ("S2_5", 1.73205), ("S2_2", 2.0),
    ("S3_1", 2.84399), ("S3_1", 2.87293),
)

_I3_LINES = (
    ("bL1", [(PI / 2, 0.0), (PI / 2, PI / 2), (0.0, 0.0)], 0.0),
    ("bL2", [(PI / 2, PI / 6), (PI / 6, PI / 2)], 1.0),
    ("bL3", [(PI / 2, PI / 4), (PI / 4, PI / 2)], 1.1547),
    ("bL4", [(PI / 6, 0.0)], 1.73205),
    ("bL5", [(PI / 4, 0.0)], 2.0),
    ("bL6", [(THETA_ISO, PI / 6)], 2.84399),
    ("bL7", [(THETA_ISO, PI / 4)], 2.87293),
)


def _bell_checks(report: ConformanceReport, phases: MeasurementPhases) -> None:
    bm = Metric.bell(phases)
    values = {e.name: cglmp_i3(e.density(1.0), phases) for e in catalog()}
    report.add(scalar_check("bell.I3.noise", "I3(noise) = 0", 0.0, values["noise"], 1e-12))
    report.add(scalar_check("bell.I3.S3_1", "I3(S3_1) ~ 2.87293", 2.87293, values["S3_1"], 1e-4))
    report.add(scalar_check("bell.I3.min", "I3 = -2 at (pi/4, pi, 1)", -2.0,
                            cglmp_i3(aitts(AittsParams(PI / 4, PI, 1.0)), phases), 1e-9))
    report.add(values_check("bell.p1_values", "distinct I3 values at p = 1",
                            _I3_P1_VALUES, distinct([v for k, v in values.items() if k != "noise"], 1e-6), 1e-4))
    for k, (name, expected) in enumerate(_I3_TEXT):
        report.add(scalar_check(f"bell.assigned.{k}.{name}", f"I3({name}) ~ {expected} as assigned per state",
                                expected, values[name], 1e-4, flagged=True))
    for name, directions, slope in _I3_LINES:
        computed = [bm(t, f, 1.0) for t, f in directions]
        report.add(values_check(f"bell.lines.{name}", f"{name}: I3 = {slope} p for its directions",
                                [slope] * len(directions), computed, 1e-4))
    ps = np.linspace(0.0, 1.0, 11)
    lin = max(abs(bm(t, f, p) - p * bm(t, f, 1.0)) for t, f in [(0.3, 1.1), (THETA_ISO, PI / 6), (2.0, 4.0)] for p in ps)
    report.add(scalar_check("bell.linearity", "I3(rho(p)) = p I3(psi)", 0.0, lin, 1e-10))

    grid = bm.evaluate(angle_grid(181, PI)[:, None], angle_grid(361, 2 * PI)[None, :], 1.0)
    lo, hi = float(grid.min()), float(grid.max())
    ok = lo >= -2.0 - 1e-9 and hi <= 2.91485 + 1e-4
    report.add(Check("bell.range", "I3(psi) on a 181 x 361 grid stays within [-2, 2.91485]",
                     [-2.0, 2.91485], [lo, hi], 1e-4, PASS if ok else FAIL))

    res = maximize(bm)
    report.add(scalar_check("bell.max.value", "max I3 = 2.91485", 2.91485, res.value, 1e-4))
    report.add(values_check("bell.max.location", "argmax I3 ~ (0.906006, 0.67002)",
                            [0.906006, 0.67002], [res.theta, res.phi], 1e-2))
    other = [o for o in res.optima if abs(o.theta - res.theta) > 0.1 or abs(o.phi - res.phi) > 0.1]
    second = [other[0].theta, other[0].phi] if other else [float("nan"), float("nan")]
    report.add(values_check("bell.max.second", "symmetric optimum ~ (2.23559, 3.81161)",
                            [2.23559, 3.81161], second, 1e-2))
    gt = global_threshold(bm, 2.0)
    report.add(scalar_check("bell.global_threshold", "I3 > 2 possible only for p >~ 0.686141",
                            0.686141, gt.value if gt else float("nan"), 1e-3))

    p_star = 0.985618
    mask = region_mask(bm, 2.87293, angle_grid(181, PI), angle_grid(361, 2 * PI),
                       [p_star - 1e-3, p_star + 1e-3, 1.0])
    report.add(Check("bell.region_above_iso.onset",
                     "I3 > 2.87293 region empty at p = 0.985618 - 1e-3, nonempty at + 1e-3",
                     [False, True], [mask.any_at(0), mask.any_at(1)], 1e-3,
                     PASS if (not mask.any_at(0) and mask.any_at(1)) else FAIL))
    boxes = mask.slab_boxes(2)
    expected = [[0.8112, 1.002, 0.5388, 0.7996], [2.141, 2.330, 3.681, 3.941]]
    got = [list(b) for b in boxes]
    ok = len(got) == 2 and all(abs(a - b) <= 0.02 for e, g in zip(expected, got) for a, b in zip(e, g))
    report.add(Check("bell.region_above_iso.boxes", "I3 > 2.87293 at p = 1: two (theta, phi) boxes",
                     expected, got, 0.02, PASS if ok else FAIL, note="1-degree grid"))


def _periodicity_checks(report: ConformanceReport) -> None:
    em = Metric.entanglement()
    t = angle_grid(91, PI)
    f = angle_grid(181, 2 * PI)
    report.add(scalar_check("explore.E.theta_period", "E(psi) has period pi in theta",
                            0.0, periodicity_discrepancy(em, PI, "theta", t, f), 1e-10))
    report.add(scalar_check("explore.E.phi_period", "E(psi) has period pi/4 in phi",
                            0.0, periodicity_discrepancy(em, PI / 4, "phi", t, f), 1e-10, flagged=True,
                            note="measured max |E(phi + pi/4) - E(phi)|"))


def verify_paper(convention=WignerConvention.PAPER, phases: MeasurementPhases = DEFAULT_PHASES) -> ConformanceReport:
    report = ConformanceReport(WignerConvention(convention))
    _state_checks(report)
    _entanglement_checks(report)
    _wigner_checks(report)
    _bell_checks(report, phases)
    _periodicity_checks(report)
    return report
