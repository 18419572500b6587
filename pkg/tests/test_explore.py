import math

import numpy as np
import pytest

from aitts.explore import (
    CurveSample,
    Metric,
    MetricKind,
    RegionMask,
    angle_grid,
    contour_grid,
    detect_breakpoints,
    evaluate_grid,
    find_threshold,
    global_threshold,
    isoline_cells,
    maximize,
    maximize_i3,
    nelder_mead,
    periodicity_discrepancy,
    region_mask,
    sweep_p,
)
from aitts.states import THETA_ISO, AittsParams, aitts
from aitts.wigner import WignerConvention

PI = math.pi
METRICS = [Metric.entanglement(), Metric.wigner(), Metric.wigner("gross"), Metric.bell()]


def test_metric_parse_aliases():
    assert Metric.parse("e").kind is MetricKind.ENTANGLEMENT
    assert Metric.parse("N", "gross").convention is WignerConvention.GROSS
    assert Metric.parse("bell").symbol == "I3"
    with pytest.raises(ValueError):
        Metric.parse("purity")


@pytest.mark.parametrize("metric", METRICS, ids=lambda m: f"{m.symbol}-{m.convention.value}")
def test_fast_path_matches_reference(metric, rng):
    for t, f, p in np.column_stack([rng.uniform(0, PI, 25), rng.uniform(0, 2 * PI, 25), rng.uniform(0, 1, 25)]):
        assert metric(t, f, p) == pytest.approx(metric.of_state(aitts(AittsParams(t, f, p))), abs=1e-10)


def test_sweep_reference_and_fast_agree():
    ps = np.linspace(0, 1, 11)
    for metric in METRICS:
        fast = sweep_p(THETA_ISO, PI / 6, ps, metric)
        ref = sweep_p(THETA_ISO, PI / 6, ps, metric, reference=True)
        assert np.allclose([s.value for s in fast], [s.value for s in ref], atol=1e-10)


def test_sweep_rejects_bad_p():
    with pytest.raises(ValueError):
        sweep_p(1.0, 1.0, [0.5, 1.5], Metric.entanglement())


def test_find_threshold():
    e = Metric.entanglement()
    assert find_threshold(THETA_ISO, PI / 4, e) == pytest.approx(0.25, abs=1e-6)
    assert find_threshold(PI / 2, 0.0, e) is None
    assert find_threshold(THETA_ISO, PI / 4, Metric.bell(), level=2.0) == pytest.approx(2 / 2.872934, abs=1e-6)
    # already above the level at p = 0
    assert find_threshold(THETA_ISO, PI / 4, e, level=-1.0) == 0.0


def test_breakpoints_of_synthetic_curve():
    ps = np.linspace(0, 1, 101)
    f = lambda p: max(0.0, 2 * p - 0.5) + max(0.0, p - 0.7)  # kinks at 0.25 and 0.7
    samples = [CurveSample(p, f(p)) for p in ps]
    assert np.allclose(detect_breakpoints(samples), [0.25, 0.7], atol=1e-9)
    assert np.allclose(detect_breakpoints(samples, func=f), [0.25, 0.7], atol=1e-5)


def test_breakpoints_need_data():
    with pytest.raises(ValueError):
        detect_breakpoints([CurveSample(0, 0), CurveSample(1, 1)])
    uneven = [CurveSample(p, p) for p in (0, 0.1, 0.3, 0.4, 0.5, 0.9)]
    with pytest.raises(ValueError):
        detect_breakpoints(uneven)


@pytest.mark.parametrize("angles,expected", [
    ((PI / 2, PI / 6), [0.204202]),
    ((THETA_ISO, PI / 6), [0.213939, 0.277926, 0.320377]),
    ((THETA_ISO, PI / 4), [0.25]),
])
def test_entanglement_breakpoints(angles, expected):
    m = Metric.entanglement()
    samples = sweep_p(*angles, np.linspace(0, 1, 101), m)
    found = detect_breakpoints(samples, func=lambda p: m(*angles, p))
    assert np.allclose(found, expected, atol=1e-3)


@pytest.mark.parametrize("angles,expected", [
    ((PI / 2, PI / 6), [0.315949, 0.535898]),
    ((PI / 2, PI / 4), [0.285714, 0.5]),
    ((THETA_ISO, PI / 4), [0.5]),
])
def test_wigner_breakpoints(angles, expected):
    m = Metric.wigner()
    samples = sweep_p(*angles, np.linspace(0, 1, 101), m)
    found = detect_breakpoints(samples, func=lambda p: m(*angles, p))
    assert np.allclose(found, expected, atol=1e-3)


def test_region_mask_thread_independence():
    t, f, p = angle_grid(37, PI), angle_grid(73, 2 * PI), angle_grid(21, 1.0)
    for metric in METRICS:
        a = region_mask(metric, 0.0, t, f, p, threads=1, keep_values=True)
        b = region_mask(metric, 0.0, t, f, p, threads=4, keep_values=True)
        assert np.array_equal(a.mask, b.mask)
        assert a.values.tobytes() == b.values.tobytes()


def test_evaluate_grid_shape():
    vals = evaluate_grid(Metric.bell(), [0, 1], [0, 1, 2], [0.5])
    assert vals.shape == (2, 3, 1)


def test_region_mask_validation():
    with pytest.raises(ValueError):
        RegionMask(np.array([0.0, 1.0]), np.array([0.0]), np.array([1.0]), np.zeros((1, 1, 1), bool))
    with pytest.raises(ValueError):
        RegionMask(np.array([1.0, 0.0]), np.array([0.0]), np.array([1.0]), np.zeros((2, 1, 1), bool))


def test_bell_region_onset_and_boxes():
    t, f = angle_grid(181, PI), angle_grid(361, 2 * PI)
    mask = region_mask(Metric.bell(), 2.87293, t, f, [0.985618 - 1e-3, 0.985618 + 1e-3, 1.0])
    assert not mask.any_at(0) and mask.any_at(1)
    boxes = mask.slab_boxes(2)
    assert len(boxes) == 2
    assert np.allclose(boxes[0], [0.8112, 1.002, 0.5388, 0.7996], atol=0.02)
    assert np.allclose(boxes[1], [2.141, 2.330, 3.681, 3.941], atol=0.02)
    assert mask.lowest_p() == pytest.approx(0.985618 + 1e-3)


def test_nelder_mead_on_quadratic():
    x, fx = nelder_mead(lambda v: (v[0] - 1) ** 2 + 3 * (v[1] + 2) ** 2, [0, 0], [0.5, 0.5], xtol=1e-9)
    assert np.allclose(x, [1, -2], atol=1e-7)
    assert fx < 1e-12


def test_maximize_i3():
    res = maximize_i3()
    assert res.value == pytest.approx(2.91485, abs=1e-4)
    assert (res.theta, res.phi) == pytest.approx((0.906006, 0.67002), abs=1e-2)
    others = [o for o in res.optima if abs(o.theta - res.theta) > 0.1]
    assert others and (others[0].theta, others[0].phi) == pytest.approx((2.23559, 3.81161), abs=1e-2)


def test_maximize_entanglement_finds_iso_state():
    res = maximize(Metric.entanglement(), theta_steps=91, phi_steps=181)
    assert res.value == pytest.approx(1.0, abs=1e-9)
    assert (res.theta, res.phi) == pytest.approx((THETA_ISO, PI / 4), abs=1e-4)
    assert len(res.optima) >= 2


def test_global_bell_threshold():
    opt = global_threshold(Metric.bell(), 2.0, theta_steps=91, phi_steps=181)
    assert opt.value == pytest.approx(0.686141, abs=1e-3)
    assert global_threshold(Metric.bell(), 3.0, theta_steps=19, phi_steps=37) is None


def test_contour_isoline():
    grid = contour_grid(Metric.bell(), angle_grid(46, PI), angle_grid(91, 2 * PI))
    assert grid.values.shape == (46, 91)
    assert grid.isoline.any()
    assert contour_grid(Metric.entanglement(), [0.5], [0.5]).isoline is None
    with pytest.raises(ValueError):
        contour_grid(Metric.bell(), [], [0.0])


def test_isoline_cells_simple():
    v = np.array([[0.0, 0.0, 3.0], [0.0, 0.0, 3.0]])
    assert isoline_cells(v, 2.0).tolist() == [[False, True, True], [False, True, True]]


def test_periodicity():
    e = Metric.entanglement()
    t, f = angle_grid(46, PI), angle_grid(91, 2 * PI)
    assert periodicity_discrepancy(e, PI, "theta", t, f) < 1e-10
    assert periodicity_discrepancy(e, PI, "phi", t, f) < 1e-10
    assert periodicity_discrepancy(e, PI / 4, "phi", t, f) > 0.1
    with pytest.raises(ValueError):
        periodicity_discrepancy(e, PI, "p", t, f)
