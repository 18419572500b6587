"""Acceptance criteria 1-12.

Each criterion prints exactly one ``CRITERION n: PASS|FAIL ...`` line (visible
even under output capture) and then asserts.  Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""
import io
import math
from contextlib import redirect_stdout
from fractions import Fraction as F

import numpy as np
import pytest

from aitts.bell import MeasurementContext, Party, cglmp_i3, joint_table, projector
from aitts.cli import main as cli_main
from aitts.entanglement import entanglement_threshold, negativity, pt_spectrum_analytic
from aitts.explore import (
    Metric,
    angle_grid,
    detect_breakpoints,
    global_threshold,
    maximize_i3,
    region_mask,
    sweep_p,
)
from aitts.numerics import hermitian_eigenvalues, partial_transpose
from aitts.states import THETA_ISO, AittsParams, DensityMatrix, aitts, aitts_matrix, catalog, lookup, noise
from aitts.wigner import (
    CLOCK_Z,
    OMEGA,
    SHIFT_X,
    WignerConvention,
    dwf,
    dwf_multiset,
    phase_point_operator,
    wigner_negativity,
)

PI = math.pi
SEED = 1234


def _rand(n, seed=SEED):
    r = np.random.default_rng(seed)
    return np.column_stack([r.uniform(0, PI, n), r.uniform(0, 2 * PI, n), r.uniform(0, 1, n)])


def _distinct(values, tol=1e-6):
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _close(a, b, tol):
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def criterion_1():
    e = {c.name: negativity(c.density(1.0)) for c in catalog(include_noise=False)}
    multiset = _distinct(e.values())
    ok = (_close(multiset, [0, 0.433013, 0.5, 0.932626, 1], 1e-5)
          and abs(e["S3_1"] - 1) <= 1e-5 and abs(e["S3_2"] - 0.932626) <= 1e-5
          and all(abs(e[n] - 0.5) <= 1e-5 for n in ("S2_1", "S2_2", "S2_3")))
    return ok, "E multiset " + ", ".join(f"{v:.6f}" for v in multiset)


def criterion_2():
    iso = entanglement_threshold(THETA_ISO, PI / 4)
    e311 = entanglement_threshold(PI / 2, PI / 4)
    el2 = entanglement_threshold(PI / 2, PI / 6)
    m = Metric.entanglement()
    kinks = detect_breakpoints(sweep_p(THETA_ISO, PI / 6, np.linspace(0, 1, 101), m),
                               func=lambda p: m(THETA_ISO, PI / 6, p))
    ok = (abs(iso - 0.25) <= 1e-6 and abs(e311 - 2 / 11) <= 1e-6 and abs(el2 - 0.204202) <= 1e-3
          and _close(kinks, [0.213939, 0.277926, 0.320377], 1e-3))
    return ok, f"iso {iso:.7f}, 2/11 {e311:.7f}, eL2 {el2:.6f}, eL4 " + ", ".join(f"{k:.6f}" for k in kinks)


def criterion_3():
    worst = 0.0
    for t, f, p in _rand(500):
        analytic = pt_spectrum_analytic(AittsParams(t, f, p)).sorted()
        numeric = hermitian_eigenvalues(partial_transpose(aitts_matrix(t, f, p), "A"))
        worst = max(worst, float(np.max(np.abs(analytic - numeric))))
    return worst <= 1e-10, f"max elementwise gap {worst:.2e} over 500 states"


S2_MULTISET = [(F(-5, 162), 6), (F(-1, 81), 24), (F(1, 162), 24), (F(2, 81), 6),
               (F(7, 162), 12), (F(5, 81), 3), (F(13, 162), 6)]


def criterion_4():
    g00 = dwf(lookup("S1_1").density(1.0))
    ok00 = (np.sum(np.abs(g00.values - 1 / 9) <= 1e-12) == 9 and np.sum(np.abs(g00.values) <= 1e-12) == 72)
    ms = dwf_multiset(dwf(lookup("S2_1").density(1.0)))
    ok_s2 = (len(ms) == len(S2_MULTISET)
             and all(abs(v - float(fv)) <= 1e-12 and n == fn for (v, n), (fv, fn) in zip(ms, S2_MULTISET))
             and sum(fv * fn for fv, fn in S2_MULTISET) == 1)
    worst = max(abs(dwf(aitts_matrix(t, f, p), conv).total() - 1)
                for t, f, p in _rand(200) for conv in WignerConvention)
    return ok00 and ok_s2 and worst <= 1e-12, f"|00> ok={ok00}, S2_1 ok={ok_s2}, max |sum W - 1| {worst:.1e}"


def criterion_5():
    n = {c.name: wigner_negativity(c.density(1.0)) for c in catalog()}
    wm = Metric.wigner()
    kinks = []
    for angles in ((PI / 2, PI / 4), (THETA_ISO, PI / 4)):
        kinks.extend(detect_breakpoints(sweep_p(*angles, np.linspace(0, 1, 101), wm), func=lambda p: wm(*angles, p)))
    imag = max(dwf(c.density(1.0)).max_imag() for c in catalog())
    ok = (abs(n["S2_1"] - 13 / 27) <= 1e-9 and all(n[s] == 0 for s in ("S1_1", "S1_2", "S1_3"))
          and abs(n["S3_1"] - 4 / 9) <= 1e-5 and abs(n["S3_2"] - 0.421011) <= 1e-5
          and abs(n["S2_4"] - 0.416975) <= 1e-5 and _close(kinks, [0.285714, 0.5, 0.5], 1e-3))
    return ok, (f"N(S2_1) {n['S2_1']:.9f}, N(S3_1) {n['S3_1']:.6f}, N(S3_2) {n['S3_2']:.6f}, "
                f"N(S2_4) {n['S2_4']:.6f}, kinks {[round(float(k), 6) for k in kinks]}, "
                f"max |Im W| {imag:.3g} (real part used)")


def criterion_6():
    iso = cglmp_i3(lookup("S3_1").density(1.0))
    nz = cglmp_i3(noise())
    low = cglmp_i3(aitts(AittsParams(PI / 4, PI, 1.0)))
    multiset = _distinct(cglmp_i3(c.density(1.0)) for c in catalog(include_noise=False))
    worst = 0.0
    for t in np.linspace(0, PI, 10):
        for f in np.linspace(0, 2 * PI, 10):
            pure = cglmp_i3(aitts_matrix(t, f, 1.0))
            for p in np.linspace(0, 1, 10):
                worst = max(worst, abs(cglmp_i3(aitts_matrix(t, f, p)) - p * pure))
    ok = (abs(iso - 2.87293) <= 1e-4 and abs(nz) <= 1e-12 and abs(low + 2) <= 1e-9
          and _close(multiset, [0, 1, 1.1547, 1.73205, 2, 2.84399, 2.87293], 1e-4) and worst < 1e-10)
    return ok, f"I3(iso) {iso:.6f}, I3(noise) {nz:.1e}, min {low:.9f}, affinity gap {worst:.1e}"


def criterion_7():
    res = maximize_i3()
    other = [o for o in res.optima if abs(o.theta - res.theta) > 0.1]
    thr = global_threshold(Metric.bell(), 2.0)
    mask = region_mask(Metric.bell(), 2.87293, angle_grid(181, PI), angle_grid(361, 2 * PI),
                       [0.985618 - 1e-3, 0.985618 + 1e-3])
    ok = (abs(res.value - 2.91485) <= 1e-4 and abs(res.theta - 0.906006) <= 1e-2 and abs(res.phi - 0.67002) <= 1e-2
          and bool(other) and abs(other[0].theta - 2.23559) <= 1e-2 and abs(other[0].phi - 3.81161) <= 1e-2
          and thr is not None and abs(thr.value - 0.686141) <= 1e-3
          and not mask.any_at(0) and mask.any_at(1))
    second = f"({other[0].theta:.6f}, {other[0].phi:.6f})" if other else "missing"
    return ok, (f"max {res.value:.6f} at ({res.theta:.6f}, {res.phi:.6f}) and {second}; "
                f"threshold {thr.value:.6f}; region onset empty={not mask.any_at(0)} / nonempty={mask.any_at(1)}")


def criterion_8():
    ok = True
    for t, f, p in _rand(1000, seed=SEED + 8):
        m = aitts_matrix(t, f, p)
        ok &= np.max(np.abs(m - m.conj().T)) <= 1e-12 and abs(np.trace(m) - 1) <= 1e-12
        ok &= np.linalg.eigvalsh(m)[0] >= -1e-12
        ok &= np.array_equal(partial_transpose(partial_transpose(m, "A"), "A"), m)
        ok &= np.array_equal(partial_transpose(m, "A"), partial_transpose(m, "B"))
    for t, f, p in _rand(20, seed=SEED + 9):
        DensityMatrix(aitts_matrix(t, f, p))  # full validation incl. Jacobi PSD check
    return bool(ok), "1000 random states: Hermitian, unit trace, PSD, PT involution, PT_A == PT_B"


def criterion_9():
    worst_sum = worst_tr = 0.0
    for conv in WignerConvention:
        ops = [phase_point_operator(x, z, conv) for x in range(3) for z in range(3)]
        worst_sum = max(worst_sum, float(np.max(np.abs(sum(ops) - 3 * np.eye(3)))))
        worst_tr = max(worst_tr, max(abs(np.trace(a) - 1) for a in ops))
    worst_comm = max(
        float(np.max(np.abs(np.linalg.matrix_power(CLOCK_Z, z) @ np.linalg.matrix_power(SHIFT_X, x)
                            - OMEGA ** (x * z) * np.linalg.matrix_power(SHIFT_X, x) @ np.linalg.matrix_power(CLOCK_Z, z))))
        for x in range(3) for z in range(3))
    ok = worst_sum <= 1e-12 and worst_tr <= 1e-12 and worst_comm <= 1e-14
    return ok, f"sum A - 3I {worst_sum:.1e}, Tr A - 1 {worst_tr:.1e}, ZX - wXZ {worst_comm:.1e}"


def criterion_10():
    worst = 0.0
    for party in Party:
        for s in (1, 2):
            ps = [projector(MeasurementContext(party, s, o)) for o in range(3)]
            worst = max(worst, float(np.max(np.abs(sum(ps) - np.eye(3)))))
            for a in range(3):
                worst = max(worst, float(np.max(np.abs(ps[a] @ ps[a] - ps[a]))))
                for b in range(a + 1, 3):
                    worst = max(worst, float(np.max(np.abs(ps[a] @ ps[b]))))
    for t, f, p in _rand(10, seed=SEED + 10):
        tab = joint_table(aitts_matrix(t, f, p))
        for sa in (1, 2):
            for sb in (1, 2):
                worst = max(worst, abs(sum(tab[(sa, sb, a, b)] for a in range(3) for b in range(3)) - 1))
        for sa in (1, 2):
            for a in range(3):
                worst = max(worst, abs(sum(tab[(sa, 1, a, b)] - tab[(sa, 2, a, b)] for b in range(3))))
        for sb in (1, 2):
            for b in range(3):
                worst = max(worst, abs(sum(tab[(1, sb, a, b)] - tab[(2, sb, a, b)] for a in range(3))))
    return worst <= 1e-12, f"max projector / completeness / no-signalling deviation {worst:.1e}"


def _cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        cli_main(argv)
    return buf.getvalue()


def criterion_11():
    grids = (angle_grid(61, PI), angle_grid(121, 2 * PI), angle_grid(26, 1.0))
    same = True
    for metric in (Metric.entanglement(), Metric.wigner(), Metric.bell()):
        masks = [region_mask(metric, 0.0, *grids, threads=n) for n in (1, 2, 8)]
        same &= all(np.array_equal(masks[0].mask, m.mask) for m in masks[1:])
    argv = ["region", "--metric", "i3", "--theta-steps", "31", "--phi-steps", "61", "--p-steps", "11", "--format", "csv"]
    stable = len({_cli(argv + ["--threads", str(n)]) for n in (1, 4)}) == 1
    stable &= len({_cli(["metrics", "S3_2", "--format", "json"]) for _ in range(2)}) == 1
    return bool(same and stable), f"masks identical across 1/2/8 threads: {same}; CLI byte-stable: {stable}"


def criterion_12():
    conv = WignerConvention.GROSS
    herm = max(float(np.max(np.abs(a - a.conj().T)))
               for a in (phase_point_operator(x, z, conv) for x in range(3) for z in range(3)))
    states = [noise()] + [lookup(n).density(1.0) for n in ("S1_1", "S1_2", "S1_3")]
    low = min(float(dwf(s, conv).real.min()) for s in states)
    return herm <= 1e-12 and low >= -1e-12, f"max |A - A^H| {herm:.1e}, min W over stabilizer states {low:.3g}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def report(k: int) -> tuple[bool, str]:
    ok, detail = CRITERIA[k - 1]()
    return ok, f"CRITERION {k}: {'PASS' if ok else 'FAIL'} - {detail}"


@pytest.mark.parametrize("k", range(1, len(CRITERIA) + 1))
def test_criterion(k, capsys):
    ok, line = report(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(k) for k in range(1, len(CRITERIA) + 1)]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
