import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings

from aitts.numerics import hermitian_eigenvalues, partial_transpose
from aitts.states import (
    THETA_ISO,
    AittsParams,
    AngleRangeWarning,
    DensityMatrix,
    PureTwoQutrit,
    aitts,
    aitts_entries,
    aitts_matrix,
    catalog,
    lookup,
    noise,
    psi,
    schmidt_number,
)

from conftest import phis, probs, random_params, thetas


def test_psi_amplitudes_sit_on_the_diagonal_basis():
    a = psi(0.3, 1.1).amplitudes
    assert a[0] == pytest.approx(math.sin(0.3) * math.cos(1.1))
    assert a[4] == pytest.approx(math.sin(0.3) * math.sin(1.1))
    assert a[8] == pytest.approx(math.cos(0.3))
    assert np.count_nonzero(a) == 3


def test_matrix_layout_matches_entry_formulas():
    params = AittsParams(0.7, 2.1, 0.6)
    m = aitts(params).matrix.real
    e = aitts_entries(params)
    assert m[0, 0] == pytest.approx(e["kappa1"])
    assert m[4, 4] == pytest.approx(e["kappa2"])
    assert m[8, 8] == pytest.approx(e["kappa3"])
    assert m[0, 4] == pytest.approx(e["tau1"])
    assert m[0, 8] == pytest.approx(e["tau2"])
    assert m[4, 8] == pytest.approx(e["tau3"])
    off = [m[i, i] for i in range(9) if i not in (0, 4, 8)]
    assert np.allclose(off, e["eps"])


def test_iso_angles_at_full_weight():
    e = aitts_entries(AittsParams(THETA_ISO, math.pi / 4, 1.0))
    for key in ("kappa1", "kappa2", "kappa3", "tau1", "tau2", "tau3"):
        assert e[key] == pytest.approx(1 / 3, abs=1e-12)
    assert e["eps"] == 0


def test_kappa1_example():
    e = aitts_entries(AittsParams(math.pi / 2, 0.0, 0.5))
    assert e["kappa1"] == pytest.approx(0.5 + 0.5 / 9)


def test_p_zero_gives_noise():
    assert np.allclose(aitts(AittsParams(1.0, 2.0, 0.0)).matrix, noise().matrix, atol=1e-15)


def test_invariants_on_random_params(rng):
    for t, f, p in random_params(rng, 1000):
        m = aitts_matrix(t, f, p)
        assert np.max(np.abs(m - m.conj().T)) < 1e-12
        assert abs(np.trace(m) - 1) < 1e-12
        assert np.linalg.eigvalsh(m)[0] > -1e-12


def test_density_validation_runs_jacobi(rng):
    # a handful through the full validating constructor
    for t, f, p in random_params(rng, 25):
        DensityMatrix(aitts_matrix(t, f, p))


def test_pt_a_equals_pt_b_for_real_symmetric_aitts(rng):
    for t, f, p in random_params(rng, 200):
        m = aitts_matrix(t, f, p)
        assert np.array_equal(partial_transpose(m, "A"), partial_transpose(m, "B"))


def test_invalid_density_matrices():
    with pytest.raises(ValueError, match="9x9"):
        DensityMatrix(np.eye(3) / 3)
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(np.eye(9))
    bad = np.diag([1.5, -0.5] + [0.0] * 7)
    with pytest.raises(ValueError, match="positive"):
        DensityMatrix(bad)


def test_density_is_read_only():
    rho = aitts(AittsParams(1, 1, 1))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 2


def test_pure_state_requires_normalization():
    with pytest.raises(ValueError):
        PureTwoQutrit(np.ones(9))
    with pytest.raises(ValueError):
        PureTwoQutrit(np.ones(4) / 2)


def test_params_validation():
    with pytest.raises(ValueError):
        AittsParams(0.0, 0.0, 1.5)
    with pytest.raises(ValueError):
        AittsParams(float("nan"), 0.0, 0.5)
    with pytest.warns(AngleRangeWarning):
        AittsParams(4.0, 0.0, 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        AittsParams(math.pi, 2 * math.pi, 0.5)


def test_catalog_names_and_schmidt_numbers():
    entries = catalog(include_noise=False)
    assert [e.name for e in entries] == ["S1_1", "S1_2", "S1_3", "S2_1", "S2_2", "S2_3",
                                         "S2_4", "S2_5", "S2_6", "S3_1", "S3_2"]
    expected = [1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3]
    assert [schmidt_number(psi(e.theta, e.phi)) for e in entries] == expected
    assert catalog()[-1].is_noise


def test_lookup_unknown_lists_names():
    with pytest.raises(KeyError, match="S3_1"):
        lookup("S4_1")


def test_noise_entry_density():
    assert np.allclose(lookup("noise").density(0.3).matrix, np.eye(9) / 9)


def test_purity_bounds():
    assert aitts(AittsParams(1, 1, 1)).purity() == pytest.approx(1.0)
    assert noise().purity() == pytest.approx(1 / 9)


@settings(max_examples=60, deadline=None)
@given(thetas, phis, probs)
def test_spectrum_is_known(theta, phi, p):
    # eigenvalues: p + (1-p)/9 once and (1-p)/9 eight times
    vals = hermitian_eigenvalues(aitts_matrix(theta, phi, p))
    expected = sorted([(1 - p) / 9] * 8 + [p + (1 - p) / 9])
    assert np.allclose(vals, expected, atol=1e-12)
