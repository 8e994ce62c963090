import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigvalsh_tridiagonal

from df_spectra.errors import InvalidInput
from df_spectra.fd_oracle import (
    GridSpec,
    Mode,
    compare_with_closed_form,
    effective_potential,
    fd_spectrum,
    harmonic_sanity,
    tridiagonal_eigenvalues,
)
from df_spectra.molecules import builtin_molecules
from df_spectra.nu import PotentialSpec, QuantumState, energy, pekeris_inverse_r2, potential_eval
from df_spectra import units


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**31 - 1))
def test_sturm_bisection_matches_lapack(size, seed):
    rng = np.random.default_rng(seed)
    diag = rng.normal(size=size) * 5
    off = rng.normal(size=size - 1)
    count = min(size, 6)
    ours = tridiagonal_eigenvalues(diag, off, count)
    ref = eigvalsh_tridiagonal(diag, off)[:count]
    assert np.allclose(ours, ref, rtol=0, atol=1e-11 * max(1.0, np.max(np.abs(ref))))


def test_zero_offdiagonal_and_repeated_values():
    diag = np.array([3.0, 1.0, 1.0, 2.0])
    assert np.allclose(tridiagonal_eigenvalues(diag, np.zeros(3), 4), [1.0, 1.0, 2.0, 3.0])


def test_eigenvalue_input_checks():
    with pytest.raises(InvalidInput):
        tridiagonal_eigenvalues(np.ones(3), np.ones(3), 1)
    with pytest.raises(InvalidInput):
        tridiagonal_eigenvalues(np.ones(3), np.ones(2), 4)


def test_harmonic_preset():
    vals = harmonic_sanity()
    assert np.allclose(vals, [1, 3, 5, 7], atol=1e-5)


def test_grid_defaults_and_validation(co):
    g = GridSpec.default(co)
    assert g.points == 20000
    assert g.r_min == pytest.approx(1e-3 / co.alpha)
    assert g.r_max == pytest.approx(co.r_e + 30 / co.alpha)
    assert g.nodes()[0] == pytest.approx(g.r_min + g.spacing)
    assert g.refined().spacing == pytest.approx(g.spacing / 2, rel=1e-12)
    for bad in ((0.0, 1.0, 200), (2.0, 1.0, 200), (0.1, 1.0, 99)):
        with pytest.raises(InvalidInput):
            GridSpec(*bad)


def test_effective_potential_modes(co_df):
    r = np.array([0.8, 1.1282, 2.0])
    mol = co_df.molecule
    scale = units.radial_scale(mol.mu)
    exact = effective_potential(co_df, 1, 3, Mode.EXACT_CENTRIFUGAL, r)
    pek = effective_potential(co_df, 1, 3, "pekeris", r)
    assert np.allclose(exact, scale * potential_eval(co_df, r) + 2 / r ** 2, rtol=1e-12)
    assert np.allclose(pek, scale * potential_eval(co_df, r) + 2 * pekeris_inverse_r2(r, mol.alpha), rtol=1e-12)


def test_count_limit(co_df):
    with pytest.raises(InvalidInput):
        fd_spectrum(co_df, 0, count=21)


def test_co_ground_state(co_df):
    res = fd_spectrum(co_df, 0, count=2)
    assert res.mode is Mode.PEKERIS
    assert res.eigenvalues[0] == pytest.approx(0.14236930, abs=1e-4)
    assert res.eigenvalues[0] < res.eigenvalues[1]
    assert res.estimated_error >= 0


def test_deterministic(co_df):
    a = fd_spectrum(co_df, 0, count=2, estimate_error=False)
    b = fd_spectrum(co_df, 0, count=2, estimate_error=False)
    assert a.eigenvalues == b.eigenvalues


def test_grid_halving_second_order(co_df):
    closed = energy(co_df, QuantumState(0, 0, 3)).e_ev
    grid = GridSpec.default(co_df.molecule)
    coarse = fd_spectrum(co_df, 0, grid=grid, count=1, estimate_error=False).eigenvalues[0]
    fine = fd_spectrum(co_df, 0, grid=grid.refined(), count=1, estimate_error=False).eigenvalues[0]
    assert abs(coarse - closed) / abs(fine - closed) >= 3.0


def test_modes_differ_by_approximation_size(co_df):
    pek = fd_spectrum(co_df, 1, mode=Mode.PEKERIS, count=1, estimate_error=False).eigenvalues[0]
    exact = fd_spectrum(co_df, 1, mode=Mode.EXACT_CENTRIFUGAL, count=1, estimate_error=False).eigenvalues[0]
    assert 0 < abs(pek - exact) <= 2e-3


def test_compare_report_shape_and_bound(co_df):
    rows = compare_with_closed_form(co_df, [0, 1, 2], n_range=range(4))
    assert len(rows) == 12
    assert [(r.l, r.n) for r in rows[:5]] == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]
    for r in rows:
        assert abs(r.delta_pekeris) <= 1e-4
        assert abs(r.delta_pekeris) <= r.estimated_error


def test_compare_i2(db):
    spec = PotentialSpec.deng_fan(db.get("I2"))
    rows = compare_with_closed_form(spec, 0, n_range=range(4))
    assert len(rows) == 4
    assert max(abs(r.delta_pekeris) for r in rows) <= 1e-4


def test_compare_empty_range(co_df):
    assert compare_with_closed_form(co_df, [0], n_range=range(0)) == []
