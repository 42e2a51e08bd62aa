import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaborlab.errors import DimensionError, ParityError, SizeLimitError
from gaborlab.gabor import Lattice, Window, build_system, periodized_gaussian
from gaborlab.gabor_matrix import (
    GaborMatrix,
    cv_norm,
    decay_profile,
    diagram_check,
    gabor_matrix,
    lattice_shift,
    matrix_entry_ratios,
    sjostrand_norm,
    symbol_stft,
)
from gaborlab.generators import gaussian_envelope_symbol, random_banded_matrix
from gaborlab.modspace import Weight
from gaborlab.quantize import weyl_quantize
from gaborlab.tf_core import cross_wigner, tf_shift

from conftest import cnormal

V2 = Weight.polynomial(2)


@pytest.fixture(scope="module")
def sys15():
    return build_system(periodized_gaussian(15), 3, 3)


def test_entries_are_inner_products(sys15, rng):
    T = cnormal(rng, (15, 15))
    M = gabor_matrix(T, sys15)
    lat = sys15.lattice
    g = sys15.g
    for i, j in [(0, 0), (3, 7), (24, 11)]:
        expected = np.vdot(tf_shift(g, lat.points[i]), T @ tf_shift(g, lat.points[j]))
        assert np.isclose(M.values[i, j], expected)


def test_gabor_matrix_shape_check(sys15):
    with pytest.raises(DimensionError):
        gabor_matrix(np.eye(5), sys15)
    with pytest.raises(DimensionError):
        GaborMatrix(np.eye(3), sys15.lattice)


def test_diagram_identity(rng):
    sys = build_system(periodized_gaussian(24), 3, 4)
    for _ in range(5):
        assert diagram_check(cnormal(rng, (24, 24)), sys, cnormal(rng, 24)) < 1e-10


def test_decay_profile_oracle(rng):
    lat = Lattice(12, 3, 3)
    M = GaborMatrix(cnormal(rng, (lat.K, lat.K)), lat)
    h = decay_profile(M).values
    expected = np.zeros(lat.K)
    for i in range(lat.K):
        for j in range(lat.K):
            k = lat.indices[i] - lat.indices[j]
            mu = lat.index(k[0], k[1])
            expected[mu] = max(expected[mu], abs(M.values[i, j]))
    np.testing.assert_allclose(h, expected)


def test_decay_profile_rows_are_signed():
    lat = Lattice(12, 3, 3)
    rows = decay_profile(GaborMatrix(np.eye(lat.K, dtype=complex), lat)).rows()
    assert rows[0] == (0, 0, 1.0)
    ks = {r[0] for r in rows}
    assert ks == {-2, -1, 0, 1}


def test_cv_identity_and_shift():
    lat = Lattice(48, 4, 4)
    assert cv_norm(GaborMatrix(np.eye(lat.K, dtype=complex), lat), V2) == pytest.approx(1.0)
    # mu = (3, 2) in lattice units is the point (12, 8); v = (1 + sqrt(208))^2
    assert cv_norm(lattice_shift(lat, (3, 2)), V2) == pytest.approx((1 + np.sqrt(208)) ** 2)


@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_cv_submultiplicative(seed, band):
    r = np.random.default_rng(seed)
    lat = Lattice(24, 3, 4)
    A, B = random_banded_matrix(lat, band, r), random_banded_matrix(lat, band, r)
    assert cv_norm(A @ B, V2) <= cv_norm(A, V2) * cv_norm(B, V2) * (1 + 1e-12)


@given(st.integers(0, 2**32 - 1))
def test_cv_adjoint_invariant(seed):
    lat = Lattice(24, 3, 4)
    A = random_banded_matrix(lat, 2, np.random.default_rng(seed))
    assert cv_norm(A.H, V2) == pytest.approx(cv_norm(A, V2))


def test_lattice_shift_moves_coefficients(rng):
    lat = Lattice(12, 2, 3)
    c = cnormal(rng, lat.K)
    np.testing.assert_allclose(lattice_shift(lat, (1, 2)).values @ c, lat.shift_coeffs(c, 1, 2))


def test_symbol_stft_definition(rng):
    N = 5
    sigma, g = cnormal(rng, (N, N)), periodized_gaussian(N)
    V = symbol_stft(sigma, g)
    phi = cross_wigner(g, g)
    z, zeta = (2, 4), (1, 3)
    t1, t2 = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    expected = np.sum(
        sigma * np.conj(phi[(t1 - z[0]) % N, (t2 - z[1]) % N]) * np.exp(-2j * np.pi * (zeta[0] * t1 + zeta[1] * t2) / N)
    )
    assert np.isclose(V[z[0], z[1], zeta[0], zeta[1]], expected)


def test_symbol_stft_limits():
    with pytest.raises(ParityError):
        symbol_stft(np.ones((4, 4)), np.ones(4))
    with pytest.raises(SizeLimitError):
        symbol_stft(np.ones((33, 33)), np.ones(33))


def test_matrix_entry_constant_is_one_over_N(rng):
    N = 15
    g = periodized_gaussian(N)
    for _ in range(3):
        sigma = cnormal(rng, (N, N))
        pairs = [(tuple(rng.integers(0, N, 2)), tuple(rng.integers(0, N, 2))) for _ in range(30)]
        np.testing.assert_allclose(matrix_entry_ratios(sigma, g, pairs), 1 / N, rtol=1e-10)


def test_matrix_entry_constant_other_window(rng):
    N = 9
    g = cnormal(rng, N)
    sigma = cnormal(rng, (N, N))
    pairs = [(tuple(rng.integers(0, N, 2)), tuple(rng.integers(0, N, 2))) for _ in range(30)]
    np.testing.assert_allclose(matrix_entry_ratios(sigma, g, pairs), 1 / N, rtol=1e-9)


def test_cv_sjostrand_ratio_interval(sys15, rng):
    g = sys15.g
    ratios = []
    for _ in range(10):
        sigma = gaussian_envelope_symbol(15, 3.0, rng)
        M = gabor_matrix(weyl_quantize(sigma), sys15)
        ratios.append(cv_norm(M, V2) / sjostrand_norm(sigma, g, V2.j_inverse()))
    assert 0.005 < min(ratios) <= max(ratios) < 0.009


def test_tight_gram_matrix_is_projection():
    sys = build_system(periodized_gaussian(15), 3, 3)
    P = gabor_matrix(np.eye(15), sys, Window.TIGHT).values
    np.testing.assert_allclose(P @ P, P, atol=1e-12)
    np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
    assert np.isclose(np.trace(P).real, 15)
