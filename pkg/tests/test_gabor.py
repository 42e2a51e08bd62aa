import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaborlab.errors import DimensionError, FrameError, LatticeError
from gaborlab.gabor import Lattice, Window, analyze, build_system, periodized_gaussian, synthesize
from gaborlab.tf_core import tf_shift

from conftest import cnormal

DIVISOR_SETUPS = [(12, 2, 3), (15, 3, 3), (16, 2, 4), (20, 4, 2), (21, 3, 1), (24, 3, 4)]


def test_periodized_gaussian_frozen():
    g = periodized_gaussian(8)
    np.testing.assert_allclose(
        g.real,
        [0.7071018493912875, 0.4774577330621044, 0.14699254549626808, 0.02067134992504927,
         0.00264094441838184, 0.02067134992504927, 0.14699254549626808, 0.4774577330621044],
        rtol=1e-12,
    )
    assert np.isclose(np.linalg.norm(g), 1.0)


@pytest.mark.parametrize("N,a,b,A,B", [
    (15, 3, 3, 1.4411335103172482, 2.0054509012484036),
    (48, 4, 4, 2.8912321902804794, 3.1068311775957276),
    (63, 3, 3, 6.999765137088664, 7.000469714002732),
    (144, 12, 8, 0.8758961177821906, 2.135312904610106),
])
def test_frame_bounds_frozen(N, a, b, A, B):
    got = build_system(periodized_gaussian(N), a, b).frame_bounds
    np.testing.assert_allclose(got, (A, B), rtol=1e-10)


def test_lattice_rejects_non_divisor():
    with pytest.raises(LatticeError, match="lattice.a"):
        Lattice(144, 7, 12)
    with pytest.raises(LatticeError, match="lattice.b"):
        Lattice(12, 3, 5)


def test_lattice_bookkeeping():
    lat = Lattice(12, 3, 4)
    assert (lat.n_time, lat.n_freq, lat.K) == (4, 3, 12)
    assert lat.points[lat.index(2, 1)].tolist() == [6, 4]
    D = lat.difference_table
    i, j = lat.index(1, 2), lat.index(3, 1)
    assert D[i, j] == lat.index(-2, 1)


def test_critical_density_is_not_a_frame():
    with pytest.raises(FrameError, match="not a frame"):
        build_system(periodized_gaussian(144), 12, 12)


def test_zero_window_rejected():
    with pytest.raises(FrameError):
        build_system(np.zeros(12), 2, 2)


def test_frame_operator_full_lattice():
    g = cnormal(np.random.default_rng(3), 16)
    sys = build_system(g, 1, 1)
    np.testing.assert_allclose(sys.S, 16 * np.vdot(g, g).real * np.eye(16), atol=1e-10)


def test_analysis_matches_inner_products(rng):
    sys = build_system(periodized_gaussian(12), 2, 3)
    f = cnormal(rng, 12)
    c = analyze(sys, f)
    lat = sys.lattice
    for idx in range(lat.K):
        z = lat.points[idx]
        assert np.isclose(c[idx], np.vdot(tf_shift(sys.g, z), f))


def test_synthesis_is_adjoint_of_analysis(rng):
    sys = build_system(periodized_gaussian(12), 2, 3)
    f, c = cnormal(rng, 12), cnormal(rng, sys.lattice.K)
    assert np.isclose(np.vdot(analyze(sys, f), c), np.vdot(f, synthesize(sys, c)))


@pytest.mark.parametrize("N,a,b", DIVISOR_SETUPS)
def test_three_reconstructions(N, a, b, rng):
    sys = build_system(periodized_gaussian(N), a, b)
    for _ in range(5):
        f = cnormal(rng, N)
        for an, sy in ((Window.PRIMARY, Window.DUAL), (Window.DUAL, Window.PRIMARY), (Window.TIGHT, Window.TIGHT)):
            res = np.linalg.norm(synthesize(sys, analyze(sys, f, an), sy) - f) / np.linalg.norm(f)
            assert res < 1e-10


def test_supercritical_reconstruction_at_n144():
    # same window and N as the critical-density case, with b=8 so a*b < N
    sys = build_system(periodized_gaussian(144), 12, 8)
    rng = np.random.default_rng(2)
    for _ in range(100):
        f = cnormal(rng, 144)
        for an, sy in ((Window.PRIMARY, Window.DUAL), (Window.DUAL, Window.PRIMARY), (Window.TIGHT, Window.TIGHT)):
            res = np.linalg.norm(synthesize(sys, analyze(sys, f, an), sy) - f) / np.linalg.norm(f)
            assert res < 1e-10


@given(st.sampled_from(DIVISOR_SETUPS), st.integers(0, 2**32 - 1))
def test_frame_operator_commutes_with_lattice_shifts(setup, seed):
    N, a, b = setup
    sys = build_system(periodized_gaussian(N), a, b)
    r = np.random.default_rng(seed)
    f = cnormal(r, N)
    z = (a * int(r.integers(0, N // a)), b * int(r.integers(0, N // b)))
    np.testing.assert_allclose(sys.S @ tf_shift(f, z), tf_shift(sys.S @ f, z), atol=1e-10)


@given(st.sampled_from(DIVISOR_SETUPS), st.integers(0, 2**32 - 1))
def test_frame_inequality(setup, seed):
    N, a, b = setup
    sys = build_system(periodized_gaussian(N), a, b)
    f = cnormal(np.random.default_rng(seed), N)
    A, B = sys.frame_bounds
    energy = np.linalg.norm(analyze(sys, f)) ** 2
    nf = np.linalg.norm(f) ** 2
    assert A * nf * (1 - 1e-10) <= energy <= B * nf * (1 + 1e-10)


def test_tight_window_gives_identity_frame_operator():
    sys = build_system(periodized_gaussian(24), 3, 4)
    G = sys.atoms(Window.TIGHT)
    np.testing.assert_allclose(G @ G.conj().T, np.eye(24), atol=1e-10)


def test_lattice_translation_of_coefficients(rng):
    sys = build_system(periodized_gaussian(12), 2, 3)
    f = cnormal(rng, 12)
    r, s = 2, 1
    shifted = analyze(sys, tf_shift(f, (r * 2, s * 3)))
    # moving f by a lattice point moves the coefficients up to a unimodular phase
    np.testing.assert_allclose(np.abs(shifted), np.abs(sys.lattice.shift_coeffs(analyze(sys, f), r, s)), atol=1e-12)


def test_shape_errors():
    sys = build_system(periodized_gaussian(12), 2, 3)
    with pytest.raises(DimensionError):
        analyze(sys, np.ones(10))
    with pytest.raises(DimensionError):
        synthesize(sys, np.ones(5))
