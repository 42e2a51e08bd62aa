import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaborlab.errors import WeightError
from gaborlab.gabor import Lattice, Window, build_system, periodized_gaussian
from gaborlab.generators import random_banded_matrix
from gaborlab.modspace import MixedNormSpec, Weight, mixed_norm, mod_norm, moderate, young_bound_check

from conftest import cnormal

WEIGHTS = [Weight.constant(), Weight.polynomial(1.5), Weight.polynomial(2), Weight.subexponential(1.0, 0.5)]


def naive_mixed(c, lat, p, q, m):
    grid = np.zeros((lat.n_freq, lat.n_time))
    for idx, (k, l) in enumerate(lat.indices):
        grid[l, k] = abs(c[idx]) * m(lat.points[idx])
    rows = []
    for l in range(lat.n_freq):
        row = grid[l]
        rows.append(row.max() if p == np.inf else (row**p).sum() ** (1 / p))
    rows = np.array(rows)
    return rows.max() if q == np.inf else (rows**q).sum() ** (1 / q)


def test_weight_frozen_values():
    v = Weight.polynomial(2)
    assert v(np.array([3, 4]), 48) == 36.0
    assert v(np.array([47, 0]), 48) == 4.0  # 47 is -1 mod 48
    assert np.isclose(Weight.subexponential(1.0, 0.5)(np.array([3, 4]), 48), np.exp(np.sqrt(5)))
    assert Weight.constant()(np.array([5, 9]), 16) == 1.0


def test_weight_rejections():
    with pytest.raises(WeightError, match="GRS"):
        Weight.subexponential(1.0, 1.0)
    with pytest.raises(WeightError):
        Weight.polynomial(-1)
    table = np.ones((5, 5))
    table[0, 0] = 2
    with pytest.raises(WeightError, match="v\\(0\\)"):
        Weight.custom(table)
    table = np.ones((5, 5))
    table[1, 0] = 3
    with pytest.raises(WeightError, match="even"):
        Weight.custom(table)
    t = np.ones((5, 5))
    t[1, :] = t[4, :] = 10.0
    with pytest.raises(WeightError, match="submultiplicative"):
        Weight.custom(t)


def test_custom_weight_from_polynomial_table():
    N = 9
    v = Weight.polynomial(2)
    w = Weight.custom(v.grid(N), grs=True)
    np.testing.assert_allclose(w.grid(N), v.grid(N))
    with pytest.raises(WeightError):
        w(np.array([0, 0]), 11)


def test_j_inverse_rotates_argument():
    w = Weight.polynomial(1)
    z = np.array([2, 5])
    assert w.j_inverse()(z, 15) == w(np.array([-5, 2]), 15)


@given(st.sampled_from(WEIGHTS), st.integers(2, 60), st.integers(0, 2**32 - 1))
def test_weights_submultiplicative_on_group(v, N, seed):
    r = np.random.default_rng(seed)
    w, z = r.integers(0, N, (50, 2)), r.integers(0, N, (50, 2))
    assert np.all(v(w + z, N) <= v(w, N) * v(z, N) * (1 + 1e-12))
    assert np.allclose(v(-w, N), v(w, N))


def test_moderate_constants_frozen():
    v = Weight.polynomial(2)
    assert moderate(v, v, 48).C == pytest.approx(1.0)
    assert moderate(Weight.constant(), v, 48).C == pytest.approx(1.0)
    # m = v^{1/2} is v-moderate with C <= 1
    assert moderate(Weight.polynomial(1), v, 20).C <= 1.0 + 1e-12


@given(st.sampled_from([1.0, 1.5, 2.0, 3.0, np.inf]), st.sampled_from([1.0, 2.0, np.inf]), st.integers(0, 2**32 - 1))
def test_mixed_norm_matches_loops(p, q, seed):
    lat = Lattice(12, 2, 3)
    v = Weight.polynomial(2)
    spec = MixedNormSpec(p, q, moderate(v, v, 12))
    c = cnormal(np.random.default_rng(seed), lat.K)
    assert np.isclose(mixed_norm(c, lat, spec), naive_mixed(c, lat, p, q, lambda z: v(z, 12)))


def test_mixed_norm_22_unweighted_is_l2(rng):
    lat = Lattice(12, 3, 2)
    c = cnormal(rng, lat.K)
    spec = MixedNormSpec(2, 2, moderate(Weight.constant(), Weight.constant(), 12))
    assert np.isclose(mixed_norm(c, lat, spec), np.linalg.norm(c))


@given(st.integers(0, 2**32 - 1))
def test_mixed_norm_is_a_norm(seed):
    r = np.random.default_rng(seed)
    lat = Lattice(12, 2, 2)
    spec = MixedNormSpec(1.5, 3, moderate(Weight.polynomial(1), Weight.polynomial(1), 12))
    a, b = cnormal(r, lat.K), cnormal(r, lat.K)
    s = complex(*r.normal(size=2))
    assert np.isclose(mixed_norm(s * a, lat, spec), abs(s) * mixed_norm(a, lat, spec))
    assert mixed_norm(a + b, lat, spec) <= mixed_norm(a, lat, spec) + mixed_norm(b, lat, spec) + 1e-12


def test_mixed_norm_spec_validates():
    m = moderate(Weight.constant(), Weight.constant(), 4)
    with pytest.raises(WeightError):
        MixedNormSpec(0.5, 1, m)


def test_mod_norm_primary_dual_equivalent(rng):
    sys = build_system(periodized_gaussian(48), 4, 4)
    v = Weight.polynomial(2)
    spec = MixedNormSpec(1, np.inf, moderate(v, v, 48))
    ratios = [mod_norm(f, sys, spec) / mod_norm(f, sys, spec, Window.DUAL) for f in (cnormal(rng, 48) for _ in range(30))]
    assert 2.5 < min(ratios) <= max(ratios) < 3.5


@pytest.mark.parametrize("p,q", [(1, 1), (2, np.inf), (np.inf, 1)])
def test_young_bound_holds(p, q, rng):
    lat = Lattice(24, 3, 3)
    v = Weight.polynomial(2)
    M = random_banded_matrix(lat, 2, rng)
    rep = young_bound_check(M, v, MixedNormSpec(p, q, moderate(v, v, 24)), trials=100, rng=rng)
    assert rep.ok and rep.max_ratio > 0
