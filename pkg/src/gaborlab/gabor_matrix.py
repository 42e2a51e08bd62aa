"""Gabor matrices, off-diagonal decay profiles and the C_v / Sjostrand norms."""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SizeLimitError
from .gabor import Lattice, Window, analyze
from .quantize import as_symbol, weyl_quantize
from .tf_core import as_signal, cross_wigner, inv2, j_map, require_odd, tf_shift

SYMBOL_STFT_MAX_N = 32


@dataclass(frozen=True, eq=False)
class GaborMatrix:
    """K x K matrix indexed by lattice points in coefficient order."""

    values: np.ndarray
    lattice: Lattice

    def __post_init__(self):
        K = self.lattice.K
        if self.values.shape != (K, K):
            raise DimensionError(f"Gabor matrix shape {self.values.shape} != ({K}, {K})")

    def __matmul__(self, other):
        if isinstance(other, GaborMatrix):
            return GaborMatrix(self.values @ other.values, self.lattice)
        return self.values @ other

    @property
    def H(self):
        return GaborMatrix(self.values.conj().T, self.lattice)


@dataclass(frozen=True, eq=False)
class DecayProfile:
    """Translation-invariant envelope h on the lattice difference group."""

    values: np.ndarray
    lattice: Lattice

    def rows(self):
        """(mu_k, mu_l, h) rows with signed lattice indices, for CSV output."""
        lat = self.lattice
        k = lat.indices[:, 0]
        l = lat.indices[:, 1]
        k = np.where(k >= (lat.n_time + 1) // 2, k - lat.n_time, k)
        l = np.where(l >= (lat.n_freq + 1) // 2, l - lat.n_freq, l)
        return list(zip(k.tolist(), l.tolist(), self.values.tolist()))


def gabor_matrix(T, sys, window=Window.PRIMARY):
    """M_{lambda mu} = <T pi(mu) w, pi(lambda) w> for the selected window w."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (sys.N, sys.N):
        raise DimensionError(f"operator shape {T.shape} != ({sys.N}, {sys.N})")
    G = sys.atoms(window)
    return GaborMatrix(G.conj().T @ T @ G, sys.lattice)


def diagram_check(T, sys, f):
    """Relative residual of C_g(T f) = M(T) C_gamma f (absolute when C_g(T f) = 0)."""
    T = np.asarray(T, dtype=complex)
    f = as_signal(f, sys.N)
    lhs = analyze(sys, T @ f, Window.PRIMARY)
    rhs = gabor_matrix(T, sys).values @ analyze(sys, f, Window.DUAL)
    err = float(np.linalg.norm(lhs - rhs))
    scale = float(np.linalg.norm(lhs))
    return err / scale if scale > 0 else err


def decay_profile(M):
    """h(mu) = max_lambda |M[lambda, lambda - mu]| over the cyclic lattice group."""
    h = np.zeros(M.lattice.K)
    np.maximum.at(h, M.lattice.difference_table.ravel(), np.abs(M.values).ravel())
    return DecayProfile(h, M.lattice)


def cv_norm(M, v):
    """||M||_{C_v} = sum_mu h(mu) v(mu); accepts a matrix or a ready profile."""
    h = M if isinstance(M, DecayProfile) else decay_profile(M)
    lat = h.lattice
    return float(np.sum(h.values * v(lat.points, lat.N)))


def lattice_shift(lattice, mu):
    """Permutation matrix sending c to (c_{lambda - mu})_lambda; ``mu`` is a (k, l) index pair."""
    K = lattice.K
    k, l = lattice.indices[:, 0], lattice.indices[:, 1]
    A = np.zeros((K, K), dtype=complex)
    A[np.arange(K), lattice.index(k - mu[0], l - mu[1])] = 1.0
    return GaborMatrix(A, lattice)


def symbol_stft(sigma, g):
    """2-D STFT of the symbol with window Phi = W(g, g), as an (N, N, N, N) array.

    ``out[z1, z2, zeta1, zeta2] = sum_t sigma(t) conj(Phi(t - z)) exp(-2 pi i zeta.t / N)``.
    """
    sigma = as_symbol(sigma)
    N = sigma.shape[0]
    require_odd(N)
    if N > SYMBOL_STFT_MAX_N:
        raise SizeLimitError(f"symbol STFT stores N^4 entries; N={N} exceeds {SYMBOL_STFT_MAX_N}")
    g = as_signal(g, N)
    phi = cross_wigner(g, g)
    t = np.arange(N)
    idx = (t[None, :] - t[:, None]) % N
    window = np.conj(phi[idx[:, None, :, None], idx[None, :, None, :]])
    return np.fft.fft2(sigma[None, None] * window, axes=(2, 3))


def sjostrand_norm(sigma, g, v):
    """Discrete M^{inf,1}_v norm: sum_zeta max_z |V_Phi sigma(z, zeta)| v(zeta)."""
    V = symbol_stft(sigma, g)
    envelope = np.abs(V).max(axis=(0, 1))
    return float(np.sum(envelope * v.grid(sigma.shape[0])))


def matrix_entry_ratios(sigma, g, pairs):
    """|<sigma^w pi(z) g, pi(w) g>| / |V_Phi sigma(h(w + z), j(w - z))| for each (w, z).

    The ratio is the finite-model constant linking Gabor-matrix entries to
    the symbol STFT; it should not depend on the pair or the symbol.
    """
    sigma = as_symbol(sigma)
    N = sigma.shape[0]
    h = inv2(N)
    T = weyl_quantize(sigma)
    V = symbol_stft(sigma, g)
    out = []
    for w, z in pairs:
        entry = np.vdot(tf_shift(g, w), T @ tf_shift(g, z))
        u = ((h * (w[0] + z[0])) % N, (h * (w[1] + z[1])) % N)
        zeta = j_map((w[0] - z[0], w[1] - z[1]), N)
        out.append(abs(entry) / abs(V[u[0], u[1], zeta[0], zeta[1]]))
    return np.array(out)
