"""Gabor frames on separable lattices aZ_N x bZ_N.

Coefficient arrays are flat vectors of length K = (N/a)(N/b), ordered
row-major in (frequency index l, time index k): entry ``l * (N // a) + k``
belongs to the lattice point ``(k * a, l * b)``.
"""

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, FrameError, LatticeError
from .tf_core import GroupCtx, as_signal, signed, stft

GAUSSIAN_TAIL_TERMS = 6


class Window(str, enum.Enum):
    PRIMARY = "primary"
    DUAL = "dual"
    TIGHT = "tight"


@dataclass(frozen=True)
class Lattice:
    """Separable lattice {(k a, l b)} inside Z_N x Z_N."""

    N: int
    a: int
    b: int

    def __post_init__(self):
        GroupCtx(self.N)
        for name in ("a", "b"):
            step = getattr(self, name)
            if int(step) != step or step < 1 or self.N % step:
                raise LatticeError(f"lattice.{name}={step} must be a positive divisor of N={self.N}")

    @property
    def n_time(self):
        return self.N // self.a

    @property
    def n_freq(self):
        return self.N // self.b

    @property
    def K(self):
        return self.n_time * self.n_freq

    @cached_property
    def indices(self):
        """(K, 2) array of (k, l) lattice indices in coefficient order."""
        l, k = np.divmod(np.arange(self.K), self.n_time)
        return np.stack([k, l], axis=1)

    @cached_property
    def points(self):
        """(K, 2) array of phase-space points (k a, l b)."""
        return self.indices * np.array([self.a, self.b])

    @cached_property
    def signed_points(self):
        """Lattice points as signed representatives in [-N/2, N/2)^2."""
        return signed(self.points, self.N)

    def index(self, k, l):
        return (np.mod(l, self.n_freq) * self.n_time + np.mod(k, self.n_time)).astype(int)

    @cached_property
    def difference_table(self):
        """``D[i, j]`` is the coefficient index of point_i - point_j."""
        k, l = self.indices[:, 0], self.indices[:, 1]
        return self.index(k[:, None] - k[None, :], l[:, None] - l[None, :])

    def shift_coeffs(self, c, r, s):
        """Cyclic lattice translation (T_(r,s) c)_(k,l) = c_(k-r, l-s)."""
        grid = np.asarray(c).reshape(self.n_freq, self.n_time)
        return np.roll(grid, (s, r), axis=(0, 1)).ravel()


def periodized_gaussian(N, terms=GAUSSIAN_TAIL_TERMS):
    """l2-normalised periodisation of exp(-pi t^2 / N) over Z_N."""
    t = np.arange(N, dtype=float)
    k = np.arange(-terms, terms + 1)[:, None]
    g = np.exp(-np.pi * (t[None, :] + k * N) ** 2 / N).sum(axis=0)
    return (g / np.linalg.norm(g)).astype(complex)


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window, lattice, frame operator and the derived dual/tight windows."""

    g: np.ndarray
    lattice: Lattice
    S: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)
    tight: np.ndarray = field(repr=False)
    frame_bounds: tuple

    @property
    def N(self):
        return self.lattice.N

    def window(self, which=Window.PRIMARY):
        which = Window(which)
        if which is Window.PRIMARY:
            return self.g
        if which is Window.DUAL:
            return self.gamma
        return self.tight

    @cached_property
    def _atoms(self):
        return {w: synthesis_matrix(self.window(w), self.lattice) for w in Window}

    def atoms(self, which=Window.PRIMARY):
        """N x K matrix whose columns are pi(lambda) w."""
        return self._atoms[Window(which)]


def synthesis_matrix(w, lattice):
    """Columns pi(k a, l b) w in coefficient order."""
    N = lattice.N
    w = as_signal(w, N)
    t = np.arange(N)
    x, xi = lattice.points[:, 0], lattice.points[:, 1]
    shifted = w[(t[:, None] - x[None, :]) % N]
    return np.exp(2j * np.pi * ((t[:, None] * xi[None, :]) % N) / N) * shifted


def build_system(g, a, b, rtol=1e-10):
    """Construct the Gabor system of window ``g`` on the lattice aZ_N x bZ_N.

    Raises :class:`FrameError` when the smallest eigenvalue of the frame
    operator falls below ``rtol`` times the largest.
    """
    g = as_signal(g)
    lattice = Lattice(g.shape[0], a, b)
    if not np.any(g):
        raise FrameError("window is identically zero")
    G = synthesis_matrix(g, lattice)
    S = G @ G.conj().T
    S = (S + S.conj().T) / 2
    evals, evecs = np.linalg.eigh(S)
    A, B = float(evals[0]), float(evals[-1])
    if A <= rtol * B:
        raise FrameError(
            f"not a frame: lower frame bound {A:.3e} <= {rtol:g} * upper bound {B:.3e} "
            f"(N={lattice.N}, a={a}, b={b}, K={lattice.K})"
        )
    proj = evecs.conj().T @ g
    gamma = evecs @ (proj / evals)
    tight = evecs @ (proj / np.sqrt(evals))
    return GaborSystem(g=g, lattice=lattice, S=S, gamma=gamma, tight=tight, frame_bounds=(A, B))


def _check(sys, f):
    return as_signal(f, sys.N)


def analyze(sys, f, window=Window.PRIMARY):
    """Gabor coefficients <f, pi(lambda) w> read off the subsampled STFT."""
    f = _check(sys, f)
    lat = sys.lattice
    V = stft(f, sys.window(window))
    return V[:: lat.a, :: lat.b].T.ravel()


def synthesize(sys, c, window=Window.PRIMARY):
    """Adjoint of :func:`analyze`: sum_lambda c(lambda) pi(lambda) w."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (sys.lattice.K,):
        raise DimensionError(f"coefficient array shape {c.shape} != ({sys.lattice.K},)")
    return sys.atoms(window) @ c
