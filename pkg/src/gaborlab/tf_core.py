"""Time-frequency shifts, STFT and cross-Wigner distribution on Z_N.

Conventions
-----------
A phase-space point is a pair ``(x, xi)`` of residues mod N. The
time-frequency shift is

    (pi(x, xi) f)(t) = exp(2 pi i xi t / N) f(t - x),

and the DFT kernel is ``exp(-2 pi i xi t / N)`` without normalization, so
``stft(f, g)[x, xi] == <f, pi(x, xi) g>`` exactly.

Half-points are realised with ``inv2 = (N + 1) // 2``, the inverse of 2
mod N, which restricts the Wigner path to odd N.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParityError


@dataclass(frozen=True)
class GroupCtx:
    """Order of the cyclic group Z_N."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DimensionError(f"group order must be an integer >= 2, got {self.N}")

    @property
    def odd(self):
        return self.N % 2 == 1

    @property
    def inv2(self):
        return inv2(self.N)


def inv2(N):
    """Inverse of 2 modulo odd ``N``."""
    require_odd(N)
    return (N + 1) // 2


def require_odd(N, what="Weyl calculus"):
    if N % 2 == 0:
        raise ParityError(f"{what} needs odd N (2 must be invertible mod N), got N={N}")


def signed(r, N):
    """Signed representative of residue(s) ``r`` in [-N/2, N/2)."""
    r = np.mod(r, N)
    return np.where(r >= (N + 1) // 2, r - N, r)


def as_signal(f, N=None):
    """Validate and return ``f`` as a complex 1-D array (optionally of length N)."""
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1:
        raise DimensionError(f"signal must be 1-D, got shape {f.shape}")
    if N is not None and f.shape[0] != N:
        raise DimensionError(f"signal length {f.shape[0]} != N={N}")
    if not np.all(np.isfinite(f)):
        raise DimensionError("signal has non-finite entries")
    return f


def _pair(f, g):
    f = as_signal(f)
    g = as_signal(g, f.shape[0])
    return f, g


def tf_shift(f, z):
    """Apply the time-frequency shift pi(z) = M_xi T_x to ``f``."""
    f = as_signal(f)
    N = f.shape[0]
    x, xi = int(z[0]) % N, int(z[1]) % N
    t = np.arange(N)
    return np.exp(2j * np.pi * ((xi * t) % N) / N) * np.roll(f, x)


def tf_shift_matrix(N, z):
    """Dense N x N matrix of pi(z)."""
    x, xi = int(z[0]) % N, int(z[1]) % N
    t = np.arange(N)
    P = np.zeros((N, N), dtype=complex)
    P[t, (t - x) % N] = np.exp(2j * np.pi * ((xi * t) % N) / N)
    return P


def stft(f, g):
    """Short-time Fourier transform ``V_g f`` as an N x N array over (x, xi).

    ``V_g f(x, xi) = sum_t f(t) conj(g(t - x)) exp(-2 pi i xi t / N)``,
    one length-N FFT per time shift.
    """
    f, g = _pair(f, g)
    N = f.shape[0]
    t = np.arange(N)
    idx = (t[None, :] - t[:, None]) % N
    return np.fft.fft(f[None, :] * np.conj(g[idx]), axis=1)


def cross_wigner(f, g):
    """Cross-Wigner distribution W(f, g) on Z_N x Z_N (odd N only).

    ``W(f,g)(x, xi) = sum_t f(x + h t) conj(g(x - h t)) exp(-2 pi i xi t / N)``
    with ``h`` the inverse of 2 mod N.
    """
    f, g = _pair(f, g)
    N = f.shape[0]
    h = inv2(N)
    x = np.arange(N)[:, None]
    ht = (h * np.arange(N))[None, :]
    return np.fft.fft(f[(x + ht) % N] * np.conj(g[(x - ht) % N]), axis=1)


def j_map(z, N):
    """Rotation j(z1, z2) = (z2, -z1) mod N."""
    return (int(z[1]) % N, (-int(z[0])) % N)


def j_inverse(z, N):
    """Inverse rotation j^{-1}(z1, z2) = (-z2, z1) mod N."""
    return ((-int(z[1])) % N, int(z[0]) % N)
