"""Weyl and Kohn-Nirenberg quantization of symbols on Z_N x Z_N.

Both correspondences are normalised so that the all-ones symbol maps to
the identity matrix. The KN kernel is

    K(x, y) = (1/N) sum_xi sigma(x, xi) exp(2 pi i (x - y) xi / N),

and the Weyl kernel evaluates the symbol at the half-point h(x + y),
h = (N + 1) / 2:

    K(x, y) = (1/N) sum_xi sigma(h (x + y), xi) exp(2 pi i (x - y) xi / N).
"""

import enum

import numpy as np

from .errors import DimensionError
from .tf_core import inv2, require_odd


class Calculus(str, enum.Enum):
    WEYL = "weyl"
    KN = "kn"


def as_symbol(sigma, N=None):
    sigma = np.asarray(sigma, dtype=complex)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise DimensionError(f"symbol must be a square N x N array, got shape {sigma.shape}")
    if N is not None and sigma.shape[0] != N:
        raise DimensionError(f"symbol side {sigma.shape[0]} != N={N}")
    if not np.all(np.isfinite(sigma)):
        raise DimensionError("symbol has non-finite entries")
    return sigma


def _chirp(N):
    x = np.arange(N)
    return np.exp(2j * np.pi * (np.outer(x, x) % N) / N)


def _weyl_coords(N):
    # (x, y) -> (h(x+y), x-y) is a bijection of Z_N^2 for odd N
    h = inv2(N)
    x = np.arange(N)[:, None]
    y = np.arange(N)[None, :]
    return (h * (x + y)) % N, (x - y) % N


def kn_quantize(sigma):
    """Kohn-Nirenberg operator matrix of ``sigma``."""
    sigma = as_symbol(sigma)
    N = sigma.shape[0]
    return np.fft.fft(sigma * _chirp(N), axis=1) / N


def weyl_quantize(sigma):
    """Weyl operator matrix of ``sigma`` (odd N only)."""
    sigma = as_symbol(sigma)
    N = sigma.shape[0]
    require_odd(N)
    # spread[m, d] = (1/N) sum_xi sigma(m, xi) exp(2 pi i d xi / N)
    spread = np.fft.ifft(sigma, axis=1)
    m, d = _weyl_coords(N)
    return spread[m, d]


def quantize(sigma, calculus=Calculus.WEYL):
    if Calculus(calculus) is Calculus.WEYL:
        return weyl_quantize(sigma)
    return kn_quantize(sigma)


def dequantize(T, calculus=Calculus.WEYL):
    """Symbol of the operator matrix ``T`` in the requested calculus.

    Exact inverse of :func:`quantize`.
    """
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise DimensionError(f"operator must be square, got shape {T.shape}")
    N = T.shape[0]
    if Calculus(calculus) is Calculus.KN:
        return N * np.fft.ifft(T, axis=1) * np.conj(_chirp(N))
    require_odd(N)
    h = inv2(N)
    m = np.arange(N)[:, None]
    d = np.arange(N)[None, :]
    spread = T[(h * (2 * m + d)) % N, (h * (2 * m - d)) % N]
    return np.fft.fft(spread, axis=1)


def twisted_product(sigma, tau, calculus=Calculus.WEYL):
    """Symbol of quantize(sigma) @ quantize(tau)."""
    return dequantize(quantize(sigma, calculus) @ quantize(tau, calculus), calculus)


def kn_from_weyl(sigma):
    """KN symbol of the Weyl operator of ``sigma``.

    In the 2-D DFT domain the two calculi differ by the chirp multiplier
    ``exp(2 pi i h p q / N)`` with h the inverse of 2 mod N.
    """
    sigma = as_symbol(sigma)
    N = sigma.shape[0]
    h = inv2(N)
    p = np.arange(N)
    chirp = np.exp(2j * np.pi * ((h * np.outer(p, p)) % N) / N)
    return np.fft.ifft2(np.fft.fft2(sigma) * chirp)
