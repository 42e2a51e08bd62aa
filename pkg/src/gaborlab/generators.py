"""Seeded random symbols and matrices used by experiments and tests."""

import numpy as np

from .gabor_matrix import GaborMatrix
from .quantize import weyl_quantize
from .tf_core import signed


def complex_normal(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def constant_symbol(N, c):
    return np.full((N, N), complex(c))


def bandlimited_symbol(N, band, rng):
    """Random symbol whose 2-D DFT lives on |p|, |q| <= band; unit max modulus."""
    coeffs = np.zeros((N, N), dtype=complex)
    p = signed(np.arange(N), N)
    mask = (np.abs(p)[:, None] <= band) & (np.abs(p)[None, :] <= band)
    coeffs[mask] = complex_normal(rng, int(mask.sum()))
    sigma = np.fft.ifft2(coeffs)
    return sigma / np.abs(sigma).max()


def gaussian_envelope_symbol(N, width, rng, band=2):
    """Band-limited random field under a Gaussian bump at a random phase-space centre."""
    x0, xi0 = rng.integers(0, N, size=2)
    dx = signed(np.arange(N) - x0, N)
    dxi = signed(np.arange(N) - xi0, N)
    envelope = np.exp(-np.pi * (dx[:, None] ** 2 + dxi[None, :] ** 2) / width**2)
    return envelope * bandlimited_symbol(N, band, rng)


def eps_perturbation_symbol(N, eps, width, rng):
    """1 + eps * sigma0 with ||sigma0^w||_op = 1, so the Weyl operator is invertible for eps < 1."""
    sigma0 = gaussian_envelope_symbol(N, width, rng)
    sigma0 = sigma0 / np.linalg.norm(weyl_quantize(sigma0), 2)
    return 1.0 + eps * sigma0


def random_banded_matrix(lattice, band, rng, decay=0.5):
    """Random K x K matrix supported on |k - k'|, |l - l'| <= band (cyclic), with decaying entries."""
    lat = lattice
    dk = lat.indices[:, None, 0] - lat.indices[None, :, 0]
    dl = lat.indices[:, None, 1] - lat.indices[None, :, 1]
    dk = signed(dk, lat.n_time)
    dl = signed(dl, lat.n_freq)
    support = (np.abs(dk) <= band) & (np.abs(dl) <= band)
    vals = complex_normal(rng, (lat.K, lat.K)) * np.exp(-decay * np.hypot(dk, dl)) * support
    return GaborMatrix(vals, lat)
