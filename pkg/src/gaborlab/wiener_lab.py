"""Algebra identity, pseudoinverses and the Wiener property at finite N.

All Gabor matrices here are taken with respect to the tight window
S^{-1/2} g, for which the Gram matrix is the orthogonal projection onto
ran C_g.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ContourError, PreconditionError, SingularityError
from .gabor import Window, analyze
from .gabor_matrix import (
    DecayProfile,
    GaborMatrix,
    cv_norm,
    decay_profile,
    gabor_matrix,
)
from .modspace import mixed_norm, random_coefficients
from .quantize import Calculus, as_symbol, dequantize, twisted_product, weyl_quantize

FIT_FLOOR = 1e-14


def _values(M):
    return M.values if isinstance(M, GaborMatrix) else np.asarray(M, dtype=complex)


def _like(M, values):
    return GaborMatrix(values, M.lattice) if isinstance(M, GaborMatrix) else values


def algebra_check(sigma, tau, sys, window=Window.TIGHT):
    """Normalised Frobenius residual of M(sigma # tau) - M(sigma) M(tau)."""
    M_s = gabor_matrix(weyl_quantize(sigma), sys, window).values
    M_t = gabor_matrix(weyl_quantize(tau), sys, window).values
    M_st = gabor_matrix(weyl_quantize(twisted_product(sigma, tau)), sys, window).values
    scale = np.linalg.norm(M_s) * np.linalg.norm(M_t)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(M_st - M_s @ M_t) / scale)


def pseudoinverse_svd(M, tol=1e-10):
    """Moore-Penrose pseudoinverse; singular values below tol * s_max count as zero."""
    A = _values(M)
    U, s, Vh = np.linalg.svd(A)
    keep = s > tol * (s[0] if s.size else 0.0)
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return _like(M, (Vh.conj().T * inv) @ U.conj().T)


def penrose_residuals(A, P):
    """Relative residuals of the four Penrose identities for candidate pseudoinverse P."""
    A, P = _values(A), _values(P)
    nA, nP = np.linalg.norm(A), np.linalg.norm(P)
    AP, PA = A @ P, P @ A
    return (
        float(np.linalg.norm(A @ P @ A - A) / nA),
        float(np.linalg.norm(P @ A @ P - P) / nP),
        float(np.linalg.norm(AP - AP.conj().T) / max(np.linalg.norm(AP), 1e-300)),
        float(np.linalg.norm(PA - PA.conj().T) / max(np.linalg.norm(PA), 1e-300)),
    )


@dataclass(frozen=True)
class ContourSpec:
    """Circle |z - center| = radius sampled at ``points`` equispaced nodes."""

    center: complex
    radius: float
    points: int = 512

    def __post_init__(self):
        if not self.radius > 0:
            raise ContourError(f"contour radius must be positive, got {self.radius}")
        if self.points < 16:
            raise ContourError(f"contour needs at least 16 nodes, got {self.points}")


def auto_contour(M, points=512, zero_tol=1e-8):
    """Circle through lam_min/2 and lam_max + lam_min/2 for a PSD Hermitian matrix."""
    ev = np.linalg.eigvalsh(_values(M))
    nonzero = ev[np.abs(ev) > zero_tol * np.abs(ev).max()]
    if nonzero.size == 0 or nonzero.min() <= 0:
        raise ContourError("auto_contour needs a nonzero positive semidefinite matrix")
    lo, hi = nonzero.min(), nonzero.max()
    return ContourSpec(center=(lo + hi) / 2, radius=hi / 2, points=points)


def pseudoinverse_riesz(M, contour, zero_tol=1e-8):
    """Pseudoinverse of a normal matrix by the resolvent contour integral.

    (1 / 2 pi i) \\oint z^{-1} (z I - A)^{-1} dz, discretised by the
    trapezoidal rule on the circle. The circle must enclose every nonzero
    eigenvalue and leave 0 outside.
    """
    A = _values(M)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if np.linalg.norm(A @ A.conj().T - A.conj().T @ A) > 1e-10 * max(scale**2, 1e-300):
        raise PreconditionError("contour pseudoinverse requires a normal matrix")
    c, r = complex(contour.center), float(contour.radius)
    if abs(c) <= r:
        raise ContourError(f"contour (center={c}, radius={r}) encloses 0")
    ev = np.linalg.eigvals(A)
    dist = np.abs(ev - c)
    if np.any(np.abs(dist - r) < 1e-8):
        raise ContourError("an eigenvalue lies within 1e-8 of the contour")
    lost = (dist > r) & (np.abs(ev) > zero_tol * max(np.abs(ev).max(), 1e-300))
    if np.any(lost):
        raise ContourError(f"nonzero eigenvalues outside the contour: {ev[lost][:5]}")
    theta = 2 * np.pi * np.arange(contour.points) / contour.points
    nodes = c + r * np.exp(1j * theta)
    eye = np.eye(n)
    acc = np.zeros((n, n), dtype=complex)
    for z, e in zip(nodes, r * np.exp(1j * theta)):
        acc += (e / z) * np.linalg.solve(z * eye - A, eye)
    return _like(M, acc / contour.points)


def fit_decay(profile, floor=FIT_FLOOR):
    """Least-squares fit log h(mu) ~ alpha - rho |mu|; returns (rho, r^2)."""
    lat = profile.lattice
    h = profile.values
    keep = h > floor
    r = np.hypot(*lat.signed_points[keep].T.astype(float))
    y = np.log(h[keep])
    if keep.sum() < 3 or np.ptp(r) == 0:
        return 0.0, 0.0
    slope, intercept = np.polyfit(r, y, 1)
    ss_res = np.sum((y - (slope * r + intercept)) ** 2)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(-slope), float(min(max(r2, 0.0), 1.0))


def estimate_operator_norm(A, lattice, spec, trials=200, rng=None):
    """Randomised lower estimate of ||A||_{l^{p,q}_m -> l^{p,q}_m}."""
    rng = np.random.default_rng(0) if rng is None else rng
    A = _values(A)
    best = 0.0
    for c in random_coefficients(lattice.K, trials, rng):
        den = mixed_norm(c, lattice, spec)
        if den > 0:
            best = max(best, mixed_norm(A @ c, lattice, spec) / den)
    return best


def _invert_weyl(sigma, rcond=1e-8):
    T = weyl_quantize(sigma)
    s = np.linalg.svd(T, compute_uv=False)
    if s[0] == 0 or s[-1] <= rcond * s[0]:
        raise SingularityError(
            f"Weyl operator is not invertible: smallest/largest singular value {s[-1]:.3e}/{s[0]:.3e}"
        )
    return T, np.linalg.inv(T)


def range_projection(sys, window=Window.TIGHT):
    """Gram matrix of the selected window; the projection onto ran C_g for the tight window."""
    return gabor_matrix(np.eye(sys.N), sys, window).values


@dataclass
class WienerReport:
    forward_profile: DecayProfile
    inverse_profile: DecayProfile
    forward_cv: float
    inverse_cv: float
    fitted_rates: tuple
    condition_numbers: dict = field(default_factory=dict)
    pseudoinverse_residual: float = 0.0
    projection_residual: float = 0.0
    svd_agreement: float = 0.0
    tail_ratio: float = 0.0

    def summary(self):
        rho_f, rho_i, r2_f, r2_i = self.fitted_rates
        return {
            "forward_cv": self.forward_cv,
            "inverse_cv": self.inverse_cv,
            "rho_forward": rho_f,
            "rho_inverse": rho_i,
            "r2_forward": r2_f,
            "r2_inverse": r2_i,
            "pseudoinverse_residual": self.pseudoinverse_residual,
            "projection_residual": self.projection_residual,
            "svd_agreement": self.svd_agreement,
            "inverse_tail_ratio": self.tail_ratio,
            "condition_numbers": dict(self.condition_numbers),
        }


def tail_ratio(profile):
    """h(mu_max) / h(0), mu_max the lattice point of largest |mu|."""
    r = np.hypot(*profile.lattice.signed_points.T.astype(float))
    far = int(np.argmax(r))
    return float(profile.values[far] / profile.values[0])


def wiener_experiment(sigma, sys, v, specs=(), trials=200, rng=None, probes=8):
    """Invert sigma^w, form tau and compare the Gabor matrices of both symbols."""
    rng = np.random.default_rng(0) if rng is None else rng
    sigma = as_symbol(sigma, sys.N)
    _, T_inv = _invert_weyl(sigma)
    tau = dequantize(T_inv, Calculus.WEYL)
    M_s = gabor_matrix(weyl_quantize(sigma), sys, Window.TIGHT)
    M_t = gabor_matrix(weyl_quantize(tau), sys, Window.TIGHT)

    worst = 0.0
    for _ in range(probes):
        f = rng.normal(size=sys.N) + 1j * rng.normal(size=sys.N)
        c = analyze(sys, f, Window.TIGHT)
        worst = max(worst, float(np.linalg.norm(M_t.values @ (M_s.values @ c) - c) / np.linalg.norm(c)))
    P = range_projection(sys)
    proj_res = float(np.linalg.norm(M_t.values @ M_s.values - P, 2))
    pinv = pseudoinverse_svd(M_s, tol=1e-10)
    svd_agree = float(np.linalg.norm(pinv.values - M_t.values) / np.linalg.norm(M_t.values))

    h_s, h_t = decay_profile(M_s), decay_profile(M_t)
    rho_s, r2_s = fit_decay(h_s)
    rho_t, r2_t = fit_decay(h_t)
    conds = {}
    for spec in specs:
        fwd = estimate_operator_norm(M_s, sys.lattice, spec, trials, rng)
        inv = estimate_operator_norm(M_t, sys.lattice, spec, trials, rng)
        conds[spec.label] = fwd * inv
    return WienerReport(
        forward_profile=h_s,
        inverse_profile=h_t,
        forward_cv=cv_norm(h_s, v),
        inverse_cv=cv_norm(h_t, v),
        fitted_rates=(rho_s, rho_t, r2_s, r2_t),
        condition_numbers=conds,
        pseudoinverse_residual=worst,
        projection_residual=proj_res,
        svd_agreement=svd_agree,
        tail_ratio=tail_ratio(h_t),
    )


@dataclass
class BoundRow:
    spec: str
    estimate: float
    bound: float

    @property
    def ratio(self):
        return self.estimate / self.bound if self.bound > 0 else 0.0

    @property
    def ok(self):
        return self.estimate <= self.bound * (1 + 1e-12)


def boundedness_report(sigma, sys, specs, trials=200, rng=None):
    """Randomised l^{p,q}_m operator norms of M(sigma) against ||M(sigma)||_{C_v} C_m.

    ``v`` for each row is the governing weight of that spec's moderate weight.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    M = gabor_matrix(weyl_quantize(sigma), sys, Window.TIGHT)
    h = decay_profile(M)
    rows = []
    for spec in specs:
        est = estimate_operator_norm(M, sys.lattice, spec, trials, rng)
        rows.append(BoundRow(spec.label, est, cv_norm(h, spec.m.base) * spec.m.C))
    return rows


@dataclass
class InvarianceReport:
    norms: dict
    projection_residual: float


def spectral_invariance_check(sigma, sys, specs, trials=200, rng=None):
    """Norms of M(sigma), M(tau) on each l^{p,q}_m and the residual of M(tau) M(sigma) - P."""
    rng = np.random.default_rng(0) if rng is None else rng
    sigma = as_symbol(sigma, sys.N)
    if not np.any(sigma):
        raise PreconditionError("spectral invariance needs an invertible operator; got the zero symbol")
    _, T_inv = _invert_weyl(sigma)
    M_s = gabor_matrix(weyl_quantize(sigma), sys, Window.TIGHT)
    M_t = gabor_matrix(T_inv, sys, Window.TIGHT)
    P = range_projection(sys)
    norms = {}
    for spec in specs:
        norms[spec.label] = (
            estimate_operator_norm(M_s, sys.lattice, spec, trials, rng),
            estimate_operator_norm(M_t, sys.lattice, spec, trials, rng),
        )
    return InvarianceReport(norms, float(np.linalg.norm(M_t.values @ M_s.values - P, 2)))
