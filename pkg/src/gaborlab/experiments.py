"""Experiment runners behind ``gaborlab run``.

Each runner takes a validated :class:`ExperimentConfig`, writes its CSV
tables into ``cfg.output_dir`` and returns ``(results, checks)``; the
caller wraps them into the JSON summary.
"""

import numpy as np

from . import __version__
from .errors import ConfigError, GaborLabError
from .gabor import Window, analyze, build_system, synthesize
from .gabor_matrix import cv_norm, decay_profile, diagram_check, gabor_matrix
from .generators import complex_normal
from .io import write_csv, write_json, write_matrix_csv
from .quantize import (
    Calculus,
    dequantize,
    kn_from_weyl,
    kn_quantize,
    twisted_product,
    weyl_quantize,
)
from .tf_core import cross_wigner, stft
from .wiener_lab import (
    algebra_check,
    boundedness_report,
    fit_decay,
    tail_ratio,
    wiener_experiment,
)

RNG_NAME = "numpy PCG64 (numpy.random.default_rng([seed, stream]))"


def _system(cfg):
    return build_system(cfg.build_window(), cfg.a, cfg.b)


def _check(name, value, limit):
    return {"name": name, "value": float(value), "limit": limit, "passed": bool(value < limit)}


def _profile_csv(path, profile):
    write_csv(path, ["mu_k", "mu_l", "h"], profile.rows())


def run_stft(cfg):
    rng = cfg.rng(1)
    f = complex_normal(rng, cfg.N)
    g = cfg.build_window()
    V = stft(f, g)
    write_matrix_csv(cfg.output_dir / "stft.csv", V)
    # Moyal-type energy identity: sum |V_g f|^2 = N ||f||^2 ||g||^2
    energy = np.sum(np.abs(V) ** 2)
    expect = cfg.N * np.vdot(f, f).real * np.vdot(g, g).real
    rel = abs(energy - expect) / expect
    return {"N": cfg.N, "energy": energy, "expected_energy": expect}, [_check("energy_identity", rel, 1e-10)]


def run_gabor_info(cfg):
    rng = cfg.rng(1)
    sys = _system(cfg)
    A, B = sys.frame_bounds
    worst = 0.0
    for _ in range(cfg.trials):
        f = complex_normal(rng, cfg.N)
        for an, sy in ((Window.PRIMARY, Window.DUAL), (Window.DUAL, Window.PRIMARY), (Window.TIGHT, Window.TIGHT)):
            res = np.linalg.norm(synthesize(sys, analyze(sys, f, an), sy) - f) / np.linalg.norm(f)
            worst = max(worst, float(res))
    write_csv(
        cfg.output_dir / "windows.csv",
        ["t", "g_re", "g_im", "dual_re", "dual_im", "tight_re", "tight_im"],
        [
            (t, g.real, g.imag, d.real, d.imag, s.real, s.imag)
            for t, (g, d, s) in enumerate(zip(sys.g, sys.gamma, sys.tight))
        ],
    )
    results = {"A": A, "B": B, "B_over_A": B / A, "K": sys.lattice.K, "reconstruction_residual": worst}
    return results, [_check("reconstruction_residual", worst, 1e-10)]


def run_quantize(cfg):
    rng = cfg.rng(2)
    sigma = cfg.build_symbol()
    N = cfg.N
    T_kn = kn_quantize(sigma)
    kn_rt = np.linalg.norm(dequantize(T_kn, Calculus.KN) - sigma) / max(np.linalg.norm(sigma), 1e-300)
    write_matrix_csv(cfg.output_dir / "operator_kn.csv", T_kn)
    results = {"N": N, "kn_round_trip": kn_rt}
    checks = [_check("kn_round_trip", kn_rt, 1e-10)]
    if N % 2:
        T = weyl_quantize(sigma)
        write_matrix_csv(cfg.output_dir / "operator_weyl.csv", T)
        scale = max(np.linalg.norm(sigma), 1e-300)
        w_rt = np.linalg.norm(dequantize(T, Calculus.WEYL) - sigma) / scale
        chirp = np.linalg.norm(kn_from_weyl(sigma) - dequantize(T, Calculus.KN)) / scale
        # weak pairing <sigma^w f, h> = c_N <sigma, W(h, f)>
        ratios = []
        for _ in range(20):
            f, h = complex_normal(rng, N), complex_normal(rng, N)
            ratios.append(np.vdot(h, T @ f) / np.sum(sigma * np.conj(cross_wigner(h, f))))
        ratios = np.array(ratios)
        c_N = complex(np.mean(ratios))
        spread = float(np.abs(ratios - c_N).max() / abs(c_N))
        tau = complex_normal(rng, (N, N))
        tw = np.linalg.norm(weyl_quantize(twisted_product(sigma, tau)) - T @ weyl_quantize(tau))
        tw /= max(np.linalg.norm(T) * np.linalg.norm(weyl_quantize(tau)), 1e-300)
        results.update(
            weyl_round_trip=w_rt, kn_chirp_deviation=chirp, c_N_re=c_N.real, c_N_im=c_N.imag,
            c_N_times_N=abs(c_N) * N, c_N_spread=spread, twisted_product_residual=tw,
        )
        checks += [
            _check("weyl_round_trip", w_rt, 1e-10),
            _check("kn_chirp_deviation", chirp, 1e-10),
            _check("c_N_spread", spread, 1e-10),
            _check("twisted_product_residual", tw, 1e-10),
        ]
    return results, checks


def run_gabor_matrix(cfg):
    sys = _system(cfg)
    sigma = cfg.build_symbol()
    M = gabor_matrix(weyl_quantize(sigma), sys)
    write_matrix_csv(cfg.output_dir / "gabor_matrix.csv", M.values)
    v = cfg.build_weight()
    f = complex_normal(cfg.rng(2), cfg.N)
    res = diagram_check(weyl_quantize(sigma), sys, f)
    results = {"K": sys.lattice.K, "cv_norm": cv_norm(M, v), "diagram_residual": res}
    return results, [_check("diagram_residual", res, 1e-10)]


def run_decay(cfg):
    sys = _system(cfg)
    sigma = cfg.build_symbol()
    h = decay_profile(gabor_matrix(weyl_quantize(sigma), sys, Window.TIGHT))
    _profile_csv(cfg.output_dir / "decay_profile.csv", h)
    rho, r2 = fit_decay(h)
    v = cfg.build_weight()
    results = {"cv_norm": cv_norm(h, v), "rho": rho, "r2": r2, "tail_ratio": tail_ratio(h)}
    return results, []


def run_algebra(cfg):
    rng = cfg.rng(2)
    sys = _system(cfg)
    sigma = cfg.build_symbol()
    v = cfg.build_weight()
    worst, slack = 0.0, -np.inf
    trials = min(cfg.trials, 20)
    for _ in range(trials):
        tau = complex_normal(rng, (cfg.N, cfg.N))
        worst = max(worst, algebra_check(sigma, tau, sys))
        M = lambda s: gabor_matrix(weyl_quantize(s), sys, Window.TIGHT)
        ratio = cv_norm(M(twisted_product(sigma, tau)), v) / (cv_norm(M(sigma), v) * cv_norm(M(tau), v))
        slack = max(slack, ratio - 1.0)
    results = {"residual": worst, "max_cv_ratio_minus_one": slack, "pairs": trials}
    return results, [_check("residual", worst, 1e-9), _check("cv_submultiplicativity_slack", slack, 1e-12)]


def run_wiener(cfg):
    sys = _system(cfg)
    sigma = cfg.build_symbol()
    rep = wiener_experiment(sigma, sys, cfg.build_weight(), cfg.build_norms(), cfg.trials, cfg.rng(2))
    _profile_csv(cfg.output_dir / "forward_profile.csv", rep.forward_profile)
    _profile_csv(cfg.output_dir / "inverse_profile.csv", rep.inverse_profile)
    s = rep.summary()
    checks = [
        _check("projection_residual", s["projection_residual"], 1e-8),
        _check("inverse_tail_ratio", s["inverse_tail_ratio"], 1e-3),
        _check("one_minus_r2_inverse", 1 - s["r2_inverse"], 0.1),
    ]
    return s, checks


def run_bounds(cfg):
    sys = _system(cfg)
    sigma = cfg.build_symbol()
    rows = boundedness_report(sigma, sys, cfg.build_norms(default_all=True), cfg.trials, cfg.rng(2))
    write_csv(cfg.output_dir / "bounds.csv", ["spec", "estimate", "bound", "ratio"], [
        (r.spec, r.estimate, r.bound, r.ratio) for r in rows
    ])
    worst = max(r.ratio for r in rows)
    results = {"rows": {r.spec: {"estimate": r.estimate, "bound": r.bound} for r in rows}, "max_ratio": worst}
    return results, [{"name": "young_bound", "value": worst, "limit": 1.0, "passed": all(r.ok for r in rows)}]


RUNNERS = {
    "Stft": run_stft,
    "GaborInfo": run_gabor_info,
    "Quantize": run_quantize,
    "GaborMatrix": run_gabor_matrix,
    "Decay": run_decay,
    "Algebra": run_algebra,
    "Wiener": run_wiener,
    "Bounds": run_bounds,
}


def summary(cfg, results, checks, status, error=None):
    doc = {
        "library": "gaborlab",
        "version": __version__,
        "rng": RNG_NAME,
        "config": cfg.echo(),
        "experiment": cfg.experiment,
        "status": status,
        "results": results,
        "checks": checks,
    }
    if error:
        doc["error"] = error
    return doc


def run_experiment(cfg):
    """Run, write ``summary.json``; returns the summary document."""
    try:
        results, checks = RUNNERS[cfg.experiment](cfg)
    except Exception as exc:
        if isinstance(exc, ConfigError) or not isinstance(exc, GaborLabError):
            raise
        doc = summary(cfg, {}, [], "failed", f"{type(exc).__name__}: {exc}")
    else:
        status = "ok" if all(c["passed"] for c in checks) else "failed"
        doc = summary(cfg, results, checks, status)
    write_json(cfg.output_dir / "summary.json", doc)
    return doc
