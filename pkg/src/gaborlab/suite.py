"""Acceptance battery: one function per criterion, shared by the CLI and pytest.

Each criterion receives the base seed and returns a :class:`Criterion`
with the measured quantities; nothing here depends on wall-clock time, so
the serialised results are reproducible byte for byte.
"""

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from . import gabor_matrix as gm
from .errors import ConfigError, GaborLabError
from .gabor import Window, analyze, build_system, periodized_gaussian, synthesize
from .generators import (
    complex_normal,
    eps_perturbation_symbol,
    gaussian_envelope_symbol,
    random_banded_matrix,
)
from .io import dumps, write_json
from .modspace import MixedNormSpec, Weight, mod_norm, moderate, young_bound_check
from .quantize import twisted_product, weyl_quantize
from .tf_core import cross_wigner, inv2, stft, tf_shift
from .wiener_lab import (
    ContourSpec,
    algebra_check,
    penrose_residuals,
    pseudoinverse_riesz,
    pseudoinverse_svd,
    wiener_experiment,
)

BASELINE_TOLERANCE = 0.05
PQ = (1.0, 2.0, np.inf)


@dataclass
class Criterion:
    id: int
    name: str
    passed: bool = False
    metrics: dict = field(default_factory=dict)
    detail: str = ""

    def as_dict(self):
        return {"id": self.id, "name": self.name, "passed": self.passed, "metrics": self.metrics, "detail": self.detail}


def _rng(seed, cid):
    return np.random.default_rng([seed, cid])


def naive_stft(f, g):
    """Direct O(N^3) evaluation of <f, pi(x, xi) g>, the independent STFT oracle."""
    N = len(f)
    t = np.arange(N)
    out = np.zeros((N, N), dtype=complex)
    for x in range(N):
        for xi in range(N):
            atom = np.exp(2j * np.pi * xi * t / N) * g[(t - x) % N]
            out[x, xi] = np.sum(f * np.conj(atom))
    return out


def c01_stft_oracle(seed, **_):
    rng = _rng(seed, 1)
    N = 64
    f, g = complex_normal(rng, N), complex_normal(rng, N)
    dev = float(np.abs(stft(f, g) - naive_stft(f, g)).max())
    return Criterion(1, "STFT FFT path equals naive oracle (N=64)", dev < 1e-10, {"max_deviation": dev})


def c02_frame_reconstruction(seed, N=144, a=12, b=12, signals=100, **_):
    rng = _rng(seed, 2)
    crit = Criterion(2, f"Frame reconstruction, three expansions (N={N}, a={a}, b={b})")
    try:
        sys = build_system(periodized_gaussian(N), a, b)
    except GaborLabError as exc:
        crit.detail = str(exc)
        return crit
    A, B = sys.frame_bounds
    worst = {"primary_dual": 0.0, "dual_primary": 0.0, "tight_tight": 0.0}
    for _ in range(signals):
        f = complex_normal(rng, N)
        nf = np.linalg.norm(f)
        for key, (an, sy) in {
            "primary_dual": (Window.PRIMARY, Window.DUAL),
            "dual_primary": (Window.DUAL, Window.PRIMARY),
            "tight_tight": (Window.TIGHT, Window.TIGHT),
        }.items():
            res = np.linalg.norm(synthesize(sys, analyze(sys, f, an), sy) - f) / nf
            worst[key] = max(worst[key], float(res))
    crit.metrics = {"A": A, "B": B, "B_over_A": B / A, **worst}
    crit.passed = max(worst.values()) < 1e-10
    return crit


def c03_full_lattice(seed, **_):
    N = 32
    g = complex_normal(_rng(seed, 3), N)
    sys = build_system(g, 1, 1)
    target = N * np.vdot(g, g).real * np.eye(N)
    rel = float(np.linalg.norm(sys.S - target) / np.linalg.norm(sys.S))
    return Criterion(3, "Full-lattice frame operator is N||g||^2 I (N=32)", rel < 1e-10, {"relative_deviation": rel})


def c04_wigner_intertwining(seed, weyl_N=15, **_):
    rng = _rng(seed, 4)
    N = weyl_N
    h = inv2(N)
    worst = 0.0
    x = np.arange(N)
    for _ in range(50):
        f, g = complex_normal(rng, N), complex_normal(rng, N)
        w, z = rng.integers(0, N, 2), rng.integers(0, N, 2)
        lhs = np.abs(cross_wigner(tf_shift(f, w), tf_shift(g, z)))
        base = np.abs(cross_wigner(f, g))
        rhs = base[np.ix_((x - h * (w[0] + z[0])) % N, (x - h * (w[1] + z[1])) % N)]
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return Criterion(4, f"Cross-Wigner intertwining modulus identity (N={N})", worst < 1e-10, {"max_deviation": worst})


def c05_fundamental_identity(seed, weyl_N=15, **_):
    rng = _rng(seed, 5)
    N = weyl_N
    g = periodized_gaussian(N)
    ratios = []
    for _ in range(5):
        sigma = complex_normal(rng, (N, N))
        pairs = [(tuple(rng.integers(0, N, 2)), tuple(rng.integers(0, N, 2))) for _ in range(200)]
        ratios.append(gm.matrix_entry_ratios(sigma, g, pairs))
    r = np.concatenate(ratios)
    c = float(np.mean(r))
    spread = float((r.max() - r.min()) / c)
    return Criterion(
        5,
        f"Gabor-matrix entries equal c'_N |V_Phi sigma| (N={N})",
        spread < 1e-10,
        {"c_prime_N": c, "relative_spread": spread, "N_times_c_prime": c * N},
    )


def c06_diagram(seed, **_):
    rng = _rng(seed, 6)
    N = 48
    sys = build_system(periodized_gaussian(N), 4, 4)
    worst = max(gm.diagram_check(complex_normal(rng, (N, N)), sys, complex_normal(rng, N)) for _ in range(50))
    return Criterion(6, "Diagram identity C_g(Tf) = M(T) C_gamma f (N=48, a=b=4)", worst < 1e-10, {"max_residual": worst})


def c07_algebra(seed, **_):
    rng = _rng(seed, 7)
    N = 63
    sys = build_system(periodized_gaussian(N), 3, 3)
    v = Weight.polynomial(2)
    worst, slack = 0.0, -np.inf
    for _ in range(20):
        sigma, tau = complex_normal(rng, (N, N)), complex_normal(rng, (N, N))
        worst = max(worst, algebra_check(sigma, tau, sys))
        M = lambda s: gm.gabor_matrix(weyl_quantize(s), sys, Window.TIGHT)
        lhs = gm.cv_norm(M(twisted_product(sigma, tau)), v)
        rhs = gm.cv_norm(M(sigma), v) * gm.cv_norm(M(tau), v)
        slack = max(slack, lhs / rhs - 1.0)
    ok = worst < 1e-9 and slack <= 1e-12
    return Criterion(
        7,
        "Algebra identity M(s#t) = M(s)M(t), tight window (N=63, a=b=3)",
        ok,
        {"max_residual": worst, "max_cv_ratio_minus_one": float(slack)},
    )


def c08_cv_axioms(seed, **_):
    rng = _rng(seed, 8)
    N = 48
    sys = build_system(periodized_gaussian(N), 4, 4)
    lat = sys.lattice
    v = Weight.polynomial(2)
    ident = gm.cv_norm(gm.GaborMatrix(np.eye(lat.K, dtype=complex), lat), v)
    mu = (3, 2)
    shift = gm.cv_norm(gm.lattice_shift(lat, mu), v)
    expected_shift = float(v(np.array([mu[0] * lat.a, mu[1] * lat.b]), N))
    worst = -np.inf
    for _ in range(100):
        A, B = random_banded_matrix(lat, 2, rng), random_banded_matrix(lat, 2, rng)
        worst = max(worst, gm.cv_norm(A @ B, v) / (gm.cv_norm(A, v) * gm.cv_norm(B, v)))
    ok = abs(ident - 1) < 1e-12 and abs(shift - expected_shift) < 1e-12 * expected_shift and worst <= 1 + 1e-12
    return Criterion(
        8,
        "C_v norm axioms: identity, lattice shift, submultiplicativity",
        ok,
        {"identity": ident, "shift": shift, "v_mu0": expected_shift, "max_product_ratio": float(worst)},
    )


def c09_young(seed, **_):
    rng = _rng(seed, 9)
    N = 48
    sys = build_system(periodized_gaussian(N), 4, 4)
    v = Weight.polynomial(2)
    moderates = (moderate(Weight.constant(), v, N), moderate(v, v, N))
    specs = [MixedNormSpec(p, q, m) for m in moderates for p in PQ for q in PQ]
    # N is even here, so the frame-side matrix comes from a multiplication operator
    multiplier = np.diag(1 + 0.5 * np.cos(2 * np.pi * np.arange(N) / N))
    matrices = (random_banded_matrix(sys.lattice, 3, rng), gm.gabor_matrix(multiplier, sys))
    worst = 0.0
    failed = []
    for M in matrices:
        for spec in specs:
            rep = young_bound_check(M, v, spec, trials=200, rng=rng)
            worst = max(worst, rep.max_ratio / rep.bound)
            if not rep.ok:
                failed.append(spec.label)
    return Criterion(
        9,
        "Young bound ||Mc|| <= ||M||_Cv C_m ||c|| on l^{p,q}_m (N=48, a=b=4)",
        not failed,
        {"max_ratio_over_bound": worst, "checks": len(matrices) * len(specs)},
        "; ".join(failed),
    )


def c10_pseudoinverse(seed, **_):
    rng = _rng(seed, 10)
    K, rank = 36, 24
    worst_dev, worst_penrose = 0.0, 0.0
    for _ in range(5):
        Q, _r = np.linalg.qr(complex_normal(rng, (K, K)))
        ev = np.concatenate([rng.uniform(1.0, 3.0, rank), np.zeros(K - rank)])
        A = (Q * ev) @ Q.conj().T
        A = (A + A.conj().T) / 2
        svd = pseudoinverse_svd(A, tol=1e-10)
        riesz = pseudoinverse_riesz(A, ContourSpec(center=2.0, radius=1.5, points=512))
        worst_dev = max(worst_dev, float(np.linalg.norm(riesz - svd) / np.linalg.norm(svd)))
        worst_penrose = max(worst_penrose, *penrose_residuals(A, svd), *penrose_residuals(A, riesz))
    return Criterion(
        10,
        "Riesz-contour pseudoinverse equals SVD pseudoinverse (K=36)",
        worst_dev < 1e-6 and worst_penrose < 1e-9,
        {"max_riesz_svd_deviation": worst_dev, "max_penrose_residual": worst_penrose},
    )


def c11_wiener(seed, **_):
    rng = _rng(seed, 11)
    N = 105
    sys = build_system(periodized_gaussian(N), 5, 3)
    sigma = eps_perturbation_symbol(N, 0.3, 5.0, rng)
    rep = wiener_experiment(sigma, sys, Weight.polynomial(2), rng=rng)
    s = rep.summary()
    ok = s["projection_residual"] < 1e-8 and s["inverse_tail_ratio"] < 1e-3 and s["r2_inverse"] > 0.9
    return Criterion(11, "Wiener property: inverse Gabor matrix decays (N=105, a=5, b=3)", ok, s)


def norm_equivalence_intervals(seed):
    """Measured [r1, r2] per (p, q, m) and [c1, c2] for the two norm equivalences."""
    rng = _rng(seed, 12)
    N = 48
    sys = build_system(periodized_gaussian(N), 4, 4)
    v = Weight.polynomial(2)
    r_int = {}
    signals = [complex_normal(rng, N) for _ in range(100)]
    for name, m in (("one", Weight.constant()), ("poly2", v)):
        mw = moderate(m, v, N)
        for p in PQ:
            for q in PQ:
                spec = MixedNormSpec(p, q, mw)
                r = [mod_norm(f, sys, spec, Window.PRIMARY) / mod_norm(f, sys, spec, Window.DUAL) for f in signals]
                r_int[f"p={p:g},q={q:g},m={name}"] = [float(min(r)), float(max(r))]
    N = 15
    g = periodized_gaussian(N)
    sys = build_system(g, 3, 3)
    c = []
    for _ in range(100):
        sigma = gaussian_envelope_symbol(N, 3.0, rng)
        M = gm.gabor_matrix(weyl_quantize(sigma), sys)
        c.append(gm.cv_norm(M, v) / gm.sjostrand_norm(sigma, g, v.j_inverse()))
    return {"mod_norm_ratio": r_int, "cv_sjostrand_ratio": [float(min(c)), float(max(c))]}


def load_baselines():
    text = resources.files("gaborlab").joinpath("data/baselines.json").read_text()
    return json.loads(text)


BASELINE_PATH = Path(__file__).parent / "data" / "baselines.json"


def calibrate_baselines(seed, path=BASELINE_PATH):
    """Measure the norm-equivalence intervals and store them as the regression baselines."""
    doc = {"seed": seed, **norm_equivalence_intervals(seed)}
    write_json(path, doc)
    return Path(path)


def c12_norm_equivalence(seed, baselines=None, **_):
    measured = norm_equivalence_intervals(seed)
    base = load_baselines() if baselines is None else baselines
    spreads = {k: hi / lo for k, (lo, hi) in measured["mod_norm_ratio"].items()}
    c1, c2 = measured["cv_sjostrand_ratio"]
    drift = 0.0
    missing = []
    for key, (lo, hi) in measured["mod_norm_ratio"].items():
        ref = base.get("mod_norm_ratio", {}).get(key)
        if ref is None:
            missing.append(key)
            continue
        drift = max(drift, abs(lo / ref[0] - 1), abs(hi / ref[1] - 1))
    ref = base.get("cv_sjostrand_ratio")
    if ref is None:
        missing.append("cv_sjostrand_ratio")
    else:
        drift = max(drift, abs(c1 / ref[0] - 1), abs(c2 / ref[1] - 1))
    ok = max(spreads.values()) < 100 and c2 / c1 < 100 and drift <= BASELINE_TOLERANCE and not missing
    return Criterion(
        12,
        "Norm-equivalence intervals bounded and match baselines to 5%",
        ok,
        {
            "max_r2_over_r1": max(spreads.values()),
            "c1": c1,
            "c2": c2,
            "c2_over_c1": c2 / c1,
            "max_baseline_drift": drift,
            "intervals": measured,
        },
        "missing baselines: " + ", ".join(missing) if missing else "",
    )


CRITERIA = (
    c01_stft_oracle,
    c02_frame_reconstruction,
    c03_full_lattice,
    c04_wigner_intertwining,
    c05_fundamental_identity,
    c06_diagram,
    c07_algebra,
    c08_cv_axioms,
    c09_young,
    c10_pseudoinverse,
    c11_wiener,
    c12_norm_equivalence,
)


def _run_one(fn, seed, **kw):
    try:
        return fn(seed, **kw)
    except ConfigError:
        raise
    except GaborLabError as exc:
        cid = CRITERIA.index(fn) + 1
        return Criterion(cid, fn.__name__, False, {}, f"{type(exc).__name__}: {exc}")


def run_battery(seed, weyl_N=15, progress=None):
    """Criteria 1-12 in order; ``progress`` is called with each finished Criterion."""
    if weyl_N % 2 == 0:
        raise ConfigError("group.N", f"Weyl-calculus criteria need odd N, got {weyl_N}")
    out = []
    for fn in CRITERIA:
        crit = _run_one(fn, seed, weyl_N=weyl_N)
        if progress:
            progress(crit)
        out.append(crit)
    return out


def summary_document(seed, results, weyl_N=15):
    return {
        "library": "gaborlab",
        "version": __version__,
        "rng": "numpy.random.PCG64 via default_rng([seed, criterion_id])",
        "seed": seed,
        "weyl_N": weyl_N,
        "criteria": [c.as_dict() for c in results],
    }


def c13_determinism(seed, first_json, weyl_N=15):
    again = dumps(summary_document(seed, run_battery(seed, weyl_N), weyl_N))
    same = again == first_json
    return Criterion(13, "Determinism: identical seed gives byte-identical JSON", same, {"bytes": len(first_json)})


def run_suite(seed, weyl_N=15, progress=None):
    """Full battery including the determinism re-run; returns (criteria, json_text)."""
    results = run_battery(seed, weyl_N, progress)
    text = dumps(summary_document(seed, results, weyl_N))
    det = c13_determinism(seed, text, weyl_N)
    if progress:
        progress(det)
    results.append(det)
    return results, dumps(summary_document(seed, results, weyl_N))
