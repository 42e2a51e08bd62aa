"""Weights, weighted mixed norms l^{p,q}_m and discrete modulation norms.

Weights are evaluated at signed representatives in [-N/2, N/2)^2 and
``|z|`` is the Euclidean norm of that representative, so an increasing
radial profile stays submultiplicative under group addition.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import WeightError
from .gabor import Window, analyze
from .tf_core import signed

CHECK_PAIRS = 10_000
CHECK_SEED = 20240917
# all N^4 pairs are enumerated up to this group order, sampled beyond
EXHAUSTIVE_MAX_N = 64


@dataclass(frozen=True, eq=False)
class Weight:
    """Admissible weight v on the phase space Z_N x Z_N.

    Build through :meth:`constant`, :meth:`polynomial`,
    :meth:`subexponential` or :meth:`custom`; those run the admissibility
    checks. ``rotation`` counts applications of j^{-1} to the argument, so
    ``v.j_inverse()`` evaluates ``v(j^{-1} z)``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    table: np.ndarray = None
    grs: bool = True
    rotation: int = 0

    @classmethod
    def constant(cls):
        return cls("constant")._checked()

    @classmethod
    def polynomial(cls, s):
        if not s >= 0:
            raise WeightError(f"polynomial weight needs s >= 0, got {s}")
        return cls("polynomial", {"s": float(s)})._checked()

    @classmethod
    def subexponential(cls, a, b):
        if not a >= 0:
            raise WeightError(f"subexponential weight needs a >= 0, got {a}")
        if not 0 <= b < 1:
            raise WeightError(
                f"subexponential weight needs 0 <= b < 1, got b={b}; "
                "b = 1 violates the GRS condition (use Weight.custom with grs=False)"
            )
        return cls("subexponential", {"a": float(a), "b": float(b)})._checked()

    @classmethod
    def custom(cls, table, grs=False):
        """Weight given by an N x N table indexed by residues (x, xi).

        The GRS condition cannot be checked on a finite group, so ``grs``
        is metadata supplied by the caller.
        """
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise WeightError(f"custom weight table must be N x N, got {table.shape}")
        return cls("custom", {}, table, bool(grs))._checked()

    @property
    def label(self):
        body = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        rot = "" if self.rotation % 4 == 0 else f"@jinv{self.rotation % 4}"
        return f"{self.kind}({body}){rot}"

    def j_inverse(self):
        return Weight(self.kind, self.params, self.table, self.grs, (self.rotation + 1) % 4)

    def radial(self, r):
        if self.kind == "constant":
            return np.ones_like(r, dtype=float)
        if self.kind == "polynomial":
            return (1.0 + r) ** self.params["s"]
        if self.kind == "subexponential":
            return np.exp(self.params["a"] * r ** self.params["b"])
        raise WeightError("custom weights have no radial profile")

    def at(self, z):
        """Evaluate at real points ``z`` (..., 2) without any reduction."""
        z = np.asarray(z, dtype=float)
        for _ in range(self.rotation % 4):
            z = np.stack([-z[..., 1], z[..., 0]], axis=-1)
        return self.radial(np.hypot(z[..., 0], z[..., 1]))

    def __call__(self, z, N):
        """Evaluate at group elements ``z`` (..., 2) of Z_N x Z_N."""
        z = np.asarray(z)
        for _ in range(self.rotation % 4):
            z = np.stack([-z[..., 1], z[..., 0]], axis=-1)
        if self.kind == "custom":
            if self.table.shape[0] != N:
                raise WeightError(f"custom weight defined for N={self.table.shape[0]}, evaluated at N={N}")
            z = np.mod(z, N)
            return self.table[z[..., 0], z[..., 1]]
        rep = signed(z, N)
        return self.radial(np.hypot(rep[..., 0], rep[..., 1]))

    def grid(self, N):
        """N x N table of the weight over the whole phase space."""
        x, xi = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        return self(np.stack([x, xi], axis=-1), N)

    def _checked(self):
        rng = np.random.default_rng(CHECK_SEED)
        if self.kind == "custom":
            N = self.table.shape[0]
            if not np.all(np.isfinite(self.table)) or np.any(self.table <= 0):
                raise WeightError("custom weight must be finite and positive")
            if not np.isclose(self.table[0, 0], 1.0, rtol=0, atol=1e-12):
                raise WeightError(f"weight must satisfy v(0) = 1, got {self.table[0, 0]}")
            flip = -np.arange(N) % N
            if not (np.allclose(self.table, self.table[flip, :]) and np.allclose(self.table, self.table[:, flip])):
                raise WeightError("weight must be even in each coordinate")
            w = rng.integers(0, N, size=(CHECK_PAIRS, 2))
            z = rng.integers(0, N, size=(CHECK_PAIRS, 2))
            lhs = self(w + z, N)
            rhs = self(w, N) * self(z, N)
        else:
            if not np.isclose(self.at(np.zeros(2)), 1.0):
                raise WeightError("weight must satisfy v(0) = 1")
            w = rng.uniform(-128, 128, size=(CHECK_PAIRS, 2))
            z = rng.uniform(-128, 128, size=(CHECK_PAIRS, 2))
            if not np.allclose(self.at(w), self.at(w * np.array([-1, 1]))):
                raise WeightError("weight must be even in each coordinate")
            lhs = self.at(w + z)
            rhs = self.at(w) * self.at(z)
        if np.any(lhs > rhs * (1 + 1e-12)):
            raise WeightError(f"weight {self.label} is not submultiplicative on the sampled pairs")
        return self


@dataclass(frozen=True, eq=False)
class ModerateWeight:
    """Weight m with m(w + z) <= C v(z) m(w) for the governing weight v."""

    m: Weight
    base: Weight
    C: float
    N: int

    @property
    def label(self):
        return f"{self.m.label}|{self.base.label}"

    def __call__(self, z):
        return self.m(z, self.N)


def moderate(m, v, N):
    """Pair ``m`` with ``v`` on Z_N x Z_N and measure the moderateness constant.

    C = max m(w + z) / (v(z) m(w)) over all pairs for N <= 64, otherwise
    over CHECK_PAIRS seeded random pairs.
    """
    mg, vg = m.grid(N), v.grid(N)
    if N <= EXHAUSTIVE_MAX_N:
        C = 0.0
        x = np.arange(N)
        for w1 in range(N):
            for w2 in range(N):
                # shifted[z1, z2] = m(w + z)
                shifted = mg[np.ix_((w1 + x) % N, (w2 + x) % N)]
                C = max(C, float(np.max(shifted / (vg * mg[w1, w2]))))
    else:
        rng = np.random.default_rng(CHECK_SEED)
        w = rng.integers(0, N, size=(CHECK_PAIRS, 2))
        z = rng.integers(0, N, size=(CHECK_PAIRS, 2))
        s = (w + z) % N
        C = float(np.max(mg[s[:, 0], s[:, 1]] / (vg[z[:, 0], z[:, 1]] * mg[w[:, 0], w[:, 1]])))
    if not np.isfinite(C):
        raise WeightError(f"{m.label} is not moderate with respect to {v.label}")
    return ModerateWeight(m, v, C, N)


@dataclass(frozen=True)
class MixedNormSpec:
    p: float
    q: float
    m: ModerateWeight

    def __post_init__(self):
        for name in ("p", "q"):
            val = getattr(self, name)
            if not 1 <= val <= np.inf:
                raise WeightError(f"{name} must lie in [1, inf], got {val}")

    @property
    def label(self):
        return f"p={self.p:g},q={self.q:g},m={self.m.label}"


def mixed_norm(c, lattice, spec):
    """Weighted mixed norm: inner l^p over time index k, outer l^q over frequency index l."""
    weights = spec.m(lattice.points).reshape(lattice.n_freq, lattice.n_time)
    grid = np.abs(np.asarray(c)).reshape(lattice.n_freq, lattice.n_time) * weights
    inner = np.linalg.norm(grid, ord=spec.p, axis=1)
    return float(np.linalg.norm(inner, ord=spec.q))


def mod_norm(f, sys, spec, window=Window.PRIMARY):
    """Discrete M^{p,q}_m norm of ``f`` through its Gabor coefficients."""
    return mixed_norm(analyze(sys, f, window), sys.lattice, spec)


@dataclass
class YoungReport:
    max_ratio: float
    cv_norm: float
    moderate_constant: float
    trials: int

    @property
    def bound(self):
        return self.cv_norm * self.moderate_constant

    @property
    def ok(self):
        return self.max_ratio <= self.bound * (1 + 1e-12)


def random_coefficients(K, trials, rng):
    """Test vectors for operator-norm probing: dense complex Gaussians and unit impulses."""
    out = rng.normal(size=(trials, K)) + 1j * rng.normal(size=(trials, K))
    sparse = rng.integers(0, K, size=trials // 2)
    out[: trials // 2] = 0
    out[np.arange(trials // 2), sparse] = 1.0
    return out


def young_bound_check(M, v, spec, trials=200, rng=None):
    """Witness ||M c||_{p,q,m} <= ||M||_{C_v} C_m ||c||_{p,q,m} on random c."""
    from .gabor_matrix import cv_norm

    rng = np.random.default_rng(0) if rng is None else rng
    A = M.values
    worst = 0.0
    for c in random_coefficients(M.lattice.K, trials, rng):
        den = mixed_norm(c, M.lattice, spec)
        if den > 0:
            worst = max(worst, mixed_norm(A @ c, M.lattice, spec) / den)
    return YoungReport(worst, cv_norm(M, v), spec.m.C, trials)
