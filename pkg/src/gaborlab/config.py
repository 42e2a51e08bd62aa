"""Experiment configuration: loading, validation and object construction.

A config is a YAML (or JSON) mapping::

    seed: 7
    experiment: Wiener
    output_dir: out/wiener
    group: {N: 105}
    lattice: {a: 5, b: 3}
    window: Gaussian            # or a list of N samples (reals or [re, im])
    weight: {kind: Polynomial, s: 2}
    weights:                    # optional named weights for norms
      sub: {kind: Subexponential, a: 0.5, b: 0.5}
    symbol: {kind: EpsPerturbation, eps: 0.3, width: 5}
    norms:
      - {p: 1, q: inf, weight: one}
    trials: 200

``norms[*].weight`` is ``one`` (m = 1), ``v`` (m = the admissible weight)
or a key of ``weights``.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, GaborLabError
from .gabor import Lattice, periodized_gaussian
from .generators import bandlimited_symbol, constant_symbol, eps_perturbation_symbol
from .modspace import MixedNormSpec, Weight, moderate

EXPERIMENTS = ("Stft", "GaborInfo", "Quantize", "GaborMatrix", "Decay", "Algebra", "Wiener", "Bounds", "Suite")
WEYL_EXPERIMENTS = {"GaborMatrix", "Decay", "Algebra", "Wiener", "Bounds"}
SYMBOL_EXPERIMENTS = WEYL_EXPERIMENTS | {"Quantize"}

_KNOWN_KEYS = {
    "seed", "experiment", "output_dir", "group", "lattice", "window", "weight",
    "weights", "symbol", "norms", "trials",
}


@dataclass
class ExperimentConfig:
    seed: int
    experiment: str
    output_dir: Path
    N: int
    a: int
    b: int
    window: object = "Gaussian"
    weight: dict = field(default_factory=lambda: {"kind": "Polynomial", "s": 2})
    weights: dict = field(default_factory=dict)
    symbol: object = field(default_factory=lambda: {"kind": "EpsPerturbation", "eps": 0.3, "width": 5})
    norms: list = field(default_factory=list)
    trials: int = 200
    raw: dict = field(default_factory=dict)

    def rng(self, stream=0):
        return np.random.default_rng([self.seed, stream])

    def echo(self):
        return _echo(self.raw)

    # object builders; each raises ConfigError naming the field

    def build_window(self):
        if isinstance(self.window, str):
            if self.window.lower() != "gaussian":
                raise ConfigError("window", f"unknown window kind {self.window!r} (expected Gaussian or samples)")
            return periodized_gaussian(self.N)
        samples = _complex_list(self.window, "window")
        if samples.shape[0] != self.N:
            raise ConfigError("window", f"{samples.shape[0]} samples given, group.N={self.N}")
        if not np.any(samples):
            raise ConfigError("window", "window samples are all zero")
        return samples

    def build_weight(self, spec=None, where="weight"):
        spec = self.weight if spec is None else spec
        return _weight(spec, where, self.N)

    def build_symbol(self, rng=None):
        rng = self.rng(1) if rng is None else rng
        return _symbol(self.symbol, self.N, rng)

    def build_norms(self, default_all=False):
        v = self.build_weight()
        norms = self.norms
        if not norms and default_all:
            norms = [{"p": p, "q": q, "weight": w} for w in ("one", "v") for p in (1, 2, "inf") for q in (1, 2, "inf")]
        cache = {}
        out = []
        for i, item in enumerate(norms):
            where = f"norms[{i}]"
            if not isinstance(item, dict):
                raise ConfigError(where, "expected a mapping with p, q, weight")
            p = _exponent(item.get("p"), f"{where}.p")
            q = _exponent(item.get("q"), f"{where}.q")
            ref = str(item.get("weight", "one"))
            if ref not in cache:
                if ref == "one":
                    m = Weight.constant()
                elif ref == "v":
                    m = v
                elif ref in self.weights:
                    m = self.build_weight(self.weights[ref], f"weights.{ref}")
                else:
                    raise ConfigError(f"{where}.weight", f"unknown weight reference {ref!r}")
                cache[ref] = moderate(m, v, self.N)
            out.append(MixedNormSpec(p, q, cache[ref]))
        return out


def _echo(obj):
    if isinstance(obj, dict):
        return {str(k): _echo(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_echo(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def _complex_list(values, where):
    try:
        arr = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in values]
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(where, f"expected a list of numbers or [re, im] pairs ({exc})") from None
    arr = np.array(arr, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ConfigError(where, "non-finite entries")
    return arr


def _exponent(val, where):
    if isinstance(val, str) and val.strip().lower() in ("inf", "infinity", "oo"):
        return np.inf
    try:
        val = float(val)
    except (TypeError, ValueError):
        raise ConfigError(where, f"expected a number in [1, inf] or 'inf', got {val!r}") from None
    if not 1 <= val <= np.inf:
        raise ConfigError(where, f"must lie in [1, inf], got {val}")
    return val


def _number(spec, key, where, default=None, positive=False):
    if key not in spec:
        if default is None:
            raise ConfigError(f"{where}.{key}", "missing")
        return default
    try:
        val = float(spec[key])
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key}", f"expected a number, got {spec[key]!r}") from None
    if positive and not val > 0:
        raise ConfigError(f"{where}.{key}", f"must be positive, got {val}")
    return val


def _weight(spec, where, N):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(where, "expected a mapping with a 'kind' field")
    kind = str(spec["kind"]).lower()
    try:
        if kind == "constant":
            return Weight.constant()
        if kind == "polynomial":
            return Weight.polynomial(_number(spec, "s", where))
        if kind == "subexponential":
            return Weight.subexponential(_number(spec, "a", where), _number(spec, "b", where))
        if kind == "custom":
            table = np.asarray(spec.get("table"), dtype=float)
            if table.shape != (N, N):
                raise ConfigError(f"{where}.table", f"expected an {N} x {N} table, got shape {table.shape}")
            return Weight.custom(table, grs=bool(spec.get("grs", False)))
    except ConfigError:
        raise
    except (GaborLabError, TypeError, ValueError) as exc:
        raise ConfigError(where, str(exc)) from None
    raise ConfigError(f"{where}.kind", f"unknown weight kind {spec['kind']!r}")


def _symbol(spec, N, rng):
    where = "symbol"
    if isinstance(spec, list):
        rows = [_complex_list(row, f"{where}[{i}]") for i, row in enumerate(spec)]
        if len(rows) != N or any(len(r) != N for r in rows):
            raise ConfigError(where, f"explicit symbol table must be {N} x {N}")
        table = np.array(rows)
        if table.shape != (N, N):
            raise ConfigError(where, f"explicit symbol table must be {N} x {N}, got {table.shape}")
        return table
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(where, "expected a generator mapping with 'kind' or an explicit N x N table")
    kind = str(spec["kind"]).lower()
    if kind == "constant":
        c = spec.get("c", 1.0)
        c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
        return constant_symbol(N, c)
    if kind == "epsperturbation":
        eps = _number(spec, "eps", where)
        if not 0 <= eps < 1:
            raise ConfigError(f"{where}.eps", f"must lie in [0, 1) for guaranteed invertibility, got {eps}")
        width = _number(spec, "width", where, default=5.0, positive=True)
        if N % 2 == 0:
            raise ConfigError("group.N", f"EpsPerturbation normalises a Weyl operator and needs odd N, got {N}")
        return eps_perturbation_symbol(N, eps, width, rng)
    if kind == "random":
        band = int(_number(spec, "band", where, default=2.0))
        if band < 0:
            raise ConfigError(f"{where}.band", "must be non-negative")
        return bandlimited_symbol(N, band, rng)
    raise ConfigError(f"{where}.kind", f"unknown symbol generator {spec['kind']!r}")


def _int(raw, key, where, minimum=None):
    if key not in raw:
        raise ConfigError(where, "missing")
    val = raw[key]
    if isinstance(val, bool) or not isinstance(val, (int, np.integer)) and not (isinstance(val, float) and val.is_integer()):
        raise ConfigError(where, f"expected an integer, got {val!r}")
    val = int(val)
    if minimum is not None and val < minimum:
        raise ConfigError(where, f"must be >= {minimum}, got {val}")
    return val


def parse_config(raw, seed=None, require_experiment=True):
    """Validate a raw mapping and return an :class:`ExperimentConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(unknown[0], "unknown field")
    raw = dict(raw)
    if seed is not None:
        raw["seed"] = seed
    seed_val = _int(raw, "seed", "seed", minimum=0) if "seed" in raw else 0
    if seed_val >= 2**64:
        raise ConfigError("seed", "must fit in an unsigned 64-bit integer")

    experiment = raw.get("experiment")
    if experiment is None:
        if require_experiment:
            raise ConfigError("experiment", f"missing (one of {', '.join(EXPERIMENTS)})")
        experiment = "Suite"
    match = [e for e in EXPERIMENTS if e.lower() == str(experiment).lower()]
    if not match:
        raise ConfigError("experiment", f"unknown experiment {experiment!r} (one of {', '.join(EXPERIMENTS)})")

    group = raw.get("group", {})
    lattice = raw.get("lattice", {})
    if not isinstance(group, dict):
        raise ConfigError("group", "expected a mapping with N")
    if not isinstance(lattice, dict):
        raise ConfigError("lattice", "expected a mapping with a, b")
    suite = match[0] == "Suite"
    N = _int(group, "N", "group.N", minimum=2) if (group or not suite) else 15
    a = _int(lattice, "a", "lattice.a", minimum=1) if (lattice or not suite) else 1
    b = _int(lattice, "b", "lattice.b", minimum=1) if (lattice or not suite) else 1
    for name, step in (("a", a), ("b", b)):
        if N % step:
            raise ConfigError(f"lattice.{name}", f"{step} does not divide group.N={N}")
    Lattice(N, a, b)

    trials = _int(raw, "trials", "trials", minimum=1) if "trials" in raw else 200
    weights = raw.get("weights", {}) or {}
    if not isinstance(weights, dict):
        raise ConfigError("weights", "expected a mapping of named weights")
    norms = raw.get("norms", []) or []
    if not isinstance(norms, list):
        raise ConfigError("norms", "expected a list of {p, q, weight}")

    cfg = ExperimentConfig(
        seed=seed_val,
        experiment=match[0],
        output_dir=Path(raw.get("output_dir", "gaborlab-out")),
        N=N,
        a=a,
        b=b,
        window=raw.get("window", "Gaussian"),
        weight=raw.get("weight", {"kind": "Polynomial", "s": 2}),
        weights=weights,
        symbol=raw.get("symbol", {"kind": "EpsPerturbation", "eps": 0.3, "width": 5}),
        norms=norms,
        trials=trials,
        raw=raw,
    )
    # eager validation of every referenced object
    if not suite:
        if cfg.experiment in WEYL_EXPERIMENTS and N % 2 == 0:
            raise ConfigError("group.N", f"{cfg.experiment} uses the Weyl calculus and needs odd N, got {N}")
        cfg.build_window()
        cfg.build_weight()
        for name, spec in weights.items():
            cfg.build_weight(spec, f"weights.{name}")
        cfg.build_norms()
        if cfg.experiment in SYMBOL_EXPERIMENTS:
            cfg.build_symbol(np.random.default_rng(0))
    return cfg


def load_config(path, seed=None, require_experiment=True):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text) if text.strip() else {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:line {mark.line + 1}" if mark else str(path)
        raise ConfigError(where, f"parse error: {getattr(exc, 'problem', exc)}") from None
    return parse_config(raw or {}, seed=seed, require_experiment=require_experiment)
