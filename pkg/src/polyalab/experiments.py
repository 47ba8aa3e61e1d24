"""Experiment configuration and drivers behind the CLI.

A config file is one YAML mapping: `experiment` picks the driver, `label`,
`seed`, and `schema` are bookkeeping, and the remaining keys are the
driver's payload (sets, measures, germs, degree lists, search knobs).
Every driver is a pure function of (config, seed): worker counts only
change how the fixed chunk and restart schedule is executed, never the
numbers, so reports are reproducible byte for byte.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml

from .domains import (
    Box,
    Circle,
    CompactFamily,
    CompactSet,
    Disk,
    FiniteSet,
    Interval,
    ProductSet,
    constant_family,
    interval_family,
)
from .functionals import (
    GermCoefficients,
    coeffs_from_contour,
    coeffs_from_measure,
    hankel_logdet,
    polya_sequence,
)
from .measures import (
    ArcsineMeasure,
    CircleUniform,
    DiscreteMeasure,
    DiskUniform,
    Measure,
    ProductMeasure,
    ScaledMeasure,
    UniformSegment,
    bernstein_markov_ratio,
    log_factorial,
    z_s_gram,
    z_s_montecarlo,
)
from .multiindex import count_at_most, degree_counts
from .reporting import ReportRow, SCHEMA_VERSION
from .vandermonde import (
    SearchStrategy,
    fekete_search,
    transfinite_diameter_estimate,
)

DEFAULT_SLACK = 0.05
DEFAULT_SEARCH_CAP = 30
DEFAULT_SHARPNESS_TOL = 1e-10
DEFAULT_SAMPLES = 100_000
DEFAULT_CHUNK = 4096
DEFAULT_GRID = 4096

EXPERIMENT_KINDS = (
    "tdiam",
    "fekete",
    "hankel",
    "polya-check",
    "sharpness",
    "stability",
    "zs-check",
    "bm-ratio",
)

_RESERVED_KEYS = {"schema", "experiment", "label", "seed"}


class ConfigError(ValueError):
    """A config file that cannot be turned into a runnable experiment."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: kind, identity, seed, and the kind-specific payload."""

    experiment: str
    label: str
    seed: int
    spec: dict

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_KINDS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENT_KINDS}"
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        bad = _RESERVED_KEYS & set(self.spec)
        if bad:
            raise ConfigError(f"payload keys collide with reserved names: {sorted(bad)}")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "experiment": self.experiment,
            "label": self.label,
            "seed": self.seed,
            **self.spec,
        }

    @staticmethod
    def from_dict(data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"config must be a mapping, got {type(data).__name__}")
        payload = dict(data)
        schema = payload.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported config schema {schema!r}")
        try:
            experiment = payload.pop("experiment")
        except KeyError:
            raise ConfigError("config is missing the 'experiment' key") from None
        label = str(payload.pop("label", experiment))
        seed = payload.pop("seed", 0)
        return ExperimentConfig(experiment=experiment, label=label, seed=seed, spec=payload)

    @staticmethod
    def load(path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
        return ExperimentConfig.from_dict(data)

    def dump_text(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)


def _need(spec: dict, key: str, ctx: str):
    if key not in spec:
        raise ConfigError(f"{ctx}: missing required key {key!r}")
    return spec[key]


def _as_scalar(value, ctx: str) -> complex:
    """A config scalar: a real number, or a {re:, im:} mapping."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(float(value))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    raise ConfigError(f"{ctx}: expected a number or {{re, im}} mapping, got {value!r}")


def _as_point(value, ctx: str) -> tuple[complex, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(_as_scalar(v, ctx) for v in value)
    return (_as_scalar(value, ctx),)


def _as_fraction(value, ctx: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{ctx}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise ConfigError(f"{ctx}: bad fraction literal {value!r}") from exc
    raise ConfigError(f"{ctx}: expected a number or fraction string, got {value!r}")


def build_compact(spec, ctx: str = "set") -> CompactSet:
    if not isinstance(spec, dict):
        raise ConfigError(f"{ctx}: expected a mapping, got {spec!r}")
    kind = _need(spec, "kind", ctx)
    try:
        if kind == "interval":
            return Interval(float(_need(spec, "a", ctx)), float(_need(spec, "b", ctx)))
        if kind == "circle":
            center = _as_scalar(spec.get("center", 0.0), ctx)
            return Circle(center, float(_need(spec, "radius", ctx)))
        if kind == "disk":
            center = _as_scalar(spec.get("center", 0.0), ctx)
            return Disk(center, float(_need(spec, "radius", ctx)))
        if kind == "box":
            bounds = _need(spec, "bounds", ctx)
            return Box(tuple((float(a), float(b)) for a, b in bounds))
        if kind == "product":
            factors = _need(spec, "factors", ctx)
            return ProductSet(
                tuple(build_compact(f, f"{ctx}.factors[{i}]") for i, f in enumerate(factors))
            )
        if kind == "finite":
            points = _need(spec, "points", ctx)
            return FiniteSet(tuple(_as_point(p, f"{ctx}.points") for p in points))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}: unknown compact-set kind {kind!r}")


def build_family(spec, ctx: str = "family") -> CompactFamily:
    if not isinstance(spec, dict):
        raise ConfigError(f"{ctx}: expected a mapping, got {spec!r}")
    kind = _need(spec, "kind", ctx)
    try:
        if kind == "interval":
            return interval_family(
                float(_need(spec, "a", ctx)),
                float(_need(spec, "b", ctx)),
                side=str(spec.get("side", "outer")),
                rate=float(spec.get("rate", 1.0)),
            )
        if kind == "constant":
            return constant_family(build_compact(_need(spec, "set", ctx), f"{ctx}.set"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}: unknown family kind {kind!r}")


def build_measure(spec, ctx: str = "measure") -> Measure:
    if not isinstance(spec, dict):
        raise ConfigError(f"{ctx}: expected a mapping, got {spec!r}")
    kind = _need(spec, "kind", ctx)
    mass = spec.get("mass")
    try:
        if kind == "arcsine":
            out: Measure = ArcsineMeasure(float(spec.get("a", -1.0)), float(spec.get("b", 1.0)))
        elif kind == "uniform":
            out = UniformSegment(float(_need(spec, "a", ctx)), float(_need(spec, "b", ctx)))
        elif kind == "circle":
            out = CircleUniform(float(spec.get("radius", 1.0)))
        elif kind == "disk":
            out = DiskUniform(float(spec.get("radius", 1.0)))
        elif kind == "discrete":
            atoms = tuple(
                _as_point(p, f"{ctx}.atoms") for p in _need(spec, "atoms", ctx)
            )
            weights = tuple(
                _as_fraction(w, f"{ctx}.weights") for w in _need(spec, "weights", ctx)
            )
            out = DiscreteMeasure(atoms, weights)
        elif kind == "product":
            factors = _need(spec, "factors", ctx)
            out = ProductMeasure(
                tuple(build_measure(f, f"{ctx}.factors[{i}]") for i, f in enumerate(factors))
            )
        else:
            raise ConfigError(f"{ctx}: unknown measure kind {kind!r}")
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    if mass is not None:
        out = ScaledMeasure(out, _as_fraction(mass, f"{ctx}.mass"))
    return out


def _power_coeffs(c: complex, label: str) -> GermCoefficients:
    # moments of a unit point mass at c: a_k = c^k, exact for real c
    exact_fn = None
    if c.imag == 0.0:
        base = Fraction(c.real)

        def exact_fn(k):
            return base ** k[0]

    return GermCoefficients(
        dim=1, label=label, fn=lambda k: c ** k[0], exact_fn=exact_fn
    )


_CONTOUR_GERMS: dict[str, Callable[..., Any]] = {}


def _contour_germ(spec, ctx: str) -> tuple[Callable[..., Any], int, str]:
    kind = _need(spec, "kind", ctx)
    if kind == "inverse":
        return (lambda z: 1.0 / z), 1, "inverse"
    if kind == "geometric":
        c = _as_scalar(_need(spec, "c", ctx), ctx)
        return (lambda z: 1.0 / (z - c)), 1, f"geometric({c})"
    if kind == "inverse-product":
        dim = int(spec.get("dim", 2))
        if dim < 1:
            raise ConfigError(f"{ctx}: dim must be positive")

        def germ(*zs):
            out = 1.0
            for z in zs:
                out = out / z
            return out

        return germ, dim, f"inverse-product(dim={dim})"
    raise ConfigError(f"{ctx}: unknown contour germ kind {kind!r}")


def build_germ(spec, ctx: str = "germ") -> GermCoefficients:
    if not isinstance(spec, dict):
        raise ConfigError(f"{ctx}: expected a mapping, got {spec!r}")
    kind = _need(spec, "kind", ctx)
    if kind == "measure":
        measure = build_measure(_need(spec, "measure", ctx), f"{ctx}.measure")
        return coeffs_from_measure(measure)
    if kind == "point-mass":
        return _power_coeffs(_as_scalar(_need(spec, "c", ctx), ctx), "point-mass")
    if kind == "geometric":
        return _power_coeffs(_as_scalar(_need(spec, "c", ctx), ctx), "geometric")
    if kind == "contour":
        germ, dim, label = _contour_germ(_need(spec, "germ", ctx), f"{ctx}.germ")
        try:
            return coeffs_from_contour(
                germ,
                dim=dim,
                radius=float(_need(spec, "radius", ctx)),
                grid_size=int(spec.get("grid", 64)),
                label=label,
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}: unknown germ kind {kind!r}")


_STRATEGY_KEYS = {
    "pool_size",
    "exchange_passes",
    "refine_levels",
    "refine_candidates",
    "restarts",
    "improvement_tol",
    "mode",
}


def build_strategy(spec, workers: int, ctx: str = "search") -> SearchStrategy:
    if spec is None:
        return SearchStrategy(workers=workers)
    if not isinstance(spec, dict):
        raise ConfigError(f"{ctx}: expected a mapping, got {spec!r}")
    unknown = set(spec) - _STRATEGY_KEYS
    if unknown:
        raise ConfigError(f"{ctx}: unknown strategy keys {sorted(unknown)}")
    try:
        return SearchStrategy(workers=workers, **spec)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc


def _degree_list(spec: dict, key: str, ctx: str, minimum: int = 1) -> list[int]:
    raw = _need(spec, key, ctx)
    if not isinstance(raw, (list, tuple)) or not raw:
        raise ConfigError(f"{ctx}: {key} must be a non-empty list of integers")
    out = []
    for v in raw:
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            raise ConfigError(f"{ctx}: {key} entries must be integers >= {minimum}")
        out.append(v)
    return out


def _cell_seed(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=tuple(int(v) for v in key))


@dataclass
class RunResult:
    """Everything one experiment run produced, before serialization."""

    config: ExperimentConfig
    rows: list[ReportRow] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    workers: int = 1
    wall_clock: float = 0.0


def _diameter_with_cap(
    kset: CompactSet,
    s: int,
    strategy: SearchStrategy,
    cap: int,
    seed,
):
    """Search below the cap; above it fall back to the reference configuration."""
    if s <= cap:
        return transfinite_diameter_estimate(kset, s, strategy, seed)
    ref_strategy = replace(strategy, mode="reference")
    try:
        return transfinite_diameter_estimate(kset, s, ref_strategy, seed)
    except ValueError as exc:
        raise ConfigError(
            f"degree {s} exceeds the search cap {cap} and the set has no "
            f"reference configuration to evaluate instead"
        ) from exc


def run_tdiam(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    kset = build_compact(_need(spec, "set", "tdiam"))
    degrees = _degree_list(spec, "degrees", "tdiam")
    cap = int(spec.get("search_cap", DEFAULT_SEARCH_CAP))
    strategy = build_strategy(spec.get("search"), workers)
    result = RunResult(cfg, workers=workers)
    for s in degrees:
        t0 = time.perf_counter()
        est = _diameter_with_cap(kset, s, strategy, cap, _cell_seed(cfg.seed, 1, s))
        wall = time.perf_counter() - t0
        result.rows.append(
            ReportRow(cfg.experiment, cfg.label, "d_s", est.d_s, cfg.seed, s=s, wall_clock=wall)
        )
        result.rows.append(
            ReportRow(cfg.experiment, cfg.label, "log_vdm", est.log_vdm, cfg.seed, s=s)
        )
    return result


def run_fekete(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    kset = build_compact(_need(spec, "set", "fekete"))
    sizes = _degree_list(spec, "sizes", "fekete")
    strategy = build_strategy(spec.get("search"), workers)
    result = RunResult(cfg, workers=workers)
    configs: dict[str, list] = {}
    for size in sizes:
        t0 = time.perf_counter()
        found = fekete_search(kset, size, strategy, _cell_seed(cfg.seed, 2, size))
        wall = time.perf_counter() - t0
        result.rows.append(
            ReportRow(
                cfg.experiment, cfg.label, "log_vdm", found.log_abs, cfg.seed,
                i=size, wall_clock=wall,
            )
        )
        configs[str(size)] = [
            [[float(v.real), float(v.imag)] for v in point] for point in found.points
        ]
    result.extras["configurations"] = configs
    return result


def run_hankel(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    germ = build_germ(_need(spec, "germ", "hankel"))
    i_max = int(_need(spec, "i_max", "hankel"))
    if i_max < 1:
        raise ConfigError("hankel: i_max must be positive")
    result = RunResult(cfg, workers=workers)
    t0 = time.perf_counter()
    report = polya_sequence(germ, i_max)
    wall = time.perf_counter() - t0
    for term in report.terms:
        result.rows.append(
            ReportRow(
                cfg.experiment, cfg.label, "log_hankel", term.hankel.log_abs,
                cfg.seed, i=term.index, wall_clock=wall / len(report.terms),
            )
        )
        if term.quantity is not None:
            result.rows.append(
                ReportRow(
                    cfg.experiment, cfg.label, "polya_D", term.quantity,
                    cfg.seed, i=term.index,
                )
            )
    return result


def run_polya_check(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    pairs = _need(spec, "pairs", "polya-check")
    if not isinstance(pairs, list) or not pairs:
        raise ConfigError("polya-check: pairs must be a non-empty list")
    slack = float(spec.get("slack", DEFAULT_SLACK))
    cap = int(spec.get("search_cap", DEFAULT_SEARCH_CAP))
    strategy = build_strategy(spec.get("search"), workers)
    result = RunResult(cfg, workers=workers)
    for p_idx, pair in enumerate(pairs):
        ctx = f"polya-check.pairs[{p_idx}]"
        if not isinstance(pair, dict):
            raise ConfigError(f"{ctx}: expected a mapping")
        plabel = str(pair.get("label", f"pair{p_idx}"))
        kset = build_compact(_need(pair, "set", ctx), f"{ctx}.set")
        germ = build_germ(_need(pair, "germ", ctx), f"{ctx}.germ")
        if kset.dim != germ.dim:
            raise ConfigError(f"{ctx}: set dimension {kset.dim} != germ dimension {germ.dim}")
        s_max = int(_need(pair, "s_max", ctx))
        if s_max < 1:
            raise ConfigError(f"{ctx}: s_max must be positive")
        i_max = int(pair.get("i_max", count_at_most(kset.dim, s_max)))
        d_last = None
        for s in range(1, s_max + 1):
            t0 = time.perf_counter()
            est = _diameter_with_cap(kset, s, strategy, cap, _cell_seed(cfg.seed, 3, p_idx, s))
            wall = time.perf_counter() - t0
            result.rows.append(
                ReportRow(
                    cfg.experiment, plabel, "d_s", est.d_s, cfg.seed, s=s, wall_clock=wall
                )
            )
            d_last = est.d_s
        t0 = time.perf_counter()
        report = polya_sequence(germ, i_max)
        wall = time.perf_counter() - t0
        for term in report.terms:
            result.rows.append(
                ReportRow(
                    cfg.experiment, plabel, "log_hankel", term.hankel.log_abs,
                    cfg.seed, i=term.index, wall_clock=wall / len(report.terms),
                )
            )
            if term.quantity is not None:
                result.rows.append(
                    ReportRow(
                        cfg.experiment, plabel, "polya_D", term.quantity,
                        cfg.seed, i=term.index,
                    )
                )
        top = report.max_quantity()
        result.rows.append(
            ReportRow(
                cfg.experiment, plabel, "max_polya_D",
                top if top is not None else 0.0, cfg.seed, i=i_max,
            )
        )
        if top is not None and d_last is not None and top > d_last + slack:
            result.flags.append(
                f"{plabel}: max D_i = {top:.6f} exceeds d_{s_max} = {d_last:.6f} "
                f"+ slack {slack}"
            )
    return result


def run_sharpness(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    kset = build_compact(_need(spec, "set", "sharpness"))
    if not kset.is_real:
        raise ConfigError(
            "sharpness: the pipeline is only valid for real sets (K inside R^n); "
            f"got a non-real set of kind {type(kset).__name__}"
        )
    measure = build_measure(_need(spec, "measure", "sharpness"))
    if measure.dim != kset.dim:
        raise ConfigError("sharpness: measure and set dimensions differ")
    rng = np.random.default_rng(_cell_seed(cfg.seed, 4, 0))
    for point in measure.sample(rng, 16):
        if not kset.contains(point, tol=1e-6):
            raise ConfigError("sharpness: the measure is not supported on the set")
    degrees = _degree_list(spec, "degrees", "sharpness")
    cap = int(spec.get("search_cap", DEFAULT_SEARCH_CAP))
    tol = float(spec.get("tolerance", DEFAULT_SHARPNESS_TOL))
    strategy = build_strategy(spec.get("search"), workers)
    germ = coeffs_from_measure(measure)
    result = RunResult(cfg, workers=workers)
    for s in degrees:
        counts = degree_counts(kset.dim, s)
        m = counts.at_most
        t0 = time.perf_counter()
        log_z = z_s_gram(measure, s).log_abs
        hank = hankel_logdet(germ, m)
        hankel_route = log_factorial(m) + hank.log_abs
        wall = time.perf_counter() - t0
        if log_z == hankel_route:
            diff = 0.0  # covers the doubly singular case (-inf on both sides)
        else:
            diff = log_z - hankel_route
        quantity = 0.0 if hank.is_zero else math.exp(hank.log_abs / (2.0 * counts.degree_sum))
        t0 = time.perf_counter()
        est = _diameter_with_cap(kset, s, strategy, cap, _cell_seed(cfg.seed, 4, s))
        search_wall = time.perf_counter() - t0
        result.rows.extend(
            [
                ReportRow(cfg.experiment, cfg.label, "log_zs", log_z, cfg.seed, s=s,
                          wall_clock=wall),
                ReportRow(cfg.experiment, cfg.label, "log_hankel_route", hankel_route,
                          cfg.seed, s=s),
                ReportRow(cfg.experiment, cfg.label, "sharpness_diff", diff, cfg.seed, s=s),
                ReportRow(cfg.experiment, cfg.label, "polya_D", quantity, cfg.seed, s=s),
                ReportRow(cfg.experiment, cfg.label, "d_s", est.d_s, cfg.seed, s=s,
                          wall_clock=search_wall),
                ReportRow(cfg.experiment, cfg.label, "sharpness_gap",
                          abs(quantity - est.d_s), cfg.seed, s=s),
            ]
        )
        if not math.isnan(diff) and abs(diff) > tol:
            result.flags.append(
                f"s={s}: Gram and Hankel routes disagree by {diff:.3e} (tolerance {tol})"
            )
    return result


def run_stability(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    family = build_family(_need(spec, "family", "stability"))
    s = int(_need(spec, "s", "stability"))
    if s < 1:
        raise ConfigError("stability: s must be positive")
    j_values = _degree_list(spec, "j_values", "stability")
    if any(b <= a for a, b in zip(j_values, j_values[1:])):
        raise ConfigError("stability: j_values must be strictly increasing")
    cap = int(spec.get("search_cap", DEFAULT_SEARCH_CAP))
    strategy = build_strategy(spec.get("search"), workers)
    result = RunResult(cfg, workers=workers)
    values = []
    for j in j_values:
        try:
            member = family.member(j)
        except ValueError as exc:
            raise ConfigError(f"stability: family member j={j} is degenerate: {exc}") from exc
        t0 = time.perf_counter()
        est = _diameter_with_cap(member, s, strategy, cap, _cell_seed(cfg.seed, 5, j))
        wall = time.perf_counter() - t0
        result.rows.append(
            ReportRow(cfg.experiment, cfg.label, "d_s", est.d_s, cfg.seed, s=s, j=j,
                      wall_clock=wall)
        )
        values.append(est.d_s)
    t0 = time.perf_counter()
    base = _diameter_with_cap(family.limit, s, strategy, cap, _cell_seed(cfg.seed, 5, 0))
    wall = time.perf_counter() - t0
    result.rows.append(
        ReportRow(cfg.experiment, cfg.label, "d_s_limit", base.d_s, cfg.seed, s=s,
                  wall_clock=wall)
    )
    if family.direction == "outer":
        ok = all(x > y for x, y in zip(values, values[1:])) and all(
            v >= base.d_s - 1e-12 for v in values
        )
        if not ok:
            result.flags.append("outer family column is not strictly decreasing toward the base")
    elif family.direction == "inner":
        ok = all(x < y for x, y in zip(values, values[1:])) and all(
            v <= base.d_s + 1e-12 for v in values
        )
        if not ok:
            result.flags.append("inner family column is not strictly increasing toward the base")
    return result


def run_zs_check(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    measure = build_measure(_need(spec, "measure", "zs-check"))
    degrees = _degree_list(spec, "degrees", "zs-check", minimum=0)
    samples = int(spec.get("samples", DEFAULT_SAMPLES))
    chunk = int(spec.get("chunk_size", DEFAULT_CHUNK))
    result = RunResult(cfg, workers=workers)
    for s in degrees:
        t0 = time.perf_counter()
        log_gram = z_s_gram(measure, s).log_abs
        mc = z_s_montecarlo(
            measure, s, samples=samples, seed=_cell_seed(cfg.seed, 6, s),
            workers=workers, chunk_size=chunk,
        )
        wall = time.perf_counter() - t0
        if log_gram == mc.log_value:
            zscore = 0.0  # exact agreement, including the doubly singular case
        elif mc.std_error_log > 0 and math.isfinite(mc.log_value) and math.isfinite(log_gram):
            zscore = (mc.log_value - log_gram) / mc.std_error_log
        else:
            zscore = math.inf
        result.rows.extend(
            [
                ReportRow(cfg.experiment, cfg.label, "log_zs_gram", log_gram, cfg.seed,
                          s=s, wall_clock=wall),
                ReportRow(cfg.experiment, cfg.label, "log_zs_mc", mc.log_value, cfg.seed,
                          s=s, std_error=mc.std_error_log),
                ReportRow(cfg.experiment, cfg.label, "zscore", zscore, cfg.seed, s=s),
            ]
        )
        if abs(zscore) > 3.0:
            result.flags.append(
                f"s={s}: Monte Carlo and Gram routes disagree ({zscore:.2f} sigma)"
            )
    return result


def run_bm_ratio(cfg: ExperimentConfig, workers: int) -> RunResult:
    spec = cfg.spec
    measure = build_measure(_need(spec, "measure", "bm-ratio"))
    degrees = _degree_list(spec, "degrees", "bm-ratio", minimum=0)
    grid = int(spec.get("grid", DEFAULT_GRID))
    result = RunResult(cfg, workers=workers)
    for s in degrees:
        t0 = time.perf_counter()
        ratio = bernstein_markov_ratio(measure, s, per_axis=grid)
        wall = time.perf_counter() - t0
        result.rows.append(
            ReportRow(cfg.experiment, cfg.label, "bm_ratio", ratio, cfg.seed, s=s,
                      wall_clock=wall)
        )
        if s >= 1 and math.isfinite(ratio):
            result.rows.append(
                ReportRow(cfg.experiment, cfg.label, "bm_ratio_root",
                          ratio ** (1.0 / s), cfg.seed, s=s)
            )
        if not math.isfinite(ratio):
            result.flags.append(f"s={s}: ratio is infinite (singular Gram matrix)")
    return result


_RUNNERS: dict[str, Callable[[ExperimentConfig, int], RunResult]] = {
    "tdiam": run_tdiam,
    "fekete": run_fekete,
    "hankel": run_hankel,
    "polya-check": run_polya_check,
    "sharpness": run_sharpness,
    "stability": run_stability,
    "zs-check": run_zs_check,
    "bm-ratio": run_bm_ratio,
}


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> RunResult:
    """Dispatch to the driver; wall clock covers the whole run."""
    if workers < 1:
        raise ConfigError("workers must be positive")
    runner = _RUNNERS[cfg.experiment]
    t0 = time.perf_counter()
    result = runner(cfg, workers)
    result.wall_clock = time.perf_counter() - t0
    result.workers = workers
    return result
