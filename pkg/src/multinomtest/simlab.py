"""Probability-vector generators and the Monte Carlo experiment harness.

Each replicate draws from its own random stream derived from
``(seed, replicate_index)``, so results are bit-identical for a fixed seed
no matter how replicates are scheduled across threads. Replicates whose
variance estimate degenerates (possible at extreme sparsity) count as
non-rejections and are tallied separately.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .core import CountVector, ProbabilityVector, TwoSampleCounts, std_normal_sf
from .errors import (
    ConfigError,
    DegeneratePermutationError,
    DegenerateVarianceError,
    DomainError,
    InsufficientSupportError,
)
from .stats import (
    bai_saranadasa_test,
    pearson_chi2,
    proposed_test,
    zelterman_test,
)

__all__ = [
    "ScenarioSpec",
    "ExperimentConfig",
    "MethodResult",
    "ExperimentReport",
    "zipf_probs",
    "swap_entries",
    "spike_merge",
    "zero_renorm",
    "scenario_probs",
    "sample_multinomial",
    "replicate_stream",
    "run_experiment",
    "null_normality_diagnostic",
    "ks_distance_to_normal",
    "METHOD_NAMES",
]

METHOD_NAMES = ("proposed", "chi2", "zelterman", "bs")

GENERATORS = ("uniform", "zipf", "swap", "spike_merge", "zero_renorm")


def zipf_probs(k: int, gamma: float) -> ProbabilityVector:
    """Power-law cell probabilities p_i proportional to 1/i^gamma.

    ``gamma = 0`` degenerates to the uniform vector.
    """
    if k < 1:
        raise DomainError("k must be at least 1")
    if gamma < 0:
        raise DomainError("gamma must be nonnegative")
    raw = 1.0 / np.arange(1, k + 1, dtype=np.float64) ** gamma
    return ProbabilityVector(probs=raw / raw.sum())


def swap_entries(p: ProbabilityVector, i: int, j: int) -> ProbabilityVector:
    """Exchange entries i and j (0-based); an involution."""
    k = p.k
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"swap indices ({i}, {j}) out of range for k={k}")
    if i == j:
        raise IndexError("swap indices must be distinct")
    out = np.array(p.probs, dtype=np.float64)
    out[i], out[j] = out[j], out[i]
    return ProbabilityVector(probs=out)


def spike_merge(k: int, b: int) -> ProbabilityVector:
    """Zero out the first b uniform cells and pile their mass onto cell b+1.

    Entry b+1 (1-based) receives (b+1)/k; the remaining cells keep 1/k.
    ``b = 0`` is the uniform vector.
    """
    if b < 0 or b + 1 >= k:
        raise IndexError(f"need 0 <= b and b + 1 < k, got b={b}, k={k}")
    out = np.full(k, 1.0 / k, dtype=np.float64)
    out[:b] = 0.0
    out[b] = (b + 1) / k
    return ProbabilityVector(probs=out)


def zero_renorm(k: int, b: int) -> ProbabilityVector:
    """Zero out the first b uniform cells and renormalize the rest to 1/(k-b)."""
    if b < 0 or b >= k:
        raise IndexError(f"need 0 <= b < k, got b={b}, k={k}")
    out = np.zeros(k, dtype=np.float64)
    out[b:] = 1.0 / (k - b)
    return ProbabilityVector(probs=out)


@dataclass(frozen=True)
class ScenarioSpec:
    """One group's sampling configuration.

    ``generator`` is one of uniform | zipf | swap | spike_merge |
    zero_renorm. ``swap`` builds a zipf(gamma) base and exchanges the
    1-based positions ``swap_i`` and ``swap_j``. Block generators read
    ``b``; zipf-family generators read ``gamma``.
    """

    generator: str
    k: int
    n1: int
    n2: int
    gamma: float | None = None
    b: int | None = None
    swap_i: int | None = None
    swap_j: int | None = None

    def __post_init__(self) -> None:
        if self.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {self.generator!r}")
        if self.k < 1:
            raise ConfigError("k must be at least 1")
        if self.n1 < 1 or self.n2 < 1:
            raise ConfigError("group sizes must be at least 1")
        if self.generator in ("zipf", "swap") and self.gamma is None:
            raise ConfigError(f"{self.generator} requires gamma")
        if self.generator in ("spike_merge", "zero_renorm"):
            if self.b is None:
                raise ConfigError(f"{self.generator} requires b")
            limit = self.k - 1 if self.generator == "spike_merge" else self.k
            if not 0 <= self.b < limit:
                raise ConfigError(
                    f"block size b={self.b} out of range for k={self.k}"
                )
        if self.generator == "swap":
            i, j = self.swap_i, self.swap_j
            if i is None or j is None:
                raise ConfigError("swap requires swap_i and swap_j")
            if not (1 <= i <= self.k and 1 <= j <= self.k) or i == j:
                raise ConfigError(
                    f"swap positions must be distinct and within 1..k, got ({i}, {j})"
                )


def scenario_probs(spec: ScenarioSpec) -> ProbabilityVector:
    """Materialize the probability vector a scenario describes."""
    if spec.generator == "uniform":
        return ProbabilityVector(probs=np.full(spec.k, 1.0 / spec.k))
    if spec.generator == "zipf":
        return zipf_probs(spec.k, spec.gamma)
    if spec.generator == "swap":
        base = zipf_probs(spec.k, spec.gamma)
        # Positions are 1-based in scenario definitions.
        return swap_entries(base, spec.swap_i - 1, spec.swap_j - 1)
    if spec.generator == "spike_merge":
        return spike_merge(spec.k, spec.b)
    if spec.generator == "zero_renorm":
        return zero_renorm(spec.k, spec.b)
    raise ConfigError(f"unknown generator {spec.generator!r}")


def sample_multinomial(
    p: ProbabilityVector, n: int, stream: np.random.Generator
) -> CountVector:
    """One exact Multinomial(n, p) draw from the given stream."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return CountVector(counts=stream.multinomial(n, p.probs), n=n)


def replicate_stream(seed: int, replicate: int) -> np.random.Generator:
    """Independent random stream for one replicate, mixed from (seed, index)."""
    return np.random.default_rng((seed, replicate))


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment: a null scenario, an optional alternative
    scenario for group 2, the tests to run, and the replication plan."""

    scenario_null: ScenarioSpec
    scenario_alt: ScenarioSpec | None
    methods: tuple[str, ...]
    reps: int
    alpha: float = 0.05
    seed: int = 0
    threads: int = 1
    n_permutations: int = 2000
    zelterman_mode: str = "exact"
    cell_rule: str = "expected_positive"

    def __post_init__(self) -> None:
        object.__setattr__(self, "methods", tuple(self.methods))
        for m in self.methods:
            if m not in METHOD_NAMES:
                raise ConfigError(f"unknown method {m!r}")
        if not self.methods:
            raise ConfigError("at least one method is required")
        if self.reps < 100:
            raise ConfigError("reps must be at least 100 for a reportable rate")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.zelterman_mode not in ("exact", "permutation"):
            raise ConfigError(f"unknown zelterman_mode {self.zelterman_mode!r}")
        if self.scenario_alt is not None:
            alt, null = self.scenario_alt, self.scenario_null
            if (alt.k, alt.n1, alt.n2) != (null.k, null.n1, null.n2):
                raise ConfigError(
                    "alternative scenario must match the null's (k, n1, n2)"
                )


@dataclass(frozen=True)
class MethodResult:
    """Empirical rejection rate of one method with its Monte Carlo error."""

    rate: float
    mc_standard_error: float
    rejections: int
    degenerate: int


@dataclass(frozen=True)
class ExperimentReport:
    """Outcome of one experiment run.

    ``statistics`` (present when requested) maps each method to its
    per-replicate statistic values, NaN where the replicate degenerated.
    ``wall_time`` is informational and never serialized, keeping output
    files byte-identical across runs and thread counts.
    """

    config: ExperimentConfig
    results: Mapping[str, MethodResult]
    reps_completed: int
    wall_time: float
    statistics: Mapping[str, np.ndarray] | None = None


def _apply_method(method: str, ts: TwoSampleCounts, cfg: ExperimentConfig, r: int):
    if method == "proposed":
        return proposed_test(ts, cfg.alpha)
    if method == "chi2":
        return pearson_chi2(ts, cfg.alpha, cell_rule=cfg.cell_rule)
    if method == "zelterman":
        return zelterman_test(
            ts,
            cfg.alpha,
            n_permutations=cfg.n_permutations,
            seed=(cfg.seed, r, 1),
            standardization=cfg.zelterman_mode,
        )
    if method == "bs":
        return bai_saranadasa_test(ts, cfg.alpha)
    raise ConfigError(f"unknown method {method!r}")


def run_experiment(
    cfg: ExperimentConfig, collect_statistics: bool = False
) -> ExperimentReport:
    """Run the experiment and report per-method rejection rates.

    Bit-identical output for a fixed seed regardless of ``cfg.threads``:
    each replicate draws from its own (seed, index) stream and results are
    stored by replicate index before aggregation.
    """
    t_start = time.perf_counter()
    p1 = scenario_probs(cfg.scenario_null)
    p2 = (
        scenario_probs(cfg.scenario_alt)
        if cfg.scenario_alt is not None
        else p1
    )
    if p1.k != p2.k:
        raise ConfigError("scenario dimensions disagree")
    n1, n2 = cfg.scenario_null.n1, cfg.scenario_null.n2

    reject = {m: np.zeros(cfg.reps, dtype=bool) for m in cfg.methods}
    degenerate = {m: np.zeros(cfg.reps, dtype=bool) for m in cfg.methods}
    stats = (
        {m: np.full(cfg.reps, np.nan) for m in cfg.methods}
        if collect_statistics
        else None
    )

    def run_range(indices: np.ndarray) -> None:
        for r in indices:
            rng = replicate_stream(cfg.seed, int(r))
            ts = TwoSampleCounts(
                group1=sample_multinomial(p1, n1, rng),
                group2=sample_multinomial(p2, n2, rng),
            )
            for m in cfg.methods:
                try:
                    outcome = _apply_method(m, ts, cfg, int(r))
                except (
                    DegenerateVarianceError,
                    DegeneratePermutationError,
                    InsufficientSupportError,
                ):
                    degenerate[m][r] = True
                    continue
                reject[m][r] = outcome.reject
                if stats is not None:
                    stats[m][r] = outcome.statistic

    chunks = [c for c in np.array_split(np.arange(cfg.reps), cfg.threads) if c.size]
    if len(chunks) == 1:
        run_range(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            list(pool.map(run_range, chunks))

    results = {}
    for m in cfg.methods:
        n_rej = int(reject[m].sum())
        rate = n_rej / cfg.reps
        results[m] = MethodResult(
            rate=rate,
            mc_standard_error=float(np.sqrt(rate * (1.0 - rate) / cfg.reps)),
            rejections=n_rej,
            degenerate=int(degenerate[m].sum()),
        )
    return ExperimentReport(
        config=cfg,
        results=results,
        reps_completed=cfg.reps,
        wall_time=time.perf_counter() - t_start,
        statistics=stats,
    )


def ks_distance_to_normal(values: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance between a sample and the standard normal."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0:
        raise ValueError("need at least one value")
    cdf = 1.0 - std_normal_sf(x)
    i = np.arange(1, x.size + 1)
    return float(
        max(np.max(i / x.size - cdf), np.max(cdf - (i - 1) / x.size))
    )


def null_normality_diagnostic(cfg: ExperimentConfig) -> float:
    """KS distance between simulated null T values and the standard normal.

    Degenerate replicates contribute no statistic and are excluded.
    """
    if cfg.scenario_alt is not None:
        raise ConfigError("normality diagnostic requires a null configuration")
    run_cfg = cfg if "proposed" in cfg.methods else replace(
        cfg, methods=("proposed",)
    )
    report = run_experiment(run_cfg, collect_statistics=True)
    values = report.statistics["proposed"]
    values = values[~np.isnan(values)]
    if values.size == 0:
        raise DegenerateVarianceError("every replicate degenerated")
    return ks_distance_to_normal(values)
