"""Monte Carlo experiment driver: trials, sweeps, estimation, serialization.

A trial is a pure function of (config, trial_seed): generate the random
graph, enumerate the variant's copies, compute overlap components, report
largest/second-largest. Per-trial seeds come from split_seed(master_seed,
global trial index), so reruns with the same master seed are bit-identical.
wall_time is kept on TrialResult for callers but deliberately left out of
the CSV/JSON so emitted files are byte-stable.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from math import comb, exp, factorial, log, sqrt
from pathlib import Path

from . import theory
from .cliques import (
    OrientationSpec,
    build_orientation_k4_mixed,
    build_orientation_k_transitive,
    enumerate_k_cliques,
    enumerate_oriented_copies,
    enumerate_subgraph_copies,
)
from .components import (
    components_by_cross_edges,
    components_by_shared_vertices,
    components_oriented,
)
from .errors import InvalidParameterError, NoCrossingError, ResourceGuardError
from .graphs import RNG_ALGORITHM, cycle_graph, gen_directed_gnp, gen_gnp, split_seed
from .theory import ThresholdReport

TOOL_VERSION = "0.1.0"

VARIANTS = ("shared", "oriented", "edge-joined", "motif-c4")
ORIENTATIONS = ("transitive", "mixed-k4")

# refuse trials whose projected work would not fit the memory/time budget
MAX_PROJECTED_COPIES = 1e8
MAX_PROJECTED_PAIR_SCANS = 1e9
MAX_PROJECTED_EDGES = 2e8

CSV_COLUMNS = (
    "variant,k,ell,n,p,mu,sigma_theory,trial,seed,clique_count,c1,c2,frac_c1"
).split(",")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment point (or the template for a sweep).

    Exactly one of p / mu must be set; mu is the variant's mean-offspring
    value, inverted to p in closed form. For the oriented variant,
    orientation picks the pattern ('transitive' for any k, 'mixed-k4' for
    the 4-role mixed tournament).
    """

    variant: str
    n: int
    k: int
    ell: int
    trials: int = 1
    p: float | None = None
    mu: float | None = None
    master_seed: int = 0
    orientation: str = "transitive"
    output: str | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParameterError(f"unknown variant {self.variant!r}")
        if self.n < 1:
            raise InvalidParameterError("n must be >= 1")
        if self.trials < 1:
            raise InvalidParameterError("trials must be >= 1")
        if (self.p is None) == (self.mu is None):
            raise InvalidParameterError("exactly one of p / mu must be given")
        if self.p is not None and not (0.0 <= self.p <= 1.0):
            raise InvalidParameterError("p must be in [0, 1]")
        if self.mu is not None and self.mu < 0:
            raise InvalidParameterError("mu must be >= 0")
        if self.orientation not in ORIENTATIONS:
            raise InvalidParameterError(f"unknown orientation {self.orientation!r}")
        if self.variant == "edge-joined":
            if not (self.k >= 2 and 1 <= self.ell <= self.k * self.k):
                raise InvalidParameterError("need k >= 2 and ell in [1, k^2]")
        elif self.variant == "motif-c4":
            if self.k != 4:
                raise InvalidParameterError("motif-c4 uses the 4-cycle; k must be 4")
            if not (1 <= self.ell <= 3):
                raise InvalidParameterError("ell must be in [1, 3]")
        else:
            if not (self.k >= 2 and 1 <= self.ell <= self.k - 1):
                raise InvalidParameterError("need k >= 2 and ell in [1, k-1]")
        if self.variant == "oriented" and self.orientation == "mixed-k4" and self.k != 4:
            raise InvalidParameterError("orientation 'mixed-k4' requires k = 4")


def orientation_of(config: ExperimentConfig) -> OrientationSpec:
    if config.orientation == "mixed-k4":
        return build_orientation_k4_mixed()
    return build_orientation_k_transitive(config.k)


@dataclass(frozen=True)
class GridPoint:
    """Resolved (p, mean-offspring, predicted giant fraction) for one config."""

    p: float
    mu_value: float
    sigma_theory: float | None


def _c4_mean(lam: float) -> float:
    return lam**4 / 2.0 + 2.0 * lam**2


@lru_cache(maxsize=1024)
def resolve_point(config: ExperimentConfig) -> GridPoint:
    """Derive p from mu (or mu from p) plus the variant's sigma prediction."""
    n, k, ell = config.n, config.k, config.ell

    def invert(log_coef: float, expo: int) -> float:
        if config.mu == 0.0:
            return 0.0
        return exp((log(config.mu) - log_coef) / expo)

    if config.variant == "shared":
        if config.p is not None:
            p = config.p
        else:
            p = invert(log(comb(k, ell) - 1) + log(comb(n, k - ell)), comb(k, 2) - comb(ell, 2))
        mu_value = theory.mu(n, p, k, ell)
        sigma = theory.survival_sigma(k, ell, mu_value)
    elif config.variant == "oriented":
        if config.orientation == "transitive":
            if config.p is not None:
                p = config.p
            else:
                coef = (comb(k, ell) - 1) * (factorial(k) // factorial(ell)) * comb(n, k - ell)
                p = invert(log(coef), comb(k, 2) - comb(ell, 2))
            mu_value = theory.mu_directed(n, p, k, ell)
            sigma = theory.survival_sigma(k, ell, mu_value)
        else:
            model = theory.orientation_type_matrix(orientation_of(config), ell)
            lam = theory.spectral_radius(model.x_matrix)
            if config.p is not None:
                p = config.p
            else:
                p = invert(log(lam) + log(comb(n, k - ell)), comb(k, 2) - comb(ell, 2))
            mu_value = lam * theory.extension_scale(n, k, ell, p)
            sigma = theory.survival_sigma_multitype(model.instantiate(n, p))
    elif config.variant == "edge-joined":
        if config.p is not None:
            p = config.p
        else:
            p = invert(log(comb(n, k) * comb(k * k, ell)), comb(k, 2) + ell)
        mu_value = theory.mu_prime(n, p, k, ell)
        sigma = theory.survival_sigma0(mu_value)
    else:  # motif-c4
        if config.p is not None:
            p = config.p
        else:
            lam_sq = sqrt(4.0 + 2.0 * config.mu) - 2.0
            p = sqrt(lam_sq) * n**-0.5
        mu_value = _c4_mean(p * sqrt(n))
        sigma = None
    return GridPoint(p=p, mu_value=mu_value, sigma_theory=sigma)


@dataclass(frozen=True)
class TrialResult:
    seed: int
    clique_count: int
    c1: int
    c2: int
    frac_c1: float
    wall_time: float


def _guard(config: ExperimentConfig, p: float) -> None:
    n = config.n
    pair_count = n * (n - 1) if config.variant == "oriented" else n * (n - 1) // 2
    if pair_count * p > MAX_PROJECTED_EDGES:
        raise ResourceGuardError(
            f"projected edge count {pair_count * p:.3g} exceeds {MAX_PROJECTED_EDGES:.0e}"
        )
    if config.variant == "shared":
        projected = theory.nu(n, p, config.k)
    elif config.variant == "oriented":
        projected = theory.nu_oriented(n, p, orientation_of(config))
    elif config.variant == "edge-joined":
        projected = theory.nu(n, p, config.k)
        scans = projected * projected / 2.0
        if scans > MAX_PROJECTED_PAIR_SCANS:
            raise ResourceGuardError(
                f"projected pair scans {scans:.3g} exceed {MAX_PROJECTED_PAIR_SCANS:.0e}"
            )
    else:
        projected = theory.expected_motif_copies(n, p, 4, 4, 8)
    if projected > MAX_PROJECTED_COPIES:
        raise ResourceGuardError(
            f"projected copy count {projected:.3g} exceeds {MAX_PROJECTED_COPIES:.0e}"
        )


def run_trial(config: ExperimentConfig, trial_seed: int) -> TrialResult:
    """One graph, one component computation; determined by (config, trial_seed)."""
    point = resolve_point(config)
    p = point.p
    _guard(config, p)
    start = time.perf_counter()
    if config.variant == "oriented":
        d = gen_directed_gnp(config.n, p, trial_seed)
        copies = enumerate_oriented_copies(d, orientation_of(config))
        count = len(copies)
        summary = components_oriented(copies, config.ell)
    else:
        g = gen_gnp(config.n, p, trial_seed)
        if config.variant == "motif-c4":
            items = [c.vertices for c in enumerate_subgraph_copies(g, cycle_graph(4))]
            count = len(items)
            summary = components_by_shared_vertices(items, config.ell)
        else:
            cliques = enumerate_k_cliques(g, config.k)
            count = len(cliques)
            if config.variant == "shared":
                summary = components_by_shared_vertices(cliques, config.ell)
            else:
                summary = components_by_cross_edges(g, cliques, config.ell)
    elapsed = time.perf_counter() - start
    return TrialResult(
        seed=trial_seed,
        clique_count=count,
        c1=summary.c1,
        c2=summary.c2,
        frac_c1=summary.c1 / count if count else 0.0,
        wall_time=elapsed,
    )


@dataclass(frozen=True)
class PointResult:
    p: float
    mu_value: float
    sigma_theory: float | None
    trials: tuple[TrialResult, ...]

    @property
    def mean_frac_c1(self) -> float:
        return sum(t.frac_c1 for t in self.trials) / len(self.trials)

    @property
    def stderr_frac_c1(self) -> float:
        m = self.mean_frac_c1
        n = len(self.trials)
        if n < 2:
            return 0.0
        var = sum((t.frac_c1 - m) ** 2 for t in self.trials) / (n - 1)
        return sqrt(var / n)

    @property
    def mean_frac_c2(self) -> float:
        total = 0.0
        for t in self.trials:
            total += t.c2 / t.clique_count if t.clique_count else 0.0
        return total / len(self.trials)


@dataclass(frozen=True)
class SweepResult:
    """Trial results grouped by grid point, points sorted by increasing p."""

    config: ExperimentConfig
    points: tuple[PointResult, ...]


def _trial_task(args: tuple[ExperimentConfig, int]) -> TrialResult:
    config, seed = args
    return run_trial(config, seed)


def _worker_count() -> int:
    env = os.environ.get("CPL_THREADS")
    if env is not None:
        try:
            workers = int(env)
        except ValueError as exc:
            raise InvalidParameterError(f"CPL_THREADS must be an integer, got {env!r}") from exc
    else:
        workers = os.cpu_count() or 1
    return max(1, workers)


def _run_points(point_configs: list[ExperimentConfig], master_seed: int, trials: int):
    tasks = [
        (cfg, split_seed(master_seed, point_idx * trials + t))
        for point_idx, cfg in enumerate(point_configs)
        for t in range(trials)
    ]
    workers = _worker_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_task, tasks, chunksize=1))
    else:
        results = [_trial_task(t) for t in tasks]
    grouped = [
        tuple(results[i * trials : (i + 1) * trials]) for i in range(len(point_configs))
    ]
    return grouped


def run_simulate(config: ExperimentConfig) -> SweepResult:
    """config.trials independent trials at the single configured point."""
    point = resolve_point(config)
    grouped = _run_points([config], config.master_seed, config.trials)
    pr = PointResult(
        p=point.p,
        mu_value=point.mu_value,
        sigma_theory=point.sigma_theory,
        trials=grouped[0],
    )
    return SweepResult(config=config, points=(pr,))


def run_sweep(
    config: ExperimentConfig,
    mu_grid: list[float] | None = None,
    p_grid: list[float] | None = None,
) -> SweepResult:
    """Trials at every grid point; seeds derived from (master_seed, flat index).

    Exactly one of mu_grid / p_grid must be given; the grid is sorted
    ascending before any seeds are assigned.
    """
    if (mu_grid is None) == (p_grid is None):
        raise InvalidParameterError("exactly one of mu_grid / p_grid must be given")
    grid = sorted(mu_grid if mu_grid is not None else p_grid)
    if not grid:
        raise InvalidParameterError("grid must be non-empty")
    if mu_grid is not None:
        point_configs = [replace(config, mu=v, p=None) for v in grid]
    else:
        point_configs = [replace(config, p=v, mu=None) for v in grid]
    grouped = _run_points(point_configs, config.master_seed, config.trials)
    points = []
    for cfg, trial_results in zip(point_configs, grouped):
        gp = resolve_point(cfg)
        points.append(
            PointResult(
                p=gp.p,
                mu_value=gp.mu_value,
                sigma_theory=gp.sigma_theory,
                trials=trial_results,
            )
        )
    points.sort(key=lambda pt: pt.p)
    return SweepResult(config=config, points=tuple(points))


def estimate_threshold(sweep: SweepResult, epsilon: float) -> float:
    """p at which mean frac_c1 first crosses epsilon, linearly interpolated.

    Raises NoCrossingError when the curve never rises through epsilon
    inside the grid (all below, or already at/above it at the first point).
    """
    if not (0.0 < epsilon < 1.0):
        raise InvalidParameterError("epsilon must be in (0, 1)")
    pts = sweep.points
    if not pts:
        raise InvalidParameterError("sweep has no points")
    ys = [pt.mean_frac_c1 for pt in pts]
    if ys[0] >= epsilon:
        raise NoCrossingError("first grid point is already at or above epsilon")
    for i in range(len(pts) - 1):
        if ys[i] < epsilon <= ys[i + 1]:
            x0, x1 = pts[i].p, pts[i + 1].p
            return x0 + (epsilon - ys[i]) * (x1 - x0) / (ys[i + 1] - ys[i])
    raise NoCrossingError("mean frac_c1 never crosses epsilon on this grid")


def _result_rows(result: SweepResult) -> list[dict]:
    config = result.config
    rows = []
    for pt in result.points:
        for trial_idx, tr in enumerate(pt.trials):
            rows.append(
                {
                    "variant": config.variant,
                    "k": config.k,
                    "ell": config.ell,
                    "n": config.n,
                    "p": pt.p,
                    "mu": pt.mu_value,
                    "sigma_theory": pt.sigma_theory,
                    "trial": trial_idx,
                    "seed": tr.seed,
                    "clique_count": tr.clique_count,
                    "c1": tr.c1,
                    "c2": tr.c2,
                    "frac_c1": tr.frac_c1,
                }
            )
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit(result: SweepResult, fmt: str, destination) -> None:
    """Serialize a result as CSV or JSON; byte-stable for fixed inputs.

    destination may be a path or a text stream. CSV columns are fixed;
    floats are written in shortest round-trip form; wall_time is omitted.
    """
    if fmt not in ("csv", "json"):
        raise InvalidParameterError(f"unknown format {fmt!r}")
    if isinstance(destination, (str, Path)):
        with io.open(destination, "w", encoding="utf-8", newline="") as fh:
            emit(result, fmt, fh)
        return
    rows = _result_rows(result)
    if fmt == "csv":
        writer = csv.writer(destination, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format_cell(row[col]) for col in CSV_COLUMNS])
    else:
        config = result.config
        payload = {
            "config": {
                "variant": config.variant,
                "n": config.n,
                "k": config.k,
                "ell": config.ell,
                "trials": config.trials,
                "p": config.p,
                "mu": config.mu,
                "master_seed": config.master_seed,
                "orientation": config.orientation,
            },
            "rows": rows,
            "tool_version": TOOL_VERSION,
            "rng_algorithm": RNG_ALGORITHM,
        }
        json.dump(payload, destination, indent=2)
        destination.write("\n")


def theory_report(config: ExperimentConfig) -> ThresholdReport:
    """Closed-form numbers for one configured point: mu, p0, sigma, nu."""
    point = resolve_point(config)
    n, k, ell, p = config.n, config.k, config.ell, point.p
    if config.variant == "shared":
        crit = theory.critical_p(n, k, ell, "shared")
        nu_pred = theory.nu(n, p, k)
    elif config.variant == "oriented":
        spec = orientation_of(config)
        if config.orientation == "transitive":
            crit = theory.critical_p(n, k, ell, "oriented-transitive")
        else:
            crit = theory.critical_p(n, k, ell, "oriented", orientation=spec)
        nu_pred = theory.nu_oriented(n, p, spec)
    elif config.variant == "edge-joined":
        crit = theory.critical_p(n, k, ell, "edge-joined")
        nu_pred = theory.nu(n, p, k)
    else:
        crit = theory.heuristic_threshold_c4(n)
        nu_pred = theory.expected_motif_copies(n, p, 4, 4, 8)
    return ThresholdReport(
        variant=config.variant,
        n=n,
        k=k,
        ell=ell,
        p=p,
        mu_value=point.mu_value,
        critical_p=crit,
        sigma_prediction=point.sigma_theory,
        nu_prediction=nu_pred,
    )
