"""Acceptance suite: ten end-to-end criteria for the full pipeline.

Each test prints one summary line (visible under pytest -s). Statistical
criteria use fixed master seeds; expected values come from the package's
own closed-form solvers, which were cross-checked against independent
Monte Carlo simulation and a dense eigensolver during development.
Reruns for the reproducibility criterion share this module's CSV cache.
"""

import io
from math import comb, sqrt

import numpy as np
import pytest

from cliqueperc import (
    ExperimentConfig,
    branching_mc,
    build_orientation_k4_mixed,
    build_orientation_k_transitive,
    components_by_cross_edges,
    components_by_shared_vertices,
    components_oriented,
    critical_p,
    emit,
    enumerate_k_cliques,
    enumerate_oriented_copies,
    estimate_threshold,
    gen_directed_gnp,
    gen_gnp,
    heuristic_threshold_c4,
    heuristic_threshold_krr,
    heuristic_threshold_krs,
    orientation_type_matrix,
    resolve_point,
    run_simulate,
    run_sweep,
    spectral_radius,
    split_seed,
    survival_sigma,
    survival_sigma0,
)
from cliqueperc.theory import BranchingParams

from oracles import (
    brute_partition,
    cross_edges_at_least,
    partition_of_summary,
    shared_at_least,
)

CONFIGS = {
    "subcritical": ExperimentConfig(
        variant="shared", n=3000, k=3, ell=2, mu=0.5, trials=10,
        master_seed=20260201,
    ),
    "supercritical": ExperimentConfig(
        variant="shared", n=3000, k=3, ell=2, mu=2.0, trials=10,
        master_seed=20260301,
    ),
    "sweep": ExperimentConfig(
        variant="shared", n=3000, k=3, ell=2, mu=1.0, trials=10,
        master_seed=20260401,
    ),
    "oriented-super": ExperimentConfig(
        variant="oriented", n=3000, k=3, ell=2, mu=2.0, trials=10,
        master_seed=20260501,
    ),
    "oriented-sub": ExperimentConfig(
        variant="oriented", n=3000, k=3, ell=2, mu=0.5, trials=10,
        master_seed=20260502,
    ),
    "edge-joined": ExperimentConfig(
        variant="edge-joined", n=100_000, k=3, ell=1, mu=2.0, trials=20,
        master_seed=20260701,
    ),
}

SWEEP_GRID = [round(0.4 + 0.2 * i, 1) for i in range(9)]  # 0.4 .. 2.0

_cache: dict = {}


def compute(name):
    """Run the named experiment and serialize it; no caching."""
    cfg = CONFIGS[name]
    if name == "sweep":
        result = run_sweep(cfg, mu_grid=SWEEP_GRID)
    else:
        result = run_simulate(cfg)
    buf = io.StringIO()
    emit(result, "csv", buf)
    return result, buf.getvalue().encode("utf-8")


def cached(name):
    if name not in _cache:
        _cache[name] = compute(name)
    return _cache[name]


def test_criterion_01_component_oracle_equivalence():
    rng = np.random.default_rng(20260101)
    checks = 0
    # shared-vertex rule, 100 instances
    for i in range(100):
        n = int(rng.integers(8, 31))
        p = float(rng.uniform(0.25, 0.45))
        g = gen_gnp(n, p, split_seed(1001, i))
        for k in (3, 4):
            cliques = enumerate_k_cliques(g, k)
            for ell in range(1, k):
                got = partition_of_summary(components_by_shared_vertices(cliques, ell))
                want = brute_partition(
                    len(cliques),
                    lambda a, b: shared_at_least(cliques[a], cliques[b], ell),
                )
                assert got == want, (i, k, ell)
                checks += 1
    # edge-joined rule, 100 instances
    for i in range(100):
        n = int(rng.integers(8, 26))
        p = float(rng.uniform(0.25, 0.45))
        g = gen_gnp(n, p, split_seed(1002, i))
        cliques = enumerate_k_cliques(g, 3)
        for ell in (1, 2):
            got = partition_of_summary(components_by_cross_edges(g, cliques, ell))
            want = brute_partition(
                len(cliques),
                lambda a, b: cross_edges_at_least(g, cliques[a], cliques[b], ell),
            )
            assert got == want, (i, ell)
            checks += 1
    # oriented rule, 100 instances
    spec = build_orientation_k_transitive(3)
    for i in range(100):
        n = int(rng.integers(6, 13))
        p = float(rng.uniform(0.3, 0.55))
        d = gen_directed_gnp(n, p, split_seed(1003, i))
        copies = enumerate_oriented_copies(d, spec)
        for ell in (1, 2):
            got = partition_of_summary(components_oriented(copies, ell))
            want = brute_partition(
                len(copies),
                lambda a, b: shared_at_least(
                    copies[a].vertices, copies[b].vertices, ell
                ),
            )
            assert got == want, (i, ell)
            checks += 1
    print(f"criterion 1: PASS - {checks} partitions identical to brute-force BFS")


def test_criterion_02_subcritical_stays_small():
    result, _ = cached("subcritical")
    point = result.points[0]
    assert abs(point.p - sqrt(0.5 / (2 * 3000))) < 1e-12
    for t in point.trials:
        assert t.frac_c1 < 0.02, t
        assert t.c1 < 60, t
    worst = max(t.c1 for t in point.trials)
    print(f"criterion 2: PASS - 10 subcritical trials, largest c1 {worst} < 60")


def test_criterion_03_supercritical_giant_fraction():
    result, _ = cached("supercritical")
    point = result.points[0]
    assert abs(point.p - 1 / sqrt(3000)) < 1e-12
    target = survival_sigma(3, 2, 2.0)
    mean = point.mean_frac_c1
    assert abs(mean - target) <= 0.03
    assert point.mean_frac_c2 < 0.02
    print(
        f"criterion 3: PASS - mean frac_c1 {mean:.4f} within 0.03 of "
        f"sigma(2) {target:.4f}; mean frac_c2 {point.mean_frac_c2:.4f} < 0.02"
    )


def test_criterion_04_threshold_location():
    result, _ = cached("sweep")
    assert len(result.points) == len(SWEEP_GRID)
    p_hat = estimate_threshold(result, 0.05)
    p_star = (2 * 3000) ** -0.5
    rel = abs(p_hat - p_star) / p_star
    assert rel <= 0.15
    print(
        f"criterion 4: PASS - estimated threshold {p_hat:.5f} vs "
        f"(2n)^(-1/2) {p_star:.5f} ({100 * rel:.1f}% off, limit 15%)"
    )


def test_criterion_05_oriented_transitive():
    result, _ = cached("oriented-super")
    point = result.points[0]
    assert abs(point.p - (1 / (3 * 3000)) ** 0.5) < 1e-12
    target = survival_sigma(3, 2, 2.0)
    mean = point.mean_frac_c1
    assert abs(mean - target) <= 0.04
    sub, _ = cached("oriented-sub")
    for t in sub.points[0].trials:
        assert t.frac_c1 < 0.02, t
    print(
        f"criterion 5: PASS - oriented mean frac_c1 {mean:.4f} within 0.04 of "
        f"{target:.4f}; subcritical trials all below 0.02"
    )


def test_criterion_06_multitype_exactness():
    model = orientation_type_matrix(build_orientation_k4_mixed(), 3)
    want_m = np.array([[3, 3, 0, 0], [3, 3, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]])
    assert (model.m_matrix == want_m).all()
    radius = spectral_radius(model.x_matrix)
    target = 2 * (2 + sqrt(13))
    assert abs(radius - target) <= 1e-9
    n = 3000
    p0 = critical_p(n, 4, 3, "oriented", orientation=build_orientation_k4_mixed())
    want_p0 = ((4 + 2 * sqrt(13)) * n) ** (-1 / 3)
    assert abs(p0 - want_p0) / want_p0 <= 1e-10
    print(
        f"criterion 6: PASS - type matrix exact, radius off by "
        f"{abs(radius - target):.2e} (<=1e-9), p0 rel err "
        f"{abs(p0 - want_p0) / want_p0:.2e} (<=1e-10)"
    )


def test_criterion_07_edge_joined_giant_fraction():
    result, _ = cached("edge-joined")
    point = result.points[0]
    n = 100_000
    want_p = 2**0.25 * (9 * comb(n, 3)) ** -0.25
    assert abs(point.p - want_p) / want_p < 1e-9
    target = survival_sigma0(2.0)
    mean = point.mean_frac_c1
    assert abs(mean - target) <= 0.05
    worst = max(t.clique_count for t in point.trials)
    assert worst < 5000
    print(
        f"criterion 7: PASS - mean frac_c1 {mean:.4f} within 0.05 of "
        f"sigma0(2) {target:.4f}; max clique count {worst} < 5000"
    )


def test_criterion_08_solver_oracle_agreement():
    for lam in (0.5, 1.0):
        assert survival_sigma(3, 2, lam) == 0.0
        assert survival_sigma0(lam) == 0.0
    worst = 0.0
    for lam in (1.2, 1.5, 2.0, 3.0):
        params = BranchingParams(3, 2, lam)
        est = branching_mc(params, "binom-start", 10**6, seed=int(lam * 1000))
        gap = abs(est.estimate - survival_sigma(3, 2, lam))
        assert gap <= 3 * est.stderr, lam
        worst = max(worst, gap / est.stderr)
        est = branching_mc(lam, "poisson", 10**6, seed=int(lam * 1000) + 1)
        gap = abs(est.estimate - survival_sigma0(lam))
        assert gap <= 3 * est.stderr, lam
        worst = max(worst, gap / est.stderr)
    print(
        f"criterion 8: PASS - 1e6-trial MC within 3 stderr of fixed points "
        f"at lam in {{1.2, 1.5, 2, 3}} (worst {worst:.2f} stderr); exact 0 at 0.5, 1.0"
    )


def test_criterion_09_heuristic_calculators():
    lam = heuristic_threshold_c4(1)
    identity_gap = abs(lam**4 / 2 + 2 * lam**2 - 1.0)
    assert identity_gap < 1e-12
    for n in (100, 10**4, 10**8):
        a = heuristic_threshold_krr(2, n)
        b = heuristic_threshold_c4(n)
        assert abs(a - b) / b < 1e-10
    coef_gap = abs(heuristic_threshold_krs(2, 3, 1) - 3 ** (1 / 9))
    assert coef_gap < 1e-10
    print(
        f"criterion 9: PASS - c4 coefficient identity gap {identity_gap:.1e}; "
        f"krr(2,.) == c4(.); krs(2,3) coefficient gap {coef_gap:.1e}"
    )


def test_criterion_10_reproducibility():
    names = ["subcritical", "supercritical", "sweep", "oriented-super",
             "edge-joined"]
    for name in names:
        _, first = cached(name)
        _, again = compute(name)
        assert first == again, name
    print(
        f"criterion 10: PASS - {len(names)} experiment reruns produced "
        f"byte-identical CSVs"
    )
