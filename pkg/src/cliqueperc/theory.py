"""Mean-offspring values, survival probabilities, and threshold formulas.

Everything here is a pure function of its arguments. Combinatorial
prefactors are evaluated exactly as integers when they fit comfortably in
a double (below 1e15) and in log-domain otherwise, so quantities like
C(n,k) * p^C(k,2) neither overflow nor underflow for large n.

The fixed-point solvers and the Monte Carlo simulator are deliberately
independent routes to the same quantities; the tests hold them against
each other.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, permutations
from math import comb, exp, factorial, log, sqrt

import numpy as np

from .cliques import OrientationSpec
from .errors import InvalidParameterError, UnsupportedParameterError

_MASK64 = (1 << 64) - 1


def _check_p(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError("p must be in [0, 1]")


def _check_kl(k: int, ell: int) -> None:
    if k < 2:
        raise InvalidParameterError("k must be >= 2")
    if not (1 <= ell <= k - 1):
        raise InvalidParameterError("ell must be in [1, k-1]")


def _coef_times_power(coef: int | float, p: float, expo: int) -> float:
    """coef * p**expo, overflow-safe for huge integer prefactors."""
    if coef == 0:
        return 0.0
    if p == 0.0:
        return float(coef) if expo == 0 else 0.0
    if coef <= 1e15:
        return float(coef) * p**expo
    return exp(log(coef) + expo * log(p))


def extension_scale(n: int, k: int, ell: int, p: float) -> float:
    """C(n, k-ell) * p^(C(k,2) - C(ell,2)).

    Expected number of ways to extend a fixed ell-set by k-ell new vertices
    with all new pairs present; the per-orientation Poisson intensity of
    the multi-type process.
    """
    _check_kl(k, ell)
    _check_p(p)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    return _coef_times_power(comb(n, k - ell), p, comb(k, 2) - comb(ell, 2))


def mu(n: int, p: float, k: int, ell: int) -> float:
    """Mean offspring of the shared-vertex overlap process.

    (C(k,ell) - 1) * C(n, k-ell) * p^(C(k,2) - C(ell,2)); the component
    structure percolates exactly when this exceeds 1.
    """
    return (comb(k, ell) - 1) * extension_scale(n, k, ell, p)


def mu_directed(n: int, p: float, k: int, ell: int) -> float:
    """Mean offspring for transitively-oriented copies in a random digraph."""
    _check_kl(k, ell)
    return (comb(k, ell) - 1) * (factorial(k) // factorial(ell)) * extension_scale(
        n, k, ell, p
    )


def mu_prime(n: int, p: float, k: int, ell: int) -> float:
    """Mean offspring of the edge-joined process: C(n,k)*C(k^2,ell)*p^(C(k,2)+ell)."""
    if k < 2:
        raise InvalidParameterError("k must be >= 2")
    if not (1 <= ell <= k * k):
        raise InvalidParameterError("ell must be in [1, k^2]")
    _check_p(p)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    coef = comb(n, k) * comb(k * k, ell)
    return _coef_times_power(coef, p, comb(k, 2) + ell)


def nu(n: int, p: float, k: int) -> float:
    """Expected number of k-cliques: C(n,k) * p^C(k,2)."""
    if k < 1:
        raise InvalidParameterError("k must be >= 1")
    _check_p(p)
    return _coef_times_power(comb(n, k), p, comb(k, 2))


def nu_oriented(n: int, p: float, spec: OrientationSpec) -> float:
    """Expected number of copies of the orientation: C(n,k)*(k!/aut)*p^C(k,2)."""
    _check_p(p)
    k = spec.k
    if factorial(k) % spec.automorphism_count:
        raise InvalidParameterError("automorphism count must divide k!")
    coef = comb(n, k) * (factorial(k) // spec.automorphism_count)
    return _coef_times_power(coef, p, comb(k, 2))


def expected_motif_copies(
    n: int, p: float, order: int, edge_count: int, automorphism_count: int
) -> float:
    """Expected copies of an undirected motif: C(n,m)*(m!/aut)*p^edges."""
    _check_p(p)
    if order < 1 or n < 1:
        raise InvalidParameterError("order and n must be >= 1")
    if automorphism_count < 1 or factorial(order) % automorphism_count:
        raise InvalidParameterError("automorphism count must divide order!")
    coef = comb(n, order) * (factorial(order) // automorphism_count)
    return _coef_times_power(coef, p, edge_count)


# ---------------------------------------------------------------------------
# survival probabilities

_FP_TOL = 1e-12


def _largest_fixed_point(f) -> float:
    """Largest root of x = f(x) in (0, 1] for increasing f with f(1) < 1.

    Monotone iteration from 1 converges from above to the largest fixed
    point; if it stalls before the residual target (possible very close to
    criticality), bisection on x - f(x) over [1e-15, 1] finishes the job.
    """
    x = 1.0
    for _ in range(1_000_000):
        nx = f(x)
        if abs(x - nx) < 1e-15:
            x = nx
            break
        x = nx
    if abs(x - f(x)) < _FP_TOL:
        return x
    lo, hi = 1e-15, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid - f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    x = (lo + hi) / 2
    if abs(x - f(x)) >= _FP_TOL:
        raise RuntimeError("fixed-point solver failed to reach residual target")
    return x


def survival_rho(k: int, ell: int, lam: float) -> float:
    """Largest root of rho = 1 - exp(-(lam/M)(1 - (1-rho)^M)), M = C(k,ell)-1.

    Survival probability of one overlap line. Exactly 0 for lam <= 1.
    """
    _check_kl(k, ell)
    if lam < 0:
        raise InvalidParameterError("lam must be >= 0")
    if lam <= 1.0:
        return 0.0
    m = comb(k, ell) - 1
    return _largest_fixed_point(lambda x: 1.0 - exp(-(lam / m) * (1.0 - (1.0 - x) ** m)))


def survival_sigma(k: int, ell: int, lam: float) -> float:
    """Predicted giant-fraction: sigma = 1 - (1-rho)^C(k,ell); 0 for lam <= 1."""
    rho = survival_rho(k, ell, lam)
    if rho == 0.0:
        return 0.0
    return 1.0 - (1.0 - rho) ** comb(k, ell)


def survival_sigma0(lam: float) -> float:
    """Largest root of s = 1 - exp(-lam*s); survival of a Poisson(lam) process."""
    if lam < 0:
        raise InvalidParameterError("lam must be >= 0")
    if lam <= 1.0:
        return 0.0
    return _largest_fixed_point(lambda x: 1.0 - exp(-lam * x))


# ---------------------------------------------------------------------------
# multi-type machinery for arbitrary orientations


@dataclass(frozen=True)
class MultiTypeModel:
    """Type bookkeeping for the overlap process of one orientation.

    Types are the ell-subsets of roles, in lexicographic order.
    m_matrix[B, A] counts the distinct orientations of the new edges that
    extend a type-A set into a full copy in which the old vertices play
    role set B. x_matrix = (J - I) @ m_matrix governs the branching: a copy
    attributed to B contributes one child of every type except B.
    poisson_scale is the per-orientation extension intensity once (n, p)
    are chosen.
    """

    k: int
    ell: int
    types: tuple[tuple[int, ...], ...]
    m_matrix: np.ndarray
    x_matrix: np.ndarray
    poisson_scale: float | None = None

    def instantiate(self, n: int, p: float) -> "MultiTypeModel":
        return replace(self, poisson_scale=extension_scale(n, self.k, self.ell, p))


def orientation_type_matrix(spec: OrientationSpec, ell: int) -> MultiTypeModel:
    """Brute-force type matrix of an orientation's overlap process.

    For each type A, every role bijection of {A's roles} + {new vertices}
    consistent with A's internal arcs induces one orientation of the new
    edges; distinct orientations are counted once, attributed to the
    lexicographically smallest consistent role set B.
    """
    k = spec.k
    _check_kl(k, ell)
    if comb(k, ell) > 256:
        raise UnsupportedParameterError("type count C(k,ell) must be <= 256")
    if k > 8:
        raise UnsupportedParameterError("type matrix enumeration limited to k <= 8")
    arcs = spec.arcs
    types = list(combinations(range(k), ell))
    index = {t: i for i, t in enumerate(types)}
    tcount = len(types)
    m = np.zeros((tcount, tcount), dtype=np.int64)
    news = list(range(k, 2 * k - ell))
    for a_idx, a_set in enumerate(types):
        parent = list(a_set)
        verts = parent + news
        parent_pairs = list(combinations(parent, 2))
        cross_pairs = [
            (x, y) for x, y in combinations(verts, 2) if x in news or y in news
        ]
        consistent: dict[frozenset[tuple[int, int]], list[tuple[int, ...]]] = {}
        for perm in permutations(range(k)):
            phi = dict(zip(verts, perm))
            ok = True
            for x, y in parent_pairs:
                if ((x, y) in arcs) != ((phi[x], phi[y]) in arcs):
                    ok = False
                    break
            if not ok:
                continue
            image = frozenset(
                (x, y) if (phi[x], phi[y]) in arcs else (y, x) for x, y in cross_pairs
            )
            consistent.setdefault(image, []).append(tuple(sorted(phi[x] for x in parent)))
        for role_sets in consistent.values():
            m[index[min(role_sets)], a_idx] += 1
    x = (np.ones((tcount, tcount), dtype=np.int64) - np.eye(tcount, dtype=np.int64)) @ m
    m.setflags(write=False)
    x.setflags(write=False)
    return MultiTypeModel(k=k, ell=ell, types=tuple(types), m_matrix=m, x_matrix=x)


def spectral_radius(mat) -> float:
    """Perron root of a nonnegative square matrix (dimension <= 256).

    Power iteration on A + I (the shift keeps the dominant eigenvalue
    ahead of any periodic structure) from the all-ones vector, iterated
    well past the 1e-9 relative tolerance the callers rely on. A
    nilpotency pre-pass returns exactly 0 when A kills the positive cone.
    """
    a = np.asarray(mat, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError("matrix must be square")
    dim = a.shape[0]
    if dim < 1 or dim > 256:
        raise InvalidParameterError("dimension must be in [1, 256]")
    if not np.isfinite(a).all() or (a < 0).any():
        raise InvalidParameterError("entries must be finite and >= 0")
    if not a.any():
        return 0.0
    z = np.ones(dim)
    for _ in range(dim):
        z = a @ z
        top = z.max()
        if top == 0.0:
            return 0.0
        z /= top
    x = np.ones(dim)
    est = 0.0
    for _ in range(1_000_000):
        y = a @ x + x
        est = float(x @ y) / float(x @ x)
        # x is max-normalized, so this residual is already relative to |x|
        resid = float(np.abs(y - est * x).max())
        x = y / y.max()
        if resid <= 5e-13 * max(est, 1.0):
            break
    resid = np.abs(a @ x + x - est * x).max()
    if resid > 1e-9 * max(est, 1.0):
        raise RuntimeError("power iteration did not converge to tolerance")
    return max(est - 1.0, 0.0)


def survival_sigma_multitype(model: MultiTypeModel) -> float:
    """Survival probability of the instantiated multi-type process.

    Starts one particle of each type. Solves the extinction system
    q_A = exp(-scale * sum_B M[B,A] * (1 - prod_{A' != B} q_A')) by
    monotone iteration from 0; returns 1 - prod q. Exactly 0 when the
    Perron mean is at most 1.
    """
    if model.poisson_scale is None:
        raise InvalidParameterError("model must be instantiated with (n, p)")
    scale = model.poisson_scale
    if spectral_radius(model.x_matrix) * scale <= 1.0:
        return 0.0
    m = model.m_matrix.astype(np.float64)
    tcount = m.shape[0]
    q = np.zeros(tcount)
    for _ in range(1_000_000):
        prod_except = np.array([np.prod(np.delete(q, b)) for b in range(tcount)])
        nq = np.exp(-scale * (m.T @ (1.0 - prod_except)))
        if np.abs(nq - q).max() < 1e-14:
            q = nq
            break
        q = nq
    return float(1.0 - np.prod(q))


# ---------------------------------------------------------------------------
# thresholds


def critical_p(
    n: int,
    k: int,
    ell: int,
    variant: str,
    orientation: OrientationSpec | None = None,
) -> float:
    """Closed-form percolation threshold p0 = coef^(-1/exponent).

    variant selects the mean-offspring formula solved at value 1:
    'shared', 'oriented-transitive', 'oriented' (requires an orientation,
    whose Perron root enters the coefficient), or 'edge-joined'.
    """
    if n < k:
        raise InvalidParameterError("n must be >= k")
    if variant == "shared":
        _check_kl(k, ell)
        log_coef = log(comb(k, ell) - 1) + log(comb(n, k - ell))
        expo = comb(k, 2) - comb(ell, 2)
    elif variant == "oriented-transitive":
        _check_kl(k, ell)
        coef = (comb(k, ell) - 1) * (factorial(k) // factorial(ell)) * comb(n, k - ell)
        log_coef = log(coef)
        expo = comb(k, 2) - comb(ell, 2)
    elif variant == "oriented":
        _check_kl(k, ell)
        if orientation is None:
            raise InvalidParameterError("variant 'oriented' requires an orientation")
        model = orientation_type_matrix(orientation, ell)
        lam = spectral_radius(model.x_matrix)
        log_coef = log(lam) + log(comb(n, k - ell))
        expo = comb(k, 2) - comb(ell, 2)
    elif variant == "edge-joined":
        if not (1 <= ell <= k * k):
            raise InvalidParameterError("ell must be in [1, k^2]")
        log_coef = log(comb(n, k) * comb(k * k, ell))
        expo = comb(k, 2) + ell
    else:
        raise InvalidParameterError(f"unknown variant {variant!r}")
    return exp(-log_coef / expo)


def heuristic_threshold_c4(n: int) -> float:
    """Heuristic 4-cycle percolation threshold: sqrt(sqrt(6)-2) * n^(-1/2).

    The coefficient is the positive root of lam^4/2 + 2*lam^2 = 1.
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    return sqrt(sqrt(6.0) - 2.0) * n**-0.5


def _mean_ball_count(m: float, r: int) -> float:
    """E[C(Z + r, r)] for Z ~ Poisson(m), summed to truncation error < 1e-14."""
    term = exp(-m)
    total = term
    z = 0
    while True:
        term *= m * (z + 1 + r) / ((z + 1) * (z + 1))
        total += term
        z += 1
        if term < 1e-18 and z > 2 * m + r:
            return total


def heuristic_threshold_krr(r: int, n: int) -> float:
    """Heuristic threshold for complete-bipartite K_{r,r} percolation.

    Solves E[C(Z+r,r)] - 1 = 1 with Z ~ Poisson(lam^r) by bisection and
    returns lam * n^(-1/r). Reduces to the 4-cycle value at r = 2.
    """
    if not (2 <= r <= 6):
        raise InvalidParameterError("r must be in [2, 6]")
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    lo, hi = 0.0, 1.0
    while _mean_ball_count(hi, r) < 2.0:
        hi *= 2.0
    for _ in range(100):
        mid = (lo + hi) / 2
        if _mean_ball_count(mid, r) > 2.0:
            hi = mid
        else:
            lo = mid
    m = (lo + hi) / 2
    lam = m ** (1.0 / r)
    return lam * n ** (-1.0 / r)


def heuristic_threshold_krs(r: int, s: int, n: int) -> float:
    """Heuristic threshold for K_{r,s} percolation, r <= s.

    For r < s: lam = (s!/r)^(1/(rs+s)), p0 = lam * n^(-(s+1)/(rs+s)).
    The square case delegates to heuristic_threshold_krr.
    """
    if not (2 <= r <= 6 and 2 <= s <= 6):
        raise InvalidParameterError("r and s must be in [2, 6]")
    if r > s:
        raise InvalidParameterError("r must be <= s")
    if r == s:
        return heuristic_threshold_krr(r, n)
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    lam = (factorial(s) / r) ** (1.0 / (r * s + s))
    return lam * n ** (-(s + 1.0) / (r * s + s))


# ---------------------------------------------------------------------------
# Monte Carlo oracle


@dataclass(frozen=True)
class BranchingParams:
    """Offspring law of one overlap line: M * Poisson(lam / M), M = C(k,ell)-1."""

    k: int
    ell: int
    lam: float

    def __post_init__(self):
        _check_kl(self.k, self.ell)
        if self.lam < 0:
            raise InvalidParameterError("lam must be >= 0")

    @property
    def m(self) -> int:
        return comb(self.k, self.ell) - 1


@dataclass(frozen=True)
class SurvivalEstimate:
    estimate: float
    stderr: float
    trials: int


# Trials whose population reaches this size are scored as survivors without
# simulating further; the chance such a line later dies is (1-rho)^cap,
# far below Monte Carlo resolution for any supercritical lam of interest.
POPULATION_CAP = 10_000


def branching_mc(
    params,
    mode: str,
    trials: int,
    max_generations: int = 200,
    seed: int = 0,
    population_cap: int = POPULATION_CAP,
) -> SurvivalEstimate:
    """Monte Carlo survival frequency of a branching process.

    A trial survives if at least one particle is alive at max_generations
    (or its population hit population_cap earlier). Modes:
      'single'      one starting particle, offspring M * Poisson(lam/M);
                    params is BranchingParams.
      'binom-start' same law, but starting with C(k,ell) particles, the
                    lines spawned by one whole clique; params is
                    BranchingParams.
      'poisson'     one starting particle, offspring Poisson(lam);
                    params is the mean lam.
      'multi-type'  params is an instantiated MultiTypeModel; starts one
                    particle of each type.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be >= 1")
    if max_generations < 1:
        raise InvalidParameterError("max_generations must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed & _MASK64))
    survivors = 0
    if mode == "multi-type":
        model = params
        if not isinstance(model, MultiTypeModel) or model.poisson_scale is None:
            raise InvalidParameterError("multi-type mode needs an instantiated model")
        rates = model.m_matrix.astype(np.float64) * model.poisson_scale
        pop = np.ones((trials, len(model.types)), dtype=np.int64)
        for _ in range(max_generations):
            if pop.shape[0] == 0:
                break
            born = rng.poisson(pop @ rates.T)
            pop = born.sum(axis=1, keepdims=True) - born
            totals = pop.sum(axis=1)
            capped = totals >= population_cap
            survivors += int(capped.sum())
            pop = pop[(totals > 0) & ~capped]
        survivors += pop.shape[0]
    elif mode in ("single", "binom-start", "poisson"):
        if mode == "poisson":
            lam_eff = float(params)
            if lam_eff < 0:
                raise InvalidParameterError("lam must be >= 0")
            mult = 1
            start = 1
        else:
            if not isinstance(params, BranchingParams):
                raise InvalidParameterError(f"mode {mode!r} needs BranchingParams")
            mult = params.m
            lam_eff = params.lam / mult
            start = 1 if mode == "single" else comb(params.k, params.ell)
        pop = np.full(trials, start, dtype=np.int64)
        for _ in range(max_generations):
            if pop.size == 0:
                break
            # one Poisson draw per trial: the pop iid copies of Poisson(lam_eff)
            # sum to Poisson(pop * lam_eff), and the common multiplier factors out
            pop = mult * rng.poisson(pop * lam_eff)
            capped = pop >= population_cap
            survivors += int(capped.sum())
            pop = pop[(pop > 0) & ~capped]
        survivors += pop.size
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    est = survivors / trials
    return SurvivalEstimate(
        estimate=est, stderr=sqrt(est * (1.0 - est) / trials), trials=trials
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Headline numbers for one parameter point of one variant."""

    variant: str
    n: int
    k: int
    ell: int
    p: float
    mu_value: float
    critical_p: float
    sigma_prediction: float | None
    nu_prediction: float
