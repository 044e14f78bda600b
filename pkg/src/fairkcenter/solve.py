"""Solvers for individually fair k-center with outliers.

Four algorithms share one parameterized greedy core: repeatedly select the
remaining vertex with the smallest radius as a center, then drop every
remaining vertex i with d(i, s) <= beta * radius(i).

* naive        — plain-radius greedy at beta=2, uncapped; never marks outliers.
* basic        — outlier-radius greedy at beta=2, capped at k centers;
                 survivors become outliers. Guarantees |S| <= k, |O| <= q and
                 fairness ratio <= 2 when all outlier radii are positive.
* refined      — starts from basic, then bisects beta in [1, 2]: a probe is
                 accepted when it leaves at most q outliers, and an accepted
                 probe replaces the current solution.
* param_naive  — same bisection on the plain radius with no center cap;
                 a probe is accepted when it selects at most k centers.

Fairness ratios divide assignment distance by the outlier-related radius,
with the degenerate convention 0/0 = 0 and d/0 = +inf for d > 0 (duplicate
points can make radii zero); solve reports count how often it fired.
"""

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .metric import MetricInstance
from .radius import RadiusTable, compute_radii

RADIUS_KINDS = ("nr", "nrq")
ALGORITHMS = ("naive", "basic", "refined", "param_naive")


@dataclass(frozen=True)
class Solution:
    """Centers in selection order, outlier set, nearest-center assignment
    over the served vertices."""

    centers: tuple[int, ...]
    outliers: frozenset[int]
    assignment: dict[int, int]

    def feasible(self, k: int, q: int) -> bool:
        return (
            0 < len(self.centers) <= k
            and len(self.outliers) <= q
            and not self.outliers.intersection(self.centers)
        )


class BetaProbe(NamedTuple):
    t: int
    beta: float
    count: int          # outliers left (refined) or centers selected (param_naive)
    accepted: bool


@dataclass
class SolveReport:
    algorithm: str
    alpha: float
    beta_trace: list[BetaProbe] = field(default_factory=list)
    elapsed: float = 0.0
    n_zero_radius: int = 0  # served vertices whose ratio needed the 0-radius convention


def greedy_core(
    inst: MetricInstance,
    radii: RadiusTable,
    beta: float,
    radius_kind: str,
    cap_centers: bool,
) -> tuple[list[int], list[int]]:
    """One run of the parameterized greedy selection.

    Returns (centers in selection order, surviving vertices in index order).
    With ``cap_centers`` the loop stops at k centers and survivors are the
    outlier candidates; without it the loop drains the pool entirely.
    """
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    if radius_kind not in RADIUS_KINDS:
        raise ValueError(f"radius_kind must be one of {RADIUS_KINDS}, got {radius_kind!r}")
    radius_vec = radii.nr if radius_kind == "nr" else radii.nrq
    max_centers = inst.k if cap_centers else inst.n
    centers, in_p = _kernels.greedy_select(inst.dist, radius_vec, float(beta), max_centers)
    return [int(c) for c in centers], [int(i) for i in np.flatnonzero(in_p)]


def assign_nearest(
    inst: MetricInstance,
    centers: Iterable[int],
    outliers: Iterable[int] = (),
) -> dict[int, int]:
    """Map every non-outlier vertex to its nearest center, ties to the
    lowest center index."""
    center_list = list(centers)
    if not center_list:
        raise ValueError("cannot assign with an empty center set")
    out = frozenset(outliers)
    overlap = out.intersection(center_list)
    if overlap:
        raise ValueError(f"centers and outliers overlap: {sorted(overlap)}")
    order = np.unique(np.asarray(center_list, dtype=np.int64))
    served = np.setdiff1d(np.arange(inst.n), np.fromiter(out, dtype=np.int64, count=len(out)))
    sub = inst.dist[np.ix_(served, order)]
    choice = order[np.argmin(sub, axis=1)]
    return {int(v): int(c) for v, c in zip(served, choice)}


def _served_ratios(inst, radii, sol) -> tuple[np.ndarray, int]:
    served = np.fromiter(sol.assignment.keys(), dtype=np.int64, count=len(sol.assignment))
    if served.size == 0:
        return np.empty(0), 0
    centers = np.fromiter((sol.assignment[int(v)] for v in served), dtype=np.int64, count=served.size)
    d = inst.dist[served, centers]
    r = radii.nrq[served]
    zero = r == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = d / r
    ratios[zero] = np.where(d[zero] == 0.0, 0.0, np.inf)
    return ratios, int(zero.sum())


def evaluate_alpha(inst: MetricInstance, radii: RadiusTable, sol: Solution) -> float:
    """Maximum fairness ratio over served vertices; 0 for an empty served set."""
    expected = set(range(inst.n)) - sol.outliers
    if set(sol.assignment) != expected:
        raise ValueError("assignment domain mismatch: must cover exactly the non-outlier vertices")
    center_set = set(sol.centers)
    bad = [v for v, c in sol.assignment.items() if c not in center_set]
    if bad:
        raise ValueError(f"vertices assigned to non-centers: {sorted(bad)[:5]}")
    ratios, _ = _served_ratios(inst, radii, sol)
    return float(ratios.max()) if ratios.size else 0.0


def _finish(inst, radii, algorithm, sol, trace, t0) -> tuple[Solution, SolveReport]:
    ratios, n_zero = _served_ratios(inst, radii, sol)
    alpha = float(ratios.max()) if ratios.size else 0.0
    report = SolveReport(
        algorithm=algorithm,
        alpha=alpha,
        beta_trace=trace,
        elapsed=time.perf_counter() - t0,
        n_zero_radius=n_zero,
    )
    return sol, report


def solve_naive(inst: MetricInstance, radii: RadiusTable | None = None):
    """Plain-radius greedy at beta=2; all vertices served."""
    t0 = time.perf_counter()
    radii = radii if radii is not None else compute_radii(inst)
    centers, _ = greedy_core(inst, radii, 2.0, "nr", cap_centers=False)
    sol = Solution(tuple(centers), frozenset(), assign_nearest(inst, centers))
    return _finish(inst, radii, "naive", sol, [], t0)


def solve_basic(inst: MetricInstance, radii: RadiusTable | None = None):
    """Outlier-radius greedy at beta=2 capped at k centers; survivors are
    the outliers."""
    t0 = time.perf_counter()
    radii = radii if radii is not None else compute_radii(inst)
    centers, leftover = greedy_core(inst, radii, 2.0, "nrq", cap_centers=True)
    sol = Solution(tuple(centers), frozenset(leftover), assign_nearest(inst, centers, leftover))
    return _finish(inst, radii, "basic", sol, [], t0)


def solve_refined(inst: MetricInstance, l: int = 10, radii: RadiusTable | None = None):
    """Bisection refinement of the basic solution over beta in [1, 2].

    Runs exactly ``l`` probes; the first is at beta=1, each later one at the
    midpoint of the current bracket. A probe leaving more than q outliers
    raises the lower end, otherwise its solution is adopted and the upper end
    drops to the probed beta.
    """
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")
    t0 = time.perf_counter()
    radii = radii if radii is not None else compute_radii(inst)
    sol, _ = solve_basic(inst, radii)
    b1, b2, beta = 1.0, 2.0, 1.0
    trace: list[BetaProbe] = []
    for t in range(l):
        centers, leftover = greedy_core(inst, radii, beta, "nrq", cap_centers=True)
        accepted = len(leftover) <= inst.q
        if accepted:
            sol = Solution(tuple(centers), frozenset(leftover), assign_nearest(inst, centers, leftover))
            b2 = beta
        else:
            b1 = beta
        trace.append(BetaProbe(t, beta, len(leftover), accepted))
        beta = (b1 + b2) / 2.0
    return _finish(inst, radii, "refined", sol, trace, t0)


def solve_param_naive(inst: MetricInstance, l: int = 10, radii: RadiusTable | None = None):
    """Bisection over beta in [1, 2] on the plain-radius uncapped greedy.

    A probe is accepted when it selects at most k centers; accepted probes
    serve every vertex. The report's alpha still uses the outlier-related
    radii, the objective this problem is scored by.
    """
    if l < 0:
        raise ValueError(f"l must be non-negative, got {l}")
    t0 = time.perf_counter()
    radii = radii if radii is not None else compute_radii(inst)
    sol, _ = solve_naive(inst, radii)
    b1, b2, beta = 1.0, 2.0, 1.0
    trace: list[BetaProbe] = []
    for t in range(l):
        centers, _ = greedy_core(inst, radii, beta, "nr", cap_centers=False)
        accepted = len(centers) <= inst.k
        if accepted:
            sol = Solution(tuple(centers), frozenset(), assign_nearest(inst, centers))
            b2 = beta
        else:
            b1 = beta
        trace.append(BetaProbe(t, beta, len(centers), accepted))
        beta = (b1 + b2) / 2.0
    return _finish(inst, radii, "param_naive", sol, trace, t0)


SOLVERS = {
    "naive": solve_naive,
    "basic": solve_basic,
    "refined": solve_refined,
    "param_naive": solve_param_naive,
}


def solution_to_json(sol: Solution, report: SolveReport) -> dict:
    """Wire format shared by the CLI and the oracle: alpha serializes as the
    string "inf" when infinite."""
    return {
        "algorithm": report.algorithm,
        "centers": [int(c) for c in sol.centers],
        "outliers": sorted(int(o) for o in sol.outliers),
        "assignment": {str(v): int(c) for v, c in sorted(sol.assignment.items())},
        "alpha": "inf" if math.isinf(report.alpha) else report.alpha,
        "beta_trace": [
            {"t": p.t, "beta": p.beta, "count": p.count, "accepted": p.accepted}
            for p in report.beta_trace
        ],
        "elapsed": report.elapsed,
        "n_zero_radius": report.n_zero_radius,
    }
