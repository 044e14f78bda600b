"""Exact optimum by exhaustive enumeration, for small instances.

Two tiers:

* ``brute_force_opt`` — the fast tier. Scans every center set of size
  exactly min(k, n); for a fixed center set the best outlier choice is to
  drop the q largest fairness ratios, and growing a center set never hurts,
  so both reductions preserve optimality.
* ``exhaustive_opt`` — the certification tier. Scans all center-set sizes
  1..k and all outlier sets of size <= q with no reductions; used in tests
  to certify the fast tier on tiny instances.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .metric import MetricInstance
from .radius import RadiusTable
from .solve import Solution, assign_nearest


class TooLargeError(ValueError):
    """Instance exceeds the exhaustive-search size gate."""


@dataclass(frozen=True)
class OracleResult:
    opt_alpha: float
    witness: Solution
    enumerated: int


def _ratios_for_centers(inst, radii, centers) -> np.ndarray:
    dmin = inst.dist[:, centers].min(axis=1)
    r = radii.nrq
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = dmin / r
    zero = r == 0.0
    ratios[zero] = np.where(dmin[zero] == 0.0, 0.0, np.inf)
    return ratios


def brute_force_opt(inst: MetricInstance, radii: RadiusTable, n_max: int = 14) -> OracleResult:
    """Globally optimal fairness ratio with a certified witness.

    The witness outlier set drops the q largest ratios (ties: lowest vertex
    index first) but never a center; dropping a center is never needed since
    centers score 0, so the optimum is unaffected and the witness keeps
    centers and outliers disjoint.
    """
    if inst.n > n_max:
        raise TooLargeError(f"n={inst.n} exceeds the exhaustive-search limit {n_max}")
    m = min(inst.k, inst.n)
    alpha, best, count = _kernels.oracle_scan(inst.dist, radii.nrq, m, inst.q)
    centers = tuple(int(c) for c in best)
    ratios = _ratios_for_centers(inst, radii, list(centers))
    order = np.lexsort((np.arange(inst.n), -ratios))  # ratio desc, index asc
    center_set = set(centers)
    candidates = [int(v) for v in order if int(v) not in center_set]
    outliers = frozenset(candidates[: inst.q])
    witness = Solution(centers, outliers, assign_nearest(inst, centers, outliers))
    return OracleResult(opt_alpha=float(alpha), witness=witness, enumerated=int(count))


def exhaustive_opt(inst: MetricInstance, radii: RadiusTable, n_max: int = 7) -> OracleResult:
    """Reduction-free enumeration: all center sets of size 1..k crossed with
    all outlier sets of size 0..q.

    Assignments are fixed to nearest-center, which is pointwise optimal. The
    stored witness drops any centers from the optimal outlier set; a center
    scores 0, so that never changes the value.
    """
    if inst.n > n_max:
        raise TooLargeError(f"n={inst.n} exceeds the certification-tier limit {n_max}")
    n, k, q = inst.n, inst.k, inst.q
    vertices = range(n)
    best_alpha = np.inf
    best_pair = None
    count = 0
    for size_s in range(1, k + 1):
        for centers in combinations(vertices, size_s):
            ratios = _ratios_for_centers(inst, radii, list(centers)).tolist()
            for size_o in range(0, q + 1):
                for outliers in combinations(vertices, size_o):
                    count += 1
                    oset = set(outliers)
                    served = [ratios[v] for v in vertices if v not in oset]
                    alpha = max(served) if served else 0.0
                    if alpha < best_alpha:
                        best_alpha = alpha
                        best_pair = (centers, tuple(o for o in outliers if o not in centers))
    centers, outliers = best_pair
    witness = Solution(tuple(centers), frozenset(outliers), assign_nearest(inst, centers, outliers))
    return OracleResult(opt_alpha=float(best_alpha), witness=witness, enumerated=count)
