"""Per-vertex neighborhood radii.

For vertex i, nr[i] is the distance to its ceil(n/k)-th nearest neighbor and
nrq[i] the distance to its ceil((n-q)/k)-th nearest neighbor, where every
vertex counts as its own first neighbor (distance 0). Radii of 0 are kept as
computed; the division convention for fairness ratios lives in ``solve``.
"""

from dataclasses import dataclass

import numpy as np

from .metric import MetricInstance


@dataclass(frozen=True, eq=False)
class RadiusTable:
    nr: np.ndarray
    nrq: np.ndarray
    rank_nr: int
    rank_nrq: int


def compute_radii(inst: MetricInstance) -> RadiusTable:
    """Both radius vectors via a single per-row partial sort.

    The k-th order statistic is a value, so tie order among equal distances
    cannot affect it.
    """
    n, k, q = inst.n, inst.k, inst.q
    rank_nr = -(-n // k)
    rank_nrq = -(-(n - q) // k)
    kth = tuple(sorted({rank_nrq - 1, rank_nr - 1}))
    part = np.partition(inst.dist, kth, axis=1)
    nr = part[:, rank_nr - 1].copy()
    nrq = part[:, rank_nrq - 1].copy()
    nr.setflags(write=False)
    nrq.setflags(write=False)
    return RadiusTable(nr=nr, nrq=nrq, rank_nr=rank_nr, rank_nrq=rank_nrq)
