"""Hot numeric kernels, JIT-compiled with numba by default.

Set ``FAIRKCENTER_BACKEND=numpy`` to force the pure-numpy fallback path
(the default is numba when importable). Both paths perform floating-point
operations in the same order, so their outputs are bit-identical; the
benchmark in ``benchmarks/bench_kernels.py`` compares their speed.
"""

import itertools
import os

import numpy as np

# ---------------------------------------------------------------------------
# pure-numpy implementations


def _pairwise_numpy(points):
    """Dense Euclidean distance matrix; rows are chunked to bound temporaries."""
    n, dim = points.shape
    out = np.zeros((n, n), dtype=np.float64)
    block = max(1, (4 << 20) // max(1, n))
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        acc = np.zeros((hi - lo, n), dtype=np.float64)
        for t in range(dim):
            diff = points[lo:hi, t][:, None] - points[:, t][None, :]
            acc += diff * diff
        out[lo:hi] = np.sqrt(acc)
    return out


def _greedy_numpy(dist, radius, beta, max_centers):
    """Repeatedly pick the lowest-radius remaining vertex (ties: lowest index)
    and drop every remaining vertex within beta * its own radius of the pick.

    The picked vertex is always dropped, even when beta * radius == 0.
    Returns (selection-ordered center indices, boolean mask of survivors).
    """
    n = radius.shape[0]
    in_p = np.ones(n, dtype=np.bool_)
    thresh = beta * radius
    centers = np.empty(n, dtype=np.int64)
    m = 0
    while m < max_centers and in_p.any():
        s = int(np.argmin(np.where(in_p, radius, np.inf)))
        centers[m] = s
        m += 1
        np.logical_and(in_p, dist[:, s] > thresh, out=in_p)
        in_p[s] = False
    return centers[:m].copy(), in_p


def _ratio_matrix(dmin, nrq):
    # dmin / nrq with the degenerate-radius convention: 0/0 -> 0, d/0 -> inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = dmin / nrq[:, None]
    zero_r = nrq == 0.0
    if zero_r.any():
        ratios[zero_r] = np.where(dmin[zero_r] == 0.0, 0.0, np.inf)
    return ratios


def _oracle_numpy(dist, nrq, m, q):
    """Scan every m-subset of vertices as a center set.

    For each subset, every vertex is scored against its nearest center and
    the q largest scores are discarded; the subset's cost is the largest
    surviving score. Returns (best cost, lexicographically first best subset,
    number of subsets scanned).
    """
    n = dist.shape[0]
    best_alpha = np.inf
    best = np.arange(m, dtype=np.int64)
    count = 0
    combos = itertools.combinations(range(n), m)
    while True:
        block = np.array(list(itertools.islice(combos, 4096)), dtype=np.int64)
        if block.size == 0:
            break
        dmin = dist[:, block].min(axis=2)
        ratios = _ratio_matrix(dmin, nrq)
        alphas = np.sort(ratios, axis=0)[n - 1 - q, :]
        i = int(np.argmin(alphas))
        if alphas[i] < best_alpha:
            best_alpha = float(alphas[i])
            best = block[i].copy()
        count += block.shape[0]
    return best_alpha, best, count


def _triangle_numpy(dist, tol):
    """First (h, i, j) in lexicographic order with d[h,j] > d[h,i] + d[i,j] + tol,
    or (-1, -1, -1) when the matrix is metric within tol."""
    n = dist.shape[0]
    for h in range(n):
        row = dist[h]
        slack = row[None, :] - (row[:, None] + dist)
        bad = slack > tol
        if bad.any():
            flat = int(np.argmax(bad))
            return h, flat // n, flat % n
    return -1, -1, -1


NUMPY_KERNELS = {
    "pairwise_dists": _pairwise_numpy,
    "greedy_select": _greedy_numpy,
    "oracle_scan": _oracle_numpy,
    "triangle_violation": _triangle_numpy,
}

# ---------------------------------------------------------------------------
# numba implementations


def _build_numba_kernels():
    from numba import njit

    @njit(cache=True)
    def pairwise_nb(points):
        n, dim = points.shape
        out = np.zeros((n, n), dtype=np.float64)
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for t in range(dim):
                    diff = points[i, t] - points[j, t]
                    acc += diff * diff
                v = np.sqrt(acc)
                out[i, j] = v
                out[j, i] = v
        return out

    @njit(cache=True)
    def greedy_nb(dist, radius, beta, max_centers):
        n = radius.shape[0]
        in_p = np.ones(n, dtype=np.bool_)
        centers = np.empty(n, dtype=np.int64)
        m = 0
        remaining = n
        while m < max_centers and remaining > 0:
            s = -1
            best = np.inf
            for i in range(n):
                if in_p[i] and radius[i] < best:
                    best = radius[i]
                    s = i
            centers[m] = s
            m += 1
            for i in range(n):
                if in_p[i] and dist[i, s] <= beta * radius[i]:
                    in_p[i] = False
                    remaining -= 1
            if in_p[s]:
                in_p[s] = False
                remaining -= 1
        return centers[:m].copy(), in_p

    @njit(cache=True)
    def oracle_nb(dist, nrq, m, q):
        n = dist.shape[0]
        comb = np.empty(m, dtype=np.int64)
        for t in range(m):
            comb[t] = t
        best_alpha = np.inf
        best = comb.copy()
        ratios = np.empty(n, dtype=np.float64)
        count = 0
        while True:
            count += 1
            for v in range(n):
                dmin = np.inf
                for t in range(m):
                    d = dist[v, comb[t]]
                    if d < dmin:
                        dmin = d
                r = nrq[v]
                if r > 0.0:
                    ratios[v] = dmin / r
                elif dmin == 0.0:
                    ratios[v] = 0.0
                else:
                    ratios[v] = np.inf
            alpha = np.sort(ratios)[n - 1 - q]
            if alpha < best_alpha:
                best_alpha = alpha
                best[:] = comb
            j = m - 1
            while j >= 0 and comb[j] == n - m + j:
                j -= 1
            if j < 0:
                break
            comb[j] += 1
            for t in range(j + 1, m):
                comb[t] = comb[t - 1] + 1
        return best_alpha, best, count

    @njit(cache=True)
    def triangle_nb(dist, tol):
        n = dist.shape[0]
        for h in range(n):
            for i in range(n):
                dhi = dist[h, i]
                for j in range(n):
                    s = dhi + dist[i, j]
                    if dist[h, j] - s > tol:
                        return h, i, j
        return -1, -1, -1

    return {
        "pairwise_dists": pairwise_nb,
        "greedy_select": greedy_nb,
        "oracle_scan": oracle_nb,
        "triangle_violation": triangle_nb,
    }


# ---------------------------------------------------------------------------
# backend selection

ALL_BACKENDS = {"numpy": NUMPY_KERNELS}

_requested = os.environ.get("FAIRKCENTER_BACKEND", "numba").strip().lower()
BACKEND = "numpy"
if _requested != "numpy":
    try:
        ALL_BACKENDS["numba"] = _build_numba_kernels()
        BACKEND = "numba"
    except ImportError:
        BACKEND = "numpy"

_active = ALL_BACKENDS[BACKEND]
pairwise_dists = _active["pairwise_dists"]
greedy_select = _active["greedy_select"]
oracle_scan = _active["oracle_scan"]
triangle_violation = _active["triangle_violation"]
