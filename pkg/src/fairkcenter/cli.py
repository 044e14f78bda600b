"""Command-line interface: generate, solve, sweep, compare, radii.

Exit codes: 0 success, 2 usage error, 3 unreadable or invalid data,
4 degenerate result (the solved fairness ratio is infinite, which happens
only when duplicate points drive an outlier-related radius to zero).
"""

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .instances import CsvError, GenSpec, generate
from .metric import MetricError, load_instance, save_instance
from .oracle import TooLargeError, brute_force_opt
from .radius import compute_radii
from .solve import (
    SOLVERS,
    Solution,
    assign_nearest,
    evaluate_alpha,
    greedy_core,
    solution_to_json,
    solve_basic,
    solve_naive,
    solve_param_naive,
    solve_refined,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4


@dataclass(frozen=True)
class SweepSample:
    beta: float
    outliers: int
    alpha: float | None  # None when the probe leaves more than q outliers


@dataclass(frozen=True)
class SweepCurve:
    samples: list[SweepSample]
    instance_id: str
    algorithm: str = "basic"


def parse_betas(text: str) -> list[float]:
    """Parse "start:stop:step" into an inclusive, strictly increasing grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"non-numeric beta range {text!r}") from None
    if start < 0 or stop < start or step <= 0:
        raise ValueError(f"need 0 <= start <= stop and step > 0, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    last = start + (count - 1) * step
    if abs(last - stop) <= 1e-9 * max(1.0, abs(stop)) and count > 1:
        import numpy as np

        return [float(b) for b in np.linspace(start, stop, count)]
    return [start + i * step for i in range(count)]


def run_sweep(inst, radii, betas, instance_id: str = "") -> SweepCurve:
    """One capped greedy probe per beta; probes run on a thread pool and the
    samples keep the beta order."""

    def probe(beta: float) -> SweepSample:
        centers, leftover = greedy_core(inst, radii, beta, "nrq", cap_centers=True)
        if len(leftover) <= inst.q:
            sol = Solution(tuple(centers), frozenset(leftover), assign_nearest(inst, centers, leftover))
            return SweepSample(beta, len(leftover), evaluate_alpha(inst, radii, sol))
        return SweepSample(beta, len(leftover), None)

    with ThreadPoolExecutor(max_workers=min(8, max(1, len(betas)))) as pool:
        samples = list(pool.map(probe, betas))
    return SweepCurve(samples=samples, instance_id=instance_id)


def sweep_csv(curve: SweepCurve) -> str:
    lines = ["beta,outliers,alpha"]
    for s in curve.samples:
        alpha = "" if s.alpha is None else ("inf" if math.isinf(s.alpha) else repr(s.alpha))
        lines.append(f"{s.beta!r},{s.outliers},{alpha}")
    return "\n".join(lines) + "\n"


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    spec = GenSpec(n=args.n, k=args.k, q=args.q, side=args.side, seed=args.seed)
    inst = generate(spec)
    save_instance(inst, args.output)
    print(f"wrote {args.output}: n={inst.n} k={inst.k} q={inst.q}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    algo = args.algo.replace("-", "_")
    if algo in ("refined", "param_naive"):
        sol, report = SOLVERS[algo](inst, l=args.l)
    else:
        sol, report = SOLVERS[algo](inst)
    print(json.dumps(solution_to_json(sol, report), indent=2))
    return EXIT_DEGENERATE if math.isinf(report.alpha) else EXIT_OK


def cmd_sweep(args) -> int:
    inst = load_instance(args.instance)
    radii = compute_radii(inst)
    curve = run_sweep(inst, radii, args.betas, instance_id=str(args.instance))
    _write(sweep_csv(curve), args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = load_instance(args.instance)
    radii = compute_radii(inst)
    alphas = {}
    for name, solver in (
        ("naive", solve_naive),
        ("basic", solve_basic),
        ("refined", lambda i, radii: solve_refined(i, l=args.l, radii=radii)),
        ("param_naive", lambda i, radii: solve_param_naive(i, l=args.l, radii=radii)),
    ):
        _, report = solver(inst, radii=radii) if name in ("naive", "basic") else solver(inst, radii)
        alphas[name] = report.alpha
    doc = {
        "instance": str(args.instance),
        "n": inst.n,
        "k": inst.k,
        "q": inst.q,
        "l": args.l,
        "alpha": {k: ("inf" if math.isinf(v) else v) for k, v in alphas.items()},
    }
    try:
        result = brute_force_opt(inst, radii, n_max=args.oracle_max)
        doc["oracle"] = {"ran": True, "enumerated": result.enumerated}
        doc["opt_alpha"] = result.opt_alpha
        if result.opt_alpha > 0:
            doc["alpha_over_opt"] = {
                k: ("inf" if math.isinf(v) else v / result.opt_alpha) for k, v in alphas.items()
            }
        else:
            doc["alpha_over_opt"] = None
    except TooLargeError as exc:
        doc["oracle"] = {"ran": False, "reason": str(exc)}
        doc["opt_alpha"] = None
    print(json.dumps(doc, indent=2))
    return EXIT_DEGENERATE if any(math.isinf(v) for v in alphas.values()) else EXIT_OK


def cmd_radii(args) -> int:
    inst = load_instance(args.instance)
    radii = compute_radii(inst)
    lines = ["vertex,nr,nrq"]
    for v in range(inst.n):
        lines.append(f"{v},{radii.nr[v]!r},{radii.nrq[v]!r}")
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairkcenter",
        description="Individually fair k-center with outliers: solvers and experiment harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic uniform-square instance")
    p.add_argument("--n", type=int, required=True, help="number of points (>= 1)")
    p.add_argument("--k", type=int, required=True, help="max centers (1 <= k <= n)")
    p.add_argument("--q", type=int, required=True, help="max outliers (0 <= q < n)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--side", type=float, default=100.0, help="square side length")
    p.add_argument("-o", "--output", required=True, help="instance JSON path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance, print solution JSON")
    p.add_argument("instance")
    p.add_argument("--algo", required=True, choices=["naive", "basic", "refined", "param-naive"])
    p.add_argument("--l", type=int, default=10, help="bisection probes for refined/param-naive")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="outliers and alpha across a beta grid, CSV")
    p.add_argument("instance")
    p.add_argument("--betas", type=parse_betas, default=parse_betas("1.0:2.0:0.05"),
                   help="grid as start:stop:step (inclusive)")
    p.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="alpha of all four algorithms, oracle when small")
    p.add_argument("instance")
    p.add_argument("--l", type=int, default=10)
    p.add_argument("--oracle-max", type=int, default=14, help="max n for the exact oracle")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("radii", help="dump per-vertex radii as CSV")
    p.add_argument("instance")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_radii)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ValueError as exc:  # argparse type= failures not caught by argparse
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "l", 0) is not None and getattr(args, "l", 0) < 0:
        print("error: --l must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    if args.func is cmd_gen and (args.n < 1 or not 1 <= args.k <= args.n or not 0 <= args.q < args.n):
        print(f"error: need n >= 1, 1 <= k <= n, 0 <= q < n; got n={args.n} k={args.k} q={args.q}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (MetricError, CsvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
