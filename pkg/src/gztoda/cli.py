"""Command-line surface: verification suites, wave-function grids, oracles.

Commands
--------
verify algebra|yangian|whittaker|pairing|orbit   run a verification suite
toda / sutherland                                evaluate wave functions on a grid
eigencheck toda|sutherland                       finite-difference eigen-residuals
oracle n2 toda|sutherland                        closed-form N=2 comparisons

Every command writes a JSON report (schema 1: suite, per-check max error,
threshold, pass/fail, wall time, seed); the wave-function commands also
write a CSV of samples (x_1..x_N, re, im, err_estimate) at full double
precision.  Exit status: 0 all checks pass, 1 numerical failure, 2 usage
error.  Results are reproducible: one seeded 64-bit PCG64 generator drives
all random test functions and points, reductions are ordered, and the
worker count (``--workers`` or ``GZTODA_WORKERS``) only bounds the numba
thread pool.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
import time

import numpy as np

from . import backend
from .core import HBar
from .errors import GzError, UsageError
from .glrep import (
    check_gl_relations,
    check_sutherland_condition,
    check_whittaker_eigen,
)
from .models import (
    SpectralParams,
    SutherlandEvaluator,
    TodaEvaluator,
    sutherland_eigencheck,
    sutherland_n2_oracle,
    toda_eigencheck,
    toda_n2_oracle,
)
from .orbit import contour_check, poisson_check, random_orbit_point, recover_coordinates, reconstruct_u
from .quad import ContourSpec, check_pairing_duality, default_contour
from .report import SuiteReport
from .yangian import (
    check_casimir_multiplication,
    check_qism_relations,
    check_yangian_relations,
    reconstruct_generators,
)


def parse_gamma(text: str, n: int | None = None) -> tuple[complex, ...]:
    vals = tuple(complex(v) for v in text.split(","))
    if n is not None and len(vals) != n:
        raise UsageError(f"--gamma needs {n} entries, got {len(vals)}")
    return vals


def parse_xgrid(text: str) -> list[tuple[float, ...]]:
    """Per-coordinate specs joined by commas: ``start:stop:count``, a single
    value, or a semicolon list; the grid is their Cartesian product."""
    axes = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part:
            pieces = part.split(":")
            if len(pieces) != 3:
                raise UsageError(f"bad grid axis {part!r} (want start:stop:count)")
            start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
            if count < 1:
                raise UsageError("grid count must be positive")
            axes.append(np.linspace(start, stop, count))
        elif ";" in part:
            axes.append(np.asarray([float(v) for v in part.split(";")]))
        else:
            axes.append(np.asarray([float(part)]))
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.reshape(-1) for g in grids], axis=-1)
    return [tuple(float(v) for v in row) for row in pts]


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def write_report(report: SuiteReport, path: str | None) -> None:
    d = report.to_dict()
    d["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    text = json.dumps(d, sort_keys=True, indent=2, default=_json_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def write_samples(samples, path: str) -> None:
    n = len(samples[0].x)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow([f"x_{i + 1}" for i in range(n)] + ["re", "im", "err_estimate"])
        for s in samples:
            wr.writerow([repr(float(v)) for v in s.x]
                        + [repr(s.value.real), repr(s.value.imag), repr(s.err_estimate)])


def _contour_from_args(args, n, hbar, gamma):
    if args.radius is None and args.nodes is None and args.delta is None:
        return None
    return default_contour(n, hbar, gamma, nodes=args.nodes,
                           radius=args.radius, delta=args.delta)


def _suite_verify(args) -> SuiteReport:
    hbar = HBar(args.hbar)
    rng = np.random.default_rng(args.seed)
    n = args.n
    tol = args.tolerance
    if args.what == "algebra":
        rep = check_gl_relations(n, hbar, trials=args.trials, rng=rng,
                                 threshold=tol or 1e-10)
    elif args.what == "yangian":
        rep = SuiteReport(suite=f"yangian N={n}", meta={"hbar": hbar.value})
        for sub in (
            check_casimir_multiplication(n, hbar, trials=args.trials, rng=rng,
                                         threshold=tol or 1e-9),
            check_yangian_relations(n, hbar, trials=args.trials, rng=rng,
                                    threshold=tol or 1e-9),
            check_qism_relations(n, hbar, trials=args.trials, rng=rng,
                                 threshold=tol or 1e-9),
        ):
            rep.checks.extend(sub.checks)
            rep.meta.update(sub.meta)
            rep.wall_time_s += sub.wall_time_s
        for lev in range(1, n):
            sub = reconstruct_generators(lev, n, hbar, trials=min(3, args.trials),
                                         rng=rng, threshold=tol or 1e-8)
            for c in sub.checks:
                c.name = f"n{lev}-{c.name}"
            rep.checks.extend(sub.checks)
            rep.wall_time_s += sub.wall_time_s
    elif args.what == "whittaker":
        rep = SuiteReport(suite=f"whittaker N={n}", meta={"hbar": hbar.value})
        for kind in ("w", "w_prime"):
            sub = check_whittaker_eigen(kind, n, hbar, trials=args.trials, rng=rng,
                                        threshold=tol or 1e-10)
            for c in sub.checks:
                c.name = f"{kind}-{c.name}"
            rep.checks.extend(sub.checks)
            rep.wall_time_s += sub.wall_time_s
        sub = check_sutherland_condition(n, hbar, trials=args.trials, rng=rng,
                                         threshold=tol or 1e-10)
        rep.checks.extend(sub.checks)
        rep.wall_time_s += sub.wall_time_s
    elif args.what == "pairing":
        gamma = parse_gamma(args.gamma, n) if args.gamma else None
        rep = check_pairing_duality(n, hbar, gamma, trials=args.trials, rng=rng,
                                    threshold=tol or 1e-6)
    elif args.what == "orbit":
        rep = SuiteReport(suite=f"orbit N={n}", meta={"seed": args.seed})
        pt = random_orbit_point(n, rng)
        u = reconstruct_u(pt)
        gam, qb, qc = recover_coordinates(u)
        err_round = 0.0
        for lev in range(1, n + 1):
            err_round = max(err_round, float(np.max(np.abs(
                np.sort(pt.gamma_row(lev)) - gam[lev - 1]))))
        err_q = max(float(np.max(np.abs(qb[k] - qc[k]))) for k in range(n - 1))
        rep.add("roundtrip-gamma", err_round, tol or 1e-10)
        rep.add("q-recovery-agreement", err_q, tol or 1e-10)
        sub = poisson_check(pt, rng=rng, n_pairs=None if n <= 3 else 60,
                            threshold=tol or 1e-5)
        rep.checks.extend(sub.checks)
        sub = contour_check(pt, threshold=tol or 1e-8)
        rep.checks.extend(sub.checks)
    else:  # pragma: no cover
        raise UsageError(f"unknown verify target {args.what!r}")
    rep.seed = args.seed
    return rep


def _run_wave(args, kind: str) -> tuple[SuiteReport, list]:
    hbar = HBar(args.hbar)
    gamma = parse_gamma(args.gamma, args.n)
    params = SpectralParams(gamma, hbar)
    xs = parse_xgrid(args.x)
    spec = _contour_from_args(args, args.n, hbar, gamma)
    if kind == "toda":
        ev = TodaEvaluator(params, spec, method=args.method)
    else:
        ev = SutherlandEvaluator(params, spec)
    samples = ev.batch(xs)
    rep = SuiteReport(suite=f"{kind}-wavefunction N={args.n}",
                      seed=args.seed,
                      meta={"hbar": hbar.value, "points": len(samples),
                            "gamma": [str(g) for g in gamma]})
    worst = max((s.err_estimate / (abs(s.value) + 1e-300) for s in samples),
                default=0.0)
    rep.add("relative-error-estimate", worst, args.tolerance or 1e-3)
    return rep, samples


def _run_eigencheck(args) -> SuiteReport:
    hbar = HBar(args.hbar)
    gamma = parse_gamma(args.gamma, args.n)
    params = SpectralParams(gamma, hbar)
    xs = parse_xgrid(args.x)
    spec = _contour_from_args(args, args.n, hbar, gamma)
    if args.which == "toda":
        rep = toda_eigencheck(params, xs, spec=spec)
    else:
        rep = sutherland_eigencheck(params, xs, spec=spec)
    rep.seed = args.seed
    return rep


def _run_oracle(args) -> SuiteReport:
    hbar = HBar(args.hbar)
    gamma = parse_gamma(args.gamma, 2)
    params = SpectralParams(gamma, hbar)
    spec = _contour_from_args(args, 2, hbar, gamma)
    tol = args.tolerance or 1e-6
    if args.which == "toda":
        ev = TodaEvaluator(params, spec)
        xs = [(d / 2.0, -d / 2.0) for d in np.linspace(-2.0, 2.0, 21)]
        oracle = toda_n2_oracle
        name = "macdonald-closed-form"
    else:
        ev = SutherlandEvaluator(params, spec)
        xs = [(d / 2.0, -d / 2.0) for d in np.linspace(0.2, 2.0, 21)]
        oracle = sutherland_n2_oracle
        name = "legendre-closed-form"
    err = 0.0
    for x in xs:
        s = ev.value(x)
        o = oracle(params, x)
        err = max(err, abs(s.value - o) / abs(o))
    rep = SuiteReport(suite=f"oracle-n2-{args.which}", seed=args.seed,
                      meta={"hbar": hbar.value, "points": len(xs),
                            "gamma": [str(g) for g in gamma]})
    rep.add(name, err, tol)
    return rep


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gztoda",
        description="Pattern representations of gl(N) and Toda/Sutherland "
                    "wave functions by Mellin-Barnes quadrature.")
    ap.add_argument("--workers", type=int, default=None,
                    help="numba thread bound (default: GZTODA_WORKERS or all cores)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, gamma_required=False):
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--hbar", type=float, default=1.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=10)
        p.add_argument("--tolerance", type=float, default=None)
        p.add_argument("--gamma", type=str, required=gamma_required,
                       help="comma-separated spectral parameters")
        p.add_argument("--radius", type=float, default=None)
        p.add_argument("--nodes", type=int, default=None)
        p.add_argument("--delta", type=float, default=None,
                       help="contour-offset spacing (default hbar/2)")
        p.add_argument("--out", type=str, default=None, help="JSON report path")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("what", choices=["algebra", "yangian", "whittaker",
                                     "pairing", "orbit"])
    common(pv)

    for kind in ("toda", "sutherland"):
        pw = sub.add_parser(kind, help=f"evaluate the {kind} wave function")
        common(pw, gamma_required=True)
        pw.add_argument("--x", type=str, required=True,
                        help="grid: start:stop:count per coordinate, comma-joined")
        pw.add_argument("--csv", type=str, default=None, help="samples CSV path")
        if kind == "toda":
            pw.add_argument("--method", choices=["direct", "recursive"],
                            default="direct")

    pe = sub.add_parser("eigencheck", help="finite-difference eigen-residuals")
    pe.add_argument("which", choices=["toda", "sutherland"])
    common(pe, gamma_required=True)
    pe.add_argument("--x", type=str, required=True)

    po = sub.add_parser("oracle", help="closed-form comparisons")
    po.add_argument("family", choices=["n2"])
    po.add_argument("which", choices=["toda", "sutherland"])
    common(po, gamma_required=True)
    return ap


def _join_dash_values(argv):
    """Let ``--x -1:1:21,0`` work: merge option-value pairs whose value
    starts with a dash into ``--opt=value`` form."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--x", "--gamma") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    ap = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = ap.parse_args(_join_dash_values(list(argv)))
    except SystemExit as e:
        return int(e.code or 0)
    if args.workers is None:
        backend.set_workers(backend.default_workers())
    else:
        backend.set_workers(args.workers)
    t0 = time.perf_counter()
    try:
        samples = None
        if args.command == "verify":
            rep = _suite_verify(args)
        elif args.command in ("toda", "sutherland"):
            rep, samples = _run_wave(args, args.command)
        elif args.command == "eigencheck":
            rep = _run_eigencheck(args)
        elif args.command == "oracle":
            rep = _run_oracle(args)
        else:  # pragma: no cover
            raise UsageError(f"unknown command {args.command!r}")
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except GzError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if rep.wall_time_s == 0.0:
        rep.wall_time_s = time.perf_counter() - t0
    write_report(rep, args.out)
    if samples is not None and getattr(args, "csv", None):
        write_samples(samples, args.csv)
    return 0 if rep.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
