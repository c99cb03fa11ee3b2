"""Command-line front end.

Subcommands ``boundary``, ``sweep``, ``oracle`` and ``interfere`` write data
files (CSV or JSON), SVG figures and a ``manifest.json`` into ``--out``.
``replay`` reruns a manifest. The exit code is 0 when every check passes,
1 when a check fails (details in ``failure.json``) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__, boundary, export, oracle, plots
from .errors import ContractViolation
from .interferometer import local_unitary, run_interferometry
from .state import SchmidtSpec, concurrence, schmidt_for_concurrence
from .sweep import (
    OverlapSample,
    Strategy,
    SweepConfig,
    confinement_for,
    max_radius_per_bin,
    phase_histogram,
    run_sweep,
    sample_unitaries,
)

TOOL = "qudit-bound-lab"
SEED_ENV = "QBL_SEED"
# parameters that change how a run executes but not what it writes
_EXECUTION_ONLY = {"out", "threads", "command", "func"}


class UsageError(Exception):
    pass


def _schmidt(d: int, weights: Optional[str], c: Optional[float]) -> SchmidtSpec:
    if weights is not None and c is not None:
        raise UsageError("give either --weights or --concurrence, not both")
    if c is not None:
        if d != 2:
            raise UsageError("--concurrence applies to qubit pairs (--d 2) only")
        if not 0.0 <= c <= 1.0:
            raise UsageError("--concurrence must lie in [0, 1]")
        return schmidt_for_concurrence(c)
    if weights is None:
        return SchmidtSpec(d, (1 / np.sqrt(d),) * d)
    try:
        w = np.array([float(x) for x in weights.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse --weights {weights!r}") from exc
    if len(w) != d or np.any(w < 0) or not np.any(w > 0):
        raise UsageError(f"--weights needs {d} non-negative numbers, not all zero")
    w = np.sort(w)[::-1] / np.linalg.norm(w)
    return SchmidtSpec(d, tuple(w))


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(args, outputs: list[Path], started: float, failures: list[dict]) -> int:
    out = _outdir(args)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _EXECUTION_ONLY}
    manifest = {
        "tool": TOOL,
        "version": __version__,
        "subcommand": args.command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "outputs": sorted(p.name for p in outputs),
        "duration_s": round(time.perf_counter() - started, 3),
    }
    export.write_json(out / "manifest.json", manifest)
    if failures:
        export.write_json(out / "failure.json", {"subcommand": args.command, "failures": failures})
        print(json.dumps({"status": "fail", "failures": failures}, default=str), file=sys.stderr)
        return 1
    print(f"{args.command}: ok ({len(outputs)} files in {out})")
    return 0


def cmd_boundary(args) -> int:
    started = time.perf_counter()
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    if args.concurrence is not None and args.d != 2:
        raise UsageError("--concurrence applies to --d 2 only")
    n = args.n if args.n is not None else 720
    if n < 8 * args.d:
        raise UsageError(f"--n must be at least {8 * args.d}")
    out = _outdir(args)
    c = boundary.curve(args.d, n, args.concurrence)
    files = [
        export.write_table(out / "boundary", export.BOUNDARY_COLUMNS, export.boundary_rows(c), args.format),
        plots.boundary_figure(out / "boundary.svg", c.complex_points(), _title(args.d, args.concurrence)),
    ]
    failures = []
    a = c.arrays()
    top = np.isclose(np.mod(a["phi"] * args.d / (2 * np.pi), 1.0), 0.0, atol=1e-12)
    if args.concurrence is None and np.any(np.abs(a["r_max"][top] - 1.0) > 1e-12):
        failures.append({"check": "r_max = 1 at topological phases"})
    return _finish(args, files, started, failures)


def _title(d: int, c: Optional[float]) -> str:
    return f"d = {d}, C = {c:g}" if c is not None else f"d = {d}, maximally entangled"


def _reference_curve(config: SweepConfig) -> Optional[np.ndarray]:
    if config.schmidt.is_maximally_entangled:
        return boundary.curve(config.d, 720).complex_points()
    if config.d == 2:
        return boundary.curve(2, 720, concurrence(config.initial_state)).complex_points()
    return None


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    if args.strategy == Strategy.RXRZ.value and args.d != 2:
        raise UsageError("--strategy rxrz requires --d 2")
    spec = _schmidt(args.d, args.weights, args.concurrence)
    config = SweepConfig(
        d=args.d,
        schmidt=spec,
        strategy=args.strategy,
        n_samples=args.n if args.n is not None else 1000,
        seed=args.seed,
        tol=args.tol,
    )
    samples = run_sweep(config, workers=args.threads)
    report = confinement_for(config, samples)
    hist = phase_histogram(samples, args.bins)
    out = _outdir(args)
    o = np.array([s.O for s in samples])
    title = f"{config.strategy}, {_title(config.d, None if spec.is_maximally_entangled else _c_or_none(config))}"
    files = [
        export.write_table(out / "samples", export.SAMPLE_COLUMNS, export.sample_rows(samples), args.format),
        export.write_table(out / "histogram", export.HISTOGRAM_COLUMNS, hist, args.format),
        export.write_json(
            out / "confinement.json",
            {
                "schmidt_weights": list(spec.weights),
                "report": report.to_dict(),
                "max_r_per_bin": [
                    {"bin_center": c, "max_r": m, "count": k} for c, m, k in max_radius_per_bin(samples, args.bins)
                ],
            },
        ),
        plots.scatter_figure(out / "scatter.svg", o, _reference_curve(config), title),
        plots.histogram_figure(out / "histogram.svg", hist, title, args.degrees),
    ]
    failures = [] if report.ok else [{"check": "confinement", **report.to_dict()}]
    return _finish(args, files, started, failures)


def _c_or_none(config: SweepConfig) -> Optional[float]:
    return concurrence(config.initial_state) if config.d == 2 else None


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    if args.d not in (2, 3, 4):
        raise UsageError(
            f"oracle refuses --d {args.d}: the exhaustive grid has steps**(d-1) points "
            "and is only run for d = 2, 3, 4"
        )
    steps = args.steps if args.steps is not None else (4096 if args.d == 2 else 1024 if args.d == 3 else 128)
    n_random = args.random if args.random is not None else (10**7 if args.d == 4 else 0)
    try:
        emp = oracle.grid_max_overlap(args.d, steps, args.bins, n_random, args.seed, workers=args.threads)
    except ContractViolation as exc:
        raise UsageError(str(exc)) from exc
    cmp = oracle.compare_boundaries(emp)
    out = _outdir(args)
    cols = ("Phi", "max_R") + tuple(f"phase_{j + 1}" for j in range(args.d))
    rows = [(c, r, *ph) for c, r, ph in zip(emp.centers, emp.max_R, emp.phases)]
    unsound = [
        {"bin_center": float(c), "excess": float(e)}
        for c, e in zip(cmp.centers, cmp.soundness_excess)
        if not np.isnan(e) and e > args.tol
    ]
    report = {**cmp.to_dict(), "steps_per_axis": steps, "n_random": n_random, "max_gap_allowed": args.max_gap,
              "soundness_violations": unsound}
    analytic = boundary.curve(args.d, max(720, 10 * args.bins)).complex_points()
    files = [
        export.write_table(out / "empirical", cols, rows, args.format),
        export.write_json(out / "gap_report.json", report),
        plots.oracle_figure(out / "oracle.svg", emp.overlaps[emp.filled], analytic, f"grid oracle, d = {args.d}"),
    ]
    failures = []
    if unsound:
        failures.append({"check": "soundness", "violations": unsound})
    if not cmp.max_gap <= args.max_gap:
        failures.append({"check": "max_gap", "max_gap": cmp.max_gap, "allowed": args.max_gap})
    return _finish(args, files, started, failures)


def cmd_interfere(args) -> int:
    started = time.perf_counter()
    if not 0.0 < args.epsilon <= 1.0:
        raise UsageError("--epsilon must lie in (0, 1]")
    if not 0.0 <= args.gamma <= 1.0:
        raise UsageError("--gamma must lie in [0, 1]")
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    strategy = args.strategy or (Strategy.RXRZ.value if args.d == 2 else Strategy.HAAR_ONE_SIDED.value)
    if strategy == Strategy.RXRZ.value and args.d != 2:
        raise UsageError("--strategy rxrz requires --d 2")
    spec = _schmidt(args.d, args.weights, args.concurrence)
    config = SweepConfig(args.d, spec, strategy, args.n if args.n is not None else 800, args.seed, args.tol)
    psi = config.initial_state
    readouts, rows, resid = [], [], []
    for k in range(config.n_samples):
        u_a, u_b = sample_unitaries(config, k)
        u = local_unitary(u_a, u_b)
        res = run_interferometry(psi, u, args.epsilon, args.gamma)
        direct = complex(np.vdot(psi.vector(), u @ psi.vector()))
        r = abs(res.signal - args.epsilon * (1 - args.gamma) * direct)
        s = OverlapSample(res.normalized, k, config.strategy, config.seed)
        readouts.append(s)
        resid.append(r)
        rows.append((k, s.O.real, s.O.imag, s.R, s.Phi, r))
    hist = phase_histogram(readouts, args.bins)
    report = confinement_for(config, readouts)
    out = _outdir(args)
    title = f"interferometer, eps = {args.epsilon:g}, gamma = {args.gamma:g}"
    files = [
        export.write_table(out / "readout", export.SAMPLE_COLUMNS + ("residual",), rows, args.format),
        export.write_table(out / "histogram", export.HISTOGRAM_COLUMNS, hist, args.format),
        export.write_json(
            out / "interfere_report.json",
            {"max_residual": max(resid), "confinement": report.to_dict(), "schmidt_weights": list(spec.weights)},
        ),
        plots.scatter_figure(out / "scatter.svg", np.array([s.O for s in readouts]), _reference_curve(config), title),
        plots.histogram_figure(out / "histogram.svg", hist, title, args.degrees),
    ]
    failures = []
    if max(resid) > 1e-12:
        failures.append({"check": "readout equals direct overlap", "max_residual": max(resid)})
    if not report.ok:
        failures.append({"check": "confinement", **report.to_dict()})
    return _finish(args, files, started, failures)


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    if manifest.get("tool") != TOOL:
        raise UsageError(f"{args.manifest} is not a {TOOL} manifest")
    params = dict(manifest["params"])
    ns = argparse.Namespace(**params)
    ns.command = manifest["subcommand"]
    ns.out = args.out
    ns.threads = args.threads
    return COMMANDS[ns.command](ns)


COMMANDS = {
    "boundary": cmd_boundary,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "interfere": cmd_interfere,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2, help="qudit dimension")
    common.add_argument("--seed", type=int, default=0, help=f"RNG seed; {SEED_ENV} overrides it")
    common.add_argument("--n", type=int, default=None, help="number of samples / curve points")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--tol", type=float, default=boundary.DEFAULT_TOL, help="membership tolerance")
    common.add_argument("--threads", type=int, default=1, help="worker thread cap")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="data file format")

    p = argparse.ArgumentParser(prog=TOOL, description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("boundary", parents=[common], help="analytic boundary curve")
    b.add_argument("--concurrence", type=float, default=None)

    for name, helptext in (("sweep", "Monte Carlo overlap sweep"), ("interfere", "interferometric readout")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument(
            "--strategy",
            choices=[x.value for x in Strategy],
            default=Strategy.HAAR_TWO_SIDED.value if name == "sweep" else None,
        )
        s.add_argument("--weights", default=None, help="comma-separated Schmidt weights (normalised for you)")
        s.add_argument("--concurrence", type=float, default=None, help="two-qubit concurrence")
        s.add_argument("--bins", type=int, default=36, help="phase histogram bins")
        s.add_argument("--degrees", action="store_true", help="label histogram angles in degrees")
        if name == "interfere":
            s.add_argument("--epsilon", type=float, default=1.0, help="pseudo-pure polarisation")
            s.add_argument("--gamma", type=float, default=0.0, help="ancilla dephasing")

    o = sub.add_parser("oracle", parents=[common], help="brute-force boundary check")
    o.add_argument("--steps", type=int, default=None, help="grid points per eigenphase axis")
    o.add_argument("--bins", type=int, default=360)
    o.add_argument("--random", type=int, default=None, help="extra random configurations")
    o.add_argument("--max-gap", type=float, default=3e-3, dest="max_gap")

    r = sub.add_parser("replay", help="rerun a manifest.json")
    r.add_argument("manifest")
    r.add_argument("--out", default="out")
    r.add_argument("--threads", type=int, default=1)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "replay" and os.environ.get(SEED_ENV):
        try:
            args.seed = int(os.environ[SEED_ENV])
        except ValueError:
            parser.error(f"{SEED_ENV} must be an integer")
    if getattr(args, "seed", 0) < 0:
        parser.error("--seed must be non-negative")
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    if getattr(args, "bins", 2) < 2:
        parser.error("--bins must be at least 2")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
