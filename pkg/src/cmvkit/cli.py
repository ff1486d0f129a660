"""Command-line interface.

Subcommands: sample (ensemble eigenvalue draws), flow (coefficient
propagation), spectral (coefficients <-> measure), verify (identity
suites), histogram (bin a sample CSV).  Every command is deterministic
given its flags and seed.

Exit codes: 2 for usage/parameter errors, 3 for mathematical domain
failures, 4 for a failed verification suite.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import serialize
from .alflows import FlowHamiltonian, Trajectory, flow_via_spectral, integrate_flow
from .core import build_cmv
from .ensembles import (
    EnsembleSpec,
    RngStream,
    eigenvalue_samples,
    random_verblunsky,
    sample_circular_beta,
    sample_hermite_beta,
    sample_jacobi_beta,
)
from .errors import CmvError, InvalidParams
from .opuc import unitary_eigensystem, verblunsky_from_measure
from .verify import SUITES, run_suite

USAGE_EXIT = 2
DOMAIN_EXIT = 3
VERIFY_EXIT = 4

SAMPLE_CHUNK = 8192  # draws per stream id; fixed so output never depends on thread count


def _progress(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg, file=sys.stderr)


def _thread_count() -> int:
    raw = os.environ.get("CMV_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def cmd_sample(args) -> int:
    spec = EnsembleSpec(args.family, args.n, args.beta, args.a, args.b)
    chunks = [
        (i, min(SAMPLE_CHUNK, args.count - i * SAMPLE_CHUNK))
        for i in range((args.count + SAMPLE_CHUNK - 1) // SAMPLE_CHUNK)
    ]

    def draw(chunk):
        idx, size = chunk
        return eigenvalue_samples(spec, size, RngStream(args.seed, idx))

    workers = _thread_count()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(draw, chunks))
    else:
        pieces = []
        for chunk in chunks:
            pieces.append(draw(chunk))
            _progress(args.quiet, f"sampled {sum(len(p) for p in pieces)}/{args.count}")
    rows = np.vstack(pieces)
    serialize.write_samples_csv(args.out, rows)
    _progress(args.quiet, f"wrote {rows.shape[0]} rows to {args.out}")
    if args.coeffs_out:
        objs = []
        for idx, size in chunks:
            gen = RngStream(args.seed, idx).generator()
            for _ in range(size):
                if spec.family == "circular":
                    objs.append(serialize.verblunsky_to_obj(sample_circular_beta(spec.n, spec.beta, gen)))
                elif spec.family == "jacobi":
                    j = sample_jacobi_beta(spec.n, spec.beta, spec.a, spec.b, gen)
                    objs.append({"b": list(map(float, j.b)), "a": list(map(float, j.a))})
                else:
                    j = sample_hermite_beta(spec.n, spec.beta, gen)
                    objs.append({"b": list(map(float, j.b)), "a": list(map(float, j.a))})
        serialize.dump_json(objs, args.coeffs_out)
    return 0


def cmd_flow(args) -> int:
    if args.init:
        v0 = serialize.verblunsky_from_obj(serialize.load_json(args.init))
    else:
        if args.seed is None:
            raise InvalidParams("--random requires --seed")
        v0 = random_verblunsky(args.n, RngStream(args.seed), radius=args.radius)
    if args.method == "rk4":
        traj = integrate_flow(v0, args.m, args.part, args.t, args.dt)
    else:
        ham = FlowHamiltonian.matching_lax_flow(args.m, args.part)
        steps = max(int(round(args.t / args.dt)), 0) if args.t > 0 else 0
        times = np.linspace(0.0, args.t, steps + 1)
        states = []
        drift = []
        unit = []
        base_angles = None
        for t in times:
            state = flow_via_spectral(v0, ham, float(t)) if t > 0 else v0
            states.append(state)
            c = build_cmv(state).entries
            angles = np.sort(np.angle(np.linalg.eigvals(c)))
            if base_angles is None:
                base_angles = angles
            d = np.abs(angles - base_angles)
            drift.append(float(np.minimum(d, 2 * np.pi - d).max()))
            unit.append(float(np.abs(c.conj().T @ c - np.eye(state.n)).max()))
        traj = Trajectory(times, tuple(states), np.asarray(drift), np.asarray(unit))
    serialize.dump_json(serialize.trajectory_to_obj(traj), args.out)
    _progress(
        args.quiet,
        f"flow m={args.m} part={args.part} t={args.t}: "
        f"max eigenvalue drift {traj.eig_drift.max():.3e}, wrote {args.out}",
    )
    return 0


def cmd_spectral(args) -> int:
    obj = serialize.load_json(args.input)
    if args.to == "measure":
        v = serialize.verblunsky_from_obj(obj)
        mu = unitary_eigensystem(build_cmv(v))
        serialize.dump_json(serialize.circle_measure_to_obj(mu), args.out)
    else:
        mu = serialize.circle_measure_from_obj(obj)
        v = verblunsky_from_measure(mu)
        serialize.dump_json(serialize.verblunsky_to_obj(v), args.out)
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.n, args.trials, args.seed)
    if args.report:
        serialize.dump_json(report, args.report)
    for item in report["identities"]:
        status = "pass" if item["pass"] else "FAIL"
        print(
            f"[{status}] {item['name']}: max residual {item['max_residual']:.3e}"
            f" (tolerance {item['tolerance']:g})"
        )
    return 0 if report["pass"] else VERIFY_EXIT


def cmd_histogram(args) -> int:
    data = serialize.read_samples_csv(args.input)
    if data.size == 0:
        raise InvalidParams(f"no samples in {args.input}")
    lo, hi = args.range
    if not lo < hi:
        raise InvalidParams("range must satisfy lo < hi")
    counts, edges = np.histogram(data.reshape(-1), bins=args.bins, range=(lo, hi))
    serialize.write_histogram_csv(args.out, edges, counts)
    _progress(args.quiet, f"binned {int(counts.sum())} values into {args.bins} bins")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw ensemble eigenvalue samples to CSV")
    p.add_argument("--family", required=True, choices=("circular", "jacobi", "hermite"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--coeffs-out", default=None, help="optional coefficient JSON")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("flow", help="integrate a hierarchy flow")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--init", help="coefficient JSON file")
    src.add_argument("--random", action="store_true")
    p.add_argument("--n", type=int, default=6, help="size for --random")
    p.add_argument("--radius", type=float, default=0.6, help="interior radius for --random")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--part", choices=("re", "im"), default="re")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--method", choices=("rk4", "spectral"), default="rk4")
    p.add_argument("--out", required=True)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_flow)

    p = sub.add_parser("spectral", help="coefficients <-> spectral measure")
    p.add_argument("--input", required=True)
    p.add_argument("--to", choices=("measure", "coeffs"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_spectral)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("histogram", help="bin sample CSV values")
    p.add_argument("--input", required=True)
    p.add_argument("--bins", type=int, required=True)
    p.add_argument("--range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--out", required=True)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_histogram)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bins", 1) < 1:
        parser.error("--bins must be at least 1")
    try:
        return args.fn(args)
    except InvalidParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except CmvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_EXIT


if __name__ == "__main__":
    sys.exit(main())
