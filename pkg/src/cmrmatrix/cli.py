"""Command-line front end: ``verify``, ``simulate`` and ``show``.

Exit codes: 0 when every check passes, 1 on a failed check or runtime abort,
2 on a usage error.  ``CMRMATRIX_SEED`` sets the default seed; ``--seed``
overrides it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .potentials import KINDS, PotentialKind, SingularityError

SEED_ENV = "CMRMATRIX_SEED"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(v.strip()) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _write_json(obj, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True, ensure_ascii=False)
            fh.write("\n")


def _add_potential(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", choices=KINDS, default="rational")
    p.add_argument("--a", type=float, default=1.0, help="coupling for hyperbolic/trigonometric")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmrmatrix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the residual suite at seeded random phase points")
    v.add_argument("--n", type=int, required=True)
    _add_potential(v)
    v.add_argument("--case", choices=("I", "II", "general"), default="I")
    v.add_argument("--omega", type=float, default=0.0)
    v.add_argument("--q-mode", choices=("zero", "sln"), default="zero")
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--tol-analytic", type=float, default=None)
    v.add_argument("--tol-fd", type=float, default=None)
    v.add_argument("--exact", action="store_true", help="rational arithmetic for the rational-case gauge checks")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out", help="write the structured report here")

    s = sub.add_parser("simulate", help="integrate the flow and report conserved-quantity drifts")
    s.add_argument("--n", type=int, default=None)
    _add_potential(s)
    s.add_argument("--q", type=_float_list)
    s.add_argument("--p", type=_float_list)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--steps", type=int, default=10000)
    s.add_argument("--max-energy-drift", type=float, default=None)
    s.add_argument("--max-momentum-drift", type=float, default=None)
    s.add_argument("--max-spectral-drift", type=float, default=None)
    s.add_argument("--out")

    sh = sub.add_parser("show", help="print R', phi(q) or the Frobenius data")
    sh.add_argument("object", choices=("constR", "phi", "frobenius"))
    sh.add_argument("--n", type=int, required=True)
    sh.add_argument("--q", type=_fraction_list)
    sh.add_argument("--exact", action="store_true", help="accepted for symmetry; show is always exact")
    return parser


def cmd_verify(args, parser) -> int:
    from .suite import TOL_ANALYTIC, TOL_FD, run_verification

    if not 2 <= args.n <= 10:
        parser.error(f"--n must be in 2..10, got {args.n}")
    if args.samples < 1:
        parser.error("--samples must be at least 1")
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    kind = _kind(args, parser)
    seed = _default_seed() if args.seed is None else args.seed
    try:
        report = run_verification(
            args.n,
            kind,
            case=args.case,
            omega=args.omega,
            q_mode=args.q_mode,
            samples=args.samples,
            seed=seed,
            tol_analytic=TOL_ANALYTIC if args.tol_analytic is None else args.tol_analytic,
            tol_fd=TOL_FD if args.tol_fd is None else args.tol_fd,
            exact=args.exact,
            jobs=args.jobs,
        )
    except SingularityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in report.lines():
        print(line)
    _write_json(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_simulate(args, parser) -> int:
    from .lax import PhasePoint, random_phase_point
    from .suite import MAX_ENERGY_DRIFT, MAX_MOMENTUM_DRIFT, MAX_SPECTRAL_DRIFT, run_simulation

    kind = _kind(args, parser)
    if args.dt <= 0 or args.steps < 1:
        parser.error("--dt must be positive and --steps at least 1")
    if args.q is not None or args.p is not None:
        if args.q is None or args.p is None or len(args.q) != len(args.p):
            parser.error("--q and --p must both be given with equal lengths")
        if args.n is not None and args.n != len(args.q):
            parser.error(f"--n {args.n} does not match {len(args.q)} coordinates")
        x0 = PhasePoint(args.q, args.p)
    else:
        if args.n is None or args.n < 1:
            parser.error("give --n (>= 1) or explicit --q/--p")
        seed = _default_seed() if args.seed is None else args.seed
        x0 = random_phase_point(args.n, kind, np.random.default_rng(seed))
    try:
        result = run_simulation(
            x0,
            kind,
            args.dt,
            args.steps,
            MAX_ENERGY_DRIFT if args.max_energy_drift is None else args.max_energy_drift,
            MAX_MOMENTUM_DRIFT if args.max_momentum_drift is None else args.max_momentum_drift,
            MAX_SPECTRAL_DRIFT if args.max_spectral_drift is None else args.max_spectral_drift,
        )
    except SingularityError as exc:
        print(f"abort: {exc}", file=sys.stderr)
        _write_json({"abort": {"step": exc.step, "pair": exc.pair, "message": str(exc)}, "pass": False}, args.out)
        return 1
    for key, value in result["drifts"].items():
        limit = result["thresholds"].get(key)
        suffix = f" (limit {limit:.0e})" if limit is not None else ""
        print(f"{key} drift: {value:.3e}{suffix}")
    print("OVERALL " + ("PASS" if result["pass"] else "FAIL"))
    _write_json(result, args.out)
    return 0 if result["pass"] else 1


def cmd_show(args, parser) -> int:
    if args.n < 1:
        parser.error("--n must be positive")
    if args.object == "constR":
        from .rmatrix import constant_R_index_set

        S = constant_R_index_set(args.n)
        print(f"S has {len(S)} element(s) for n = {args.n}")
        for a, b, c, d in S:
            print(f"  ({a},{b},{c},{d}):  e_{a}{b} (x) e_{c}{d} - e_{c}{d} (x) e_{a}{b}")
        return 0
    if args.object == "phi":
        from ._exact import det as exact_det
        from .rmatrix import build_phi, vandermonde_product

        if args.q is None or len(args.q) != args.n:
            parser.error(f"phi needs --q with {args.n} values")
        try:
            phi = build_phi(args.q)
        except SingularityError as exc:
            parser.error(str(exc))
        for row in phi:
            print("  [" + ", ".join(str(v) for v in row) + "]")
        print(f"det phi = {exact_det(phi.tolist())}")
        print(f"product formula = {vandermonde_product(args.q)}")
        return 0
    from .frobenius import frobenius_inverse_check

    if args.n < 2:
        parser.error("frobenius needs --n >= 2")
    fc = frobenius_inverse_check(args.n)
    print(f"dim F_{args.n} = {len(fc.G)}")
    print("M =")
    for row in fc.M:
        print("  [" + ", ".join(f"{str(v):>5}" for v in row) + "]")
    print("G = Lambda([T_a, T_b]) =")
    for row in fc.G:
        print("  [" + ", ".join(f"{int(v):>3}" for v in row) + "]")
    print(f"M invertible: {fc.invertible}")
    print(f"kappa = {fc.kappa}")
    print(f"residual = {fc.residual}")
    return 0 if fc.invertible and fc.residual == 0 else 1


def _kind(args, parser) -> PotentialKind:
    try:
        return PotentialKind(args.potential, args.a)
    except ValueError as exc:
        parser.error(str(exc))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "simulate": cmd_simulate, "show": cmd_show}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
