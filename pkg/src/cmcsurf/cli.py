"""Command-line front end.

Subcommands:

* ``cmc curve``    generate a CMC generating curve, write it as CSV;
* ``cmc surface``  generate, rotate, and sample the surface (CSV/OBJ);
* ``cmc validate`` generate and run the full validation battery (JSON);
* ``cmc special``  audit a closed-form special-case phi;
* ``cmc oracle``   compare closed-form curvature against the kernel and
                   finite-difference pipelines for a curve (CSV or generated).

Exit codes: 0 success (validations passing), 1 validation failure,
2 usage or domain errors.  Errors print as ``ERROR[<code>] message`` on
stderr.  ``CMC_THREADS`` caps grid-evaluation parallelism.
"""

from __future__ import annotations

import argparse
import sys

from . import io as cio
from .builders import GeneratingCurve, RotationType, build_surface
from .errors import (
    CmcError,
    EvalDomainError,
    InvariantViolationError,
    NegativeRadicandError,
    NonpositiveProfileError,
    ZeroDerivativeProfileError,
)
from .generator import CmcParams, domain_validity, generate
from .profiles import ProfileFunction
from .quadrature import QuadratureConfig
from .validation import (
    Tolerances,
    compare_special_case,
    generate_and_validate,
    shrunk_grid,
    validate_surface,
)

_TYPES = {
    "elliptic": RotationType.ELLIPTIC,
    "hyperbolicA": RotationType.HYPERBOLIC_A,
    "hyperbolicB": RotationType.HYPERBOLIC_B,
    "parabolic": RotationType.PARABOLIC,
}


class _CliError(CmcError):
    code = "usage"


class _EmptyValidityError(CmcError):
    code = "empty-validity"


def _interval(text: str) -> tuple[float, float]:
    try:
        lo_s, hi_s = text.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"bad interval {text!r}, expected a:b") from exc
    if not hi > lo:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return lo, hi


def _grid(text: str) -> tuple[int, int]:
    try:
        nu_s, nv_s = text.lower().split("x")
        nu, nv = int(nu_s), int(nv_s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"bad grid {text!r}, expected NUxNV") from exc
    if nu < 2 or nv < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2x2")
    return nu, nv


def _sign(text: str) -> int:
    if text in ("+1", "1", "+"):
        return 1
    if text in ("-1", "-"):
        return -1
    raise argparse.ArgumentTypeError(f"expected +1 or -1, got {text!r}")


def _consts(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        name, _, value = pair.partition("=")
        if not name or not value:
            raise _CliError(f"bad --const {pair!r}, expected name=value")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise _CliError(f"bad --const value in {pair!r}") from exc
    return out


def _add_common(sub: argparse.ArgumentParser, *, profile_required: bool = True):
    sub.add_argument("--type", required=True, choices=sorted(_TYPES),
                     help="rotation type")
    sub.add_argument("--profile", required=profile_required,
                     help="profile expression r(u) or f(u)")
    sub.add_argument("--const", action="append", default=[],
                     metavar="NAME=VALUE", help="bind a named constant (repeatable)")
    sub.add_argument("--C", type=float, default=0.5, help="curvature constant C != 0")
    sub.add_argument("--hsign", type=_sign, default=1,
                     help="sign of <H,H> (+1 or -1)")
    sub.add_argument("--eta", type=_sign, default=1, help="orientation of phi")
    sub.add_argument("--interval", type=_interval, required=profile_required,
                     metavar="A:B")
    sub.add_argument("--u0", type=float, default=None,
                     help="quadrature base point (default: interval start)")
    sub.add_argument("--phi0", type=float, default=None,
                     help="phi integration constant")
    sub.add_argument("--A", type=float, default=None,
                     help="parabolic constant A (alias of --phi0)")
    sub.add_argument("--c1", type=float, default=0.0)
    sub.add_argument("--c2", type=float, default=0.0)
    sub.add_argument("--rel-tol", type=float, default=1e-10,
                     help="quadrature relative tolerance")


def _params(args) -> CmcParams:
    phi0 = args.phi0
    if args.A is not None:
        if phi0 is not None and phi0 != args.A:
            raise _CliError("--A and --phi0 are aliases; give one")
        phi0 = args.A
    try:
        return CmcParams(C=args.C, h_sign=args.hsign, eta=args.eta,
                         u0=args.u0, phi0=phi0 or 0.0, c1=args.c1, c2=args.c2)
    except ValueError as exc:
        raise _CliError(str(exc)) from exc


def _profile(args) -> ProfileFunction:
    if args.interval is None:
        raise _CliError("need --interval when generating from --profile")
    return ProfileFunction.from_text(args.profile, args.interval, _consts(args.const))


def _config(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol)


def _diagnose_empty_validity(rotation, profile, params, config, interval):
    """Distinguish structural errors (wrong case, null slope) from a
    genuinely infeasible parameter choice: the former keep their own
    error codes, the latter reports as empty validity."""
    try:
        generate(rotation, profile, params, config, interval)
    except (NegativeRadicandError, NonpositiveProfileError,
            ZeroDerivativeProfileError, InvariantViolationError,
            EvalDomainError) as exc:
        raise _EmptyValidityError(
            f"the (h_sign, C) choice is infeasible on the interval ({exc})"
        ) from exc
    raise _EmptyValidityError(
        "no usable subinterval inside the requested interval")


def _generate_curve(args) -> GeneratingCurve:
    if args.interval is None:
        raise _CliError("need --interval when generating from --profile")
    rotation = _TYPES[args.type]
    profile = _profile(args)
    params = _params(args)
    config = _config(args)
    validity = domain_validity(profile, params, args.interval, rotation)
    if not validity:
        _diagnose_empty_validity(rotation, profile, params, config, args.interval)
    lo, hi = max(validity, key=lambda ab: ab[1] - ab[0])
    span = hi - lo
    pad = min(1e-7 * span, 1e-6)
    return generate(rotation, profile, params, config, (lo + pad, hi - pad))


def _cmd_curve(args) -> int:
    curve = _generate_curve(args)
    cio.write_curve_csv(args.out, curve, samples=args.samples)
    print(f"wrote {args.out}")
    return 0


def _load_or_generate(args) -> GeneratingCurve:
    if getattr(args, "csv", None):
        return cio.load_curve(args.csv)
    if not args.profile:
        raise _CliError("need --profile or --csv")
    return _generate_curve(args)


def _cmd_surface(args) -> int:
    curve = _load_or_generate(args)
    patch = build_surface(curve, args.v_window)
    nu, nv = args.grid
    lo, hi = curve.domain
    us = [lo + (hi - lo) * k / (nu - 1) for k in range(nu)]
    vs = [args.v_window[0] + (args.v_window[1] - args.v_window[0]) * k / (nv - 1)
          for k in range(nv)]
    if args.out:
        cio.write_surface_csv(args.out, patch, us, vs)
        print(f"wrote {args.out}")
    if args.obj:
        cio.write_surface_obj(args.obj, patch, us, vs, tuple(args.project.split(",")))
        print(f"wrote {args.obj}")
    if not args.out and not args.obj:
        raise _CliError("give --out and/or --obj")
    return 0


def _cmd_validate(args) -> int:
    rotation = _TYPES[args.type]
    params = _params(args)
    tols = Tolerances(cmc_analytic=args.cmc_tol, cmc_fd=args.cmc_fd_tol)
    nu, nv = args.grid
    if getattr(args, "csv", None):
        curve = cio.load_curve(args.csv)
        report = validate_surface(curve, params.target_h2, args.csv,
                                  nu, nv, args.v_window, tols=tols)
    else:
        profile = _profile(args)
        curve, report, validity = generate_and_validate(
            rotation, profile, params, args.interval, _config(args),
            nu, nv, args.v_window, tols=tols,
            phi_scale=args.perturb_phi,
            surface_id=f"{args.type}:{args.profile}")
        if report is None:
            _diagnose_empty_validity(rotation, profile, params,
                                     _config(args), args.interval)
    text = report.to_json()
    if args.report:
        cio._atomic_write(args.report, text + "\n")
        print(f"wrote {args.report}")
    else:
        print(text)
    return 0 if report.passed(tols) else 1


def _cmd_special(args) -> int:
    rotation = _TYPES[args.type]
    if rotation is RotationType.ELLIPTIC and args.hsign == -1:
        raise _CliError("the elliptic special profile forces h_sign=+1")
    params = _params(args)
    big_a = args.A if args.A is not None else (args.phi0 or 0.0)
    consts = {"a": args.a, "b": args.b, "d": args.d, "A": big_a, "B": args.B}
    report = compare_special_case(rotation, consts, params, args.interval)
    text = report.to_json()
    if args.report:
        cio._atomic_write(args.report, text + "\n")
        print(f"wrote {args.report}")
    else:
        print(text)
    return 0


def _cmd_oracle(args) -> int:
    from .validation import closed_vs_oracle  # local import keeps startup light

    curve = _load_or_generate(args)
    patch = build_surface(curve, args.v_window)
    nu, nv = args.grid
    grid = shrunk_grid(curve, nu, nv, patch.v_domain)
    worst = closed_vs_oracle(curve, patch, grid)
    print(f"max closed-form vs kernel h2 discrepancy: {worst:.3e}")
    return 0 if worst <= args.tol else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmc",
        description="Constant-mean-curvature rotational surfaces in the "
                    "neutral pseudo-Euclidean 4-space.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_curve = subs.add_parser("curve", help="generate a generating curve (CSV)")
    _add_common(p_curve)
    p_curve.add_argument("--samples", type=int, default=401)
    p_curve.add_argument("--out", required=True)
    p_curve.set_defaults(func=_cmd_curve)

    p_surface = subs.add_parser("surface", help="sample the rotated surface")
    _add_common(p_surface, profile_required=False)
    p_surface.add_argument("--csv", help="rebuild the curve from a curve CSV")
    p_surface.add_argument("--grid", type=_grid, default=(41, 41), metavar="NUxNV")
    p_surface.add_argument("--v-window", type=_interval, default=(-2.0, 2.0))
    p_surface.add_argument("--project", default="x1,x3,x4")
    p_surface.add_argument("--out")
    p_surface.add_argument("--obj")
    p_surface.set_defaults(func=_cmd_surface)

    p_val = subs.add_parser("validate", help="generate and validate (JSON report)")
    _add_common(p_val, profile_required=False)
    p_val.add_argument("--csv", help="validate a curve re-read from CSV")
    p_val.add_argument("--grid", type=_grid, default=(41, 41), metavar="NUxNV")
    p_val.add_argument("--v-window", type=_interval, default=None)
    p_val.add_argument("--report", help="report path (default: stdout)")
    p_val.add_argument("--perturb-phi", type=float, default=1.0,
                       help="scale phi by this factor (negative control)")
    p_val.add_argument("--cmc-tol", type=float, default=1e-6)
    p_val.add_argument("--cmc-fd-tol", type=float, default=1e-4)
    p_val.set_defaults(func=_cmd_validate)

    p_special = subs.add_parser("special", help="audit a special-case closed form")
    p_special.add_argument("--type", required=True, choices=sorted(_TYPES))
    p_special.add_argument("--a", type=float, required=True)
    p_special.add_argument("--b", type=float, required=True)
    p_special.add_argument("--d", type=float, default=0.0)
    p_special.add_argument("--B", type=float, default=1.0)
    p_special.add_argument("--C", type=float, default=0.5)
    p_special.add_argument("--hsign", type=_sign, default=1)
    p_special.add_argument("--eta", type=_sign, default=1)
    p_special.add_argument("--u0", type=float, default=None)
    p_special.add_argument("--phi0", type=float, default=None)
    p_special.add_argument("--A", type=float, default=None)
    p_special.add_argument("--c1", type=float, default=0.0)
    p_special.add_argument("--c2", type=float, default=0.0)
    p_special.add_argument("--interval", type=_interval, required=True)
    p_special.add_argument("--report")
    p_special.set_defaults(func=_cmd_special)

    p_oracle = subs.add_parser("oracle",
                               help="closed form vs kernel curvature comparison")
    _add_common(p_oracle, profile_required=False)
    p_oracle.add_argument("--csv")
    p_oracle.add_argument("--grid", type=_grid, default=(21, 21), metavar="NUxNV")
    p_oracle.add_argument("--v-window", type=_interval, default=(-2.0, 2.0))
    p_oracle.add_argument("--tol", type=float, default=1e-6)
    p_oracle.set_defaults(func=_cmd_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CmcError as exc:
        print(f"ERROR[{exc.code}] {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
