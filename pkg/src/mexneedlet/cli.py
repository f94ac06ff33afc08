"""Command-line interface.

Exit codes: 0 success, 1 a verification FAILED, 2 invalid configuration,
3 a resource cap was hit. Configuration and resource errors are reported as
one JSON line on stderr: ``{"error": "config", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import _accel, sphere, verify
from .errors import DomainError, PreconditionError, ResourceLimitError, VariantError
from .kernel import FilterParams, SeriesVariant, Summation, kappa_direct, kappa_psf, profile
from .special import WeightVariant

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def fmt(x) -> str:
    """Round-trip text for CSV cells: integers as-is, floats to 17 significant digits."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def int_list(text: str) -> list[int]:
    """``"2..6"`` (inclusive), ``"2,4,5"`` or ``"3"``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list or range: {text!r}") from None


def p_list(text: str) -> list[float]:
    out = []
    for v in text.split(","):
        v = v.strip().lower()
        try:
            p = math.inf if v in ("inf", "infinity") else float(v)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad exponent {v!r}") from None
        if not p >= 1.0:
            raise argparse.ArgumentTypeError(f"exponents must be >= 1, got {v!r}")
        out.append(p)
    return out


def _write_csv(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    out.write(buf.getvalue())


def _write_json(out, obj):
    out.write(json.dumps(obj, indent=2, allow_nan=False))
    out.write("\n")


def _params(args, j=None) -> FilterParams:
    return FilterParams(args.B, args.j if j is None else j, args.s, series_variant=args.variant, weight_variant=args.weight)


# -- subcommands --------------------------------------------------------------


def cmd_profile(args, out) -> int:
    if args.points < 2:
        raise ConfigError("--points must be >= 2")
    if not 0.0 <= args.theta_min < args.theta_max <= math.pi:
        raise ConfigError("need 0 <= --theta-min < --theta-max <= pi")
    prof = profile(_params(args), np.linspace(args.theta_min, args.theta_max, args.points),
                   summation=Summation(args.summation))
    _write_csv(out, ["theta", "psi", "envelope", "ratio"],
               zip(prof.thetas, prof.values, prof.envelope, prof.ratio))
    return EXIT_OK


def cmd_tail_check(args, out) -> int:
    reports = [
        verify.tail_bound_report(args.B, s, args.j, args.max_scaled_angle, n_points=args.points,
                                 series_variant=args.variant)
        for s in args.s
    ]
    _write_json(out, reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_frame_check(args, out) -> int:
    F = verify.default_test_function(tuple(args.degrees), seed=args.seed)
    base = FilterParams(args.B, 0, args.s, series_variant=SeriesVariant.INTEGER)
    j_range = (args.j[0], args.j[-1]) if args.j else verify.minimal_j_range(F, base)
    report = verify.frame_energy_report(F, base, j_range, refine=args.refine)
    _write_json(out, report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_lp_norms(args, out) -> int:
    report = verify.lp_scaling_report(_params(args, j=0), args.j, tuple(args.p))
    rows = [(m["j"], m["p"] if m["p"] == "inf" else m["p"], m["norm"], m["fitted_slope"]) for m in report.measurements]
    _write_csv(out, ["j", "p", "norm", "fitted_slope"], rows)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_psf_check(args, out) -> int:
    if args.points < 1:
        raise ConfigError("--points must be >= 1")
    phis = verify.psf_grid(args.points)
    direct, images, rel = verify.psf_rel_errors(args.eps, args.s, phis, args.nu_max)
    _write_csv(out, ["phi", "direct", "psf", "rel_err"], zip(phis, direct, images, rel))
    return EXIT_OK if float(rel.max()) <= verify.THRESHOLDS["psf_rel"] else EXIT_FAIL


def cmd_partition(args, out) -> int:
    pix = sphere.build_partition(args.B, args.j, refine=args.refine)
    c = pix.centers
    _write_csv(out, ["k", "cx", "cy", "cz", "area", "diam"],
               ((k, c[k, 0], c[k, 1], c[k, 2], pix.areas[k], pix.diameters[k]) for k in range(len(pix))))
    return EXIT_OK


def run_all(B: float, s_list, j_list, frame_B: float = 1.3, log=None) -> list[verify.Report]:
    """Every verification suite at the given scale, shapes and levels."""
    s_list = sorted(set(s_list))
    j_list = sorted(set(j_list))
    suites = [
        ("eta", lambda: [verify.eta_report(tuple(range(1, max(5, max(s_list)) + 1)))]),
        ("level_sum", lambda: [verify.level_sum_report(1.02, tuple(s_list))]),
        ("psf", lambda: [verify.psf_report(s_list=tuple(s_list))]),
        ("fourier", lambda: [verify.fourier_report(tuple(range(0, max(s_list) + 1)))]),
        ("tail", lambda: [verify.tail_bound_report(B, s, j_list) for s in s_list]),
        ("theta_zero", lambda: [verify.theta_zero_report(B, tuple(s_list), tuple(j_list))]),
        ("laplacian", lambda: [verify.laplacian_report(B, s_list=tuple(range(1, max(4, max(s_list)) + 1)))]),
        ("lp", lambda: [
            verify.lp_scaling_report(FilterParams(B, 0, s, series_variant=SeriesVariant.INTEGER), j_list)
            for s in s_list
        ]),
        ("frame", lambda: [
            verify.frame_energy_report(
                F := verify.default_test_function(),
                base := FilterParams(frame_B, 0, s, series_variant=SeriesVariant.INTEGER),
                verify.minimal_j_range(F, base),
            )
            for s in s_list
        ]),
        ("partition", lambda: [verify.partition_report(B, tuple(range(0, min(max(j_list), 5) + 1)))]),
    ]
    reports = []
    for name, fn in suites:
        got = fn()
        if log is not None:
            for r in got:
                log.write(f"{'PASS' if r.passed else 'FAIL'} {r.claim} {json.dumps(verify._jsonable(r.params), sort_keys=True)}\n")
        reports.extend(got)
    return reports


def cmd_verify_all(args, out) -> int:
    reports = run_all(args.B, args.s, args.j, frame_B=args.frame_B, log=sys.stderr if args.verbose else None)
    _write_json(out, {"schema": verify.SCHEMA_VERSION, "pass": all(r.passed for r in reports),
                      "reports": [r.to_dict() for r in reports]})
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# -- parser -------------------------------------------------------------------


def _add_filter_args(p, *, multi_s=False, j_kind="int", j_default=None):
    p.add_argument("--B", type=float, default=2.0, help="scale factor, > 1")
    if multi_s:
        p.add_argument("--s", type=int_list, default=[1], help="shape parameters, e.g. 1,2,3")
    else:
        p.add_argument("--s", type=int, default=1, help="shape parameter")
    if j_kind == "int":
        p.add_argument("--j", type=int, default=j_default, required=j_default is None, help="resolution level")
    elif j_kind == "list":
        p.add_argument("--j", type=int_list, default=j_default, help="levels, e.g. 2..6 or 2,3,4")
    p.add_argument("--variant", choices=[v.value for v in SeriesVariant], default=SeriesVariant.HALF_INTEGER.value,
                   help="series normalisation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mexneedlet", description="Mexican needlets on the sphere: profiles and numerical checks.")
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("profile", help="sample the needlet profile (CSV theta,psi,envelope,ratio)")
    _add_filter_args(p)
    p.add_argument("--weight", choices=[v.value for v in WeightVariant], default=WeightVariant.SQUARED_ARGUMENT.value)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=math.pi)
    p.add_argument("--summation", choices=[v.value for v in Summation], default=Summation.COMPENSATED.value)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("tail-check", help="Gaussian-Hermite tail envelope across levels (JSON)")
    _add_filter_args(p, multi_s=True, j_kind="list", j_default=[2, 3, 4, 5, 6])
    p.add_argument("--max-scaled-angle", type=float, default=verify.THRESHOLDS["tail_default_scaled_angle"])
    p.add_argument("--points", type=int, default=verify.THRESHOLDS["tail_grid_points"])
    p.set_defaults(func=cmd_tail_check)

    p = sub.add_parser("frame-check", help="frame energy against the level-sum bracket (JSON)")
    p.add_argument("--B", type=float, default=1.3)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--degrees", type=int_list, default=[4, 9], help="degrees of the zonal test function")
    p.add_argument("--seed", type=int, default=7, help="seed for the test function's centres and coefficients")
    p.add_argument("--j", type=int_list, default=None, help="level range; default: smallest range with negligible leakage")
    p.add_argument("--refine", type=float, default=1.0, help="partition refinement factor (>= 1)")
    p.set_defaults(func=cmd_frame_check)

    p = sub.add_parser("lp-norms", help="L^p norms of one needlet per level (CSV j,p,norm,fitted_slope)")
    _add_filter_args(p, j_kind="list", j_default=[2, 3, 4, 5])
    p.set_defaults(variant=SeriesVariant.INTEGER.value, weight=WeightVariant.SQUARED_ARGUMENT.value)
    p.add_argument("--p", type=p_list, default=[1.0, 2.0, 4.0, math.inf], help="exponents, e.g. 1,2,4,inf")
    p.set_defaults(func=cmd_lp_norms)

    p = sub.add_parser("psf-check", help="direct vs Poisson-summation kernel (CSV phi,direct,psf,rel_err)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--nu-max", type=int, default=6)
    p.set_defaults(func=cmd_psf_check)

    p = sub.add_parser("partition", help="cells of the level-j partition (CSV k,cx,cy,cz,area,diam)")
    p.add_argument("--B", type=float, default=2.0)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--refine", type=float, default=1.0)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify-all", help="run every verification suite (JSON); exit 0 iff all pass")
    p.add_argument("--B", type=float, default=2.0)
    p.add_argument("--s", type=int_list, default=[1, 2, 3])
    p.add_argument("--j", type=int_list, default=[2, 3, 4, 5, 6])
    p.add_argument("--frame-B", type=float, default=1.3, help="scale factor for the frame-energy suite")
    p.add_argument("-v", "--verbose", action="store_true", help="one PASS/FAIL line per report on stderr")
    p.set_defaults(func=cmd_verify_all)
    return parser


def _fail(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": " ".join(str(message).split())}) + "\n")


def run(argv=None) -> int:
    """Parse ``argv``, dispatch, and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _accel.thread_cap()
    except ConfigError as exc:
        _fail("config", exc)
        return EXIT_CONFIG
    except ValueError as exc:
        _fail("config", exc)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    _accel.apply_thread_cap()
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (ConfigError, DomainError, PreconditionError, VariantError) as exc:
        _fail("config", exc)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        _fail("resource", exc)
        return EXIT_RESOURCE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())
