"""Command-line front end: every capability as a scriptable subcommand.

All output goes to stdout (or --out PATH) as JSON with a schema marker,
or CSV for the tabular commands.  Identical flags produce byte-identical
output.  Exit codes: 0 success, 2 parameter error, 3 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from .betamedian import median
from .coefficients import F_km_cartan, Weight, f_km, lift_F
from .metgroup import (CartanCoords, HalfInt, IwasawaCoords, from_cartan,
                       from_iwasawa, to_cartan)
from .nonvanishing import (certify, r_window, threshold_N, threshold_bounds,
                           threshold_close, verify_grid)
from .poincare import (FULL_PREIMAGE, THETA_SECTION, CongruenceSpec,
                       partial_sum, partial_sum_trace, trace_csv)
from .quadrature import (BetaParams, ConvergenceError, beta_complete,
                         haar_L1)

SCHEMA = 1


def _parse_half(text: str) -> HalfInt:
    try:
        frac = 2 * Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"cannot parse {text!r} as a number")
    if frac.denominator != 1:
        raise ValueError(f"{text!r} is not a half-integer")
    return HalfInt(int(frac))


def _weight_from_args(args) -> Weight:
    if getattr(args, "two_m", None) is not None:
        m = HalfInt(args.two_m)
    else:
        m = _parse_half(args.m)
    return Weight(m, args.k)


def _m_from_args(args) -> HalfInt:
    if getattr(args, "two_m", None) is not None:
        return HalfInt(args.two_m)
    return _parse_half(args.m)


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict) -> None:
    payload = {"schema": SCHEMA, **payload}
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _parse_triple(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, "
                         f"got {text!r}")
    return tuple(float(p) for p in parts)


def _cmd_median(args) -> int:
    res = median(BetaParams(args.a, args.b))
    _emit_json(args, {"a": args.a, "b": args.b, "median": res.value,
                      "residual": res.residual,
                      "iterations": res.iterations})
    return 0


def _cmd_threshold(args) -> int:
    m = _m_from_args(args)
    k = args.k
    n = threshold_N(k, m)
    payload = {
        "k": k, "m": float(m), "two_m": m.twice,
        "threshold": n,
        "floor_plus_1": math.floor(n) + 1,
        "upper_bound": threshold_bounds(k, m),
        "closed_form": None,
        "n_close": None,
    }
    mf = float(m)
    if k == 0:
        payload["closed_form"] = {
            "case": "k=0",
            "value": 4.0 * 2.0 ** (1.0 / (mf - 2.0))
            * math.sqrt(4.0 ** (1.0 / (mf - 2.0)) - 1.0)}
    elif mf == 4.0:
        payload["closed_form"] = {
            "case": "m=4",
            "value": 4.0 / (2.0 ** (1.0 / (k + 2.0))
                            - 2.0 ** (-1.0 / (k + 2.0)))}
    elif mf == k + 4.0:
        payload["closed_form"] = {"case": "m=k+4",
                                  "value": 4.0 * math.sqrt(2.0)}
    if mf >= 4.5:
        payload["n_close"] = threshold_close(k, m)
    _emit_json(args, payload)
    return 0


def _cmd_certify(args) -> int:
    cert = certify(args.N, args.k, _m_from_args(args),
                   gamma_meets_K=args.gamma_meets_k)
    _emit_json(args, cert.to_dict())
    return 0


def _cmd_window(args) -> int:
    m = _m_from_args(args)
    window = r_window(args.N, args.k, m)
    _emit_json(args, {
        "N": args.N, "k": args.k, "m": float(m),
        "nonempty": window is not None,
        "r_lo": None if window is None else window[0],
        "r_hi": None if window is None else window[1],
    })
    return 0


def _cmd_coeff(args) -> int:
    w = _weight_from_args(args)
    if (args.cartan is None) == (args.iwasawa is None):
        raise ValueError("give exactly one of --cartan or --iwasawa")
    if args.cartan is not None:
        t1, t, t2 = _parse_triple(args.cartan)
        element = from_cartan(CartanCoords(t1, t, t2))
        coords = {"cartan": [t1, t, t2]}
    else:
        x, y, t = _parse_triple(args.iwasawa)
        element = from_iwasawa(IwasawaCoords(x, y, t))
        coords = {"iwasawa": [x, y, t]}
    via_cartan = F_km_cartan(w, to_cartan(element))
    via_lift = lift_F(lambda z: f_km(w, z), w, element)
    _emit_json(args, {
        **coords, "k": w.k, "m": w.m_float,
        "cartan_path": {"re": via_cartan.real, "im": via_cartan.imag},
        "lift_path": {"re": via_lift.real, "im": via_lift.imag},
        "path_difference": abs(via_cartan - via_lift),
    })
    return 0


def _cmd_l1norm(args) -> int:
    w = _weight_from_args(args)
    res = haar_L1(w)
    closed = 4.0 * math.pi * beta_complete(
        BetaParams.from_weight(w.k, w.m_float))
    _emit_json(args, {
        "k": w.k, "m": w.m_float,
        "quadrature": res.value,
        "closed_form": closed,
        "tail_bound": res.tail_bound,
    })
    return 0


def _radii_for(radius: float):
    radii = [math.sqrt(2.0)]
    radii += [float(r) for r in range(2, int(math.floor(radius)) + 1)]
    if radius > radii[-1]:
        radii.append(radius)
    return radii


def _cmd_poincare(args) -> int:
    w = _weight_from_args(args)
    variant = FULL_PREIMAGE if args.variant == "preimage" else THETA_SECTION
    spec = CongruenceSpec(args.N, variant)
    x, y, t = _parse_triple(args.at)
    base = from_iwasawa(IwasawaCoords(x, y, t))
    trace = partial_sum_trace(spec, w, base, _radii_for(args.radius))
    _emit(args, trace_csv(trace))
    return 0


def _cmd_verify_grid(args) -> int:
    if args.full:
        k_max, m_max = 1000, HalfInt(33939)
    else:
        k_max, m_max = args.kmax, _parse_half(args.mmax)
    report = verify_grid(k_max, m_max)
    _emit(args, report.to_csv())
    return 0


def _cmd_cancel_test(args) -> int:
    w = _weight_from_args(args)
    spec = CongruenceSpec(args.N, FULL_PREIMAGE)
    rng = random.Random(2024)
    worst = 0.0
    points = []
    for _ in range(args.points):
        coords = IwasawaCoords(rng.uniform(-2.0, 2.0),
                               math.exp(rng.uniform(-1.0, 1.0)),
                               rng.uniform(0.0, 4.0 * math.pi))
        ps = partial_sum(spec, w, from_iwasawa(coords), args.radius)
        worst = max(worst, abs(ps.value))
        points.append({"x": coords.x, "y": coords.y, "t": coords.t,
                       "abs_sum": abs(ps.value)})
    _emit_json(args, {
        "N": args.N, "k": w.k, "m": w.m_float, "radius": args.radius,
        "max_abs_sum": worst, "points": points,
    })
    return 0


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--m", type=str,
                       help="weight m as a decimal half-integer, e.g. 2.5")
    group.add_argument("--two-m", type=int, dest="two_m",
                       help="exact integer 2m")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metaplectic",
        description="matrix coefficients of the metaplectic cover and "
                    "non-vanishing certificates for their Poincare series")
    parser.add_argument("--out", type=str, default=None,
                        help="write output to PATH instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("median", help="median of the beta distribution")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.set_defaults(func=_cmd_median)

    p = sub.add_parser("threshold", help="non-vanishing threshold N(k, m)")
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("certify", help="non-vanishing certificate")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--gamma-meets-k", action="store_true",
                   dest="gamma_meets_k")
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("window", help="admissible Cartan radius window")
    p.add_argument("--N", type=int, required=True)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_window)

    p = sub.add_parser("coeff", help="matrix coefficient, both paths")
    _add_weight_flags(p)
    p.add_argument("--cartan", type=str, default=None,
                   help="theta1,t,theta2")
    p.add_argument("--iwasawa", type=str, default=None, help="x,y,t")
    p.set_defaults(func=_cmd_coeff)

    p = sub.add_parser("l1norm", help="Haar L1 norm of the coefficient")
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_l1norm)

    p = sub.add_parser("poincare", help="partial Poincare sums as CSV")
    p.add_argument("--variant", choices=["preimage", "theta"],
                   required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--at", type=str, required=True,
                   help="base point x,y,t in Iwasawa coordinates")
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_poincare)

    p = sub.add_parser("verify-grid", help="re-check the tabulated grid")
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--mmax", type=str, default="200")
    p.add_argument("--full", action="store_true",
                   help="full tabulated range k <= 1000, m < 16970 "
                        "(hours of compute)")
    p.set_defaults(func=_cmd_verify_grid)

    p = sub.add_parser("cancel-test",
                       help="max |partial sum| over sample points "
                            "(expect 0 for full preimages)")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_cancel_test)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
