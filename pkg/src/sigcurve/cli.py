"""Command-line front end.

Machine output goes to stdout (or ``--out``), diagnostics to stderr.  Exit
codes: 0 success, 2 exceptional input, 3 elimination budget exceeded,
4 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .config import budget_from_env
from .degree import predict_degree
from .equivalence import equivalent, symmetry_order
from .errors import (
    BudgetExceededError,
    ExceptionalCurveError,
    ParseError,
    SigcurveError,
)
from .fermat import (
    fermat_curve,
    fermat_signature,
    fermat_symmetry_order,
)
from .groebner import EliminationBudget
from .jets import CurveInput, GroupId, classifying_pair, theta
from .parser import parse, serialize
from .signature import (
    PointSignature,
    SignaturePolynomial,
    exact_signature_fit,
    relative_residual,
    signature_polynomial,
    signature_samples,
)

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_EXCEPTIONAL = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4


def _group(value: str) -> GroupId:
    try:
        return GroupId(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown group {value!r} (choose from SE2, SA2, A2, PGL3)"
        )


def _curve(text: str) -> CurveInput:
    return CurveInput.from_poly(parse(text))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sigcurve",
        description="Differential signatures of plane algebraic curves "
        "under SE(2), SA(2), A(2) and PGL(3), in exact arithmetic.",
    )
    ap.add_argument("--out", help="write machine output to this file instead of stdout")
    ap.add_argument(
        "--format", choices=("text", "json"), default=None, help="output format"
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", help="restriction T_i of a differential function")
    p.add_argument("--curve", required=True)
    p.add_argument("--index", type=int, required=True, choices=range(1, 9))

    p = sub.add_parser("invariants", help="classifying pair K1, K2 on the curve")
    p.add_argument("--curve", required=True)
    p.add_argument("--group", type=_group, required=True)

    p = sub.add_parser("signature", help="signature polynomial by elimination")
    p.add_argument("--curve", required=True)
    p.add_argument("--group", type=_group, required=True)

    p = sub.add_parser("degree", help="degree prediction via the multiplicity formula")
    p.add_argument("--curve", required=True)
    p.add_argument("--group", type=_group, required=True)
    p.add_argument("--n", type=int, default=None, help="known symmetry order")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("symmetry", help="symmetry group cardinality")
    p.add_argument("--curve", required=True)
    p.add_argument("--group", type=_group, required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("equiv", help="group equivalence of two curves")
    p.add_argument("--curve", required=True)
    p.add_argument("--curve2", required=True)
    p.add_argument("--group", type=_group, required=True)

    p = sub.add_parser("samples", help="numeric signature samples as CSV")
    p.add_argument("--curve", required=True)
    p.add_argument("--group", type=_group, required=True)
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fermat", help="built-in Fermat family x^d + y^d + 1")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--group", type=_group, required=True)
    p.add_argument(
        "--what", choices=("signature", "symmetry", "degree"), default="signature"
    )
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    budget = budget_from_env()
    out_stream = open(args.out, "w") if args.out else sys.stdout
    fmt = args.format or "text"

    def emit(payload: dict, text: str) -> None:
        if fmt == "json":
            payload["schema_version"] = SCHEMA_VERSION
            print(json.dumps(payload, indent=2, default=str), file=out_stream)
        else:
            print(text, file=out_stream)

    try:
        code = _dispatch(args, budget, emit)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        code = EXIT_PARSE
    except ExceptionalCurveError as e:
        print(str(e), file=sys.stderr)
        code = EXIT_EXCEPTIONAL
    except BudgetExceededError as e:
        print(str(e), file=sys.stderr)
        code = EXIT_BUDGET
    except SigcurveError as e:
        print(f"error: {e}", file=sys.stderr)
        code = 1
    finally:
        if args.out:
            out_stream.close()
    return code


def _dispatch(args, budget: EliminationBudget, emit) -> int:
    from .config import RunConfig

    cmd = args.command
    # validates the run parameters (positivity invariants) in one place
    RunConfig(
        group=getattr(args, "group", GroupId.SE2),
        trials=getattr(args, "trials", 3),
        seed=max(getattr(args, "seed", 0), 0),
        budget=budget,
        output_format=args.format or "text",
    )
    if cmd == "theta":
        cv = _curve(args.curve)
        t = theta(cv, args.index)
        emit(
            {
                "command": "theta",
                "index": t.index,
                "T": serialize(t.T),
                "content": str(t.content),
                "primitive": serialize(t.primitive),
                "d_i": t.d_i,
                "tau_i": t.tau_i,
                "deg_T": int(t.T.total_degree()),
            },
            f"T_{t.index} = {serialize(t.T)}\n"
            f"d_i = {t.d_i}, tau_i = {t.tau_i}, deg T_i = {t.T.total_degree()}",
        )
        return EXIT_OK
    if cmd == "invariants":
        cv = _curve(args.curve)
        pair = classifying_pair(cv, args.group)
        emit(
            {
                "command": "invariants",
                "group": args.group.value,
                "K1_num": serialize(pair.K1.num),
                "K1_den": serialize(pair.K1.den),
                "K2_num": serialize(pair.K2.num),
                "K2_den": serialize(pair.K2.den),
            },
            f"K1 = ({serialize(pair.K1.num)}) / ({serialize(pair.K1.den)})\n"
            f"K2 = ({serialize(pair.K2.num)}) / ({serialize(pair.K2.den)})",
        )
        return EXIT_OK
    if cmd == "signature":
        cv = _curve(args.curve)
        sig = signature_polynomial(cv, args.group, budget=budget)
        if isinstance(sig, PointSignature):
            emit(
                {
                    "command": "signature",
                    "group": args.group.value,
                    "point_signature": str(sig.value),
                },
                f"point signature: {sig.value}",
            )
        else:
            emit(
                {
                    "command": "signature",
                    "group": args.group.value,
                    "S": serialize(sig.S),
                    "degree": sig.degree(),
                },
                f"S = {serialize(sig.S)}",
            )
        return EXIT_OK
    if cmd == "degree":
        cv = _curve(args.curve)
        rep = predict_degree(
            cv, args.group, n=args.n, trials=args.trials, seed=args.seed
        )
        payload = {
            "command": "degree",
            "group": rep.group.value,
            "d": rep.d,
            "deg_sigma": rep.deg_sigma,
            "mult_sum": rep.mult_sum,
            "n": rep.n,
            "deg_S_predicted": rep.deg_S_predicted,
            "n_times_deg_S": rep.n_times_deg_S,
            "affine_base_points_excluded": rep.affine_base_points_excluded,
            "affine_status": rep.affine_status,
            "sheared": rep.sheared,
            "mult_trials": [[list(map(str, a)), s] for a, s in rep.mult_report.trials],
            "mult_lower_bound": rep.mult_report.lower_bound,
            "sandwich_closed": rep.mult_report.sandwich_closed,
        }
        emit(
            payload,
            f"d = {rep.d}, deg(sigma) = {rep.deg_sigma}, mult_sum = {rep.mult_sum}, "
            f"n*deg(S) = {rep.n_times_deg_S}"
            + (f", deg(S) = {rep.deg_S_predicted} (n = {rep.n})" if rep.n else ""),
        )
        return EXIT_OK
    if cmd == "symmetry":
        cv = _curve(args.curve)
        res = symmetry_order(cv, args.group, budget=budget, seed=args.seed)
        payload = {
            "command": "symmetry",
            "group": args.group.value,
            "infinite": res.infinite,
            "n": res.n,
            "route": res.route,
            "signature_degree": res.signature_degree,
        }
        emit(
            payload,
            "symmetry order: infinite" if res.infinite else f"symmetry order: {res.n}",
        )
        return EXIT_OK
    if cmd == "equiv":
        F = _curve(args.curve)
        G = _curve(args.curve2)
        v = equivalent(F, G, args.group, budget=budget)
        payload = {
            "command": "equiv",
            "group": args.group.value,
            "equivalent": v.equivalent,
            "reason": v.reason.value,
            "note": v.note,
        }
        emit(
            payload,
            f"equivalent: {v.equivalent} ({v.reason.value})"
            + (f" [{v.note}]" if v.note else ""),
        )
        if v.reason.value == "exceptional-input":
            return EXIT_EXCEPTIONAL
        return EXIT_OK
    if cmd == "samples":
        cv = _curve(args.curve)
        samples = signature_samples(
            cv, args.group, args.count, seed=args.seed, real_only=True
        )
        lines = ["x,y,k1,k2"]
        for s in samples:
            lines.append(
                ",".join(
                    repr(v.real) for v in (s.x, s.y, s.k1, s.k2)
                )
            )
        emit({"command": "samples", "csv": "\n".join(lines)}, "\n".join(lines))
        return EXIT_OK
    if cmd == "fermat":
        return _fermat_command(args, budget, emit)
    raise AssertionError(f"unhandled command {cmd}")


def _fermat_command(args, budget, emit) -> int:
    d = args.d
    group = args.group
    cv = fermat_curve(d)
    if args.what == "degree":
        rep = predict_degree(cv, group)
        emit(
            {
                "command": "fermat",
                "what": "degree",
                "d": d,
                "group": group.value,
                "deg_sigma": rep.deg_sigma,
                "mult_sum": rep.mult_sum,
                "n_times_deg_S": rep.n_times_deg_S,
            },
            f"n*deg(S) = {rep.n_times_deg_S} (deg sigma {rep.deg_sigma}, mult {rep.mult_sum})",
        )
        return EXIT_OK
    sig = fermat_signature(d, group)  # raises for groups without closed form
    verified, route = _verify_fermat_signature(cv, group, sig, budget)
    if args.what == "signature":
        emit(
            {
                "command": "fermat",
                "what": "signature",
                "d": d,
                "group": group.value,
                "S": serialize(sig.S),
                "degree": sig.degree(),
                "verification": route,
                "verified": verified,
            },
            f"S = {serialize(sig.S)}\n[verified via {route}]",
        )
        return EXIT_OK
    if args.what == "symmetry":
        res = symmetry_order(cv, group, known_signature_degree=sig.degree())
        expected = fermat_symmetry_order(d, group)
        emit(
            {
                "command": "fermat",
                "what": "symmetry",
                "d": d,
                "group": group.value,
                "n": res.n,
                "closed_form_n": expected,
                "route": res.route,
            },
            f"n = {res.n} (closed form {expected})",
        )
        return EXIT_OK
    raise AssertionError


def _verify_fermat_signature(
    cv: CurveInput, group: GroupId, sig: SignaturePolynomial, budget
) -> tuple[bool, str]:
    """Certified sample-fit in exact quotient-ring arithmetic first (fast
    and byte-exact); direct elimination as fallback; a numeric sample check
    as the last resort."""
    fitted = exact_signature_fit(cv, group, sig.degree())
    if fitted is not None:
        return fitted == sig.S, "exact sample-fit"
    try:
        computed = signature_polynomial(cv, group, budget=budget)
        if isinstance(computed, SignaturePolynomial):
            return computed.S == sig.S, "elimination"
    except BudgetExceededError:
        pass
    samples = signature_samples(cv, group, 25, seed=7)
    if len(samples) < 20:
        return False, "sample-fit (insufficient samples)"
    bad = sum(1 for s in samples if relative_residual(sig.S, s.k1, s.k2) > 1e-6)
    return bad <= 2, "numeric sample check"


if __name__ == "__main__":
    sys.exit(main())
