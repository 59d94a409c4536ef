"""Command-line interface.

Subcommands: solve (Riccati solve of a system file), check (decentralization
tests: thm1 | thm2 | cor3 | oracle), sweep (cost-landscape grids to CSV),
model (emit a named model's system file), reduce (two-stage second-order
reduction). Exit status: 0 success, 1 input error, 2 solver failure.
"""

import argparse
import sys

import numpy as np

from . import decentral, models, sweep as sweepmod, sysfile
from .errors import InputError, SolverError
from .lqr import closed_loop, solve_lqr
from .secondorder import check_second_order_decentral, reduce_and_solve
from .serialize import format_float
from .spectral import identity_spec


def _bool(value):
    return "true" if value else "false"


def _print_matrix(name, M, out):
    M = np.atleast_2d(M)
    out.write(f"{name}:\n")
    for row in M:
        out.write("  " + " ".join(format_float(v) for v in row) + "\n")


def _print_report(report, out):
    if report.analytic_verdicts:
        for name, holds, witness in report.analytic_verdicts:
            extra = ""
            if witness:
                extra = "  (" + ", ".join(
                    f"{k}={format_float(v) if isinstance(v, float) else v}"
                    for k, v in witness.items()
                ) + ")"
            out.write(f"condition {name}: {_bool(holds)}{extra}\n")
    if report.scalar_gain_c is not None:
        out.write(f"scalar gain c: {format_float(report.scalar_gain_c)}\n")
    out.write(f"oracle decentralized: {_bool(report.oracle_decentralized)}\n")
    out.write(f"offdiag mass: {format_float(report.offdiag_mass)}\n")
    if report.K is not None:
        _print_matrix("K", report.K, out)


def _chamber_adjudication(system, out):
    """For chamber-tagged circulant files, print both candidate balance
    conditions, the uniform-gain prediction, the oracle verdict, and their
    consistency."""
    meta = system.model or {}
    if meta.get("name") != "chamber":
        return
    try:
        params = models.ChamberParams(
            alpha0=meta["alpha0"],
            alpha1=meta["alpha1"],
            beta0=meta["beta0"],
            beta1=meta["beta1"],
        )
    except KeyError as exc:
        raise InputError(f"chamber model tag is missing coefficient {exc}") from exc
    chamber = models.chamber_system(params)
    a, b, q, r = system.circulant_specs()
    c = decentral.find_uniform_gain(a, b, q, r)
    prediction = c is not None
    report = decentral.oracle_check(system.lqr_problem())
    consistent = report.oracle_decentralized == prediction
    out.write("chamber adjudication:\n")
    out.write(
        f"  magnitude balance (alpha vs beta ratios): {_bool(chamber.magnitude_condition)}\n"
    )
    out.write(
        f"  entry balance (signed entries, a0 = -alpha0): {_bool(chamber.entry_condition)}\n"
    )
    out.write(f"  uniform-gain prediction (decentralized): {_bool(prediction)}\n")
    out.write(f"  oracle decentralized: {_bool(report.oracle_decentralized)}\n")
    out.write(f"  consistency (oracle matches prediction): {_bool(consistent)}\n")


def _cmd_solve(args, out):
    system = sysfile.load_system(args.system)
    prob = system.lqr_problem()
    sol = solve_lqr(prob)
    _print_matrix("P", sol.P, out)
    _print_matrix("K", sol.K, out)
    out.write(f"h2: {format_float(sol.h2)}\n")
    out.write(f"h2_squared: {format_float(sol.h2_squared)}\n")
    out.write(f"residual: {format_float(sol.care.residual)}\n")
    out.write(f"iterations: {sol.care.iterations}\n")
    _print_matrix("closed_loop", closed_loop(prob, sol), out)
    return 0


def _diag_cost_from_dense(system):
    A, B, Q, R = system.payload
    if A.shape != (2, 2):
        raise InputError("this check needs a 2x2 dense system")
    scale = max(1.0, float(np.linalg.norm(B)))
    if np.max(np.abs(B - np.eye(2))) > 1e-12 * scale:
        raise InputError("this check needs B = I (rescale the input first)")
    for name, M in (("Q", Q), ("R", R)):
        if np.max(np.abs(M - np.diag(np.diag(M)))) > 1e-12 * max(1.0, np.linalg.norm(M)):
            raise InputError(f"this check needs a diagonal {name}")
    return decentral.DiagonalCost2x2(
        a0=A[0, 0], a1=A[0, 1], a_minus1=A[1, 0], a2=A[1, 1],
        q0=Q[0, 0], q2=Q[1, 1],
        gamma0=1.0 / R[0, 0], gamma2=1.0 / R[1, 1],
    )


def _cmd_check(args, out):
    system = sysfile.load_system(args.system)
    mode = args.mode
    out.write(f"check mode: {mode}\n")

    if mode == "thm1":
        if system.kind != "dense":
            raise InputError("check thm1 needs a dense system file")
        sys2 = _diag_cost_from_dense(system)
        holds, details = decentral.diagonal_cost_conditions(sys2)
        for key in ("opposite_offdiag_signs", "same_diag_signs",
                    "state_weight_ratio", "input_weight_ratio"):
            out.write(f"condition {key}: {_bool(details[key])}\n")
        out.write(
            f"state ratio: {format_float(details['state_ratio'])}"
            f" (target {format_float(details['state_ratio_target'])})\n"
        )
        out.write(
            f"input ratio: {format_float(details['input_ratio'])}"
            f" (target {format_float(details['input_ratio_target'])})\n"
        )
        out.write(f"analytic holds: {_bool(holds)}\n")
        report = decentral.oracle_check(sys2.lqr_problem())
        _print_report(report, out)
    elif mode == "thm2":
        a, b, q, r = system.circulant_specs()
        c = decentral.find_uniform_gain(a, b, q, r)
        out.write(f"uniform gain found: {_bool(c is not None)}\n")
        if c is not None:
            out.write(f"scalar gain c: {format_float(c)}\n")
        report = decentral.oracle_check(system.lqr_problem())
        _print_report(report, out)
    elif mode == "cor3":
        a, b, q, r = system.circulant_specs()
        holds, c = decentral.circulant_pair_conditions(a, b, q, r)
        out.write(f"analytic holds: {_bool(holds)}\n")
        if c is not None:
            out.write(f"scalar gain c: {format_float(c)}\n")
        report = decentral.oracle_check(system.lqr_problem())
        _print_report(report, out)
    else:
        report = decentral.oracle_check(system.lqr_problem())
        _print_report(report, out)

    if system.kind == "circulant":
        _chamber_adjudication(system, out)
    return 0


def _cmd_sweep(args, out):
    if args.config is not None:
        import json

        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config is not valid JSON: {exc}") from exc
        cfg = sweepmod.SweepConfig.from_dict(data)
    elif args.default is not None:
        cfg = (
            sweepmod.SweepConfig.default_qr()
            if args.default == "qr"
            else sweepmod.SweepConfig.default_qa()
        )
    else:
        raise InputError("sweep needs --config FILE or --default {qr,qa}")
    result = sweepmod.run_sweep(cfg)
    output = args.output or cfg.output or f"sweep_{cfg.kind}.csv"
    csv_path, json_path = sweepmod.write_outputs(result, output)
    summary = result.summary()
    out.write(f"wrote {csv_path} ({summary['points']} points, {summary['solved']} solved)\n")
    out.write(f"wrote {json_path}\n")
    if "h2_min" in summary:
        out.write(
            f"h2 range: [{format_float(summary['h2_min'])}, {format_float(summary['h2_max'])}]\n"
        )
    if result.curve:
        out.write(
            f"curve: {len(result.curve)} samples, "
            f"{len(result.curve_excluded)} excluded, "
            f"all decentralized: {_bool(all(s.decentralized for s in result.curve))}\n"
        )
    return 0


def _cmd_model(args, out):
    if args.name == "diffusion":
        d2 = models.diffusion_operator(args.n, args.delta)
        if args.decentralizing_cost:
            q, r, _ = models.diffusion_decentralizing_cost(args.n, args.delta)
        else:
            q, r = identity_spec(d2.n), identity_spec(d2.n)
        doc = sysfile.circulant_document(
            d2, identity_spec(d2.n), q, r,
            model={"name": "diffusion", "n": int(args.n), "delta": float(args.delta)},
        )
    elif args.name == "predprey":
        params = models.PredatorPreyParams(
            r1=args.r1, r2=args.r2, k1=args.k1, k2=args.k2, b=args.b, e=args.e
        )
        A = models.predator_prey_jacobian(params)
        if args.decentralizing_cost:
            sys2 = decentral.synthesize_diagonal_cost(
                A[0, 0], A[0, 1], A[1, 0], A[1, 1], q2=args.q2, gamma2=args.gamma2
            )
            prob = sys2.lqr_problem()
            Q, R = prob.Q, prob.R
        else:
            Q, R = np.eye(2), np.eye(2)
        doc = sysfile.dense_document(
            A, np.eye(2), Q, R,
            model={"name": "predprey", "r1": params.r1, "r2": params.r2,
                   "k1": params.k1, "k2": params.k2, "b": params.b, "e": params.e},
        )
    elif args.name == "chamber":
        params = models.ChamberParams(
            alpha0=args.alpha0, alpha1=args.alpha1, beta0=args.beta0, beta1=args.beta1
        )
        chamber = models.chamber_system(params)
        doc = sysfile.circulant_document(
            chamber.a, chamber.b, identity_spec(2), identity_spec(2),
            model={"name": "chamber", "alpha0": params.alpha0, "alpha1": params.alpha1,
                   "beta0": params.beta0, "beta1": params.beta1},
        )
    else:  # perf
        prob = models.perf_example_system(q0=args.q0, gamma2=args.gamma2)
        doc = sysfile.dense_document(
            prob.A, prob.B, prob.Q, prob.R,
            model={"name": "perf", "q0": float(args.q0), "gamma2": float(args.gamma2)},
        )
    if args.out is not None:
        sysfile.save_system(doc, args.out)
        out.write(f"wrote {args.out}\n")
    else:
        from .serialize import dumps_json

        out.write(dumps_json(doc) + "\n")
    return 0


def _cmd_reduce(args, out):
    system = sysfile.load_system(args.system)
    sos = system.second_order_system()
    solution = reduce_and_solve(sos)
    _print_matrix("gain_pos", solution.gain_pos, out)
    _print_matrix("gain_vel", solution.gain_vel, out)
    out.write(f"agreement_residual: {format_float(solution.agreement_residual)}\n")
    out.write(f"corner_asymmetry: {format_float(solution.corner_asymmetry)}\n")
    report = check_second_order_decentral(solution)
    _print_report(report, out)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="declqr",
        description="Decide and design completely decentralized LQR state feedback.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a system file and print P, K, h2, residual")
    p.add_argument("--system", required=True, help="path to a JSON system file")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("check", help="run a decentralization test on a system file")
    p.add_argument(
        "mode",
        choices=("thm1", "thm2", "cor3", "oracle"),
        help="thm1: sign/ratio conditions for 2x2 plants with diagonal cost; "
        "thm2: uniform-gain search for circulant quadruples; "
        "cor3: balance ratios for 2x2 circulant quadruples; "
        "oracle: numeric solve plus gain-pattern test",
    )
    p.add_argument("--system", required=True, help="path to a JSON system file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sweep", help="run a cost-landscape sweep and write CSV + JSON")
    p.add_argument("--config", help="path to a JSON sweep config")
    p.add_argument("--default", choices=("qr", "qa"), help="run a built-in default sweep")
    p.add_argument("--output", help="override the CSV output path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("model", help="emit a named model's system file")
    msub = p.add_subparsers(dest="name", required=True)

    m = msub.add_parser("diffusion", help="ring diffusion of n subsystems")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--delta", type=float, default=1.0)
    m.add_argument(
        "--decentralizing-cost",
        action="store_true",
        help="emit the derivative-penalty state cost that makes the gain the identity",
    )
    m.add_argument("--out")
    m.set_defaults(func=_cmd_model)

    m = msub.add_parser("predprey", help="linearized two-species predator-prey model")
    for flag in ("r1", "r2", "k1", "k2", "b", "e"):
        m.add_argument(f"--{flag}", type=float, required=True)
    m.add_argument(
        "--decentralizing-cost",
        action="store_true",
        help="synthesize the diagonal cost that makes the gain diagonal",
    )
    m.add_argument("--q2", type=float, default=1.0)
    m.add_argument("--gamma2", type=float, default=1.0)
    m.add_argument("--out")
    m.set_defaults(func=_cmd_model)

    m = msub.add_parser("chamber", help="two heated chambers across a shared wall")
    for flag in ("alpha0", "alpha1", "beta0", "beta1"):
        m.add_argument(f"--{flag}", type=float, required=True)
    m.add_argument("--out")
    m.set_defaults(func=_cmd_model)

    m = msub.add_parser("perf", help="2x2 cost-landscape plant")
    m.add_argument("--q0", type=float, default=1.0)
    m.add_argument("--gamma2", type=float, default=1.0)
    m.add_argument("--out")
    m.set_defaults(func=_cmd_model)

    p = sub.add_parser("reduce", help="two-stage reduction of a second-order system")
    p.add_argument("--system", required=True, help="path to a second_order system file")
    p.set_defaults(func=_cmd_reduce)

    return parser


def cli_main(argv=None, out=None):
    """Run the CLI; returns the exit status instead of raising SystemExit."""
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
