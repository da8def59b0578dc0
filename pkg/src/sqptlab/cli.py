"""Command-line front end: ``sqptlab {zoo,simulate,reconstruct,verify,sic-search}``.

Exit status is 0 on success, 1 when a verification or search fails and 2 on
usage or input errors.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import channels, experiment, sic, sqpt, verify
from .errors import ArgumentError, ParseError, SQPTError


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("SQPT_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _load_channel(text):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return channels.ChannelSpec.from_json(text)


def _emit(args, payload, lines):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def cmd_zoo(args):
    rows = [{"kind": k, "params": v} for k, v in channels.KINDS.items()]
    _emit(args, rows, [f"{r['kind']:<18} {r['params']}" for r in rows])
    return 0


def cmd_simulate(args):
    spec = _load_channel(args.channel)
    res = experiment.mse_sweep(
        spec, args.shots, args.trials, seed=args.seed, mode=args.mode, workers=_threads(args.threads)
    )
    json_path, csv_path = experiment.write_report(res, args.out)
    lines = [f"{'shots':>10} {'mean_err':>14} {'predicted':>14} {'z':>8}"]
    for row in res.summary:
        lines.append(f"{row['shots']:>10d} {row['mean_err']:>14.6e} {row['predicted']:>14.6e} {row['z']:>8.3f}")
    if len(res.summary) > 1:
        lines.append(f"log-log slope {res.slope:.4f}")
    lines.append(f"wrote {json_path} and {csv_path}")
    _emit(args, res.to_report(), lines)
    return 0


def cmd_reconstruct(args):
    if (args.channel is None) == (args.report is None):
        raise ArgumentError("give exactly one of --channel or --report")
    if args.channel is not None:
        spec = _load_channel(args.channel)
        k = channels.make_channel(spec)
        s = sic.get_sic(k.d)
        data = sqpt.omega_exact(k, s, s)
        source = {"kind": "exact", "spec": spec.to_dict()}
    else:
        rep = experiment.read_report(args.report)
        if "omega_hat" not in rep:
            raise ParseError(f"{args.report}: missing field 'omega_hat'")
        s = sic.get_sic(int(rep["d"]))
        data = sqpt.DataMatrix(np.array(rep["omega_hat"], dtype=float))
        source = {"kind": "sampled", "report": args.report, "shots": rep.get("omega_shots"), "mode": rep["mode"]}
    chi = sqpt.reconstruct_chi_sic(data, s, unital=args.unital, tol=args.tol)
    diag = sqpt.chi_diagnostics(chi)
    payload = {
        "source": source,
        "d": s.d,
        "unital": args.unital,
        "chi_hat": channels.matrix_to_pairs(chi),
        "trace": [diag["trace"].real, diag["trace"].imag],
        "hermiticity": diag["hermiticity"],
        "min_eig": diag["min_eig"],
    }
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "reconstruction.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    lines = [
        f"source       {source['kind']}" + (f" ({source['shots']} shots)" if source.get("shots") else ""),
        f"Tr           {diag['trace'].real:.6f}",
        f"hermiticity  {diag['hermiticity']:.3e}",
        f"min eig      {diag['min_eig']:.6e}",
    ]
    _emit(args, payload, lines)
    return 0


def cmd_verify(args):
    if args.d not in (2, 3):
        raise ArgumentError("verify supports --d 2 or --d 3")
    checks = verify.run_checks(args.d, args.seed, break_frame=args.break_frame)
    ok = all(c.passed for c in checks)
    payload = {
        "d": args.d,
        "seed": args.seed,
        "passed": ok,
        "checks": [{"name": c.name, "residual": c.residual, "threshold": c.threshold, "passed": c.passed} for c in checks],
    }
    width = max(len(c.name) for c in checks)
    lines = [f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL'}  {c.residual:.3e}" for c in checks]
    lines.append("all checks passed" if ok else "SOME CHECKS FAILED")
    _emit(args, payload, lines)
    return 0 if ok else 1


def _search_payload(s, rep):
    payload = {"report": rep.to_dict()}
    if s is not None:
        payload["fiducial"] = channels.matrix_to_pairs(s.fiducial)
    return payload


def _write_search(args, payload):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, f"sic_d{args.d}.json"), "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def cmd_sic_search(args):
    try:
        s, rep = sic.sic_search(args.d, args.seed, args.max_iters, args.restarts, workers=_threads(args.threads))
    except SQPTError as exc:
        rep = getattr(exc, "report", None)
        if rep is None:
            raise
        payload = _search_payload(getattr(exc, "best", None), rep)
        _write_search(args, payload)
        _emit(args, payload, [f"search failed: best potential {rep.potential:.12f} (target {rep.target:.12f})"])
        return 1
    payload = _search_payload(s, rep)
    _write_search(args, payload)
    lines = [
        f"d            {rep.d}",
        f"potential    {rep.potential:.10f}",
        f"target       {rep.target:.10f}",
        f"precision    {rep.precision:.3e}",
        f"restart      {rep.restart}",
    ]
    _emit(args, payload, lines)
    return 0


def load_fiducial(path):
    """Read a fiducial written by ``sic-search --out`` back as a :class:`~sqptlab.sic.SicPovm`."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if "fiducial" not in data:
        raise ParseError(f"{path}: missing field 'fiducial'")
    return sic.sic_from_fiducial(channels.pairs_to_matrix(data["fiducial"]))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $SQPT_THREADS or CPU count)")

    parser = argparse.ArgumentParser(prog="sqptlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zoo", parents=[common], help="list channel kinds")
    p.set_defaults(func=cmd_zoo)

    p = sub.add_parser("simulate", parents=[common], help="finite-shot error sweep")
    p.add_argument("--channel", required=True, help="channel spec as inline JSON or a file path")
    p.add_argument("--shots", type=int, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=experiment.MODES, default="joint")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reconstruct", parents=[common], help="reconstruct chi_c with SIC inputs and measurements")
    p.add_argument("--channel", help="exact data from this channel spec")
    p.add_argument("--report", help="sampled data from a simulate report")
    p.add_argument("--unital", action="store_true", help="use the unital shortcut formula")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", parents=[common], help="run the self-check suite")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--break-frame", action="store_true", help="duplicate a frame element (negative test)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sic-search", parents=[common], help="numerical SIC fiducial search")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_sic_search)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ArgumentError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SQPTError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
