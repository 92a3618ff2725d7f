"""Command-line front end.

Exit status: 0 on success, 1 when the core rejects the input, 2 on usage
errors (argparse's own convention).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

from .ces import CesParams, ParamGrid, fit_ces_params, rank_by_occupancy, rank_channels
from .errors import ChanrankError, EmptyInputError
from .io import (build_report, dumps_report, format_observations, input_digest, load_json,
                 params_from_dict, params_to_dict, parse_observations, parse_reference,
                 render_text)
from .sim import parse_scenario, run_scenario
from .utility import CurveFamily, occupancy_curve, sample_curve, snr_curve

FAMILIES = [f.value for f in CurveFamily]


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ChanrankError(f"cannot read {path}: {exc.strerror}") from None


def _load_observations(path: str):
    data = _read_bytes(path)
    return parse_observations(io.StringIO(data.decode("utf-8"))), input_digest(data)


def _write(path: str | None, text: str, stdout):
    if path is None or path == "-":
        stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ChanrankError(f"cannot write {path}: {exc.strerror}") from None


def _add_model_args(p):
    p.add_argument("--params", metavar="FILE",
                   help="JSON parameter file (from `fit --out`, or a JSON report)")
    p.add_argument("--sigma", type=float, help="CES elasticity in (0, 1]")
    p.add_argument("--w-snr", type=float, help="SNR weight in (0, 1); occupancy gets 1 - w")
    p.add_argument("--curve", choices=FAMILIES, help="curve family for both SNR and occupancy")
    p.add_argument("--snr-curve", choices=FAMILIES, help="SNR curve family")
    p.add_argument("--occ-curve", choices=FAMILIES, help="occupancy curve family")
    p.add_argument("--snr-alpha", type=float, help="override SNR curve steepness")
    p.add_argument("--occ-alpha", type=float, help="override occupancy curve steepness")


def _model_from_args(args):
    """Resolve CES params and curves: defaults < --params file < explicit flags."""
    params = CesParams()
    s_curve, o_curve = snr_curve("tanh-half"), occupancy_curve("tanh-half")
    if args.params:
        params, s_curve, o_curve = params_from_dict(load_json(_read_bytes(args.params).decode()))
    s_fam = args.snr_curve or args.curve
    o_fam = args.occ_curve or args.curve
    if s_fam or args.snr_alpha is not None:
        s_curve = snr_curve(s_fam or s_curve.family, args.snr_alpha)
    if o_fam or args.occ_alpha is not None:
        o_curve = occupancy_curve(o_fam or o_curve.family, args.occ_alpha)
    if args.sigma is not None or args.w_snr is not None:
        sigma = params.sigma if args.sigma is None else args.sigma
        w = params.w_snr if args.w_snr is None else args.w_snr
        params = CesParams.from_w_snr(w, sigma)
    return params, s_curve, o_curve


def cmd_rank(args, stdout):
    obs, digest = _load_observations(args.input)
    params, s_c, o_c = _model_from_args(args)
    ranked = rank_channels(obs, s_c, o_c, params)
    report = build_report("rank", ranked, params, s_c, o_c, digest)
    _write(args.out, dumps_report(report) if args.json else render_text(report), stdout)


def cmd_baseline(args, stdout):
    obs, digest = _load_observations(args.input)
    params, s_c, o_c = _model_from_args(args)
    baseline = rank_by_occupancy(obs, s_c, o_c, params)
    by_utility = rank_channels(obs, s_c, o_c, params)
    # Both lists hold the parsed objects themselves, so identity maps rows across them.
    utility_rank = {id(rc.observation): rc.rank for rc in by_utility}
    xref = [utility_rank[id(rc.observation)] for rc in baseline]
    report = build_report("baseline", baseline, params, s_c, o_c, digest, utility_ranks=xref)
    _write(args.out, dumps_report(report) if args.json else render_text(report), stdout)


def cmd_curves(args, stdout):
    if args.domain == "snr":
        curve = snr_curve(args.family, args.alpha)
        lo, hi, mirrored = -20.0, 20.0, False
    else:
        curve = occupancy_curve(args.family, args.alpha)
        lo, hi, mirrored = 0.0, 1.0, True
    lo = lo if args.lo is None else args.lo
    hi = hi if args.hi is None else args.hi
    samples = sample_curve(curve, lo, hi, args.points, mirrored=mirrored)
    lines = ["input,utility"] + [f"{x:.6g},{u:.6g}" for x, u in samples]
    _write(args.out, "\n".join(lines) + "\n", stdout)


def cmd_fit(args, stdout):
    obs, _ = _load_observations(args.input)
    ref = parse_reference(io.StringIO(_read_bytes(args.reference).decode("utf-8")))
    _, s_c, o_c = _model_from_args(args)
    grid = ParamGrid.from_steps(args.sigma_step, args.w_step)
    params, tau = fit_ces_params(obs, ref, s_c, o_c, grid)
    result = params_to_dict(params, s_c, o_c)
    if args.out:
        _write(args.out, dumps_report_params(result), stdout)
    if args.json:
        stdout.write(dumps_report_params({**result, "tau_b": tau}))
    else:
        stdout.write(f"sigma={params.sigma:g} w_snr={params.w_snr:g} "
                     f"w_occ={params.w_occ:g} tau_b={tau:.6f}\n")


def dumps_report_params(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def cmd_simulate(args, stdout):
    scenario = parse_scenario(_read_bytes(args.scenario).decode("utf-8"))
    obs = run_scenario(scenario, args.seed)
    if not obs:
        raise EmptyInputError("scenario produced no observations")
    _write(args.out, format_observations(obs), stdout)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chanrank",
        description="Utility-based channel ranking for cognitive radio.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("rank", help="rank channels by combined CES utility")
    p.add_argument("--input", required=True, metavar="FILE", help="observations CSV")
    _add_model_args(p)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("baseline", help="occupancy-only ordering with utility-rank cross-reference")
    p.add_argument("--input", required=True, metavar="FILE", help="observations CSV")
    _add_model_args(p)
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("curves", help="sample a utility curve as CSV")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--domain", required=True, choices=["snr", "occupancy"])
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--alpha", type=float, help="steepness (default depends on family and domain)")
    p.add_argument("--lo", type=float, help="domain start (default -20 dB or 0)")
    p.add_argument("--hi", type=float, help="domain end (default 20 dB or 1)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("fit", help="grid-search CES parameters against a reference ranking")
    p.add_argument("--input", required=True, metavar="FILE", help="observations CSV")
    p.add_argument("--reference", required=True, metavar="FILE", help="index,rank CSV")
    _add_model_args(p)
    p.add_argument("--sigma-step", type=float, default=0.1)
    p.add_argument("--w-step", type=float, default=0.05)
    p.add_argument("--json", action="store_true", help="emit parameters and tau-b as JSON")
    p.add_argument("--out", metavar="FILE", help="also write the fitted parameter file")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="simulate sensing and emit an observations CSV")
    p.add_argument("--scenario", required=True, metavar="FILE", help="INI scenario file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_simulate)
    return parser


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        old_out, old_err = sys.stdout, sys.stderr
        sys.stdout, sys.stderr = stdout, stderr
        try:
            args = parser.parse_args(argv)
        finally:
            sys.stdout, sys.stderr = old_out, old_err
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, stdout)
    except ChanrankError as exc:
        stderr.write(f"chanrank: error: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run_cli())
