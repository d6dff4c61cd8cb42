"""Command-line front end.

Subcommands:

* ``construct``      -- build the test bundle for (r, d, N, mode), print JSON
* ``certify``        -- read a parabolic bundle JSON, print the verdict
* ``verify``         -- run the theorem campaign, print the report
* ``identities``     -- run the identity campaign, print the report
* ``counterexample`` -- search for the smallest disagreement witness

Exit codes: 0 for success with no disagreements or failures, 1 when a
campaign completed but recorded disagreements/failures (or a counterexample
was found), 2 for usage or validation errors.  All rational inputs are exact
strings like "3/2"; decimals are rejected.  The default seed comes from the
PARBUNDLES_SEED environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import SchemaError, UsageError
from .harness import (
    CampaignConfig,
    counterexample_report,
    run_identity_campaign,
    run_theorem_campaign,
)
from .hompar import hom_par_dim
from .raynaud import Mode, RaynaudRequest, build
from .serialize import (
    canonical_json,
    parabolic_from_obj,
    rational_from_str,
    raynaud_to_obj,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def _default_seed() -> int:
    raw = os.environ.get("PARBUNDLES_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PARBUNDLES_SEED must be an integer, got {raw!r}")


def _add_request_flags(parser: argparse.ArgumentParser, with_campaign: bool):
    parser.add_argument("-r", "--rank", type=int, required=True, metavar="R",
                        help="rank of the bundles under test")
    parser.add_argument("-d", "--pardeg", required=True, metavar="P/Q",
                        help="parabolic degree as an exact rational string")
    parser.add_argument("-N", "--order", type=int, required=True, metavar="N",
                        help="weight lattice denominator (cover order)")
    parser.add_argument("--mode", choices=[m.value for m in Mode],
                        default=Mode.TWO_POINT.value,
                        help="marked-point configuration (default: two-point)")
    if with_campaign:
        parser.add_argument("--window", type=int, default=3,
                            help="summand degree window around the balanced degree")
        parser.add_argument("--gauge-samples", type=int, default=20,
                            help="gauge-twisted copies per enumerated instance")
        parser.add_argument("--samples", type=int, default=500,
                            help="random samples for identity checks")
        parser.add_argument("--seed", type=int, default=None,
                            help="campaign seed (default: PARBUNDLES_SEED or 0)")


def _parse_pardeg(text: str, n: int) -> Fraction:
    d = rational_from_str(text, "d")
    if (d * n).denominator != 1:
        raise UsageError(f"parabolic degree {text} is not a multiple of 1/{n}")
    return d


def _read_document(path: str | None):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON: {exc}") from exc


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config_from_args(args) -> CampaignConfig:
    d = _parse_pardeg(args.pardeg, args.order)
    seed = args.seed if args.seed is not None else _default_seed()
    return CampaignConfig(
        r=args.rank, d=d, n=args.order, mode=Mode(args.mode),
        degree_window=args.window, gauge_samples=args.gauge_samples,
        random_seed=seed, identity_sample_size=args.samples,
    )


def _cmd_construct(args) -> int:
    d = _parse_pardeg(args.pardeg, args.order)
    bundle = build(RaynaudRequest(args.rank, d, args.order, Mode(args.mode)))
    _emit(canonical_json(raynaud_to_obj(bundle)), args.output)
    return EXIT_OK


def _cmd_certify(args) -> int:
    d = _parse_pardeg(args.pardeg, args.order)
    obj = _read_document(args.input)
    candidate, n = parabolic_from_obj(obj)
    if n != args.order:
        raise UsageError(f"document declares N={n} but -N {args.order} was given")
    certifier = build(RaynaudRequest(args.rank, d, args.order, Mode(args.mode)))
    from .raynaud import certify_semistable  # validation lives there

    semistable = certify_semistable(candidate, certifier)
    dim = hom_par_dim(certifier.bundle, candidate)
    _emit(canonical_json({"semistable": semistable, "hom_par_dim": dim}), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = run_theorem_campaign(_config_from_args(args))
    _emit(report.to_json(), args.output)
    print(f"theorem campaign: {report.checked} checked, "
          f"{len(report.disagreements)} disagreements "
          f"({report.elapsed_seconds:.2f}s)", file=sys.stderr)
    return EXIT_OK if report.clean else EXIT_FINDINGS


def _cmd_identities(args) -> int:
    report = run_identity_campaign(_config_from_args(args))
    _emit(report.to_json(), args.output)
    print(f"identity campaign: {report.checked} checked, "
          f"{len(report.identity_failures)} failures "
          f"({report.elapsed_seconds:.2f}s)", file=sys.stderr)
    return EXIT_OK if report.clean else EXIT_FINDINGS


def _cmd_counterexample(args) -> int:
    report = counterexample_report(_config_from_args(args))
    _emit(canonical_json(report), args.output)
    return EXIT_FINDINGS if report["witness"] is not None else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parbundles",
        description="Exact semistability certificates for parabolic bundles "
                    "on the projective line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build the test bundle and print it")
    _add_request_flags(p, with_campaign=False)
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("certify", help="certify a parabolic bundle document")
    _add_request_flags(p, with_campaign=False)
    p.add_argument("--input", "-i", default=None, help="bundle JSON path (default stdin)")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify", help="run the theorem verification campaign")
    _add_request_flags(p, with_campaign=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("identities", help="run the identity verification campaign")
    _add_request_flags(p, with_campaign=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_identities)

    p = sub.add_parser("counterexample", help="search for a minimal disagreement")
    _add_request_flags(p, with_campaign=True)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=_cmd_counterexample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:  # includes DomainError and SchemaError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
