"""Command line entry point: ``narayana-proof {term,search,bounds,reduce,prove}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, fields
from pathlib import Path

from .errors import ProofError
from .hiprec import make_constants
from .linforms import PUBLISHED_TARGETS, analytic_bounds, derived_constants, target_ceiling
from .prove import ProveConfig, ball_record, emit_certificate, parse_int, prove
from .reduction import reduce_stage1, reduce_stage2, reduce_stage3
from .search import small_range_search
from .sequence import binet_term, term

EXIT_OK, EXIT_USAGE, EXIT_INCOMPLETE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON file with default settings")
    common.add_argument("--precision-digits", type=int, dest="precision_digits")
    common.add_argument("--n-max", type=int, dest="n_max")
    common.add_argument("--u-max", type=int, dest="u_max")
    common.add_argument("--M", dest="M", help="reduction cap, e.g. 1e48")
    common.add_argument("--lookahead", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--out", type=Path, help="write JSON output here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="narayana-proof", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("term", parents=[common], help="print N_n")
    p.add_argument("n", type=int)
    p.add_argument("--binet", action="store_true", help="also recover N_n from the Binet formula")
    sub.add_parser("search", parents=[common], help="small-range exhaustive search (JSON lines)")
    sub.add_parser("bounds", parents=[common], help="derived analytic constants next to the published ones")
    p = sub.add_parser("reduce", parents=[common], help="run one reduction stage")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--u1-max", type=int, dest="u1_max")
    p.add_argument("--u2-max", type=int, dest="u2_max")
    sub.add_parser("prove", parents=[common], help="run the whole argument and emit a certificate")
    return parser


def resolve_config(args: argparse.Namespace) -> ProveConfig:
    """Flags override the config file, which overrides the defaults."""
    values = asdict(ProveConfig())
    if args.config is not None:
        values.update(ProveConfig.from_mapping(json.loads(args.config.read_text())).__dict__)
    for f in fields(ProveConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = parse_int(flag)
    config = ProveConfig(**values)
    if config.precision_digits < 32 or config.n_max < 1 or config.u_max < 1 or config.M <= 1 or config.threads < 1:
        raise ValueError("precision >= 32, n-max >= 1, u-max >= 1, M > 1 and threads >= 1 are required")
    return config


def _write(args, text: str) -> None:
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _reduction_json(out) -> dict:
    return {
        "stage": out.stage,
        "convergent": {"index": out.convergent_used.index, "p": str(out.convergent_used.p), "q": str(out.convergent_used.q)},
        "xi_min": ball_record(out.xi),
        "bound": str(out.kappa_bound),
        "family_size": out.family_size,
    }


def run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.command == "term":
        result = {"n": str(args.n), "value": str(term(args.n))}
        if args.binet:
            result["binet"] = str(binet_term(args.n, make_constants(config.precision_digits)))
        _write(args, _dump(result))
        return EXIT_OK
    if args.command == "search":
        hits = small_range_search(config.n_max, config.u_max, config.threads)
        _write(args, "".join(json.dumps(h.to_dict(), sort_keys=True) + "\n" for h in hits))
        return EXIT_OK
    if args.command == "bounds":
        bounds = analytic_bounds(make_constants(config.precision_digits))
        derived = derived_constants(bounds)
        table = {
            name: {
                "derived": ball_record(derived[name]),
                "published_target": target,
                "within_target": derived[name] <= target_ceiling(target),
            }
            for name, target in PUBLISHED_TARGETS.items()
        }
        _write(args, _dump(table))
        return EXIT_OK
    if args.command == "reduce":
        consts = make_constants(config.precision_digits)
        common = dict(lookahead=config.lookahead, threads=config.threads)
        u1 = args.u1_max
        u2 = args.u2_max
        if args.stage == 1:
            out = reduce_stage1(consts, config.M, **common)
        else:
            if u1 is None:
                u1 = reduce_stage1(consts, config.M, **common).kappa_bound
            if args.stage == 2:
                out = reduce_stage2(consts, config.M, u1, **common)
            else:
                if u2 is None:
                    u2 = reduce_stage2(consts, config.M, u1, **common).kappa_bound
                out = reduce_stage3(consts, config.M, u1, u2, **common)
        _write(args, _dump(_reduction_json(out)))
        return EXIT_OK
    cert = prove(config)
    if args.out is not None:
        emit_certificate(cert, args.out)
    else:
        sys.stdout.write(cert.to_json())
    print(f"status: {cert.status}" + (f" (failing stage: {cert.failing_stage})" if cert.failing_stage else ""), file=sys.stderr)
    return EXIT_OK if cert.status == "proved" else EXIT_INCOMPLETE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
