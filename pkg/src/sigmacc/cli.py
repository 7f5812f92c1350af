"""``sigmacc`` command line.

Exit codes: 0 success, 1 validation failure, 2 precondition mismatch or
usage error, 3 oracle violation, 4 budget exhaustion.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys

from sigmacc import conditions as cond
from sigmacc.antichains import ladder, max_antichain, pair_lines
from sigmacc.errors import InvalidCondition, InvalidParams, ParseError, SigmaCCError
from sigmacc.oracles import builtin_oracle, open_oracle, serve
from sigmacc.order import blocking_witness, is_blocking
from sigmacc.partition import color_pair, coverage_check, format_colors, signature
from sigmacc.refuter import RefuterConfig, refute
from sigmacc.tree import Caps, format_node, parse_node

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH, EXIT_ORACLE, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(SigmaCCError):
    exit_code = EXIT_MISMATCH


def _caps(args) -> Caps:
    return Caps(height=args.height, width=args.width)


def _read_lines(path):
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _load(args) -> list:
    """Parse, validate and canonicalize every condition in the input file."""
    caps = _caps(args)
    family = []
    for lineno, F in cond.iter_condition_lines(_read_lines(args.file)):
        try:
            cond.validate(F, caps)
        except InvalidCondition as exc:
            raise InvalidCondition(exc.code, f"line {lineno}: {exc.detail}") from None
        family.append(cond.canonicalize(F))
    return family


def cmd_validate(args, out) -> int:
    caps = _caps(args)
    status = EXIT_OK
    total = 0
    try:
        entries = list(cond.iter_condition_lines(_read_lines(args.file)))
    except ParseError as exc:
        out.write(f"INVALID ParseError {exc}\n")
        return EXIT_INVALID
    for lineno, F in entries:
        total += 1
        try:
            cond.validate(F, caps)
        except InvalidCondition as exc:
            out.write(f"line {lineno}: INVALID {exc.code} {exc.detail}\n".rstrip() + "\n")
            status = EXIT_INVALID
        else:
            out.write(f"line {lineno}: OK {cond.format_condition(F)}\n")
    out.write(("VALID" if status == EXIT_OK else "INVALID") + f" conditions={total}\n")
    return status


def cmd_compat(args, out) -> int:
    family = _load(args)
    if len(family) != 2:
        raise UsageError(f"compat needs exactly 2 conditions, got {len(family)}")
    F, G = family
    w = blocking_witness(F, G)
    if w is None:
        out.write("COMPAT\n")
        return EXIT_OK
    verified = "yes" if is_blocking(w, F, G) else "no"
    out.write(f"ORTHO witness={format_node(w)} verified={verified}\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    for F in _load(args):
        out.write(f"{signature(F)}\n")
    return EXIT_OK


def cmd_color(args, out) -> int:
    family = _load(args)
    report = coverage_check(family)
    for (i, j), colors in sorted(report.pair_colors.items()):
        kind = "ORTHO" if blocking_witness(family[i], family[j]) is not None else "COMPAT"
        out.write(f"{i} {j} {kind} {format_colors(colors)}\n")
    stats = " ".join(f"family{f}={report.color_counts[f]}" for f in (1, 2, 3, 4))
    verdict = "COVERED" if report.ok else "UNCOVERED"
    sig = report.signature if report.signature is not None else "-"
    out.write(
        f"{verdict} signature={sig} pairs={report.pairs} orthogonal={report.orthogonal_pairs} "
        f"violations={len(report.violations)} {stats}\n"
    )
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_antichain(args, out) -> int:
    family = _load(args)
    res = max_antichain(family, args.budget)
    members = ",".join(str(i) for i in res.indices)
    out.write(f"MAX_ANTICHAIN size={len(res.indices)} exact={str(res.exact).lower()} members={members}\n")
    for line in pair_lines(res.indices, res.members):
        out.write(line + "\n")
    return EXIT_OK


def _parse_bounds(text):
    if not text:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InvalidParams(f"bounds must be comma-separated integers, got {text!r}") from None


def _refuter_config(args) -> RefuterConfig:
    fields = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            fields = json.load(fh)
        known = {f.name for f in dataclasses.fields(RefuterConfig)}
        unknown = set(fields) - known - {"height", "width"}
        if unknown:
            raise InvalidParams(f"unknown config keys: {', '.join(sorted(unknown))}")
    height = fields.pop("height", args.height)
    width = fields.pop("width", args.width)
    fields["caps"] = Caps(height=height, width=width)
    if "stem" in fields:
        fields["stem"] = parse_node(str(fields["stem"]))
    for name in ("gadget_width", "max_rounds", "seed"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    if args.stem is not None:
        fields["stem"] = parse_node(args.stem)
    try:
        return RefuterConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise InvalidParams(str(exc)) from None


def cmd_refute(args, out) -> int:
    config = _refuter_config(args)
    with open_oracle(args.oracle, _parse_bounds(args.bounds), config.seed) as oracle:
        report = refute(oracle, config)
    out.write(report.to_text())
    return EXIT_OK if report.violation else EXIT_BUDGET


def cmd_gen(args, out) -> int:
    caps = _caps(args)
    if args.kind == "ladder":
        if args.size < 1:
            raise InvalidParams("ladder size must be positive")
        stem = parse_node(args.stem, allow_root=True)
        family = ladder(stem, args.size, caps)
    else:
        if args.count < 0:
            raise InvalidParams("count must be non-negative")
        params = cond.RandomParams(
            min_limits=1,
            max_limits=args.max_limits,
            max_rays=args.max_rays,
            max_explicit=args.max_explicit,
            height=args.gen_height,
            width=args.gen_width,
            max_index_from=args.max_index_from,
        )
        rng = random.Random(args.seed)
        family = [cond.random_condition(params, rng) for _ in range(args.count)]
    for F in family:
        out.write(cond.format_condition(F) + "\n")
    return EXIT_OK


def cmd_oracle_serve(args, out) -> int:
    kind, _, name = args.oracle.partition(":")
    if kind != "builtin":
        raise InvalidParams("oracle-serve only serves builtin:<name> oracles")
    return serve(builtin_oracle(name, _parse_bounds(args.bounds), args.seed), sys.stdin, out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigmacc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def caps_flags(sp):
        sp.add_argument("--height", type=int, default=8, help="tree height cap (default 8)")
        sp.add_argument("--width", type=int, default=None, help="entry width cap (default none)")

    def file_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="one condition per line, '#' starts a comment; '-' for stdin")
        caps_flags(sp)
        sp.set_defaults(func=func)
        return sp

    file_cmd("validate", cmd_validate, "check every condition")
    file_cmd("compat", cmd_compat, "compatibility of two conditions")
    file_cmd("classify", cmd_classify, "partition signature (k,n,m) per condition")
    file_cmd("color", cmd_color, "pair colors and coverage for one signature class")
    sp = file_cmd("antichain", cmd_antichain, "maximum antichain search")
    sp.add_argument("--budget", type=int, default=1_000_000, help="search node budget above 40 members")

    sp = sub.add_parser("refute", help="refute a finite bounded chain-condition decomposition")
    sp.add_argument("--oracle", required=True, help="builtin:<name> or exec:<command>")
    sp.add_argument("--bounds", default=None, help="claimed bounds for builtin oracles, e.g. 4,4")
    sp.add_argument("--config", default=None, help="JSON file with refuter settings")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--gadget-width", dest="gadget_width", type=int, default=None)
    sp.add_argument("--max-rounds", dest="max_rounds", type=int, default=None)
    sp.add_argument("--stem", default=None, help="starting stem (default 0)")
    caps_flags(sp)
    sp.set_defaults(func=cmd_refute)

    sp = sub.add_parser("gen", help="generate a condition file")
    sp.add_argument("--kind", choices=("ladder", "random"), required=True)
    sp.add_argument("--size", type=int, default=4, help="ladder size")
    sp.add_argument("--stem", default="^", help="ladder stem ('^' for the root)")
    sp.add_argument("--count", type=int, default=10, help="number of random conditions")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-limits", dest="max_limits", type=int, default=3)
    sp.add_argument("--max-rays", dest="max_rays", type=int, default=2)
    sp.add_argument("--max-explicit", dest="max_explicit", type=int, default=3)
    sp.add_argument("--gen-height", dest="gen_height", type=int, default=4)
    sp.add_argument("--gen-width", dest="gen_width", type=int, default=6)
    sp.add_argument("--max-index-from", dest="max_index_from", type=int, default=3)
    caps_flags(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("oracle-serve", help="serve a builtin oracle over stdin/stdout")
    sp.add_argument("oracle", help="builtin:<name>")
    sp.add_argument("--bounds", default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_oracle_serve)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InvalidCondition as exc:
        print(f"error: INVALID {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SigmaCCError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
