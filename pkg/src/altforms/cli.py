"""Command-line front end: ``altforms <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 unsupported case or infinite orbit family.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional, Sequence

from . import checks
from .catalog import (
    ClassificationError, InfiniteFamilyError, UnsupportedCaseError, classify, find_entry,
    load_catalog_file, published_counts, sample_orbit, theorem_table,
)
from .catalog.build import CatalogError
from .catalog.classify import Classification, orbit_key
from .catalog.table import fmt_count, infinite_row
from .exterior import KForm, ParseError, act_on_form, act_on_multivector, format_form, parse_form, parse_matrix
from .orbits import (
    annihilator, fingerprint, hodge_dual, inverse_hodge_dual, is_nondegenerate, is_stable, orbit_tangent_rank,
    two_form_rank,
)
from .sampling import random_gl

OK, VERIFY_FAILED, INPUT_ERROR, UNSUPPORTED = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _require_n(args) -> int:
    if args.n is None:
        raise CommandError(INPUT_ERROR, "--n is required: a form does not determine its ambient dimension")
    if args.n < 1:
        raise CommandError(INPUT_ERROR, f"--n must be positive, got {args.n}")
    return args.n


def _parse(args, kind: str = "form"):
    return parse_form(args.expr, n=_require_n(args), k=args.k, kind=kind)


def _braces(args) -> bool:
    return "{" in args.expr


# ---------------------------------------------------------------------------
# commands: each returns (result payload, human-readable lines, status)

def cmd_analyze(args):
    alpha = _parse(args)
    n, k = alpha.n, alpha.k
    tangent = orbit_tangent_rank(alpha)
    result = {
        "n": n, "k": k,
        "nondegenerate": is_nondegenerate(alpha),
        "annihilator_dim": annihilator(alpha).dim,
        "stable": is_stable(alpha),
        "tangent_rank": tangent,
        "stabilizer_dim": n * n - tangent,
        "fingerprint": fingerprint(alpha).to_dict(),
    }
    if k == 2:
        result["rank"] = two_form_rank(alpha)
    lines = [f"{key}: {json.dumps(result[key], sort_keys=True)}" for key in sorted(result)]
    return result, lines, OK


def _override_entries(path: str, n: int, k: int):
    try:
        entries = [e for e in load_catalog_file(path) if (e.n, e.k) == (n, k)]
    except (OSError, ValueError, KeyError) as exc:
        raise CommandError(INPUT_ERROR, f"cannot load catalog {path}: {exc}") from None
    if not entries:
        raise CommandError(UNSUPPORTED, f"catalog {path} has no entries for (n, k) = ({n}, {k})")
    return entries


def _classify_against(alpha: KForm, entries) -> Classification:
    key = orbit_key(alpha)
    ids = tuple(e.id for e in entries if orbit_key(e.rep) == key)
    if not ids:
        raise ClassificationError(f"no ({alpha.n}, {alpha.k}) catalog entry matches the fingerprint")
    if len(ids) == 1:
        return Classification(ids[0], "fingerprint-unique")
    return Classification(ids[0], "ambiguous", ids)


def cmd_classify(args):
    alpha = _parse(args)
    n, k = alpha.n, alpha.k
    if infinite_row(n, k):
        raise InfiniteFamilyError(n, k)
    if args.catalog:
        got = _classify_against(alpha, _override_entries(args.catalog, n, k))
    else:
        got = classify(alpha)
    result = got.to_dict()
    line = f"{got.orbit_id} ({got.certainty})"
    if got.candidates:
        line += " candidates: " + ", ".join(got.candidates)
    return result, [line], OK


def cmd_dual(args):
    if args.inverse:
        value = inverse_hodge_dual(_parse(args, "form"))
    else:
        value = hodge_dual(_parse(args, "vector"))
    text = format_form(value, braces=_braces(args))
    return {"n": value.n, "k": value.k, "value": text}, [text], OK


def cmd_act(args):
    try:
        g = parse_matrix(args.matrix)
    except (ValueError, ZeroDivisionError) as exc:
        raise CommandError(INPUT_ERROR, f"bad matrix: {exc}") from None
    if args.n is not None and args.n != g.n:
        raise CommandError(INPUT_ERROR, f"--n {args.n} does not match the {g.n}x{g.n} matrix")
    x = parse_form(args.expr, n=g.n, k=args.k, kind="vector" if args.vector else "form")
    value = act_on_multivector(g, x) if args.vector else act_on_form(g, x)
    text = format_form(value, braces=_braces(args))
    return {"n": value.n, "k": value.k, "value": text}, [text], OK


def cmd_table(args):
    rows = theorem_table(verify=False)
    mismatches = []
    for row in rows:
        want = published_counts(row.n, row.k)
        for column in ("total", "nondegenerate", "stable"):
            if getattr(row, column) != getattr(want, column):
                mismatches.append(f"cell ({row.n},{row.k}) {column}: computed "
                                  f"{fmt_count(getattr(row, column))}, expected {fmt_count(getattr(want, column))}")
    lines = ["n k  orbits/non-degenerate/stable"]
    lines += [f"{r.n} {r.k}  {fmt_count(r.total)}/{fmt_count(r.nondegenerate)}/{r.stable}" for r in rows]
    result = {"rows": [r.to_dict() for r in rows]}
    status = OK
    if args.verify:
        result["verified"] = not mismatches
        result["mismatches"] = mismatches
        if mismatches:
            status = VERIFY_FAILED
            lines += ["MISMATCH " + m for m in mismatches]
        else:
            lines.append("all cells match the published table")
    return result, lines, status


def cmd_selfcheck(args):
    if args.trials < 1:
        raise CommandError(INPUT_ERROR, "--trials must be positive")
    suites = checks.run_all(args.seed, args.trials)
    lines = []
    for s in suites:
        lines.append(f"{'PASS' if s.passed else 'FAIL'} {s.name} ({s.checked} checks)")
        lines += [f"    {f}" for f in s.failures[:checks.MAX_REPORTED]]
    status = OK if all(s.passed for s in suites) else VERIFY_FAILED
    return {"suites": [s.to_dict() for s in suites]}, lines, status


def cmd_sample(args):
    if args.catalog:
        try:
            n, k, _ = (int(x) for x in args.orbit_id.split("-"))
        except ValueError:
            raise CommandError(INPUT_ERROR, f"malformed orbit id {args.orbit_id!r}") from None
        entries = {e.id: e for e in _override_entries(args.catalog, n, k)}
        if args.orbit_id not in entries:
            raise CommandError(INPUT_ERROR, f"unknown orbit id {args.orbit_id!r}")
        entry = entries[args.orbit_id]
        rng = random.Random(f"{entry.id}:{args.seed}")
        value = act_on_form(random_gl(n, rng, det_sign=1 if entry.orientation else None), entry.rep)
    else:
        try:
            find_entry(args.orbit_id)
        except KeyError as exc:
            raise CommandError(INPUT_ERROR, exc.args[0]) from None
        value = sample_orbit(args.orbit_id, args.seed)
    text = format_form(value)
    return {"orbit_id": args.orbit_id, "seed": args.seed, "n": value.n, "k": value.k, "value": text}, [text], OK


# ---------------------------------------------------------------------------
# argument parsing

def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags, accepted both before and after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--n", type=int, default=d(None), help="ambient dimension")
    parser.add_argument("--k", type=int, default=d(None), help="degree (needed only for the zero form)")
    parser.add_argument("--json", action="store_true", default=d(False), help="emit canonical JSON")
    parser.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    parser.add_argument("--catalog", default=d(None), metavar="PATH", help="catalog file overriding the built-in one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altforms", description="Orbits of GL(n, R) on alternating k-forms.",
        epilog="Expressions starting with '-' must follow '--', e.g. altforms analyze --n 4 -- -e12.")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("analyze", parents=[common], help="degeneracy, stability and invariants of a form")
    p.add_argument("expr", help='form expression, e.g. "e123 + 2*e456"')
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", parents=[common], help="catalog orbit of a form")
    p.add_argument("expr")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("dual", parents=[common], help="the form iota_xi Omega of a multivector xi")
    p.add_argument("expr", help='multivector expression, e.g. "e{1,2,3}"')
    p.add_argument("--inverse", action="store_true", help="map a form back to its multivector")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("act", parents=[common], help="apply g in GL(n): pullback alpha o g for forms, push-forward for multivectors")
    p.add_argument("--matrix", required=True, help='rows separated by ";", entries by "," (e.g. "2,0;0,1")')
    p.add_argument("--vector", action="store_true", help="treat the expression as a multivector")
    p.add_argument("expr")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("table", parents=[common], help="orbit counts for 2 <= n <= 9")
    p.add_argument("--verify", action="store_true", help="compare with the published table")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("selfcheck", parents=[common], help="run the randomized property suites")
    p.add_argument("--trials", type=int, default=5, help="random trials per case (default 5)")
    p.set_defaults(func=cmd_selfcheck)

    p = sub.add_parser("sample", parents=[common], help="a seeded random form in a catalog orbit")
    p.add_argument("orbit_id")
    p.set_defaults(func=cmd_sample)
    return parser


def _input_summary(args) -> dict:
    skip = {"func", "command", "json"}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skip}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, lines, status = args.func(args)
        error = None
    except CommandError as exc:
        result, lines, status, error = None, [], exc.status, str(exc)
    except (InfiniteFamilyError, UnsupportedCaseError) as exc:
        result, lines, status, error = None, [], UNSUPPORTED, str(exc)
    except ClassificationError as exc:
        result, lines, status, error = None, [], VERIFY_FAILED, str(exc)
    except (ParseError, CatalogError, ValueError) as exc:
        result, lines, status, error = None, [], INPUT_ERROR, str(exc)

    if args.json:
        report = {"command": args.command, "input": _input_summary(args), "result": result, "status": status}
        if error is not None:
            report["error"] = error
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)
        if error is not None:
            print(f"error: {error}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
