"""Command-line interface: ``fsrel <command> [options]``.

Exit status is 0 on success, 1 when an audit or verification fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterable, Sequence

from .audit import SUITES, AuditSpec, run_audit
from .centralizer import CentralizerQuery, centralizer_window, double_centralizer_window
from .families import ClosureCapError, FreshPoints, WindowedSubset, enumerate_filtered, family_from_spec
from .relation import (
    FiniteRelation,
    RelationError,
    WindowCapError,
    commutes,
    compose,
    format_cycles,
    format_relation,
    inverse,
    is_permutation,
    parse_relation,
    to_json,
)
from .zariski import (
    NeighborhoodWitness,
    WitnessError,
    isolation_witness,
    lemma2_neighborhood,
    verify_neighborhood,
)


class UsageError(Exception):
    pass


def parse_window(text: str) -> tuple[int, ...]:
    """``"a..b"`` (inclusive) or a comma list such as ``"0,2,5"``."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError:
        raise UsageError(f"bad window {text!r}; use a..b or a comma list") from None


def _display(f: FiniteRelation) -> str:
    return format_cycles(f) if is_permutation(f) else format_relation(f)


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _relations(args, stdin) -> list[FiniteRelation]:
    texts = list(args.relations) or [ln for ln in stdin.read().splitlines() if ln.strip()]
    return [parse_relation(t) for t in texts]


def _fresh(args, relations: Iterable[FiniteRelation] = (), points: Iterable[int] = ()) -> FreshPoints:
    if args.fresh_from is not None:
        return FreshPoints(args.fresh_from)
    mentioned = set(points)
    for r in relations:
        mentioned |= r.support_set
    return FreshPoints(max(mentioned, default=-1) + 1)


def _need(rels, count, name):
    if len(rels) != count:
        raise UsageError(f"{name} takes exactly {count} relation(s), got {len(rels)}")


def cmd_compose(args, out, stdin):
    rels = _relations(args, stdin)
    if not rels:
        raise UsageError("compose needs at least one relation")
    acc = rels[0]
    for r in rels[1:]:
        acc = compose(acc, r)
    print(format_relation(acc), file=out)
    return 0


def cmd_inverse(args, out, stdin):
    for r in _relations(args, stdin):
        print(format_relation(inverse(r)), file=out)
    return 0


def cmd_support(args, out, stdin):
    for r in _relations(args, stdin):
        print(_dump(list(r.support)), file=out)
    return 0


def cmd_commutes(args, out, stdin):
    rels = _relations(args, stdin)
    _need(rels, 2, "commutes")
    print("true" if commutes(*rels) else "false", file=out)
    return 0


def cmd_enum(args, out, stdin):
    fam = family_from_spec(args.family)
    kind, value = "all", None
    for k in ("supp_le", "supp_eq", "supp_contains"):
        if getattr(args, k) is not None:
            kind, value = k, getattr(args, k)
    elems = list(enumerate_filtered(WindowedSubset(fam, args.window, kind, value), args.cap_override))
    _emit_list(args, out, elems)
    return 0


def _emit_list(args, out, elems):
    if args.json:
        print(_dump([to_json(f) for f in elems]), file=out)
    else:
        for f in elems:
            print(_display(f), file=out)
        print(f"# {len(elems)} element(s)", file=out)


def cmd_centralizer(args, out, stdin):
    fam = family_from_spec(args.family)
    q = CentralizerQuery(fam, args.window, tuple(_relations(args, stdin)))
    fn = double_centralizer_window if args.double else centralizer_window
    _emit_list(args, out, fn(q, args.cap_override))
    return 0


def cmd_witness_prop2(args, out, stdin):
    fam = family_from_spec(args.family)
    if not fam.witness_capable:
        raise UsageError(f"{fam.name} cannot construct witnesses")
    g = fam.prop2_witness_raw(args.x, args.exclude, _fresh(args, points=(*args.exclude, args.x)))
    print(format_relation(g) if args.json else _display(g), file=out)
    return 0


def _emit_witness(args, out, w: NeighborhoodWitness):
    if args.json:
        print(_dump(w.to_json()), file=out)
        return
    print(f"center {_display(w.center)}  n={w.n}", file=out)
    for step in w.trace:
        print(f"  x={step.x} branch {step.branch}  F: {list(step.f_before)} -> {list(step.f_after)}",
              file=out)
    print(f"commute constraints ({len(w.commute_constraints)}):", file=out)
    for g in w.commute_constraints:
        print(f"  {_display(g)}", file=out)
    print(f"exclusions ({len(w.exclusions)}):", file=out)
    for e in w.exclusions:
        print(f"  {_display(e)}", file=out)


def cmd_witness_neighborhood(args, out, stdin):
    if args.n is None:
        raise UsageError("witness-neighborhood needs --n")
    fam = family_from_spec(args.family)
    rels = _relations(args, stdin)
    _need(rels, 1, "witness-neighborhood")
    w = lemma2_neighborhood(fam, rels[0], args.n, _fresh(args, rels), args.window or None)
    _emit_witness(args, out, w)
    return 0


def cmd_witness_isolate(args, out, stdin):
    fam = family_from_spec(args.family)
    rels = _relations(args, stdin)
    _need(rels, 1, "witness-isolate")
    w = isolation_witness(fam, rels[0], _fresh(args, rels), args.window or None)
    _emit_witness(args, out, w)
    return 0


def cmd_verify(args, out, stdin):
    fam = family_from_spec(args.family)
    text = args.witness if args.witness is not None else stdin.read()
    try:
        w = NeighborhoodWitness.from_json(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed witness JSON: {exc}") from None
    window = args.window if args.window is not None else w.center.support
    rep = verify_neighborhood(fam, w, window, args.cap_override)
    if args.json:
        print(_dump(rep.to_json(summary=args.summary)), file=out)
    else:
        print(f"{rep.verdict}: enumerated={rep.enumerated} in_O={rep.in_o} "
              f"center_in_O={rep.center_in_o} counterexamples={len(rep.counterexamples)} "
              f"window={list(rep.window)}", file=out)
    return 0 if rep.verdict == "pass" else 1


def cmd_audit(args, out, stdin):
    if args.window is None:
        raise UsageError("audit needs --window")
    targets = tuple(parse_relation(t) for t in args.target or ())
    spec = AuditSpec(args.suite, args.family, args.window, n=args.n, seed=args.seed,
                     samples=args.samples, targets=targets, cap_override=args.cap_override)
    rep = run_audit(spec)
    if args.json:
        print(_dump(rep.to_json(summary=args.summary)), file=out)
    else:
        print(f"{spec.suite} [{spec.family}, window {list(spec.window)}]: {rep.verdict} "
              f"(checked={rep.checked}, failures={rep.failure_count}, "
              f"{int(rep.wall_time * 1000)} ms)", file=out)
        for rec in rep.failures:
            print(f"  {_dump(rec)}", file=out)
    return 0 if rep.verdict == "pass" else 1


COMMANDS = {
    "compose": cmd_compose,
    "inverse": cmd_inverse,
    "support": cmd_support,
    "commutes": cmd_commutes,
    "enum": cmd_enum,
    "centralizer": cmd_centralizer,
    "witness-prop2": cmd_witness_prop2,
    "witness-neighborhood": cmd_witness_neighborhood,
    "witness-isolate": cmd_witness_isolate,
    "verify": cmd_verify,
    "audit": cmd_audit,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--family", default="frel", help="frel, fsym, ffun or gen:<path>")
    common.add_argument("--window", type=parse_window, default=None)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--fresh-from", type=int, default=None)
    common.add_argument("--json", action="store_true")
    common.add_argument("--summary", action="store_true")
    common.add_argument("--cap-override", action="store_true")

    parser = _Parser(prog="fsrel", description="Finitely supported relations and discreteness witnesses.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name in ("compose", "inverse", "support", "commutes", "centralizer",
                 "witness-neighborhood", "witness-isolate"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("relations", nargs="*", help="relation JSON or perm:(...) shorthand")
        if name == "centralizer":
            p.add_argument("--double", action="store_true", help="double centralizer")

    p = sub.add_parser("enum", parents=[common])
    p.add_argument("--supp-le", dest="supp_le", type=int)
    p.add_argument("--supp-eq", dest="supp_eq", type=int)
    p.add_argument("--supp-contains", dest="supp_contains", type=int)

    p = sub.add_parser("witness-prop2", parents=[common])
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--exclude", type=parse_window, default=())

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("witness", nargs="?", help="witness JSON (default: stdin)")

    p = sub.add_parser("audit", parents=[common])
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--target", action="append", help="fdc target relation (repeatable)")
    return parser


def main(argv: Sequence[str] | None = None, out=None, stdin=None) -> int:
    out = out or sys.stdout
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
        if args.command in ("enum", "centralizer") and args.window is None:
            raise UsageError(f"{args.command} needs --window")
        return COMMANDS[args.command](args, out, stdin)
    except (UsageError, RelationError, WindowCapError, ClosureCapError, WitnessError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
