"""``posetkit`` command line.

Exit codes: 0 success / property holds, 1 property fails, 2 usage or
precondition error, 3 input parse error.
"""

import argparse
import json
import sys

from . import census, maps, realizability, surgery
from .errors import ParseError, PosetError, SizeLimitExceeded
from .fileio import (
    SEPARATOR,
    format_map,
    format_poset,
    load_map,
    load_poset,
    to_dot,
)
from .maps import PosetMap

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args, path=None):
    return load_poset(path or args.file, strict_covers=args.strict_covers)


def _nodes(p, labels):
    try:
        return [p.index(lab) for lab in labels]
    except PosetError as exc:
        raise UsageError(str(exc)) from None


# -- check -------------------------------------------------------------------


def cmd_check(args):
    p = _load(args)
    fn = realizability.check_local_ufd if args.mode == "local" else realizability.check_nonlocal_ufd
    report = fn(p)
    if args.json:
        print(report.to_json())
    else:
        verdict = "realizable" if report.verdict else "NOT realizable"
        print(f"{args.mode}: {verdict} (dim {p.dim}, {p.n} nodes)")
        for v in report.violations:
            pairs = ", ".join(f"{n} (height {h})" for n, h in zip(v.nodes, v.heights))
            print(f"  {v.kind}: {pairs}")
    return EXIT_OK if report.verdict else EXIT_FALSE


# -- surgery -------------------------------------------------------------------


def cmd_surgery(args):
    p = _load(args)
    op = args.op
    if op == "glue":
        if not args.nodes:
            raise UsageError("glue needs --nodes")
        r = surgery.glue(p, _nodes(p, args.nodes))
        glued = " ".join(p.labels[i] for i in r.glued)
        text = format_poset(
            r.quotient,
            [f"glued {glued} into {r.quotient.labels[r.glued_node]}"],
        )
    elif op == "retract":
        (x,) = _nodes(p, [_one(args)])
        text = format_poset(surgery.retract(p, x), [f"retracted at {p.labels[x]}"])
    elif op == "split":
        (u,) = _nodes(p, [_one(args)])
        r = surgery.split(p, u)
        new = " ".join(r.poset.labels[i] for i in r.glued)
        text = format_poset(
            r.poset,
            [f"split {p.labels[u]} into {new}", f"n = {surgery.n_value(r.poset)}"],
        )
    elif op == "attach":
        (x,) = _nodes(p, [_one(args)])
        text = format_poset(
            surgery.attach_below(p, x, args.count),
            [f"attached {args.count} node(s) below {p.labels[x]}"],
        )
    elif op == "reduce":
        seq = surgery.reduce_to_point(p)
        docs = []
        for i, q in enumerate(seq.posets):
            notes = [f"stage {i + 1} of {len(seq.posets)}"]
            if i < len(seq.steps):
                notes.append(f"step {i + 1} to next stage: {seq.steps[i].describe()}")
            docs.append(format_poset(q, notes))
        text = (SEPARATOR + "\n").join(docs)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown operation {op}")
    _emit(args, text)
    return EXIT_OK


def _one(args):
    if args.node is None:
        raise UsageError(f"{args.op} needs --node")
    return args.node


# -- construct ---------------------------------------------------------------


def cmd_construct(args):
    p = _load(args)
    which = args.which
    if which == "extension":
        ext, pairing = realizability.extension_poset(p)
        poset_text = format_poset(ext, [f"pairing: {a} -> {b}" for a, b in pairing])
        map_text = format_map(
            _pairing_map(ext, pairing), ["new minimal -> height-one node it sits below"]
        )
    else:
        build = {
            "add-top": realizability.add_top,
            "add-bottom": realizability.add_bottom,
            "dim-plus-one": realizability.dim_plus_one,
        }[which]
        c = build(p)
        notes = [f"{which} of input (dim {p.dim} -> {c.poset.dim})"]
        if which == "dim-plus-one":
            notes.append("risky minimals: " + (" ".join(c.extra["risky"]) or "none"))
        poset_text = format_poset(c.poset, notes)
        map_text = format_map(c.inclusion, ["inclusion of the input"])
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(poset_text)
        with open(args.output + ".map", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(map_text)
    else:
        sys.stdout.write(poset_text + SEPARATOR + "\n" + map_text)
    return EXIT_OK


def _pairing_map(ext, pairing):
    """Map from the new minimals (as a subposet) to their partners."""
    mins = ext.induced_subposet(ext.index(a) for a, _ in pairing)
    return PosetMap.from_pairs(mins, ext, pairing)


# -- map-check ---------------------------------------------------------------


def cmd_map_check(args):
    dom = _load(args, args.domain)
    cod = _load(args, args.codomain)
    f = load_map(args.map, dom, cod)
    if args.property == "coheight":
        along = None
        if args.along:
            along = _nodes(cod, args.along)
        bad = maps.coheight_violation(f, along)
    else:
        bad = maps.PROPERTIES[args.property](f)
    if bad is None:
        print(f"{args.property}: holds")
        return EXIT_OK
    print(f"{args.property}: fails")
    if args.explain:
        reason, where = bad
        print(f"  {reason}: {' '.join(where)}" if where else f"  {reason}")
    return EXIT_FALSE


# -- render ------------------------------------------------------------------


def cmd_render(args):
    _emit(args, to_dot(_load(args)))
    return EXIT_OK


# -- census ------------------------------------------------------------------


def cmd_census(args):
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    if args.max_n > census.DEFAULT_MAX_N:
        raise SizeLimitExceeded(
            f"--max-n {args.max_n} exceeds the limit of {census.DEFAULT_MAX_N}"
        )
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    rows, failures = census.classify(args.max_n, jobs=args.jobs)
    out = {"rows": [r.__dict__ for r in rows]}
    violations = 0
    text = [census.format_table(rows)]
    if args.verify in ("reduce", "all"):
        red = {
            "unique_max_classes": sum(r.unique_max for r in rows),
            "reduced": sum(r.reduced_ok for r in rows),
            "failures": len(failures),
        }
        out["reduction"] = red
        violations += red["failures"]
        text.append(
            f"reduction: {red['reduced']}/{red['unique_max_classes']} unique-max classes"
            f" reduced and replayed, {red['failures']} failures"
        )
    if args.verify in ("lemmas", "all"):
        lem = census.verify_surgery_lemmas(
            args.max_n, random_trials=args.trials, seed=args.seed, jobs=args.jobs
        )
        out["lemmas"] = lem
        violations += lem["violations"]
        text.append(census.format_lemmas(lem))
    out["violations"] = violations
    if args.json:
        _emit(args, json.dumps(out, indent=2) + "\n")
    else:
        text.append(f"violations: {violations}")
        _emit(args, "\n".join(text) + "\n")
    return EXIT_OK if violations == 0 else EXIT_FALSE


# -- parser ------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--strict-covers",
        action="store_true",
        help="reject 'rel:' lines that are not covering pairs",
    )
    common.add_argument("-o", "--output", metavar="FILE", help="write output to FILE")

    parser = argparse.ArgumentParser(prog="posetkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="realizability conditions")
    p.add_argument("file")
    p.add_argument("--mode", choices=("local", "nonlocal"), default="local")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("surgery", parents=[common], help="glue, split, retract, attach, reduce")
    p.add_argument("file")
    p.add_argument("op", choices=("glue", "retract", "split", "reduce", "attach"))
    p.add_argument("--nodes", nargs="+", metavar="LABEL", help="nodes to glue")
    p.add_argument("--node", metavar="LABEL", help="node for split/retract/attach")
    p.add_argument("--count", type=int, default=1, help="nodes to attach (default 1)")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("construct", parents=[common], help="add-top, dim-plus-one, ...")
    p.add_argument("file")
    p.add_argument("which", choices=("add-top", "add-bottom", "dim-plus-one", "extension"))
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("map-check", parents=[common], help="check a property of a map")
    p.add_argument("domain")
    p.add_argument("codomain")
    p.add_argument("map")
    p.add_argument(
        "--property",
        choices=("map", "embedding", "saturated", "dim", "coheight"),
        default="saturated",
    )
    p.add_argument("--along", nargs="+", metavar="LABEL", help="coheight targets")
    p.add_argument("--explain", action="store_true", help="print the first violation")
    p.set_defaults(func=cmd_map_check)

    p = sub.add_parser("render", parents=[common], help="Hasse diagram as DOT")
    p.add_argument("file")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("census", help="exhaustive population checks")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000, help="random lemma cases")
    p.add_argument("--verify", choices=("reduce", "lemmas", "all"), default="all")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PosetError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
