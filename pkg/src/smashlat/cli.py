"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 engine
invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness, modelio, models, search
from .harness import Caps
from .modelio import ParseError, export_dot, model_from_spec, parse_model, serialize_model
from .models import TruncationParams
from .ops import classify_model, structural_flags, SubsetCapExceeded
from .order import InvariantBreach, LatticeError
from .quantale import AxiomReport, AxiomViolation, IncompleteTable, ModelError, validate_axioms

SUBCOMMANDS = ("validate", "classify", "flags", "lemmas", "builtin", "search", "dot")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s\nsubcommands: %s" % (message, ", ".join(SUBCOMMANDS)))


def _add_source(p):
    p.add_argument("file", nargs="?", help=".sml model file")
    p.add_argument("--builtin", choices=sorted(models.BUILTINS))
    _add_params(p)


def _add_params(p):
    p.add_argument("--n", type=int, default=None, help="powerset / naive-sphere size")
    p.add_argument("--atoms", type=int, default=2, help="k-truncation finite atom count")
    p.add_argument("--threshold", type=int, default=2, help="k-truncation largeness threshold")
    p.add_argument("--telescopes", type=int, default=0, help="k-truncation extra atoms")


def _add_format(p, choices=("text", "json")):
    p.add_argument("--format", choices=choices, default="text")


def make_parser():
    parser = _Parser(prog="smashlat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("validate", help="check the quantale axioms of a model file")
    _add_source(p)
    _add_format(p)

    for name, helptext in [("classify", "tabulate a, r, A and DL/BA/cBA membership"),
                           ("flags", "structural flags P1-P4"),
                           ("lemmas", "evaluate every lemma statement")]:
        p = sub.add_parser(name, help=helptext)
        _add_source(p)
        _add_format(p)
        p.add_argument("--subset-cap", type=int, default=16)
        p.add_argument("--seed", type=int, default=0)
        if name == "classify":
            p.add_argument("--figure", help="write a Hasse diagram PNG here")

    p = sub.add_parser("builtin", help="write a built-in model as .sml")
    p.add_argument("name", choices=sorted(models.BUILTINS))
    _add_params(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("search", help="enumerate small models and report witnesses")
    p.add_argument("--size", required=True, help="N or A..B")
    p.add_argument("--pred", required=True, choices=sorted(search.PREDICATES))
    p.add_argument("-o", "--output", help="directory for witness .sml files")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--figure", help="write a witness-count bar chart PNG here")
    _add_format(p)

    p = sub.add_parser("dot", help="Graphviz Hasse diagram with region tags")
    _add_source(p)
    p.add_argument("-o", "--output")
    return parser


def _builtin_kwargs(name, args):
    if name == "powerset":
        return {"n": 2 if args.n is None else args.n}
    if name == "naive-sphere":
        return {"n": 2 if args.n is None else args.n}
    if name == "k-truncation":
        return {"p": TruncationParams(args.atoms, args.threshold, args.telescopes)}
    return {}


def _load(args):
    """Model from a file or --builtin; parse/lattice/axiom errors propagate."""
    if getattr(args, "builtin", None):
        if args.file:
            raise UsageError("give a file or --builtin, not both")
        obj = models.builtin(args.builtin, **_builtin_kwargs(args.builtin, args))
        return model_from_spec(obj) if isinstance(obj, modelio.ModelSpec) else obj
    if not args.file:
        raise UsageError("a model file or --builtin is required")
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    return model_from_spec(parse_model(text))


def _write(text, path, out):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _dump(doc, out):
    out.write(json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n")


def _labels(M, xs):
    return [M.label(x) for x in xs]


def _report_doc(name, L, report: AxiomReport):
    def lab(w):
        return sorted(L.names[y] for y in w) if isinstance(w, frozenset) else L.names[w]

    return {
        "model": name,
        "valid": report.passed,
        "violations": [
            {"axiom": v.axiom, "witness": [lab(w) for w in v.witness],
             "expected": L.names[v.expected], "actual": L.names[v.actual]}
            for v in report.violations
        ],
    }


def cmd_validate(args, out, err):
    try:
        M = _load(args)
    except AxiomViolation as e:
        if args.format == "json":
            _dump(_report_doc(args.file or args.builtin, e.lattice, e.report), out)
        else:
            out.write("invalid\n")
            for v in e.report.violations:
                out.write("  %s\n" % v.describe(e.lattice))
        return 2
    report = validate_axioms(M)
    if args.format == "json":
        _dump(_report_doc(M.name, M.lattice, report), out)
    else:
        out.write("valid: %s (%d elements)\n" % (M.name, M.size))
    return 0


def cmd_classify(args, out, err):
    M = _load(args)
    C = classify_model(M)
    summary = C.summary
    if args.format == "json":
        _dump({
            "model": M.name,
            "summary": summary,
            "elements": [
                {"element": M.label(x), "region": C.region(x), "pc": M.label(C.pc[x]),
                 "retract": M.label(C.retract[x]), "A": M.label(C.A[x]),
                 "A2": M.label(C.A2[x]), "DL": C.in_dl[x], "BA": C.in_ba[x], "cBA": C.in_cba[x]}
                for x in M.lattice.elements()
            ],
        }, out)
    else:
        out.write("# model %s\n" % M.name)
        out.write("# " + "  ".join("%s %d" % kv for kv in summary.items()) + "\n")
        gap = [x for x in M.lattice.elements() if C.in_dl[x] and not C.in_cba[x]]
        out.write("# DL∖cBA: %s\n" % (", ".join(_labels(M, gap)) or "none"))
        out.write("element\tregion\tpc\tretract\tA\tA2\tDL\tBA\tcBA\n")
        for x in M.lattice.elements():
            out.write("\t".join([M.label(x), C.region(x), M.label(C.pc[x]), M.label(C.retract[x]),
                                 M.label(C.A[x]), M.label(C.A2[x])]
                                + [str(int(f)) for f in (C.in_dl[x], C.in_ba[x], C.in_cba[x])])
                      + "\n")
    if args.figure:
        from .plotting import plot_hasse
        plot_hasse(M, C, args.figure)
    return 0


def _flags(M, args):
    try:
        return structural_flags(M, args.subset_cap)
    except SubsetCapExceeded:
        return structural_flags(M, args.subset_cap, seed=args.seed)


def _flags_doc(M, F):
    return {name: {"holds": f.holds, "witness": _labels(M, f.witness),
                   "sampled": f.sampled, "checked": f.checked}
            for name, f in F.items()}


def cmd_flags(args, out, err):
    M = _load(args)
    F = _flags(M, args)
    if args.format == "json":
        _dump({"model": M.name, "flags": _flags_doc(M, F)}, out)
    else:
        out.write("flag\tholds\tsampled\twitness\n")
        for name, f in F.items():
            out.write("%s\t%s\t%s\t%s\n" % (name, str(f.holds).lower(), str(f.sampled).lower(),
                                            " ".join(_labels(M, f.witness))))
    return 0


def _witness_labels(M, w):
    return [x if isinstance(x, str) else M.label(x) for x in w]


def cmd_lemmas(args, out, err):
    M = _load(args)
    report = harness.run_harness(M, Caps(args.subset_cap, args.seed))
    docs = [{"lemma": r.name, "status": r.status,
             "witnesses": [_witness_labels(M, w) for w in r.witnesses],
             "flags": list(r.flags), "checked": r.checked}
            for r in report.lemmas]
    if args.format == "json":
        _dump({"model": M.name, "lemmas": docs, "structural_flags": _flags_doc(M, report.flags)}, out)
    else:
        out.write("lemma\tstatus\tchecked\tflags\twitnesses\n")
        for d in docs:
            out.write("%s\t%s\t%d\t%s\t%s\n" % (
                d["lemma"], d["status"], d["checked"], ",".join(d["flags"]) or "-",
                "; ".join(" ".join(w) for w in d["witnesses"]) or "-"))
        out.write("flag\tholds\twitness\n")
        for name, f in report.flags.items():
            out.write("%s\t%s\t%s\n" % (name, str(f.holds).lower(),
                                        " ".join(_labels(M, f.witness)) or "-"))
    bugs = [r.name for r in report.lemmas if r.engine_bug]
    if bugs:
        raise InvariantBreach("universal statement failed: %s" % ", ".join(bugs))
    return 0


def cmd_builtin(args, out, err):
    obj = models.builtin(args.name, **_builtin_kwargs(args.name, args))
    text = modelio.serialize_spec(obj) if isinstance(obj, modelio.ModelSpec) else serialize_model(obj)
    _write(text, args.output, out)
    return 0


def _size_range(text):
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise UsageError("--size expects N or A..B, got %r" % text)


def cmd_search(args, out, err):
    sizes = _size_range(args.size)
    workers = args.workers or search.default_workers()
    if sizes and sizes[-1] > search.MAX_SEARCH_SIZE:
        raise UsageError("--size is capped at %d" % search.MAX_SEARCH_SIZE)
    summaries = [search.enumerate_models(n, workers=workers, predicates=[args.pred])
                 for n in sizes]
    witnesses = search.find_witnesses(sizes, args.pred, args.limit, workers)
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        for k, M in enumerate(witnesses):
            path = os.path.join(args.output, "%s_%d_%03d.sml" % (args.pred, M.size, k))
            _write(serialize_model(M), path, out)
    rows = [{"size": s.size, "lattices": s.lattices, "models": s.models,
             "predicate": args.pred, "witnesses": s.witness_counts[args.pred]}
            for s in summaries]
    if args.format == "json":
        _dump({"summary": rows,
               "witness_models": [serialize_model(M) for M in witnesses]}, out)
    else:
        out.write("size\tlattices\tmodels\tpredicate\twitnesses\n")
        for r in rows:
            out.write("%(size)d\t%(lattices)d\t%(models)d\t%(predicate)s\t%(witnesses)d\n" % r)
        if witnesses:
            out.write("# first witness\n")
            out.write(serialize_model(witnesses[0]))
    if args.figure:
        from .plotting import plot_witness_counts
        plot_witness_counts(summaries, args.pred, args.figure)
    return 0


def cmd_dot(args, out, err):
    M = _load(args)
    _write(export_dot(M, classify_model(M)), args.output, out)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "flags": cmd_flags,
    "lemmas": cmd_lemmas,
    "builtin": cmd_builtin,
    "search": cmd_search,
    "dot": cmd_dot,
}


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("no subcommand given\nsubcommands: %s" % ", ".join(SUBCOMMANDS))
        return COMMANDS[args.command](args, out, err)
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except UsageError as e:
        err.write("usage error: %s\n" % e)
        return 1
    except InvariantBreach as e:
        err.write("internal invariant breach: %s\n" % e)
        return 3
    except ParseError as e:
        err.write("%s:%d:%d: %s\n" % (getattr(args, "file", "") or "<input>", e.line, e.column,
                                      e.message))
        return 2
    except (LatticeError, IncompleteTable, AxiomViolation, ModelError) as e:
        err.write("invalid model: %s\n" % e)
        return 2
    except (KeyError, ValueError) as e:
        err.write("usage error: %s\n" % e)
        return 1
    except OSError as e:
        err.write("error: %s\n" % e)
        return 1


def main():
    sys.exit(run_cli())
