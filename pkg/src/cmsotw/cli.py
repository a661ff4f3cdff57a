"""Command-line front end: ``cmsotw <subcommand> ...``.

Every subcommand writes one document to stdout, plain text by default or
JSON with ``--format machine``.  Exit codes: 0 success, 1 a boolean result
was false under ``--strict``, 2 bad usage or input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import annuli, anntypes, linkage, logic, reduction, semantics, structures, width
from .errors import CapExceeded, ContractViolation, FormulaError

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ids(text):
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


def _vertex_set(g, spec):
    """A comma list of ids, a color name, or ``perimeter`` for square or rectangular grids."""
    if spec in g.colors:
        return frozenset(g.colors[spec])
    if spec == "perimeter":
        n = len(g)
        for rows in range(1, n + 1):
            if n % rows == 0 and structures.generate("grid", rows, n // rows) == g:
                return structures.grid_perimeter(rows, n // rows)
        raise UsageError("'perimeter' needs a grid graph as produced by 'gen grid'")
    ids = _ids(spec)
    for v in ids:
        if v not in g:
            raise UsageError(f"vertex {v!r} not in graph")
    return frozenset(ids)


def _pairs(text):
    out = []
    for item in _ids(text):
        a, sep, b = item.partition("-")
        if not sep:
            raise UsageError(f"pair {item!r} must be written a-b")
        out.append((a, b))
    if not out:
        raise UsageError("no pairs given")
    return out


def _free(text):
    out = []
    for item in _ids(text):
        name, _, sort = item.partition(":")
        out.append((name, sort or logic.FO))
    return out


def _show_value(g, value):
    if isinstance(value, frozenset):
        items = [sorted(map(str, e)) if isinstance(e, frozenset) else str(e) for e in value]
        if all(isinstance(e, str) for e in items):
            return [str(v) for v in g.ordered(value)]
        return sorted(items)
    return str(value)


def _load_graph(path):
    try:
        g = structures.load(path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}") from exc
    problem = structures.validate(g)
    if problem:
        raise UsageError(f"invalid graph {path}: {problem}")
    return g


def _formula(args, g, free=None):
    return logic.parse(args.formula, free=free, colors=tuple(g.colors))


# -- subcommands ------------------------------------------------------------------


def cmd_check(args):
    g = _load_graph(args.graph)
    phi = _formula(args, g)
    verdict = semantics.evaluate(g, phi, max_subset_n=args.max_subset_n)
    return {"verdict": verdict}, str(verdict).lower(), verdict


def cmd_eval(args):
    g = _load_graph(args.graph)
    variables = _free(args.free)
    phi = _formula(args, g, dict(variables))
    found = semantics.evaluate_query(g, phi, variables, max_subset_n=args.max_subset_n)
    if found is None:
        return {"witness": None}, "none", False
    shown = {name: _show_value(g, found[name]) for name, _ in variables}
    text = " ".join(f"{k}={json.dumps(v)}" for k, v in shown.items())
    return {"witness": shown}, text, True


def cmd_anntw(args):
    g = _load_graph(args.graph)
    roots = _vertex_set(g, args.set)
    value = width.annotated_treewidth(g, roots, max_n=args.max_n)
    return {"anntw": value}, str(value), None


def cmd_tw(args):
    g = _load_graph(args.graph)
    value, td = width.treewidth_exact(g, max_n=args.max_n)
    bags = [[str(v) for v in g.ordered(b)] for b in td.bags]
    doc = {"tw": value, "bags": bags, "tree_edges": [list(e) for e in td.tree_edges]}
    lines = [str(value)] + [f"bag {i}: {' '.join(b)}" for i, b in enumerate(bags)]
    lines += [f"tree {a}-{b}" for a, b in td.tree_edges]
    return doc, "\n".join(lines), None


def cmd_type(args):
    g = _load_graph(args.graph)
    kinds = tuple(args.kinds) if args.kinds else None
    params = anntypes.TypeParams(args.m, args.r, args.t, kinds, args.card_cap)
    if args.ranges:
        ranges = [_vertex_set(g, r) for r in args.ranges.split(";")]
    else:
        ranges = [frozenset(g.universe)] * params.h
    if len(ranges) != params.h:
        raise UsageError(f"need {params.h} ranges separated by ';', got {len(ranges)}")
    tp = anntypes.annotated_type(g, ranges, params, max_subset_n=args.max_subset_n)
    text = tp.serialize()
    return {"level": tp.level, "type": text}, text, None


def cmd_dp(args):
    g = _load_graph(args.graph)
    pairs = _pairs(args.pairs)
    for a, b in pairs:
        for v in (a, b):
            if v not in g:
                raise UsageError(f"vertex {v!r} not in graph")
    if args.avoid:
        avoid = _vertex_set(g, args.avoid)
        try:
            ok = semantics.check_dp_plus(g, avoid, pairs)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        paths = None
        if ok:
            adj = {v: g.neighbors(v) for v in g.universe}
            paths = linkage.disjoint_paths(adj, pairs, avoid, key=g.sort_key)
    else:
        ok, witness = semantics.check_dp(g, pairs)
        paths = witness.paths if witness else None
    shown = [[str(v) for v in p] for p in paths] if paths else None
    text = str(ok).lower() + ("".join("\n" + " ".join(p) for p in shown) if shown else "")
    return {"verdict": ok, "paths": shown}, text, ok


def cmd_reduce(args):
    g = _load_graph(args.graph)
    phi = _formula(args, g)
    loc = reduction.toy_localizer(args.threshold, max_n=args.max_n)
    res = reduction.reduce_for_sentence(phi, g, loc, max_subset_n=args.max_subset_n,
                                        max_candidates=args.max_candidates, widen=not args.no_widen)
    trace = res.trace.format(g.ordered)
    doc = {
        "verdict": res.verdict,
        "reduced": structures.to_dict(res.reduced),
        "ranges": [[str(v) for v in res.reduced.ordered(r)] for r in res.ranges],
        "trace": trace.splitlines(),
    }
    text = "\n".join([
        f"verdict {str(res.verdict).lower()}",
        f"removed {len(g) - len(res.reduced)} of {len(g)} vertices",
        trace.rstrip("\n"),
        structures.dumps(res.reduced),
    ])
    return doc, text, res.verdict


def cmd_gen(args):
    if args.family == "annulus-fixture":
        if len(args.params) != 2:
            raise UsageError("annulus-fixture takes p and q")
        fixture = annuli.annulus_grid_fixture(*args.params, subdivide=args.subdivide)
        doc = annuli.fixture_to_dict(fixture)
    else:
        try:
            g = structures.generate(args.family, *args.params)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        doc = structures.to_dict(g)
    text = json.dumps(doc, indent=2, sort_keys=True)
    return doc, text, None


def cmd_buffer(args):
    try:
        fixture = annuli.load_fixture(args.fixture)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read fixture {args.fixture}: {exc}") from exc
    problem = annuli.validate_annulus(fixture.graph, fixture.annulus)
    if problem:
        raise UsageError(f"invalid annulus: {problem}")
    spec = args.set
    if spec.startswith("C") and spec[1:].isdigit():
        avoid = frozenset(fixture.annulus.cycle(int(spec[1:])))
    else:
        avoid = _vertex_set(fixture.graph, spec)
    try:
        found = annuli.find_buffer(fixture, avoid, args.width)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if found is None:
        return {"range": None}, "none", False
    return {"range": list(found)}, f"{found[0]}..{found[1]}", True


# -- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmsotw", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--strict", action="store_true", help="exit 1 when a boolean result is false")
    common.add_argument("--max-n", type=int, default=width.DEFAULT_MAX_N,
                        help="largest graph for exact (annotated) treewidth (default %(default)s)")
    common.add_argument("--max-subset-n", type=int, default=semantics.DEFAULT_MAX_SUBSET_N,
                        help="largest ground set for exhaustive set quantification (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "truth of a sentence on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)

    p = add("eval", cmd_eval, "first witness of a formula with free variables")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--free", required=True, help="comma list of name[:fo|V|E]")

    p = add("anntw", cmd_anntw, "annotated treewidth tw(G, X)")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True, help="comma list of ids, a color, or 'perimeter'")

    p = add("tw", cmd_tw, "exact treewidth with a decomposition")
    p.add_argument("--graph", required=True)

    p = add("type", cmd_type, "serialized annotated type")
    p.add_argument("--graph", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--kinds", default="", help="set sorts as a string such as 'VE'")
    p.add_argument("--card-cap", type=int, default=2)
    p.add_argument("--ranges", default="", help="';'-separated vertex sets, default all vertices")

    p = add("dp", cmd_dp, "disjoint paths between terminal pairs")
    p.add_argument("--graph", required=True)
    p.add_argument("--pairs", required=True, help="comma list of a-b pairs")
    p.add_argument("--avoid", default="", help="vertices the paths must avoid")

    p = add("reduce", cmd_reduce, "irrelevant-vertex reduction, then evaluation")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--threshold", type=int, default=1, help="toy localizer treewidth threshold")
    p.add_argument("--max-candidates", type=int, default=anntypes.DEFAULT_MAX_CANDIDATES)
    p.add_argument("--no-widen", action="store_true", help="only try single-vertex removals")

    p = add("gen", cmd_gen, "emit a fixture graph")
    p.add_argument("family", choices=structures.FAMILIES + ("annulus-fixture",))
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("--subdivide", action="store_true", help="annulus-fixture: subdivide rail edges")

    p = add("buffer", cmd_buffer, "leftmost cycle range whose influence avoids a set")
    p.add_argument("--fixture", required=True)
    p.add_argument("--set", required=True, help="comma list of ids, or C<i> for a cycle")
    p.add_argument("--width", type=int, required=True)
    return parser


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        doc, text, verdict = args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (UsageError, FormulaError, ContractViolation, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.format == "machine":
        stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        stdout.write(text + "\n")
    if args.strict and verdict is False:
        return EXIT_FALSE
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
