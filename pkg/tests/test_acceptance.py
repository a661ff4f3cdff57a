"""Acceptance criteria 1-9.  Each test records one pass/fail line for the run summary."""

import json
import random
import time
from collections import defaultdict
from pathlib import Path

from cmsotw import logic as L
from cmsotw import structures as S
from cmsotw.annuli import annulus_grid_fixture, find_buffer, influence
from cmsotw.anntypes import TypeParams, annotated_type
from cmsotw.reduction import parse_trace, reduce_for_sentence, replay, toy_localizer
from cmsotw.semantics import Evaluator, check_dp, evaluate
from cmsotw.width import annotated_treewidth, treewidth, treewidth_exact

import oracles
from formula_gen import prenex_family, random_formula, random_sentence, seeded

DATA = Path(__file__).parent / "data"


def small_graphs(max_n):
    for n in range(1, max_n + 1):
        for vs, es in oracles.all_graphs(n):
            yield S.graph(vs, es)


def test_criterion_1_perimeter_anntw(record):
    details, ok = [], True
    for n, budget in ((3, 60), (4, 600)):
        start = time.monotonic()
        value = annotated_treewidth(S.generate("grid", n), S.grid_perimeter(n))
        spent = time.monotonic() - start
        ok &= value == 2 and spent <= budget
        details.append(f"Γ{n}: {value} in {spent:.2f}s")
    record(1, ok, "; ".join(details))
    assert ok


def test_criterion_2_full_annotation_identity(record):
    graphs = {
        "P5": S.generate("path", 5),
        "C5": S.generate("cycle", 5),
        "K4": S.generate("clique", 4),
        "Γ3": S.generate("grid", 3),
        "K1,4": S.generate("star", 4),
    }
    rows = {name: (annotated_treewidth(g, g.universe), treewidth(g)) for name, g in graphs.items()}
    ok = all(a == b for a, b in rows.values())
    record(2, ok, ", ".join(f"{k}: {a}={b}" for k, (a, b) in rows.items()))
    assert ok


def test_criterion_3_quantifier_duality(record):
    rng = seeded(3)
    matrices = []
    for i in range(120):
        kind = L.VSET if i % 3 else L.ESET
        matrices.append((kind, random_formula(rng, 1, [], [("X", kind)], tmax=2, kinds=(L.VSET,))))
    graphs = list(small_graphs(4))
    bad = checks = 0
    for g in graphs:
        ev = Evaluator(g)
        for kind, phi in matrices:
            for k in (0, 1, 2):
                lhs = ev.holds(L.ForallSet(k, "X", kind, phi), {})
                rhs = ev.holds(L.Not(L.ExistsSet(k, "X", kind, L.Not(phi))), {})
                checks += 1
                bad += lhs != rhs
    ok = bad == 0 and len(matrices) >= 100
    record(3, ok, f"{len(graphs)} graphs x {len(matrices)} matrices x 3 k = {checks} checks, {bad} discrepancies")
    assert ok


def test_criterion_4_prenex_preserves_truth(record):
    rng = seeded(4)
    bad = 0
    for _ in range(200):
        vs, es = oracles.random_graph(rng, rng.randint(1, 5), rng.choice([0.3, 0.5, 0.7]))
        g = S.graph(vs, es)
        phi = random_sentence(rng, 2, kinds=(L.VSET, L.ESET))
        pf = L.to_prenex(phi)
        direct = evaluate(g, phi)
        bad += direct != evaluate(g, pf.to_formula())
        bad += direct != Evaluator(g).holds_annotated(pf, [g.universe] * len(pf.prefix))
    record(4, bad == 0, f"200 cases, {bad} discrepancies")
    assert bad == 0


def test_criterion_5_type_soundness(record):
    graphs = list(small_graphs(4))
    rng = seeded(5)
    shapes = [(m, r, t, kinds) for m in (0, 1) for r in (0, 1, 2) for t in (0, 1)
              for kinds in ([()] if m == 0 else [(L.VSET,), (L.ESET,)])]
    counterexamples = nontrivial = sentences = 0
    for m, r, t, kinds in shapes:
        params = TypeParams(m, r, t, kinds, card_cap=2)
        family = prenex_family(m, r, t, rng, matrices_per_prefix=4, kinds=kinds)
        sentences += len(family)
        classes = defaultdict(list)
        for g in graphs:
            classes[annotated_type(g, [g.universe] * params.h, params)].append(g)
        for members in classes.values():
            nontrivial += len(members) - 1
            verdicts = {
                tuple(Evaluator(g).holds_annotated(pf, [g.universe] * params.h) for pf in family)
                for g in members
            }
            counterexamples += len(verdicts) > 1
    ok = counterexamples == 0
    record(5, ok, f"{len(shapes)} shapes, {sentences} sentences, {nontrivial} equal-type pairs checked "
                  f"against a class representative, {counterexamples} counterexamples")
    assert ok


def test_criterion_6_dp_against_enumeration(record):
    rng = random.Random(6)
    bad = instances = 0
    while instances < 600:
        n = rng.randint(2, 7)
        vs, es = oracles.random_graph(rng, n, rng.choice([0.25, 0.4, 0.6]))
        k = rng.randint(1, min(3, n // 2))
        terms = rng.sample(vs, 2 * k)
        pairs = [(terms[2 * i], terms[2 * i + 1]) for i in range(k)]
        got, witness = check_dp(S.graph(vs, es), pairs)
        want = oracles.dp_oracle(oracles.adjacency(vs, es), pairs)
        bad += got != want
        if got:
            bad += witness.pattern != {frozenset(p) for p in pairs}
        instances += 1
    star = S.generate("star", 4)
    bowtie = S.graph("abcde", [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e"), ("c", "e")])
    hand = [
        (star, [("1", "2")], True),
        (star, [("1", "2"), ("3", "4")], False),
        (bowtie, [("a", "d")], True),
        (bowtie, [("a", "d"), ("b", "e")], False),
        (bowtie, [("a", "b"), ("d", "e")], True),
    ]
    for g, pairs, expected in hand:
        bad += check_dp(g, pairs)[0] != expected
    record(6, bad == 0, f"{instances} random instances + {len(hand)} hand cases, {bad} discrepancies")
    assert bad == 0


def test_criterion_7_reduction_corpus(record):
    corpus = json.loads((DATA / "reduction_corpus.json").read_text())
    bad = removed = 0
    for case in corpus:
        g = S.generate(case["family"], *case["params"])
        phi = L.parse(case["formula"])
        res = reduce_for_sentence(phi, g, toy_localizer(case["threshold"]))
        bad += res.verdict != evaluate(g, phi)
        again = replay(g, [g.universe] * res.trace.h, parse_trace(res.trace.format(g.ordered), res.trace.h))
        bad += again != (res.reduced, res.ranges)
        removed += len(res.reduced) < len(g)
    ok = bad == 0 and len(corpus) >= 50 and removed >= 10
    record(7, ok, f"{len(corpus)} cases, {removed} with removals, {bad} mismatches")
    assert ok


def test_criterion_8_buffer(record):
    f = annulus_grid_fixture(12, 6)
    avoid = frozenset(f.annulus.cycle(1))
    found = find_buffer(f, avoid, 3)
    sound = found is not None and not influence(f, *found) & avoid
    leftmost = found is not None and all(influence(f, i, i + 2) & avoid for i in range(1, found[0]))
    ok = sound and leftmost
    record(8, ok, f"range {found}, disjoint={sound}, leftmost={leftmost}")
    assert ok


def test_criterion_9_treewidth(record):
    cases = [(f"K{n}", S.generate("clique", n), n - 1) for n in range(1, 7)]
    cases += [(f"P{n}", S.generate("path", n), 1) for n in (2, 5, 9)]
    cases += [("K1,5", S.generate("star", 5), 1)]
    rng = random.Random(9)
    for i in range(5):
        n = rng.randint(2, 10)
        cases.append((f"tree{i}", S.graph([str(v) for v in range(n)],
                                           [(str(v), str(rng.randrange(v))) for v in range(1, n)]), 1))
    cases += [(f"C{n}", S.generate("cycle", n), 2) for n in (3, 4, 7)]
    cases += [("Γ3", S.generate("grid", 3), 3)]
    bad = []
    for name, g, expected in cases:
        value, td = treewidth_exact(g)
        if value != expected or td.violations(g) or td.width != value:
            bad.append(name)
    record(9, not bad, f"{len(cases)} graphs, failures: {bad or 'none'}")
    assert not bad
