"""Iterated removal of irrelevant tuples, then evaluation on what is left.

The driver asks a *localizer* for a local window of the current annotated
graph.  Either the localizer reports that the graph already has small width,
or it hands back a window ``(Y, B, R^B, Z)``; the driver then searches ``Z``
for a removal ``(S_0, ..., S_h)`` with ``S_0`` non-empty that is irrelevant
in the window, applies it to the whole graph and repeats.  Every removal
strictly shrinks the graph, so at most ``|V(G)|`` rounds happen.

A sentence is decided by putting it in prenex form (set quantifiers first),
annotating every quantifier with the full vertex set, reducing with type
equality as the irrelevancy criterion, and evaluating the prenex form with
each quantifier restricted to its surviving range.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import logic as L
from .anntypes import (
    DEFAULT_MAX_CANDIDATES,
    TypeEquivalence,
    TypeParams,
    apply_removal,
    as_equivalence,
    containment_ok,
    find_irrelevant_tuple,
)
from .errors import ContractViolation
from .semantics import DEFAULT_MAX_SUBSET_N, Evaluator
from .structures import Structure
from .width import DEFAULT_MAX_N, treewidth_exact


@dataclass(frozen=True)
class SmallWidth:
    """Localizer verdict: the graph is already small enough to evaluate directly."""

    width: int | None = None


@dataclass(frozen=True)
class LocalWindow:
    """Localizer output: ``Y`` with a local structure containing it, its ranges and the zone ``Z ⊆ Y``."""

    Y: frozenset
    local: Structure
    local_ranges: tuple
    Z: frozenset


Localizer = Callable[[int, Structure, tuple], "SmallWidth | LocalWindow"]
EvaluatorOracle = Callable[[Structure, L.PrenexForm, Sequence[frozenset]], bool]


def toy_localizer(threshold: int, max_n: int = DEFAULT_MAX_N) -> Localizer:
    """Small width when exact treewidth is at most ``threshold``; otherwise the whole graph as window."""

    def localize(d, g, ranges):
        tw, _ = treewidth_exact(g, max_n=max_n)
        if tw <= threshold:
            return SmallWidth(tw)
        everything = frozenset(g.universe)
        return LocalWindow(everything, g, tuple(frozenset(r) for r in ranges), everything)

    localize.threshold = threshold
    return localize


def naive_evaluator(max_subset_n: int = DEFAULT_MAX_SUBSET_N) -> EvaluatorOracle:
    def run(g, prenex, ranges):
        return Evaluator(g, max_subset_n=max_subset_n).holds_annotated(prenex, ranges)

    return run


# -- traces ------------------------------------------------------------------------


@dataclass(frozen=True)
class Removal:
    iteration: int
    sets: tuple[frozenset, ...]  # S_0, S_1, ..., S_h


@dataclass
class Trace:
    h: int
    removals: list[Removal] = field(default_factory=list)

    def format(self, order: Callable[[Iterable], list] = sorted) -> str:
        """One line per removal: the iteration number, then ``S0=[...] S1=[...]`` as JSON lists."""
        lines = []
        for rem in self.removals:
            parts = [str(rem.iteration)]
            for i, s in enumerate(rem.sets):
                parts.append(f"S{i}=" + json.dumps([str(v) for v in order(s)]))
            lines.append(" ".join(parts))
        return "\n".join(lines) + ("\n" if lines else "")


_LINE = re.compile(r"S(\d+)=(\[[^\]]*\])")


def parse_trace(text: str, h: int) -> Trace:
    trace = Trace(h)
    for line in text.splitlines():
        if not line.strip():
            continue
        head, _, rest = line.partition(" ")
        found = _LINE.findall(rest)
        sets = [frozenset() for _ in range(h + 1)]
        for idx, body in found:
            sets[int(idx)] = frozenset(json.loads(body))
        trace.removals.append(Removal(int(head), tuple(sets)))
    return trace


def replay(g: Structure, ranges: Sequence[Iterable], trace: Trace) -> tuple[Structure, tuple]:
    """Apply the recorded removals to ``(g, ranges)`` in order."""
    ranges = tuple(frozenset(r) for r in ranges)
    for rem in trace.removals:
        g, ranges = apply_removal(g, ranges, rem.sets)
    return g, ranges


# -- the driver ----------------------------------------------------------------------


def reduce_annotations(d: int, g: Structure, ranges: Sequence[Iterable], localizer: Localizer, psi, *,
                       phi=None, max_candidates: int = DEFAULT_MAX_CANDIDATES,
                       widen: bool = True) -> tuple[Structure, tuple, Trace]:
    """Remove ``psi``-irrelevant tuples until the localizer reports small width.

    ``psi`` is an equivalence (anything with an ``equivalent`` method) or a
    list of sentences.  If ``phi`` is given, the result is checked against
    the input for ``phi``-equivalence before returning.
    """
    eq = as_equivalence(psi)
    start = (g, tuple(frozenset(r) for r in ranges))
    ranges = start[1]
    trace = Trace(len(ranges))
    for iteration in range(1, len(g.universe) + 2):
        report = localizer(d, g, ranges)
        if isinstance(report, SmallWidth):
            break
        if not isinstance(report, LocalWindow):
            raise ContractViolation(f"localizer returned {type(report).__name__}")
        if not report.Z <= report.Y or not report.Y <= frozenset(report.local.universe):
            raise ContractViolation("localizer window violates Z ⊆ Y ⊆ V(B)")
        removal = find_irrelevant_tuple(report.local, report.local_ranges, eq, report.Z,
                                        widen=widen, max_candidates=max_candidates)
        if removal is None:
            raise ContractViolation(f"iteration {iteration}: no irrelevant tuple inside the zone")
        if not removal[0]:
            raise ContractViolation("removal with empty S_0")
        if not containment_ok(g, ranges, removal):
            raise ContractViolation("removal breaks R_i \\ S_i ⊆ V \\ S_0 in the full graph")
        g, ranges = apply_removal(g, ranges, removal)
        trace.removals.append(Removal(iteration, tuple(frozenset(s) for s in removal)))
    else:
        raise ContractViolation("reduction did not terminate")
    if phi is not None and not as_equivalence(phi).equivalent(g, ranges, *start):
        raise ContractViolation("reduced structure is not equivalent to the input")
    return g, ranges, trace


@dataclass
class ReductionResult:
    prenex: L.PrenexForm
    reduced: Structure
    ranges: tuple
    trace: Trace
    verdict: bool


def reduce_for_sentence(phi: L.Formula, g: Structure, localizer: Localizer,
                        evaluator: EvaluatorOracle | None = None, *,
                        max_subset_n: int = DEFAULT_MAX_SUBSET_N,
                        max_candidates: int = DEFAULT_MAX_CANDIDATES,
                        widen: bool = True) -> ReductionResult:
    """Reduce ``g`` for the sentence ``phi`` and evaluate it on the result.

    Pulling quantifiers to the front assumes a non-empty universe, so an
    empty graph is evaluated directly on ``phi`` with nothing to reduce.
    """
    prenex = L.to_prenex(phi)
    params = TypeParams.for_prenex(prenex)
    everything = frozenset(g.universe)
    ranges = (everything,) * params.h
    if not everything:
        verdict = Evaluator(g, max_subset_n=max_subset_n).holds(phi, {})
        return ReductionResult(prenex, g, ranges, Trace(params.h), verdict)
    psi = TypeEquivalence(params, max_subset_n=max_subset_n)
    d = L.formula_length(phi)
    reduced, new_ranges, trace = reduce_annotations(
        d, g, ranges, localizer, psi, max_candidates=max_candidates, widen=widen
    )
    evaluator = evaluator or naive_evaluator(max_subset_n)
    verdict = evaluator(reduced, prenex, new_ranges)
    return ReductionResult(prenex, reduced, new_ranges, trace, verdict)


def decide(phi: L.Formula, g: Structure, localizer: Localizer, evaluator: EvaluatorOracle | None = None,
           **kwargs) -> bool:
    """Truth of the sentence ``phi`` on ``g`` via reduction and restricted evaluation."""
    return reduce_for_sentence(phi, g, localizer, evaluator, **kwargs).verdict
