"""Atomic types, annotated types and irrelevancy checks.

An annotated structure is a structure together with a tuple of vertex sets
``R_1..R_h`` whose i-th entry is the range of the i-th quantifier of a prenex
prefix (set quantifiers first, then FO quantifiers).  Its type at level i is
the nested set obtained by letting the next quantifier run over its range and
collecting the types one level down; level 0 is the atomic type, a fixed
vector of facts about the chosen sets and vertices.

The fact vector covers every atom a quantifier-free matrix over the prefix
variables, the constants and the colors can contain, so the verdict of any
prenex sentence with matching shape is a function of the top-level type
(:func:`type_verdict`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import logic as L
from .errors import CapExceeded, FormulaError
from .semantics import DEFAULT_MAX_SUBSET_N, Evaluator
from .structures import Structure


@dataclass(frozen=True)
class TypeParams:
    """Shape of the prefix: ``m`` set variables (sorts ``kinds``), then ``r`` FO variables.

    ``t`` bounds the annotated-treewidth levels recorded per set and
    ``card_cap`` the largest modulus of the card facts.
    """

    m: int
    r: int
    t: int = 0
    kinds: tuple[str, ...] | None = None
    card_cap: int = L.DEFAULT_CARD_CAP

    def __post_init__(self):
        if self.m < 0 or self.r < 0 or self.t < 0:
            raise ValueError("m, r and t must be non-negative")
        if self.card_cap < 1:
            raise ValueError("card_cap must be positive")
        kinds = tuple(self.kinds) if self.kinds is not None else (L.VSET,) * self.m
        if len(kinds) != self.m or any(k not in (L.VSET, L.ESET) for k in kinds):
            raise ValueError(f"kinds must list {self.m} sorts from V/E, got {kinds}")
        object.__setattr__(self, "kinds", kinds)

    @property
    def h(self) -> int:
        return self.m + self.r

    @classmethod
    def for_prenex(cls, prenex: L.PrenexForm, card_cap: int | None = None) -> "TypeParams":
        if not prenex.is_sets_first():
            raise FormulaError("prefix must list set quantifiers before FO quantifiers")
        cap = card_cap if card_cap is not None else max(2, L.max_card_parameter(prenex.matrix))
        return cls(prenex.m, prenex.r, prenex.t, tuple(q.sort for q in prenex.set_prefix), cap)


def _matchings(n: int) -> list[tuple]:
    """Non-empty sets of pairwise disjoint pairs ``(i, j)``, ``i <= j``, over ``range(n)``.

    Loops ``(i, i)`` stand for one-vertex paths.  Each set comes back as a
    sorted tuple of pairs.
    """
    out = []

    def grow(i, used, acc):
        if i == n:
            if acc:
                out.append(tuple(acc))
            return
        grow(i + 1, used, acc)
        if i in used:
            return
        for j in range(i, n):
            if j in used:
                continue
            grow(i + 1, used | {i, j}, acc + [(i, j)])

    grow(0, frozenset(), [])
    return sorted(out)


class FactSchema:
    """The ordered list of facts recorded for one (parameters, vocabulary) combination.

    Terms are indexed FO variables first (``0..r-1``) then constants in name
    order; set-likes are the set variables (``0..m-1``) then colors in name
    order.
    """

    def __init__(self, params: TypeParams, colors: Iterable[str] = (), constants: Iterable[str] = ()):
        self.params = params
        self.colors = tuple(sorted(colors))
        self.constants = tuple(sorted(constants))
        n_terms = params.r + len(self.constants)
        self.n_terms = n_terms
        self.set_kinds = tuple(params.kinds) + (L.VSET,) * len(self.colors)
        vsets = [s for s, k in enumerate(self.set_kinds) if k == L.VSET]
        esets = [s for s, k in enumerate(self.set_kinds) if k == L.ESET]
        pairs = list(itertools.combinations(range(n_terms), 2))
        matchings = _matchings(n_terms)
        keys: list[tuple] = []
        keys += [("eq", a, b) for a, b in pairs]
        keys += [("edge", a, b) for a, b in pairs]
        keys += [("mem", a, s) for s in vsets for a in range(n_terms)]
        keys += [("memE", a, b, s) for s in esets for a, b in pairs]
        keys += [("card", p, s) for s in range(len(self.set_kinds)) for p in range(2, params.card_cap + 1)]
        keys += [("tw", s) for s in range(len(self.set_kinds))]
        keys += [("dp", mt) for mt in matchings]
        keys += [("dp+", s, mt) for s in vsets for mt in matchings]
        self.keys = tuple(keys)
        self.position = {k: i for i, k in enumerate(keys)}

    @property
    def signature(self) -> tuple:
        return (self.params, self.colors, self.constants)

    def __eq__(self, other):
        return isinstance(other, FactSchema) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def set_slot(self, name: str, set_vars: Sequence[str]) -> int:
        if name in set_vars:
            return list(set_vars).index(name)
        if name in self.colors:
            return self.params.m + self.colors.index(name)
        raise FormulaError(f"unknown set {name}")

    def term_slot(self, term: str, fo_vars: Sequence[str]) -> int:
        if term.startswith("@"):
            try:
                return self.params.r + self.constants.index(term[1:])
            except ValueError:
                raise FormulaError(f"unknown constant {term}") from None
        if term in fo_vars:
            return list(fo_vars).index(term)
        raise FormulaError(f"unbound variable {term}")


def schema_for(structure: Structure, params: TypeParams) -> FactSchema:
    return FactSchema(params, structure.colors, structure.constants)


@dataclass(frozen=True)
class AtomicType:
    """Fact vector; positions are given by the :class:`FactSchema` it was built with."""

    values: tuple

    def as_dict(self, schema: FactSchema) -> dict:
        return dict(zip(schema.keys, self.values))


def _canonical_matching(pairs: Sequence[tuple[int, int]]) -> tuple | None:
    """Sorted disjoint form of a dp pair list, or ``None`` when a term is reused."""
    seen = set()
    out = []
    for a, b in pairs:
        a, b = min(a, b), max(a, b)
        for x in {a, b}:
            if x in seen:
                return None
            seen.add(x)
        out.append((a, b))
    return tuple(sorted(out))


def _compute_facts(ev: Evaluator, schema: FactSchema, sets: Sequence[frozenset], terms: Sequence) -> tuple:
    s = ev.structure
    setvals = list(sets) + [s.colors[c] for c in schema.colors]
    t = schema.params.t
    values = []
    for key in schema.keys:
        tag = key[0]
        if tag == "eq":
            values.append(terms[key[1]] == terms[key[2]])
        elif tag == "edge":
            values.append(s.has_edge(terms[key[1]], terms[key[2]]))
        elif tag == "mem":
            values.append(terms[key[1]] in setvals[key[2]])
        elif tag == "memE":
            values.append(frozenset((terms[key[1]], terms[key[2]])) in setvals[key[3]])
        elif tag == "card":
            values.append(len(setvals[key[2]]) % key[1] == 0)
        elif tag == "tw":
            slot = key[1]
            values.append(min(ev.set_anntw(frozenset(setvals[slot]), schema.set_kinds[slot]), t + 1))
        elif tag == "dp":
            values.append(ev.dp(tuple((terms[a], terms[b]) for a, b in key[1])))
        else:
            avoid = frozenset(setvals[key[1]])
            pairs = tuple((terms[a], terms[b]) for a, b in key[2])
            if any(v in avoid for pair in pairs for v in pair):
                values.append(False)
            else:
                values.append(ev.dp(pairs, avoid))
    return tuple(values)


def atomic_type(structure: Structure, sets: Sequence[Iterable], vertices: Sequence, params: TypeParams, *,
                evaluator: Evaluator | None = None) -> AtomicType:
    """Atomic type of the set tuple ``sets`` (length m) and vertex tuple ``vertices`` (length r)."""
    if len(sets) != params.m or len(vertices) != params.r:
        raise ValueError(f"expected {params.m} sets and {params.r} vertices")
    ev = evaluator or Evaluator(structure)
    schema = schema_for(structure, params)
    terms = list(vertices) + [structure.constants[c] for c in schema.constants]
    sets = [frozenset(x) for x in sets]
    return AtomicType(_compute_facts(ev, schema, sets, terms))


# -- annotated types ------------------------------------------------------------


@dataclass(frozen=True)
class AnnotatedType:
    """Type at ``level``: level 0 holds a fact tuple, level i a sorted tuple of distinct level i-1 values.

    Equality is structural on the canonical nested tuple.  ``schema`` is
    carried along so that two types built for different vocabularies or
    parameters never compare equal.
    """

    level: int
    value: tuple
    schema: FactSchema = field(compare=True, repr=False)

    def serialize(self) -> str:
        return _serialize(self.value, self.level)

    def __len__(self):
        return 0 if self.level == 0 else len(self.value)


def _serialize(value, level):
    if level == 0:
        return "<" + "".join(str(int(x)) if isinstance(x, bool) else f"({x})" for x in value) + ">"
    return "{" + ",".join(_serialize(v, level - 1) for v in value) + "}"


def _type_value(ev, schema, range_at, level, sets, verts, consts):
    """Literal recursion; ``range_at(i)`` is the range consulted at level ``i``."""
    p = schema.params
    if level == 0:
        return _compute_facts(ev, schema, sets, list(verts) + consts)
    rng = range_at(level)
    children = set()
    if level <= p.r:
        for u in ev.structure.ordered(rng):
            children.add(_type_value(ev, schema, range_at, level - 1, sets, verts + (u,), consts))
    else:
        kind = p.kinds[len(sets)]
        for u in ev.domain(kind, rng):
            children.add(_type_value(ev, schema, range_at, level - 1, sets + (u,), verts, consts))
    return tuple(sorted(children))


def _check_arity(params, level, sets, verts):
    if not 0 <= level <= params.h:
        raise ValueError(f"level {level} outside [0, {params.h}]")
    want_sets = params.m - max(0, level - params.r)
    want_verts = max(0, params.r - level)
    if len(sets) != want_sets or len(verts) != want_verts:
        raise ValueError(
            f"level {level} needs {want_sets} sets and {want_verts} vertices, got {len(sets)} and {len(verts)}"
        )


def annotated_type(structure: Structure, ranges: Sequence[Iterable], params: TypeParams, level: int | None = None,
                   sets: Sequence[Iterable] = (), vertices: Sequence = (), *,
                   evaluator: Evaluator | None = None,
                   max_subset_n: int = DEFAULT_MAX_SUBSET_N) -> AnnotatedType:
    """``tp^level`` of ``(structure, ranges, sets, vertices)``; the default level is ``m + r``.

    At level i the quantified object is the (m+r-i+1)-th prefix variable and
    ranges over ``ranges[m+r-i]``: vertices of it at FO levels, subsets of it
    at set levels.
    """
    level = params.h if level is None else level
    if len(ranges) != params.h:
        raise ValueError(f"need {params.h} ranges, got {len(ranges)}")
    sets = tuple(frozenset(x) for x in sets)
    vertices = tuple(vertices)
    _check_arity(params, level, sets, vertices)
    ranges = [frozenset(r) for r in ranges]
    ev = evaluator or Evaluator(structure, max_subset_n=max_subset_n)
    schema = schema_for(structure, params)
    consts = [structure.constants[c] for c in schema.constants]
    value = _type_value(ev, schema, lambda i: ranges[params.h - i], level, sets, vertices, consts)
    return AnnotatedType(level, value, schema)


def semi_annotated_type(structure: Structure, ranges: Sequence[Iterable], params: TypeParams, annotated_fo: int,
                        level: int | None = None, sets: Sequence[Iterable] = (), vertices: Sequence = (), *,
                        evaluator: Evaluator | None = None,
                        max_subset_n: int = DEFAULT_MAX_SUBSET_N) -> AnnotatedType:
    """Type in which only the outer ``annotated_fo`` FO levels consult ``ranges``.

    With ``d = params.r`` FO variables, FO levels ``1..d-annotated_fo``
    (counted from the innermost) range over the whole universe; every other
    level behaves as in :func:`annotated_type`.
    """
    d = params.r
    if not 0 <= annotated_fo <= d:
        raise ValueError(f"annotated_fo must lie in [0, {d}]")
    level = params.h if level is None else level
    if len(ranges) != params.h:
        raise ValueError(f"need {params.h} ranges, got {len(ranges)}")
    sets = tuple(frozenset(x) for x in sets)
    vertices = tuple(vertices)
    _check_arity(params, level, sets, vertices)
    ranges = [frozenset(r) for r in ranges]
    everything = frozenset(structure.universe)

    def range_at(i):
        if i <= d - annotated_fo:
            return everything
        return ranges[params.h - i]

    ev = evaluator or Evaluator(structure, max_subset_n=max_subset_n)
    schema = schema_for(structure, params)
    consts = [structure.constants[c] for c in schema.constants]
    value = _type_value(ev, schema, range_at, level, sets, vertices, consts)
    return AnnotatedType(level, value, schema)


def agreement_check(s1: Structure, ranges1, s2: Structure, ranges2, params: TypeParams, *,
                    max_subset_n: int = DEFAULT_MAX_SUBSET_N) -> bool:
    """Whether the two annotated structures have equal top-level types."""
    t1 = annotated_type(s1, ranges1, params, max_subset_n=max_subset_n)
    t2 = annotated_type(s2, ranges2, params, max_subset_n=max_subset_n)
    return t1 == t2


# -- reading verdicts off a type -------------------------------------------------


def _leaf_values(value, level):
    if level == 0:
        yield value
        return
    for child in value:
        yield from _leaf_values(child, level - 1)


def type_verdict(prenex: L.PrenexForm, tp: AnnotatedType) -> bool:
    """Truth of ``prenex`` over the annotated ranges, read from its top-level type alone.

    The prenex shape must match the type's parameters (same m, r and set
    sorts, treewidth parameters at most t, card moduli at most the cap).
    """
    schema = tp.schema
    p = schema.params
    if tp.level != p.h:
        raise ValueError("type_verdict needs a top-level type")
    if (prenex.m, prenex.r) != (p.m, p.r) or not prenex.is_sets_first():
        raise FormulaError(f"prenex shape ({prenex.m}, {prenex.r}) does not match type ({p.m}, {p.r})")
    if tuple(q.sort for q in prenex.set_prefix) != p.kinds:
        raise FormulaError("set quantifier sorts do not match the type")
    if prenex.t > p.t:
        raise FormulaError(f"treewidth parameter {prenex.t} exceeds type parameter t={p.t}")
    if L.max_card_parameter(prenex.matrix) > p.card_cap:
        raise FormulaError("card modulus exceeds the type's cap")
    set_vars = [q.var for q in prenex.set_prefix]
    fo_vars = [q.var for q in prenex.fo_prefix]
    pos = schema.position

    def fact(values, key):
        return values[pos[key]]

    def matrix(phi, values):
        if isinstance(phi, L.Top):
            return True
        if isinstance(phi, L.Bottom):
            return False
        if isinstance(phi, L.Not):
            return not matrix(phi.arg, values)
        if isinstance(phi, L.And):
            return all(matrix(a, values) for a in phi.args)
        if isinstance(phi, L.Or):
            return any(matrix(a, values) for a in phi.args)
        term = lambda x: schema.term_slot(x, fo_vars)  # noqa: E731
        sset = lambda x: schema.set_slot(x, set_vars)  # noqa: E731
        if isinstance(phi, (L.Eq, L.Edge)):
            a, b = sorted((term(phi.left), term(phi.right)))
            if a == b:
                return isinstance(phi, L.Eq)
            return fact(values, ("eq" if isinstance(phi, L.Eq) else "edge", a, b))
        if isinstance(phi, L.Mem):
            return fact(values, ("mem", term(phi.term), sset(phi.set)))
        if isinstance(phi, L.MemE):
            a, b = sorted((term(phi.left), term(phi.right)))
            return a != b and fact(values, ("memE", a, b, sset(phi.set)))
        if isinstance(phi, L.Card):
            return fact(values, ("card", phi.p, sset(phi.set)))
        if isinstance(phi, L.AnnTwLeq):
            return fact(values, ("tw", sset(phi.set))) <= phi.k
        if isinstance(phi, (L.Dp, L.DpPlus)):
            mt = _canonical_matching([(term(a), term(b)) for a, b in phi.pairs])
            if mt is None:
                return False
            if isinstance(phi, L.Dp):
                return fact(values, ("dp", mt))
            return fact(values, ("dp+", sset(phi.avoid), mt))
        raise FormulaError(f"matrix must be quantifier-free, found {type(phi).__name__}")

    def go(i, value, level):
        if i == len(prenex.prefix):
            return matrix(prenex.matrix, value)
        q = prenex.prefix[i]
        children = value
        if q.is_set and q.k is not None:
            slot = i
            kept = []
            for child in children:
                leaf = next(_leaf_values(child, level - 1), None)
                # an empty subtree arises for every U alike, in particular for U = {}
                if leaf is None or fact(leaf, ("tw", slot)) <= q.k:
                    kept.append(child)
            children = kept
        results = (go(i + 1, child, level - 1) for child in children)
        return any(results) if q.mode == "exists" else all(results)

    return go(0, tp.value, tp.level)


# -- equivalence and irrelevancy --------------------------------------------------


class TypeEquivalence:
    """Equivalence of annotated structures by equality of their top-level types."""

    def __init__(self, params: TypeParams, *, max_subset_n: int = DEFAULT_MAX_SUBSET_N):
        self.params = params
        self.max_subset_n = max_subset_n
        self._cache: dict = {}

    def type_of(self, structure: Structure, ranges) -> AnnotatedType:
        key = (structure, tuple(frozenset(r) for r in ranges))
        tp = self._cache.get(key)
        if tp is None:
            tp = annotated_type(structure, key[1], self.params, max_subset_n=self.max_subset_n)
            self._cache[key] = tp
        return tp

    def equivalent(self, s1: Structure, ranges1, s2: Structure, ranges2) -> bool:
        return self.type_of(s1, ranges1) == self.type_of(s2, ranges2)


class SentenceEquivalence:
    """Equivalence by agreement on a finite list of sentences over the annotated ranges.

    A sentence whose prenex prefix has length l is evaluated with its i-th
    quantifier ranging over ``R_i`` (i ≤ l); l may not exceed the number of
    ranges.
    """

    def __init__(self, sentences: Iterable[L.Formula], *, max_subset_n: int = DEFAULT_MAX_SUBSET_N):
        self.sentences = tuple(sentences)
        self.prenex = tuple(L.to_prenex(phi) for phi in self.sentences)
        self.max_subset_n = max_subset_n

    def verdicts(self, structure: Structure, ranges) -> tuple[bool, ...]:
        ev = Evaluator(structure, max_subset_n=self.max_subset_n)
        out = []
        for pf in self.prenex:
            if len(pf.prefix) > len(ranges):
                raise ValueError(f"sentence prefix of length {len(pf.prefix)} but only {len(ranges)} ranges")
            out.append(ev.holds_annotated(pf, list(ranges)[: len(pf.prefix)]))
        return tuple(out)

    def equivalent(self, s1, ranges1, s2, ranges2) -> bool:
        return self.verdicts(s1, ranges1) == self.verdicts(s2, ranges2)


def as_equivalence(phi):
    if hasattr(phi, "equivalent"):
        return phi
    return SentenceEquivalence(phi)


def apply_removal(structure: Structure, ranges: Sequence[Iterable], removal: Sequence[Iterable]):
    """``(G \\ S_0, R_1 \\ S_1, ..., R_h \\ S_h)`` for ``removal = (S_0, ..., S_h)``."""
    s0 = frozenset(removal[0])
    reduced = structure.remove(s0)
    new_ranges = tuple(frozenset(r) - frozenset(si) for r, si in zip(ranges, removal[1:]))
    return reduced, new_ranges


def containment_ok(structure: Structure, ranges, removal) -> bool:
    if len(removal) != len(ranges) + 1:
        raise ValueError(f"removal needs {len(ranges) + 1} sets, got {len(removal)}")
    s0 = frozenset(removal[0])
    for r, si in zip(ranges, removal[1:]):
        if (frozenset(r) - frozenset(si)) & s0:
            return False
    return True


def is_irrelevant(structure: Structure, ranges: Sequence[Iterable], removal: Sequence[Iterable], phi) -> bool:
    """Whether ``removal = (S_0, ..., S_h)`` is irrelevant for ``phi``.

    ``phi`` is a list of sentences or an object with an ``equivalent``
    method such as :class:`TypeEquivalence`.  The containment condition
    ``R_i \\ S_i ⊆ V \\ S_0`` is checked first.
    """
    if not containment_ok(structure, ranges, removal):
        return False
    if frozenset(removal[0]) & frozenset(structure.constants.values()):
        return False
    eq = as_equivalence(phi)
    reduced, new_ranges = apply_removal(structure, ranges, removal)
    return eq.equivalent(reduced, new_ranges, structure, [frozenset(r) for r in ranges])


DEFAULT_MAX_CANDIDATES = 1000


def _candidates(structure, ranges, zone, widen):
    zone = structure.ordered(zone)
    ranges = [frozenset(r) for r in ranges]
    # stage 1: single vertices, annotations shrink only where forced
    for v in zone:
        s0 = frozenset({v})
        yield (s0,) + tuple(s0 & r for r in ranges)
    if not widen:
        return
    # stage 2: larger deletions, annotations still shrink only where forced
    for size in range(2, len(zone) + 1):
        for combo in itertools.combinations(zone, size):
            s0 = frozenset(combo)
            yield (s0,) + tuple(s0 & r for r in ranges)
    # stage 3: every deletion combined with every extra annotation removal inside the zone
    for size in range(1, len(zone) + 1):
        for combo in itertools.combinations(zone, size):
            s0 = frozenset(combo)
            forced = [s0 & r for r in ranges]
            optional = [structure.ordered((r & frozenset(zone)) - s0) for r in ranges]
            choices = [
                [forced[i] | frozenset(extra) for n in range(len(opt) + 1) for extra in itertools.combinations(opt, n)]
                for i, opt in enumerate(optional)
            ]
            for pick in itertools.product(*choices):
                if all(p == f for p, f in zip(pick, forced)):
                    continue  # tried in an earlier stage
                yield (s0,) + tuple(pick)


def find_irrelevant_tuple(structure: Structure, ranges: Sequence[Iterable], phi, zone: Iterable | None = None, *,
                          widen: bool = True, max_candidates: int = DEFAULT_MAX_CANDIDATES,
                          progress: Callable | None = None):
    """First irrelevant ``(S_0, ..., S_h)`` with ``S_0`` non-empty inside ``zone``, or ``None``.

    Search order: singletons ``S_0 = {v}`` in vertex order with
    ``S_i = S_0 ∩ R_i``; then, if ``widen``, larger ``S_0`` by size and
    lexicographic order with the same forced ``S_i``; finally every ``S_0``
    combined with every choice of extra annotation removals ``S_i ⊆ zone``.
    Vertices interpreting constants are never removed.  More than ``max_candidates`` checks raise :class:`CapExceeded`.
    """
    ranges = [frozenset(r) for r in ranges]
    zone = frozenset(structure.universe if zone is None else zone)
    zone -= frozenset(structure.constants.values())
    eq = as_equivalence(phi)
    checked = 0
    for removal in _candidates(structure, ranges, zone, widen):
        checked += 1
        if checked > max_candidates:
            raise CapExceeded(f"irrelevant-tuple search exceeded {max_candidates} candidates")
        if progress is not None:
            progress(removal)
        if is_irrelevant(structure, ranges, removal, eq):
            return removal
    return None
