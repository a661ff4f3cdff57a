"""Brute-force evaluation of formulas on small structures.

This is the ground truth the rest of the package is checked against: FO
quantifiers range over the universe in order, set quantifiers range over
all subsets (binary counting order over the universe, or over the edge
list for edge sets), and ``existsSet k`` keeps only sets whose annotated
treewidth is at most k.  Edge sets are measured through their endpoints.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from . import logic as L
from .errors import CapExceeded, FormulaError
from .linkage import Linkage, disjoint_paths
from .structures import Structure, check_assignment
from .width import DEFAULT_MAX_N, annotated_treewidth

DEFAULT_MAX_SUBSET_N = 12


def subsets(items: Sequence) -> list[frozenset]:
    """All subsets of ``items`` in binary counting order (item i is bit i)."""
    out = [frozenset()]
    for item in items:
        out = out + [s | {item} for s in out]
    # the doubling above yields binary order with the first item as lowest bit
    return out


class Evaluator:
    """Evaluates formulas on one structure, caching annotated treewidths and dp answers."""

    def __init__(self, structure: Structure, *, max_subset_n: int = DEFAULT_MAX_SUBSET_N,
                 max_n: int = DEFAULT_MAX_N):
        self.structure = structure
        self.max_subset_n = max_subset_n
        self.max_n = max_n
        self._anntw: dict[frozenset, int] = {}
        self._dp: dict[tuple, bool] = {}
        self._subsets: dict[tuple, list] = {}
        self._adj = {v: structure.neighbors(v) for v in structure.universe}
        self._edge_list = [frozenset(e) for e in structure.edge_list()]

    # -- cached primitives ---------------------------------------------------

    def anntw(self, vertices: frozenset) -> int:
        value = self._anntw.get(vertices)
        if value is None:
            value = annotated_treewidth(self.structure, vertices, max_n=self.max_n)
            self._anntw[vertices] = value
        return value

    def set_anntw(self, value: frozenset, kind: str) -> int:
        if kind == L.ESET:
            return self.anntw(frozenset(v for e in value for v in e))
        return self.anntw(value)

    def dp(self, pairs: tuple, avoid: frozenset = frozenset()) -> bool:
        key = (pairs, avoid)
        value = self._dp.get(key)
        if value is None:
            value = disjoint_paths(self._adj, pairs, avoid, key=self.structure.sort_key) is not None
            self._dp[key] = value
        return value

    def domain(self, kind: str, within: Iterable | None = None) -> list[frozenset]:
        if kind == L.ESET:
            items = self._edge_list
            if within is not None:
                keep = frozenset(within)
                items = [e for e in items if e <= keep]
        else:
            items = list(self.structure.universe)
            if within is not None:
                keep = frozenset(within)
                items = [v for v in items if v in keep]
        if len(items) > self.max_subset_n:
            raise CapExceeded(
                f"set quantification over {len(items)} elements exceeds cap {self.max_subset_n}"
            )
        key = (kind, tuple(items))
        cached = self._subsets.get(key)
        if cached is None:
            cached = self._subsets[key] = subsets(items)
        return cached

    # -- evaluation ----------------------------------------------------------

    def term(self, t, env):
        if t.startswith("@"):
            try:
                return self.structure.constants[t[1:]]
            except KeyError:
                raise FormulaError(f"unknown constant {t}") from None
        try:
            return env[t]
        except KeyError:
            raise FormulaError(f"unbound variable {t}") from None

    def set_value(self, name, env):
        if name in env:
            return env[name]
        if name in self.structure.colors:
            return self.structure.colors[name]
        raise FormulaError(f"unbound variable {name}")

    def holds(self, phi: L.Formula, env: Mapping) -> bool:
        return self._DISPATCH[type(phi)](self, phi, env)

    def _top(self, phi, env):
        return True

    def _bottom(self, phi, env):
        return False

    def _eq(self, phi, env):
        return self.term(phi.left, env) == self.term(phi.right, env)

    def _edge(self, phi, env):
        return self.term(phi.right, env) in self._adj[self.term(phi.left, env)]

    def _mem(self, phi, env):
        return self.term(phi.term, env) in self.set_value(phi.set, env)

    def _mem_e(self, phi, env):
        e = frozenset((self.term(phi.left, env), self.term(phi.right, env)))
        return e in self.set_value(phi.set, env)

    def _card(self, phi, env):
        return len(self.set_value(phi.set, env)) % phi.p == 0

    def _pairs(self, pairs, env):
        return tuple((self.term(a, env), self.term(b, env)) for a, b in pairs)

    def _dp_atom(self, phi, env):
        return self.dp(self._pairs(phi.pairs, env))

    def _dp_plus(self, phi, env):
        avoid = frozenset(self.set_value(phi.avoid, env))
        pairs = self._pairs(phi.pairs, env)
        if any(v in avoid for pair in pairs for v in pair):
            return False
        return self.dp(pairs, avoid)

    def _anntw_leq(self, phi, env):
        value = self.set_value(phi.set, env)
        kind = L.ESET if any(isinstance(x, frozenset) for x in value) else L.VSET
        return self.set_anntw(frozenset(value), kind) <= phi.k

    def _not(self, phi, env):
        return not self.holds(phi.arg, env)

    def _and(self, phi, env):
        return all(self.holds(a, env) for a in phi.args)

    def _or(self, phi, env):
        return any(self.holds(a, env) for a in phi.args)

    def _fo(self, phi, env, want):
        inner = dict(env)
        for v in self.structure.universe:
            inner[phi.var] = v
            if self.holds(phi.body, inner) == want:
                return want
        return not want

    def _exists(self, phi, env):
        return self._fo(phi, env, True)

    def _forall(self, phi, env):
        return self._fo(phi, env, False)

    def _setq(self, phi, env, want, k):
        inner = dict(env)
        for value in self.domain(phi.kind):
            if k is not None and self.set_anntw(value, phi.kind) > k:
                continue
            inner[phi.var] = value
            if self.holds(phi.body, inner) == want:
                return want
        return not want

    def _exists_set(self, phi, env):
        return self._setq(phi, env, True, phi.k)

    def _forall_set(self, phi, env):
        return self._setq(phi, env, False, phi.k)

    def _exists_set_u(self, phi, env):
        return self._setq(phi, env, True, None)

    def _forall_set_u(self, phi, env):
        return self._setq(phi, env, False, None)

    _DISPATCH = {
        L.Top: _top,
        L.Bottom: _bottom,
        L.Eq: _eq,
        L.Edge: _edge,
        L.Mem: _mem,
        L.MemE: _mem_e,
        L.Card: _card,
        L.Dp: _dp_atom,
        L.DpPlus: _dp_plus,
        L.AnnTwLeq: _anntw_leq,
        L.Not: _not,
        L.And: _and,
        L.Or: _or,
        L.Exists: _exists,
        L.Forall: _forall,
        L.ExistsSet: _exists_set,
        L.ForallSet: _forall_set,
        L.ExistsSetU: _exists_set_u,
        L.ForallSetU: _forall_set_u,
    }

    # -- annotated (range-restricted) prenex evaluation -------------------------

    def holds_annotated(self, prenex: L.PrenexForm, ranges: Sequence[Iterable], env=None) -> bool:
        """Truth of ``prenex`` when the i-th quantifier ranges over ``ranges[i]``.

        FO quantifiers take vertices of their range; set quantifiers take its
        subsets (edge sets: edges with both ends inside it).  The ``k`` filter
        of parameterized quantifiers still applies.
        """
        if len(ranges) != len(prenex.prefix):
            raise ValueError(f"need {len(prenex.prefix)} ranges, got {len(ranges)}")
        order = self.structure.ordered
        ranges = [frozenset(r) for r in ranges]

        def go(i, env):
            if i == len(prenex.prefix):
                return self.holds(prenex.matrix, env)
            q = prenex.prefix[i]
            want = q.mode == "exists"
            if q.is_set:
                values = (
                    v for v in self.domain(q.sort, ranges[i])
                    if q.k is None or self.set_anntw(v, q.sort) <= q.k
                )
            else:
                values = order(ranges[i])
            inner = dict(env)
            for value in values:
                inner[q.var] = value
                if go(i + 1, inner) == want:
                    return want
            return not want

        return go(0, dict(env or {}))


def _check_bound(structure, phi, assignment):
    free = L.free_variables(phi)
    for name, sort in free.items():
        if name in assignment:
            continue
        if sort != L.FO and name in structure.colors:
            continue
        raise FormulaError(f"unbound variable {name}")
    check_assignment(structure, assignment)


def evaluate(structure: Structure, phi: L.Formula, assignment: Mapping | None = None, *,
             max_subset_n: int = DEFAULT_MAX_SUBSET_N, evaluator: Evaluator | None = None) -> bool:
    """Whether ``structure`` satisfies ``phi`` under ``assignment``.

    Assignment values are vertices for FO variables, frozensets of vertices
    for vertex-set variables and frozensets of edges (each a frozenset pair)
    for edge-set variables.
    """
    assignment = dict(assignment or {})
    _check_bound(structure, phi, assignment)
    ev = evaluator or Evaluator(structure, max_subset_n=max_subset_n)
    return ev.holds(phi, assignment)


def evaluate_annotated(structure: Structure, prenex: L.PrenexForm, ranges: Sequence[Iterable], *,
                       max_subset_n: int = DEFAULT_MAX_SUBSET_N, evaluator: Evaluator | None = None) -> bool:
    ev = evaluator or Evaluator(structure, max_subset_n=max_subset_n)
    return ev.holds_annotated(prenex, ranges)


def evaluate_query(structure: Structure, phi: L.Formula, variables: Sequence[tuple[str, str]], *,
                   max_subset_n: int = DEFAULT_MAX_SUBSET_N) -> dict | None:
    """First satisfying assignment of the free ``variables`` of ``phi``, or ``None``.

    ``variables`` lists ``(name, sort)`` pairs.  Candidate tuples are
    enumerated lexicographically with the first variable most significant;
    vertices follow universe order and sets follow binary counting order.
    """
    ev = Evaluator(structure, max_subset_n=max_subset_n)
    free = L.free_variables(phi)
    names = {name for name, _ in variables}
    for name, sort in free.items():
        if name not in names and not (sort != L.FO and name in structure.colors):
            raise FormulaError(f"free variable {name} not listed")
    domains = []
    for name, sort in variables:
        if sort == L.FO:
            domains.append(list(structure.universe))
        elif sort in (L.VSET, L.ESET):
            domains.append(ev.domain(sort))
        else:
            raise ValueError(f"bad sort {sort!r}")

    def search(i, env):
        if i == len(variables):
            return dict(env) if ev.holds(phi, env) else None
        name = variables[i][0]
        for value in domains[i]:
            env[name] = value
            found = search(i + 1, env)
            if found is not None:
                return found
        env.pop(name, None)
        return None

    return search(0, {})


def check_dp(structure: Structure, pairs: Sequence[tuple]) -> tuple[bool, Linkage | None]:
    """Whether vertex-disjoint paths link every pair; the witness when they do.

    A pair ``(v, v)`` is linked by the single-vertex path ``(v,)``.
    """
    adj = {v: structure.neighbors(v) for v in structure.universe}
    paths = disjoint_paths(adj, [tuple(p) for p in pairs], key=structure.sort_key)
    if paths is None:
        return False, None
    return True, Linkage(tuple(paths))


def check_dp_plus(structure: Structure, avoid: Iterable, pairs: Sequence[tuple]) -> bool:
    """dp restricted to paths avoiding ``avoid``; terminals inside ``avoid`` are an error."""
    avoid = frozenset(avoid)
    for v in avoid:
        if v not in structure:
            raise ValueError(f"{v!r} outside universe")
    bad = [v for pair in pairs for v in pair if v in avoid]
    if bad:
        raise ValueError(f"terminals inside the avoided set: {bad}")
    adj = {v: structure.neighbors(v) for v in structure.universe}
    return disjoint_paths(adj, [tuple(p) for p in pairs], avoid, key=structure.sort_key) is not None
