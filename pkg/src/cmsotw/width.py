"""Exact treewidth and annotated treewidth on small graphs.

Graphs are handled internally as adjacency bitmasks indexed by universe
position.  Exact treewidth uses the subset recurrence over elimination
orderings, TW(S ∪ {v}) = max(TW(S), |Q(S, v)|), pruned by a min-fill upper
bound and a minor-min-width lower bound.

Annotated treewidth tw(G, X) is the largest treewidth of an X-rooted minor.
Contracting edges never raises treewidth and adding vertices/edges never
lowers it, so the maximum is reached by a minor whose branch sets each hold
exactly one vertex of X and together cover every component of G that meets
X.  The search enumerates those root assignments only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import CapExceeded
from .structures import Structure

DEFAULT_MAX_N = 16


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask):
    return bin(mask).count("1")


def to_masks(g: Structure, vertices=None) -> tuple[list, list[int]]:
    """Vertex list and adjacency masks of ``g`` (optionally induced on ``vertices``)."""
    verts = list(g.universe) if vertices is None else g.ordered(vertices)
    pos = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for v, i in pos.items():
        for w in g.neighbors(v):
            j = pos.get(w)
            if j is not None:
                adj[i] |= 1 << j
    return verts, adj


# -- exact treewidth -----------------------------------------------------------


def _min_fill_order(n, adj):
    adj = list(adj)
    alive = (1 << n) - 1
    order, width = [], 0
    for _ in range(n):
        best = None
        for v in _bits(alive):
            nb = adj[v] & alive
            fill = 0
            for u in _bits(nb):
                fill += _popcount(nb & ~adj[u] & ~(1 << u))
            cand = (fill, _popcount(nb), v)
            if best is None or cand < best:
                best = cand
        v = best[2]
        nb = adj[v] & alive
        width = max(width, _popcount(nb))
        for u in _bits(nb):
            adj[u] |= nb & ~(1 << u)
        alive &= ~(1 << v)
        order.append(v)
    return width, order


def _minor_min_width(n, adj):
    adj = list(adj)
    alive = (1 << n) - 1
    lb = 0
    while alive:
        v = min(_bits(alive), key=lambda u: (_popcount(adj[u] & alive), u))
        nb = adj[v] & alive
        lb = max(lb, _popcount(nb))
        if nb:
            u = min(_bits(nb), key=lambda w: (_popcount(adj[w] & nb), w))
            merged = (adj[u] | adj[v]) & ~(1 << u) & ~(1 << v)
            adj[u] = merged
            for w in _bits(merged):
                adj[w] = (adj[w] & ~(1 << v)) | (1 << u)
        alive &= ~(1 << v)
    return lb


def _q_size(adj, s, v):
    comp = 1 << v
    frontier = comp
    while frontier:
        nb = 0
        for u in _bits(frontier):
            nb |= adj[u]
        frontier = nb & s & ~comp
        comp |= frontier
    nb = 0
    for u in _bits(comp):
        nb |= adj[u]
    return _popcount(nb & ~s & ~(1 << v))


@lru_cache(maxsize=1 << 16)
def _treewidth_masks(n: int, adj: tuple) -> tuple[int, tuple]:
    """(treewidth, optimal elimination order) for a bitmask graph."""
    if n == 0:
        return 0, ()
    ub, ub_order = _min_fill_order(n, adj)
    lb = _minor_min_width(n, adj)
    if lb >= ub:
        return ub, tuple(ub_order)
    full = (1 << n) - 1
    layer = {0: -1}
    parent = {}
    for _ in range(n):
        nxt = {}
        for s, val in layer.items():
            for v in _bits(full & ~s):
                nv = max(val, _q_size(adj, s, v))
                if nv >= ub:
                    continue
                s2 = s | (1 << v)
                if nv < nxt.get(s2, ub):
                    nxt[s2] = nv
                    parent[s2] = v
        layer = nxt
        if not layer:
            return ub, tuple(ub_order)
    order = []
    s = full
    while s:
        v = parent[s]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    return max(layer[full], 0), tuple(order)


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by tree node ``0..len(bags)-1`` plus the tree's edges."""

    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max(0, max((len(b) for b in self.bags), default=1) - 1)

    def violations(self, g: Structure) -> list[str]:
        """Every broken decomposition condition (empty list when valid)."""
        out = []
        nodes = range(len(self.bags))
        if not self.bags:
            return ["decomposition has no nodes"]
        if len(self.tree_edges) != len(self.bags) - 1 or not _connected(nodes, self.tree_edges):
            out.append("tree: node graph is not a tree")
        covered = frozenset().union(*self.bags)
        for v in g.universe:
            if v not in covered:
                out.append(f"vertex {v!r} in no bag")
        for e in g.edges:
            if not any(e <= b for b in self.bags):
                out.append(f"edge {sorted(map(str, e))} in no bag")
        for v in g.universe:
            holding = [i for i in nodes if v in self.bags[i]]
            sub = [(a, b) for a, b in self.tree_edges if a in holding and b in holding]
            if holding and not _connected(holding, sub):
                out.append(f"bags holding {v!r} are not connected")
        return out

    def is_valid(self, g: Structure) -> bool:
        return not self.violations(g)


def _connected(nodes, edges):
    nodes = list(nodes)
    if not nodes:
        return True
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(nodes)


def decomposition_from_order(g: Structure, order: Iterable) -> TreeDecomposition:
    """Tree decomposition induced by an elimination ordering of ``g``'s vertices."""
    order = list(order)
    pos = {v: i for i, v in enumerate(order)}
    nb = {v: set(g.neighbors(v)) for v in g.universe}
    bags, parent = [], {}
    for v in order:
        higher = {u for u in nb[v] if pos[u] > pos[v]}
        bags.append(frozenset(higher | {v}))
        for u in higher:
            nb[u] |= higher - {u}
        if higher:
            parent[pos[v]] = pos[min(higher, key=pos.__getitem__)]
    if not bags:
        return TreeDecomposition((frozenset(),), ())
    edges = [(i, p) for i, p in parent.items()]
    roots = [i for i in range(len(bags)) if i not in parent]
    edges += [(a, b) for a, b in zip(roots, roots[1:])]
    return TreeDecomposition(tuple(bags), tuple(sorted(edges)))


def treewidth_exact(g: Structure, max_n: int = DEFAULT_MAX_N) -> tuple[int, TreeDecomposition]:
    """Treewidth of ``g`` and a decomposition of exactly that width.

    The empty graph has treewidth 0.
    """
    if len(g) > max_n:
        raise CapExceeded(f"treewidth_exact: |V|={len(g)} exceeds cap {max_n}")
    verts, adj = to_masks(g)
    tw, order = _treewidth_masks(len(verts), tuple(adj))
    return tw, decomposition_from_order(g, [verts[i] for i in order])


def treewidth(g: Structure, max_n: int = DEFAULT_MAX_N) -> int:
    if len(g) > max_n:
        raise CapExceeded(f"treewidth: |V|={len(g)} exceeds cap {max_n}")
    verts, adj = to_masks(g)
    return _treewidth_masks(len(verts), tuple(adj))[0]


# -- rooted minors ---------------------------------------------------------------


@dataclass(frozen=True)
class RootedMinorModel:
    """Branch sets of an X-rooted minor and the minor's edges (index pairs)."""

    branch_sets: tuple[frozenset, ...]
    edges: frozenset

    def minor(self) -> Structure:
        k = len(self.branch_sets)
        return Structure(range(k), [tuple(e) for e in self.edges])

    def violations(self, g: Structure, roots: Iterable) -> list[str]:
        roots = frozenset(roots)
        out = []
        seen = set()
        for i, b in enumerate(self.branch_sets):
            if not b:
                out.append(f"branch set {i} empty")
                continue
            if seen & b:
                out.append(f"branch set {i} overlaps an earlier one")
            seen |= b
            if not b & roots:
                out.append(f"branch set {i} holds no root")
            if not _connected_in(g, b):
                out.append(f"branch set {i} is not connected")
        for e in self.edges:
            i, j = tuple(e)
            if not _connected_in(g, self.branch_sets[i] | self.branch_sets[j]):
                out.append(f"minor edge {i}-{j} not realized")
        return out


def _connected_in(g, vertices):
    vertices = set(vertices)
    if not vertices:
        return True
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


def _connected_mask(adj, mask):
    if not mask:
        return True
    low = mask & -mask
    comp = low
    frontier = low
    while frontier:
        nb = 0
        for u in _bits(frontier):
            nb |= adj[u]
        frontier = nb & mask & ~comp
        comp |= frontier
    return comp == mask


def enumerate_rooted_minors(g: Structure, roots: Iterable, max_n: int = 12) -> Iterator[RootedMinorModel]:
    """Every family of disjoint connected branch sets meeting ``roots``.

    Each family is emitted once, with all edges its branch sets can realize
    (any minor on the same branch sets is a subgraph of that one).  The empty
    model comes first; families are listed in increasing lexicographic order
    of their branch-set bitmasks.
    """
    if len(g) > max_n:
        raise CapExceeded(f"enumerate_rooted_minors: |V|={len(g)} exceeds cap {max_n}")
    verts, adj = to_masks(g)
    n = len(verts)
    rmask = sum(1 << i for i, v in enumerate(verts) if v in frozenset(roots))
    candidates = [s for s in range(1, 1 << n) if s & rmask and _connected_mask(adj, s)]

    def neighborhood(s):
        nb = 0
        for u in _bits(s):
            nb |= adj[u]
        return nb

    nbhd = {s: neighborhood(s) for s in candidates}

    def build(family):
        sets = tuple(frozenset(verts[i] for i in _bits(s)) for s in family)
        edges = frozenset(
            frozenset((i, j))
            for i, j in itertools.combinations(range(len(family)), 2)
            if nbhd[family[i]] & family[j]
        )
        return RootedMinorModel(sets, edges)

    def extend(start, used, family):
        yield build(family)
        for idx in range(start, len(candidates)):
            s = candidates[idx]
            if s & used:
                continue
            family.append(s)
            yield from extend(idx + 1, used | s, family)
            family.pop()

    yield from extend(0, 0, [])


def _components(adj, mask):
    out = []
    rest = mask
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            nb = 0
            for u in _bits(frontier):
                nb |= adj[u]
            frontier = nb & mask & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


def _root_assignments(adj, comp, attach):
    """Ways to split ``comp`` (a component of G - X) among roots in ``attach``.

    Yields maps root -> assigned mask such that every connected piece of
    each assigned mask touches its root.
    """
    verts = list(_bits(comp))
    roots = list(_bits(attach))
    parts = {r: 0 for r in roots}

    def reachable(r, free):
        # vertices joinable to r's branch set through r's part and unassigned ones
        start = adj[r] & (parts[r] | free)
        seen = start
        frontier = start
        while frontier:
            nb = 0
            for u in _bits(frontier):
                nb |= adj[u]
            frontier = nb & (parts[r] | free) & ~seen
            seen |= frontier
        return seen

    def assign(i, free):
        if i == len(verts):
            yield {r: m for r, m in parts.items() if m}
            return
        v = verts[i]
        bit = 1 << v
        for r in roots:
            parts[r] |= bit
            rest = free & ~bit
            if all(parts[q] & ~reachable(q, rest) == 0 for q in roots if parts[q]):
                yield from assign(i + 1, rest)
            parts[r] &= ~bit

    yield from assign(0, comp)


def _anntw_search(n, adj, xmask, stop_at):
    """Largest treewidth over the covering root assignments, stopping once ``stop_at`` is reached."""
    if not xmask:
        return 0
    full = (1 << n) - 1
    live = 0
    for comp in _components(adj, full):
        if comp & xmask:
            live |= comp
    roots = list(_bits(xmask))
    index = {r: i for i, r in enumerate(roots)}
    base = [0] * len(roots)
    for r in roots:
        for w in _bits(adj[r] & xmask):
            base[index[r]] |= 1 << index[w]
    options = []
    for comp in _components(adj, live & ~xmask):
        attach = 0
        for u in _bits(comp):
            attach |= adj[u] & xmask
        if _popcount(attach) < 2:
            continue
        options.append(list(_root_assignments(adj, comp, attach)))

    best = 0
    for combo in itertools.product(*options):
        qadj = list(base)
        for parts in combo:
            reach = {}
            for r, m in parts.items():
                nb = 0
                for u in _bits(m):
                    nb |= adj[u]
                reach[r] = nb
            for r, m in parts.items():
                for r2 in _bits(reach[r] & xmask):
                    if r2 != r:
                        qadj[index[r]] |= 1 << index[r2]
                        qadj[index[r2]] |= 1 << index[r]
                for r2, m2 in parts.items():
                    if r2 != r and reach[r] & m2:
                        qadj[index[r]] |= 1 << index[r2]
                        qadj[index[r2]] |= 1 << index[r]
        tw = _treewidth_masks(len(roots), tuple(qadj))[0]
        if tw > best:
            best = tw
            if best >= stop_at:
                break
    return best


def _prepare(g, roots, max_n):
    if len(g) > max_n:
        raise CapExceeded(f"annotated treewidth: |V|={len(g)} exceeds cap {max_n}")
    roots = frozenset(roots)
    missing = [v for v in roots if v not in g]
    if missing:
        raise ValueError(f"roots outside V(G): {missing}")
    verts, adj = to_masks(g)
    xmask = sum(1 << i for i, v in enumerate(verts) if v in roots)
    return len(verts), adj, xmask


def annotated_treewidth(g: Structure, roots: Iterable, max_n: int = DEFAULT_MAX_N) -> int:
    """tw(G, X): the maximum treewidth of an X-rooted minor of ``g``; 0 for X = ∅."""
    n, adj, xmask = _prepare(g, roots, max_n)
    if not xmask:
        return 0
    ub = min(_popcount(xmask) - 1, _min_fill_order(n, adj)[0])
    return _anntw_search(n, adj, xmask, ub)


def anntw_at_most(g: Structure, roots: Iterable, k: int, max_n: int = DEFAULT_MAX_N) -> bool:
    """Whether tw(G, X) <= k; stops at the first rooted minor of treewidth > k."""
    n, adj, xmask = _prepare(g, roots, max_n)
    if _popcount(xmask) - 1 <= k:
        return True
    return _anntw_search(n, adj, xmask, k + 1) <= k
