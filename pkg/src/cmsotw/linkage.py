"""Vertex-disjoint paths: the search kernel behind dp, dp+ and linkages."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Linkage:
    """Pairwise vertex-disjoint paths, each given as a vertex sequence."""

    paths: tuple[tuple, ...]

    @property
    def terminals(self) -> frozenset:
        return frozenset(v for p in self.paths for v in (p[0], p[-1]))

    @property
    def pattern(self) -> frozenset:
        return frozenset(frozenset((p[0], p[-1])) for p in self.paths)

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for p in self.paths for v in p)

    def is_valid(self, adj: Mapping[Hashable, Iterable]) -> bool:
        seen = set()
        for path in self.paths:
            if len(set(path)) != len(path) or seen & set(path):
                return False
            seen |= set(path)
            for a, b in zip(path, path[1:]):
                if b not in adj[a]:
                    return False
        return True


def linkage_equivalent(first: Linkage, second: Linkage) -> bool:
    return first.pattern == second.pattern


def _bfs_dist(adj, source, target, blocked):
    if source == target:
        return 0
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w in dist or w in blocked:
                continue
            if w == target:
                return dist[u] + 1
            dist[w] = dist[u] + 1
            queue.append(w)
    return None


def _chordless_paths(adj, s, t, blocked, key):
    """All s-t paths with no chord, avoiding ``blocked`` (s, t themselves allowed).

    Any s-t path can be shortcut to a chordless one on a subset of its
    vertices, so restricting the search to chordless paths loses nothing for
    disjointness questions.
    """
    if s == t:
        yield (s,)
        return
    path = [s]
    on_path = {s}

    def extend(u):
        for w in sorted(adj[u], key=key):
            if w in on_path or w in blocked:
                continue
            if len(adj[w] & on_path) != 1:
                continue
            if w == t:
                yield tuple(path) + (t,)
                continue
            path.append(w)
            on_path.add(w)
            yield from extend(w)
            path.pop()
            on_path.discard(w)

    yield from extend(s)


def disjoint_paths(
    adj: Mapping[Hashable, frozenset],
    pairs: Sequence[tuple],
    forbidden: Iterable = (),
    key: Callable | None = None,
) -> list[tuple] | None:
    """Find pairwise vertex-disjoint paths linking each pair, or return ``None``.

    ``adj`` maps each vertex to its neighbor set.  A pair ``(v, v)`` is
    linked by the one-vertex path; a vertex used as a terminal by two pairs
    makes the instance unsatisfiable.  No path may touch ``forbidden``.
    Paths come back in the order of ``pairs``, each oriented from its first
    terminal.
    """
    forbidden = frozenset(forbidden)
    key = key or repr
    pairs = [tuple(p) for p in pairs]
    owner: dict = {}
    for i, (s, t) in enumerate(pairs):
        if s not in adj or t not in adj:
            raise KeyError(f"terminal outside graph: {s!r}, {t!r}")
        if s in forbidden or t in forbidden:
            return None
        for v in {s, t}:
            if owner.setdefault(v, i) != i:
                return None
    terminals = frozenset(owner)

    dists = []
    for i, (s, t) in enumerate(pairs):
        d = _bfs_dist(adj, s, t, forbidden | (terminals - {s, t}))
        if d is None:
            return None
        dists.append((d, i))
    order = [i for _, i in sorted(dists)]
    chosen: dict[int, tuple] = {}

    def feasible(rest, used):
        for j in rest:
            s, t = pairs[j]
            if _bfs_dist(adj, s, t, used | forbidden | (terminals - {s, t})) is None:
                return False
        return True

    def search(pos, used):
        if pos == len(order):
            return True
        i = order[pos]
        s, t = pairs[i]
        blocked = used | forbidden | (terminals - {s, t})
        for path in _chordless_paths(adj, s, t, blocked, key):
            now = used | frozenset(path)
            if not feasible(order[pos + 1:], now):
                continue
            chosen[i] = path
            if search(pos + 1, now):
                return True
        chosen.pop(i, None)
        return False

    if not search(0, frozenset()):
        return None
    return [chosen[i] for i in range(len(pairs))]


def find_linkage(structure, pattern: Sequence[tuple], forbidden: Iterable = ()) -> Linkage | None:
    """Linkage realizing ``pattern`` (pairs of distinct terminals) avoiding ``forbidden``."""
    forbidden = frozenset(forbidden)
    seen = set()
    for s, t in pattern:
        if s == t:
            raise ValueError(f"pattern pair ({s!r}, {t!r}) has equal terminals")
        if s in seen or t in seen:
            raise ValueError("terminals must be distinct across pairs")
        seen |= {s, t}
    if seen & forbidden:
        raise ValueError(f"terminal in forbidden set: {sorted(map(str, seen & forbidden))}")
    adj = {v: structure.neighbors(v) for v in structure.universe}
    paths = disjoint_paths(adj, pattern, forbidden, key=structure.sort_key)
    return None if paths is None else Linkage(tuple(paths))
