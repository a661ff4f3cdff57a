"""Railed annuli on plane fixtures: validation, influence, refinements and buffers.

A fixture is a graph drawn as concentric cycles.  The embedding is recorded
as a ``ring`` number per vertex: vertices of cycle C_i sit on ring ``i``,
vertices drawn strictly between C_i and C_{i+1} get a value strictly between
``i`` and ``i + 1``, and vertices outside C_1 or inside C_p fall below 1 or
above p.  On such fixtures every cell of the drawing is a single edge, so the
influence of a cycle range is the set of vertices whose ring lies in it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .linkage import Linkage, find_linkage, linkage_equivalent  # noqa: F401  (re-exported)
from .structures import Structure, from_dict, generate, to_dict


@dataclass(frozen=True)
class RailedAnnulus:
    """Cycles C_1..C_p (outer to inner) and rails P_1..P_q, each a vertex list."""

    cycles: tuple[tuple, ...]
    rails: tuple[tuple, ...]

    @property
    def p(self) -> int:
        return len(self.cycles)

    @property
    def q(self) -> int:
        return len(self.rails)

    def cycle(self, i: int) -> tuple:
        """C_i, 1-based."""
        return self.cycles[i - 1]

    def intersection(self, i: int, j: int) -> tuple:
        """P_{i,j} = C_i ∩ P_j, in rail order (1-based indices)."""
        on_cycle = frozenset(self.cycles[i - 1])
        return tuple(v for v in self.rails[j - 1] if v in on_cycle)

    def intersections(self) -> dict[tuple[int, int], tuple]:
        return {(i, j): self.intersection(i, j) for i in range(1, self.p + 1) for j in range(1, self.q + 1)}

    def vertices(self) -> frozenset:
        return frozenset(v for c in self.cycles for v in c) | frozenset(v for r in self.rails for v in r)


@dataclass(frozen=True)
class PlaneFixture:
    graph: Structure
    annulus: RailedAnnulus
    ring: Mapping

    def __post_init__(self):
        object.__setattr__(self, "ring", dict(self.ring))


def validate_annulus(g: Structure, a: RailedAnnulus) -> str | None:
    """First violated condition of a railed annulus in ``g``, or ``None``."""
    if a.p < 3 or a.q < 3:
        return f"need at least 3 cycles and 3 rails, got p={a.p}, q={a.q}"
    seen: dict = {}
    for i, c in enumerate(a.cycles, 1):
        if len(c) < 3 or len(set(c)) != len(c):
            return f"C{i} is not a simple cycle"
        for u, v in zip(c, c[1:] + c[:1]):
            if not g.has_edge(u, v):
                return f"C{i}: {u!r}-{v!r} is not an edge"
        for v in c:
            if v in seen:
                return f"C{i} and C{seen[v]} share vertex {v!r}"
            seen[v] = i
    used: dict = {}
    for j, path in enumerate(a.rails, 1):
        if not path or len(set(path)) != len(path):
            return f"P{j} is not a simple path"
        for v in path:
            if v not in g:
                return f"P{j}: {v!r} outside graph"
            if v in used:
                return f"P{j} and P{used[v]} share vertex {v!r}"
            used[v] = j
        for u, v in zip(path, path[1:]):
            if not g.has_edge(u, v):
                return f"P{j}: {u!r}-{v!r} is not an edge"
    for j, path in enumerate(a.rails, 1):
        first_positions = []
        for i in range(1, a.p + 1):
            on_cycle = frozenset(a.cycles[i - 1])
            idx = [k for k, v in enumerate(path) if v in on_cycle]
            if not idx:
                return f"C{i} ∩ P{j} is empty"
            if idx != list(range(idx[0], idx[-1] + 1)):
                return f"C{i} ∩ P{j} is not a path"
            first_positions.append(idx[0])
        if first_positions[0] > first_positions[-1]:
            return f"P{j} runs from the inside out"
    return None


def influence(fixture: PlaneFixture, i: int, j: int) -> frozenset:
    """Vertices drawn on or between C_i and C_j (1-based, inclusive)."""
    if not fixture.ring:
        raise ValueError("fixture carries no embedding (ring map)")
    if not 1 <= i <= j <= fixture.annulus.p:
        raise ValueError(f"cycle range [{i}..{j}] outside [1..{fixture.annulus.p}]")
    missing = [v for v in fixture.graph.universe if v not in fixture.ring]
    if missing:
        raise ValueError(f"no ring recorded for {missing[0]!r}")
    return frozenset(v for v in fixture.graph.universe if i <= fixture.ring[v] <= j)


def _crop_rail(rail: Sequence, first: frozenset, last: frozenset) -> tuple:
    start = min(k for k, v in enumerate(rail) if v in first)
    end = max(k for k, v in enumerate(rail) if v in last)
    return tuple(rail[start:end + 1])


def sub_annulus(a: RailedAnnulus, i: int, j: int) -> RailedAnnulus:
    """Cycles C_i..C_j with the rails cropped to run between them."""
    first, last = frozenset(a.cycles[i - 1]), frozenset(a.cycles[j - 1])
    return RailedAnnulus(tuple(a.cycles[i - 1:j]), tuple(_crop_rail(r, first, last) for r in a.rails))


def block_index(w: Sequence[int], s: int) -> int:
    """1-based position of the block ``w`` (most significant digit first)."""
    h = len(w)
    return 1 + sum(wi * s ** (h - i) for i, wi in enumerate(w, 1))


def refine(a: RailedAnnulus, s: int, h: int) -> dict[tuple, RailedAnnulus]:
    """The (s, h)-refinement: ``s**h`` consecutive blocks of ``p' = p / s**h`` cycles.

    Block ``w`` in ``[0, s-1]^h`` is cropped by C_{1+p'(n-1)} and C_{p'n}
    with ``n = block_index(w, s)``.
    """
    if s < 1 or h < 0:
        raise ValueError("need s >= 1 and h >= 0")
    blocks = s ** h
    if a.p % blocks or a.p // blocks < 3:
        raise ValueError(f"p={a.p} is not s^h * p' with p' >= 3 (s={s}, h={h})")
    pp = a.p // blocks
    out = {}
    for n in range(1, blocks + 1):
        w, rest = [], n - 1
        for i in range(h):
            w.append(rest // s ** (h - 1 - i))
            rest %= s ** (h - 1 - i)
        w = tuple(w)
        assert block_index(w, s) == n
        out[w] = sub_annulus(a, 1 + pp * (n - 1), pp * n)
    return out


def find_buffer(fixture: PlaneFixture, avoid: Iterable, width: int) -> tuple[int, int] | None:
    """Leftmost range of ``width`` consecutive cycles whose influence misses ``avoid``."""
    p = fixture.annulus.p
    if width < 1 or width > p:
        raise ValueError(f"width {width} outside [1, {p}]")
    avoid = frozenset(avoid)
    for i in range(1, p - width + 2):
        if not influence(fixture, i, i + width - 1) & avoid:
            return (i, i + width - 1)
    return None


# -- fixtures --------------------------------------------------------------------


def annulus_grid_fixture(p: int, q: int, subdivide: bool = False) -> PlaneFixture:
    """``generate("annulus-grid", p, q)`` as a fixture with its cycles and radial rails.

    With ``subdivide`` every rail edge between C_i and C_{i+1} gets a middle
    vertex ``"s<i>_<j>"`` drawn strictly between the two cycles.
    """
    base = generate("annulus-grid", p, q)
    cycles = tuple(tuple(str(i * q + j) for j in range(q)) for i in range(p))
    ring = {str(i * q + j): i + 1 for i in range(p) for j in range(q)}
    if not subdivide:
        rails = tuple(tuple(str(i * q + j) for i in range(p)) for j in range(q))
        return PlaneFixture(base, RailedAnnulus(cycles, rails), ring)
    vertices = list(base.universe)
    edges = [tuple(e) for e in base.edges if not _radial(e, q)]
    rails = []
    for j in range(q):
        rail = []
        for i in range(p):
            rail.append(str(i * q + j))
            if i + 1 < p:
                mid = f"s{i + 1}_{j}"
                vertices.append(mid)
                ring[mid] = i + 1.5
                edges += [(str(i * q + j), mid), (mid, str((i + 1) * q + j))]
                rail.append(mid)
        rails.append(tuple(rail))
    return PlaneFixture(Structure(vertices, edges), RailedAnnulus(cycles, tuple(rails)), ring)


def _radial(e, q):
    u, v = sorted(int(x) for x in e)
    return v - u == q


def fixture_to_dict(f: PlaneFixture) -> dict:
    doc = to_dict(f.graph)
    doc["cycles"] = [[str(v) for v in c] for c in f.annulus.cycles]
    doc["rails"] = [[str(v) for v in r] for r in f.annulus.rails]
    doc["ring"] = {str(v): f.ring[v] for v in f.graph.universe if v in f.ring}
    return doc


def fixture_from_dict(doc: Mapping) -> PlaneFixture:
    for key in ("cycles", "rails", "ring"):
        if key not in doc:
            raise ValueError(f"fixture lacks the {key!r} field")
    a = RailedAnnulus(tuple(tuple(c) for c in doc["cycles"]), tuple(tuple(r) for r in doc["rails"]))
    return PlaneFixture(from_dict(doc), a, doc["ring"])


def dumps_fixture(f: PlaneFixture) -> str:
    return json.dumps(fixture_to_dict(f), indent=2, sort_keys=True)


def load_fixture(path) -> PlaneFixture:
    with open(path) as fh:
        return fixture_from_dict(json.load(fh))
