"""Finite colored graphs with constants, plus the derived views used elsewhere.

A :class:`Structure` over a colored-graph vocabulary has an ordered universe,
a symmetric irreflexive edge relation, unary color predicates and constant
symbols.  Vertices are opaque hashable ids; their position in ``universe``
fixes the enumeration order used by every search in the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

Vertex = Hashable


@dataclass(frozen=True)
class Vocabulary:
    colors: tuple[str, ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        names = list(self.colors) + list(self.constants)
        if len(set(names)) != len(names):
            raise ValueError("vocabulary names must be unique")


class Structure:
    """Immutable colored graph with constants.

    The constructor normalizes but does not validate; call :func:`validate`
    to check the well-formedness invariants.
    """

    __slots__ = ("universe", "edges", "colors", "constants", "_index", "_adj", "_hash")

    def __init__(
        self,
        universe: Iterable[Vertex],
        edges: Iterable[Iterable[Vertex]] = (),
        colors: Mapping[str, Iterable[Vertex]] | None = None,
        constants: Mapping[str, Vertex] | None = None,
    ):
        self.universe = tuple(universe)
        self.edges = frozenset(frozenset(e) for e in edges)
        self.colors = {name: frozenset(vs) for name, vs in (colors or {}).items()}
        self.constants = dict(constants or {})
        self._index = {v: i for i, v in enumerate(self.universe)}
        adj = {v: set() for v in self.universe}
        for e in self.edges:
            if len(e) == 2:
                u, v = tuple(e)
                if u in adj and v in adj:
                    adj[u].add(v)
                    adj[v].add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._hash = None

    # -- basic accessors -------------------------------------------------

    @property
    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple(self.colors), tuple(self.constants))

    def __len__(self):
        return len(self.universe)

    def __contains__(self, v):
        return v in self._index

    def index(self, v) -> int:
        return self._index[v]

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def has_edge(self, u, v) -> bool:
        return v in self._adj.get(u, ())

    def sort_key(self, v) -> int:
        return self._index[v]

    def ordered(self, vertices: Iterable[Vertex]) -> list:
        return sorted(vertices, key=self._index.__getitem__)

    def edge_list(self) -> list[tuple]:
        """Edges as ordered pairs, sorted by vertex order."""
        out = []
        for e in self.edges:
            u, v = sorted(e, key=self._index.__getitem__)
            out.append((u, v))
        out.sort(key=lambda p: (self._index[p[0]], self._index[p[1]]))
        return out

    # -- derived structures ----------------------------------------------

    def remove(self, vertices: Iterable[Vertex]) -> "Structure":
        """The substructure induced on the universe minus ``vertices``."""
        gone = frozenset(vertices)
        for name, c in self.constants.items():
            if c in gone:
                raise ValueError(f"cannot remove vertex {c!r} interpreting constant {name}")
        return Structure(
            [v for v in self.universe if v not in gone],
            [e for e in self.edges if not (e & gone)],
            {name: vs - gone for name, vs in self.colors.items()},
            self.constants,
        )

    def induced(self, vertices: Iterable[Vertex]) -> "Structure":
        keep = frozenset(vertices)
        return self.remove(v for v in self.universe if v not in keep)

    def with_colors(self, extra: Mapping[str, Iterable[Vertex]]) -> "Structure":
        colors = dict(self.colors)
        for name, vs in extra.items():
            colors[name] = frozenset(vs)
        return Structure(self.universe, self.edges, colors, self.constants)

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.edges == other.edges
            and self.colors == other.colors
            and self.constants == other.constants
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (
                    self.universe,
                    self.edges,
                    frozenset(self.colors.items()),
                    frozenset(self.constants.items()),
                )
            )
        return self._hash

    def __repr__(self):
        extra = ""
        if self.colors:
            extra += f", colors={sorted(self.colors)}"
        if self.constants:
            extra += f", constants={sorted(self.constants)}"
        return f"<Structure |V|={len(self.universe)} |E|={len(self.edges)}{extra}>"


def graph(vertices: Iterable[Vertex], edges: Iterable[Iterable[Vertex]] = ()) -> Structure:
    """Shorthand for a plain graph (no colors or constants)."""
    return Structure(vertices, edges)


def validate(s: Structure) -> str | None:
    """Return a description of the first violated invariant, or ``None``."""
    if len(set(s.universe)) != len(s.universe):
        return "universe contains duplicate vertices"
    for e in sorted(s.edges, key=repr):
        if len(e) != 2:
            return f"anti-reflexive: loop on {next(iter(e))!r}"
        for v in e:
            if v not in s:
                return f"edge endpoint {v!r} outside universe"
    if set(s.colors) & set(s.constants):
        return "color and constant names overlap"
    for name, vs in s.colors.items():
        for v in vs:
            if v not in s:
                return f"color {name} contains {v!r} outside universe"
    for name, v in s.constants.items():
        if v not in s:
            return f"constant {name} mapped to {v!r} outside universe"
    return None


def check_assignment(s: Structure, assignment: Mapping[str, object]) -> None:
    """Raise ``ValueError`` if some bound value lies outside ``s``."""
    for var, value in assignment.items():
        if isinstance(value, (frozenset, set)):
            for item in value:
                if isinstance(item, frozenset):
                    if item not in s.edges:
                        raise ValueError(f"{var}: {set(item)} is not an edge")
                elif item not in s:
                    raise ValueError(f"{var}: {item!r} outside universe")
        elif value not in s:
            raise ValueError(f"{var}: {value!r} outside universe")


# -- views -------------------------------------------------------------------


def gaifman(s: Structure) -> Structure:
    """Gaifman graph. For colored-graph vocabularies this is just (V, E)."""
    return Structure(s.universe, s.edges)


def incidence_graph(g: Structure) -> tuple[Structure, tuple, tuple]:
    """Incidence graph I(G) with its vertex side and edge side.

    Each edge uv (u before v) becomes the vertex ``("edge", u, v)``.
    """
    edge_side = tuple(("edge", u, v) for u, v in g.edge_list())
    edges = []
    for ev in edge_side:
        edges.append((ev[1], ev))
        edges.append((ev[2], ev))
    inc = Structure(tuple(g.universe) + edge_side, edges)
    return inc, tuple(g.universe), edge_side


def apex_transform(g: Structure, apices: Iterable[Vertex]) -> Structure:
    """Structure over {E, c_1..c_l, C_1..C_l} for the apex tuple ``apices``.

    Edges between an apex and a non-apex are dropped; ``c_i`` names the i-th
    apex and color ``C_i`` holds its non-apex neighbors.
    """
    apices = tuple(apices)
    for a in apices:
        if a not in g:
            raise ValueError(f"apex {a!r} outside V(G)")
    if len(set(apices)) != len(apices):
        raise ValueError("apex tuple has repeated entries")
    top = frozenset(apices)
    kept = [e for e in g.edges if len(e & top) != 1]
    colors = {f"C{i}": g.neighbors(a) - top for i, a in enumerate(apices, 1)}
    constants = {f"c{i}": a for i, a in enumerate(apices, 1)}
    return Structure(g.universe, kept, colors, constants)


# -- fixtures ------------------------------------------------------------------

FAMILIES = ("path", "cycle", "clique", "grid", "annulus-grid", "star")


def generate(family: str, *params: int) -> Structure:
    """Deterministically labeled fixture graphs; vertex ids are ``"0", "1", ...``.

    ``grid(n)`` numbers vertices row-major; ``annulus-grid(p, q)`` numbers
    cycle ``i`` (1 = outermost) position ``j`` as ``(i-1)*q + j``, and its rails
    run radially through equal positions.  ``star(k)`` is K_{1,k} with center 0.
    """
    if family == "path":
        (n,) = params
        _need(n >= 1, family, params)
        return graph(_ids(n), [(str(i), str(i + 1)) for i in range(n - 1)])
    if family == "cycle":
        (n,) = params
        _need(n >= 3, family, params)
        return graph(_ids(n), [(str(i), str((i + 1) % n)) for i in range(n)])
    if family == "clique":
        (n,) = params
        _need(n >= 1, family, params)
        return graph(_ids(n), [(str(i), str(j)) for i in range(n) for j in range(i + 1, n)])
    if family == "star":
        (k,) = params
        _need(k >= 1, family, params)
        return graph(_ids(k + 1), [("0", str(i)) for i in range(1, k + 1)])
    if family == "grid":
        if len(params) == 1:
            rows = cols = params[0]
        else:
            rows, cols = params
        _need(rows >= 1 and cols >= 1, family, params)
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((str(v), str(v + 1)))
                if r + 1 < rows:
                    edges.append((str(v), str(v + cols)))
        return graph(_ids(rows * cols), edges)
    if family == "annulus-grid":
        p, q = params
        _need(p >= 1 and q >= 3, family, params)
        edges = []
        for i in range(p):
            for j in range(q):
                v = i * q + j
                edges.append((str(v), str(i * q + (j + 1) % q)))
                if i + 1 < p:
                    edges.append((str(v), str(v + q)))
        return graph(_ids(p * q), edges)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def grid_perimeter(n: int, m: int | None = None) -> frozenset:
    """Vertex ids on the outer face of ``generate("grid", n, m)``."""
    m = n if m is None else m
    return frozenset(
        str(r * m + c) for r in range(n) for c in range(m) if r in (0, n - 1) or c in (0, m - 1)
    )


def _ids(n):
    return [str(i) for i in range(n)]


def _need(cond, family, params):
    if not cond:
        raise ValueError(f"parameters {params} too small for family {family!r}")


# -- file format ---------------------------------------------------------------


def to_dict(s: Structure) -> dict:
    """Serializable form; unordered pairs are written lexicographically."""
    edges = sorted(sorted(str(v) for v in e) for e in s.edges)
    return {
        "vertices": [str(v) for v in s.universe],
        "edges": edges,
        "colors": {name: [str(v) for v in s.ordered(vs)] for name, vs in sorted(s.colors.items())},
        "constants": {name: str(v) for name, v in sorted(s.constants.items())},
    }


def from_dict(doc: Mapping) -> Structure:
    return Structure(
        doc["vertices"],
        [tuple(e) for e in doc.get("edges", [])],
        doc.get("colors", {}),
        doc.get("constants", {}),
    )


def dumps(s: Structure) -> str:
    return json.dumps(to_dict(s), indent=2, sort_keys=True)


def loads(text: str) -> Structure:
    return from_dict(json.loads(text))


def load(path) -> Structure:
    with open(path) as fh:
        return loads(fh.read())


def dump(s: Structure, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(s) + "\n")
