"""Formulas of CMSO with annotated-treewidth set quantifiers and dp predicates.

Concrete syntax is a parenthesized prefix notation::

    (exists x (existsSet 2 X (and (in x X) (card 2 X))))
    (forallSetU F E (dp (x y) (@c1 z)))

Terms are first-order variables or constants written ``@name``.  Set
quantifiers take an optional sort token ``V`` (vertex sets, the default) or
``E`` (edge sets) after the variable.  Bound variables are alpha-renamed at
parse time so that no binder shadows another binder, a free variable or a
color.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import FormulaError

DEFAULT_CARD_CAP = 16

FO, VSET, ESET = "fo", "V", "E"

Term = str


def is_constant(term: Term) -> bool:
    return term.startswith("@")


# -- AST -------------------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Edge:
    left: Term
    right: Term


@dataclass(frozen=True)
class Mem:
    """``term ∈ X`` for a vertex-set variable or a color."""

    term: Term
    set: str


@dataclass(frozen=True)
class MemE:
    """The edge ``{left, right}`` belongs to the edge-set variable ``set``."""

    left: Term
    right: Term
    set: str


@dataclass(frozen=True)
class Card:
    p: int
    set: str


@dataclass(frozen=True)
class Dp:
    pairs: tuple[tuple[Term, Term], ...]


@dataclass(frozen=True)
class DpPlus:
    avoid: str
    pairs: tuple[tuple[Term, Term], ...]


@dataclass(frozen=True)
class AnnTwLeq:
    k: int
    set: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    k: int
    var: str
    kind: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    k: int
    var: str
    kind: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSetU:
    var: str
    kind: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSetU:
    var: str
    kind: str
    body: "Formula"


Formula = Union[
    Top, Bottom, Eq, Edge, Mem, MemE, Card, Dp, DpPlus, AnnTwLeq,
    Not, And, Or, Exists, Forall, ExistsSet, ForallSet, ExistsSetU, ForallSetU,
]

ATOMS = (Top, Bottom, Eq, Edge, Mem, MemE, Card, Dp, DpPlus, AnnTwLeq)
FO_QUANTIFIERS = (Exists, Forall)
SET_QUANTIFIERS = (ExistsSet, ForallSet, ExistsSetU, ForallSetU)
QUANTIFIERS = FO_QUANTIFIERS + SET_QUANTIFIERS

TRUE = Top()
FALSE = Bottom()


def conj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else Or(tuple(args))


def iff(a: Formula, b: Formula) -> Formula:
    return Or((And((a, b)), And((Not(a), Not(b)))))


def children(phi: Formula) -> tuple:
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, (And, Or)):
        return phi.args
    if isinstance(phi, QUANTIFIERS):
        return (phi.body,)
    return ()


def walk(phi: Formula) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def atom_terms(phi: Formula) -> tuple[Term, ...]:
    if isinstance(phi, (Eq, Edge)):
        return (phi.left, phi.right)
    if isinstance(phi, Mem):
        return (phi.term,)
    if isinstance(phi, MemE):
        return (phi.left, phi.right)
    if isinstance(phi, (Dp, DpPlus)):
        return tuple(t for pair in phi.pairs for t in pair)
    return ()


def atom_sets(phi: Formula) -> tuple[str, ...]:
    if isinstance(phi, (Mem, MemE, Card, AnnTwLeq)):
        return (phi.set,)
    if isinstance(phi, DpPlus):
        return (phi.avoid,)
    return ()


def quantifier_sort(phi: Formula) -> str:
    if isinstance(phi, FO_QUANTIFIERS):
        return FO
    return phi.kind


def free_variables(phi: Formula) -> dict[str, str]:
    """Free variable names mapped to their sort (``fo``, ``V`` or ``E``).

    Set names that are never bound are reported with sort ``V`` or ``E``
    according to use; callers that allow colors filter those out.
    """
    out: dict[str, str] = {}

    def visit(node, bound):
        if isinstance(node, QUANTIFIERS):
            visit(node.body, bound | {node.var})
            return
        for t in atom_terms(node):
            if not is_constant(t) and t not in bound:
                out.setdefault(t, FO)
        for s in atom_sets(node):
            if s not in bound:
                out.setdefault(s, ESET if isinstance(node, MemE) else VSET)
        for c in children(node):
            visit(c, bound)

    visit(phi, frozenset())
    return out


def max_tw_parameter(phi: Formula) -> int:
    """Largest k used by a parameterized quantifier or ``anntw<=``; 0 if none."""
    ks = [n.k for n in walk(phi) if isinstance(n, (ExistsSet, ForallSet, AnnTwLeq))]
    return max(ks, default=0)


def max_card_parameter(phi: Formula) -> int:
    ps = [n.p for n in walk(phi) if isinstance(n, Card)]
    return max(ps, default=0)


# -- rendering -----------------------------------------------------------------


def render(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Eq):
        return f"(= {phi.left} {phi.right})"
    if isinstance(phi, Edge):
        return f"(edge {phi.left} {phi.right})"
    if isinstance(phi, Mem):
        return f"(in {phi.term} {phi.set})"
    if isinstance(phi, MemE):
        return f"(inE {phi.left} {phi.right} {phi.set})"
    if isinstance(phi, Card):
        return f"(card {phi.p} {phi.set})"
    if isinstance(phi, Dp):
        return "(dp " + " ".join(f"({a} {b})" for a, b in phi.pairs) + ")"
    if isinstance(phi, DpPlus):
        return f"(dp+ {phi.avoid} " + " ".join(f"({a} {b})" for a, b in phi.pairs) + ")"
    if isinstance(phi, AnnTwLeq):
        return f"(anntw<= {phi.k} {phi.set})"
    if isinstance(phi, Not):
        return f"(not {render(phi.arg)})"
    if isinstance(phi, And):
        return "(and " + " ".join(render(a) for a in phi.args) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(render(a) for a in phi.args) + ")"
    if isinstance(phi, Exists):
        return f"(exists {phi.var} {render(phi.body)})"
    if isinstance(phi, Forall):
        return f"(forall {phi.var} {render(phi.body)})"
    kind = "" if isinstance(phi, QUANTIFIERS) and phi.kind == VSET else f" {phi.kind}"
    if isinstance(phi, ExistsSet):
        return f"(existsSet {phi.k} {phi.var}{kind} {render(phi.body)})"
    if isinstance(phi, ForallSet):
        return f"(forallSet {phi.k} {phi.var}{kind} {render(phi.body)})"
    if isinstance(phi, ExistsSetU):
        return f"(existsSetU {phi.var}{kind} {render(phi.body)})"
    if isinstance(phi, ForallSetU):
        return f"(forallSetU {phi.var}{kind} {render(phi.body)})"
    raise TypeError(f"not a formula: {phi!r}")


def formula_length(phi: Formula) -> int:
    """Length of the canonical encoding, i.e. of ``render(phi)``.

    Numeric parameters are written in decimal, so the length grows with the
    number of digits of every k and p.  ``(= x x)`` has length 7 and a binary
    ``and`` adds 7 characters to the lengths of its arguments.
    """
    return len(render(phi))


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass
class _Node:
    items: list
    offset: int


def _read(text: str):
    tokens = [(m.group(), m.start()) for m in _TOKEN.finditer(text)]
    if not tokens:
        raise FormulaError("empty formula", 0)
    pos = 0

    def read_one():
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaError("unexpected end of input", len(text))
        tok, off = tokens[pos]
        pos += 1
        if tok == ")":
            raise FormulaError("unexpected ')'", off)
        if tok != "(":
            return (tok, off)
        items = []
        while True:
            if pos >= len(tokens):
                raise FormulaError("unclosed '('", off)
            if tokens[pos][0] == ")":
                pos += 1
                return _Node(items, off)
            items.append(read_one())

    tree = read_one()
    if pos != len(tokens):
        raise FormulaError("trailing input", tokens[pos][1])
    return tree, {tok for tok, _ in tokens}


class _Parser:
    def __init__(self, used_names, free, colors, card_cap):
        self.used = set(used_names) | set(free) | set(colors)
        self.free = dict(free)
        self.colors = frozenset(colors)
        self.card_cap = card_cap

    def fresh(self, base):
        for i in itertools.count(1):
            name = f"{base}_{i}"
            if name not in self.used:
                self.used.add(name)
                return name

    # scope maps source name -> (renamed, sort)
    def formula(self, node, scope):
        if isinstance(node, tuple):
            tok, off = node
            if tok == "true":
                return TRUE
            if tok == "false":
                return FALSE
            raise FormulaError(f"expected a formula, got {tok!r}", off)
        if not node.items:
            raise FormulaError("empty form", node.offset)
        head = node.items[0]
        if not isinstance(head, tuple):
            raise FormulaError("operator expected", node.offset)
        op, off = head
        args = node.items[1:]
        handler = self.OPS.get(op)
        if handler is None:
            raise FormulaError(f"unknown operator {op!r}", off)
        return handler(self, args, scope, node.offset)

    def token(self, item, what):
        if not isinstance(item, tuple):
            raise FormulaError(f"expected {what}", item.offset)
        return item

    def integer(self, item, what):
        tok, off = self.token(item, what)
        if not tok.isdigit():
            raise FormulaError(f"expected {what}, got {tok!r}", off)
        return int(tok)

    def term(self, item, scope):
        tok, off = self.token(item, "a term")
        if tok.startswith("@"):
            if not _NAME.match(tok[1:]):
                raise FormulaError(f"bad constant name {tok!r}", off)
            return tok
        if tok in scope:
            name, sort = scope[tok]
            if sort != FO:
                raise FormulaError(f"{tok} is a set variable, expected a term", off)
            return name
        if self.free.get(tok) == FO:
            return tok
        raise FormulaError(f"unbound variable {tok}", off)

    def setref(self, item, scope, kinds=(VSET,)):
        tok, off = self.token(item, "a set variable")
        if tok in scope:
            name, sort = scope[tok]
        elif tok in self.free and self.free[tok] != FO:
            name, sort = tok, self.free[tok]
        elif tok in self.colors:
            name, sort = tok, VSET
        else:
            raise FormulaError(f"unbound variable {tok}", off)
        if sort not in kinds:
            raise FormulaError(f"{tok} has sort {sort}, expected one of {kinds}", off)
        return name

    def arity(self, args, n, off, op):
        if len(args) != n:
            raise FormulaError(f"{op} takes {n} arguments, got {len(args)}", off)

    def binder(self, item, scope, sort):
        tok, off = self.token(item, "a variable name")
        if not _NAME.match(tok) or tok in ("true", "false", "V", "E"):
            raise FormulaError(f"bad variable name {tok!r}", off)
        shadowing = tok in scope or tok in self.free or tok in self.colors
        name = self.fresh(tok) if shadowing else tok
        inner = dict(scope)
        inner[tok] = (name, sort)
        return name, inner

    # handlers -------------------------------------------------------------

    def _eq(self, args, scope, off):
        self.arity(args, 2, off, "=")
        return Eq(self.term(args[0], scope), self.term(args[1], scope))

    def _edge(self, args, scope, off):
        self.arity(args, 2, off, "edge")
        return Edge(self.term(args[0], scope), self.term(args[1], scope))

    def _in(self, args, scope, off):
        self.arity(args, 2, off, "in")
        return Mem(self.term(args[0], scope), self.setref(args[1], scope))

    def _in_e(self, args, scope, off):
        self.arity(args, 3, off, "inE")
        return MemE(
            self.term(args[0], scope), self.term(args[1], scope), self.setref(args[2], scope, (ESET,))
        )

    def _card(self, args, scope, off):
        self.arity(args, 2, off, "card")
        p = self.integer(args[0], "modulus p")
        if p < 2:
            raise FormulaError(f"card needs p >= 2, got {p}", off)
        if p > self.card_cap:
            raise FormulaError(f"card modulus {p} exceeds cap {self.card_cap}", off)
        return Card(p, self.setref(args[1], scope, (VSET, ESET)))

    def _pairs(self, items, scope, off):
        if not items:
            raise FormulaError("dp needs at least one pair", off)
        pairs = []
        for item in items:
            if not isinstance(item, _Node) or len(item.items) != 2:
                raise FormulaError("dp pairs are written (x y)", off if isinstance(item, tuple) else item.offset)
            pairs.append((self.term(item.items[0], scope), self.term(item.items[1], scope)))
        return tuple(pairs)

    def _dp(self, args, scope, off):
        return Dp(self._pairs(args, scope, off))

    def _dp_plus(self, args, scope, off):
        if not args:
            raise FormulaError("dp+ needs a set and pairs", off)
        return DpPlus(self.setref(args[0], scope), self._pairs(args[1:], scope, off))

    def _anntw(self, args, scope, off):
        self.arity(args, 2, off, "anntw<=")
        return AnnTwLeq(self.integer(args[0], "k"), self.setref(args[1], scope, (VSET, ESET)))

    def _not(self, args, scope, off):
        self.arity(args, 1, off, "not")
        return Not(self.formula(args[0], scope))

    def _and(self, args, scope, off):
        if len(args) < 2:
            raise FormulaError("and takes at least 2 arguments", off)
        return And(tuple(self.formula(a, scope) for a in args))

    def _or(self, args, scope, off):
        if len(args) < 2:
            raise FormulaError("or takes at least 2 arguments", off)
        return Or(tuple(self.formula(a, scope) for a in args))

    def _fo_quant(cls):
        def handler(self, args, scope, off):
            self.arity(args, 2, off, cls.__name__.lower())
            name, inner = self.binder(args[0], scope, FO)
            return cls(name, self.formula(args[1], inner))

        return handler

    def _set_quant(cls, parameterized):
        def handler(self, args, scope, off):
            if parameterized:
                if not args:
                    raise FormulaError("missing k", off)
                k = self.integer(args[0], "k")
                args = args[1:]
            kind = VSET
            if (
                len(args) == 3
                and isinstance(args[1], tuple)
                and args[1][0] in (VSET, ESET)
            ):
                kind = args[1][0]
                args = [args[0], args[2]]
            self.arity(args, 2, off, "set quantifier")
            name, inner = self.binder(args[0], scope, kind)
            body = self.formula(args[1], inner)
            return cls(k, name, kind, body) if parameterized else cls(name, kind, body)

        return handler

    OPS = {
        "=": _eq,
        "edge": _edge,
        "in": _in,
        "inE": _in_e,
        "card": _card,
        "dp": _dp,
        "dp+": _dp_plus,
        "anntw<=": _anntw,
        "not": _not,
        "and": _and,
        "or": _or,
        "exists": _fo_quant(Exists),
        "forall": _fo_quant(Forall),
        "existsSet": _set_quant(ExistsSet, True),
        "forallSet": _set_quant(ForallSet, True),
        "existsSetU": _set_quant(ExistsSetU, False),
        "forallSetU": _set_quant(ForallSetU, False),
    }


def parse(
    text: str,
    *,
    free: Mapping[str, str] | None = None,
    colors=(),
    card_cap: int = DEFAULT_CARD_CAP,
) -> Formula:
    """Parse the concrete syntax into a :data:`Formula`.

    ``free`` declares free variables with their sort (``"fo"``, ``"V"``,
    ``"E"``); ``colors`` lists unary predicate names usable in set positions.
    Any other unbound name is an error.
    """
    tree, names = _read(text)
    free = dict(free or {})
    for name, sort in free.items():
        if sort not in (FO, VSET, ESET):
            raise ValueError(f"bad sort {sort!r} for free variable {name}")
    return _Parser(names, free, colors, card_cap).formula(tree, {})


# -- rewriting -----------------------------------------------------------------


def eliminate_universal_param(phi: Formula) -> Formula:
    """Rewrite every ``forallSet k X φ`` as ``not existsSet k X not φ``."""
    if isinstance(phi, ForallSet):
        return Not(ExistsSet(phi.k, phi.var, phi.kind, Not(eliminate_universal_param(phi.body))))
    if isinstance(phi, Not):
        return Not(eliminate_universal_param(phi.arg))
    if isinstance(phi, And):
        return And(tuple(eliminate_universal_param(a) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(eliminate_universal_param(a) for a in phi.args))
    if isinstance(phi, QUANTIFIERS):
        return _rebuild(phi, eliminate_universal_param(phi.body))
    return phi


def _rebuild(q, body, var=None):
    var = q.var if var is None else var
    if isinstance(q, (Exists, Forall)):
        return type(q)(var, body)
    if isinstance(q, (ExistsSet, ForallSet)):
        return type(q)(q.k, var, q.kind, body)
    return type(q)(var, q.kind, body)


def rename_apart(phi: Formula, avoid=()) -> Formula:
    """Rename binders so every bound variable name is used by one binder only."""
    used = set(avoid)
    for node in walk(phi):
        used.update(t for t in atom_terms(node) if not is_constant(t))
        used.update(atom_sets(node))
    seen: set[str] = set()

    def fresh(base):
        for i in itertools.count(1):
            cand = f"{base}_{i}"
            if cand not in used:
                used.add(cand)
                return cand

    def go(node, env):
        if isinstance(node, QUANTIFIERS):
            name = node.var
            if name in seen or name in avoid:
                name = fresh(node.var)
            seen.add(name)
            inner = dict(env)
            inner[node.var] = name
            return _rebuild(node, go(node.body, inner), name)
        if isinstance(node, Not):
            return Not(go(node.arg, env))
        if isinstance(node, (And, Or)):
            return type(node)(tuple(go(a, env) for a in node.args))
        return substitute_names(node, env)

    return go(phi, {})


def substitute_names(atom: Formula, env: Mapping[str, str]) -> Formula:
    """Rename variables occurring in an atom (terms and set names)."""
    t = lambda x: env.get(x, x)  # noqa: E731
    if isinstance(atom, Eq):
        return Eq(t(atom.left), t(atom.right))
    if isinstance(atom, Edge):
        return Edge(t(atom.left), t(atom.right))
    if isinstance(atom, Mem):
        return Mem(t(atom.term), t(atom.set))
    if isinstance(atom, MemE):
        return MemE(t(atom.left), t(atom.right), t(atom.set))
    if isinstance(atom, Card):
        return Card(atom.p, t(atom.set))
    if isinstance(atom, Dp):
        return Dp(tuple((t(a), t(b)) for a, b in atom.pairs))
    if isinstance(atom, DpPlus):
        return DpPlus(t(atom.avoid), tuple((t(a), t(b)) for a, b in atom.pairs))
    if isinstance(atom, AnnTwLeq):
        return AnnTwLeq(atom.k, t(atom.set))
    return atom


# -- prenex form -----------------------------------------------------------------


@dataclass(frozen=True)
class Quantifier:
    """One prefix entry. ``k`` is ``None`` for FO and unbounded set quantifiers."""

    mode: str  # "exists" | "forall"
    var: str
    sort: str  # "fo" | "V" | "E"
    k: int | None = None

    def dual(self) -> "Quantifier":
        return Quantifier("forall" if self.mode == "exists" else "exists", self.var, self.sort, self.k)

    @property
    def is_set(self) -> bool:
        return self.sort != FO

    def wrap(self, body: Formula) -> Formula:
        ex = self.mode == "exists"
        if self.sort == FO:
            return Exists(self.var, body) if ex else Forall(self.var, body)
        if self.k is None:
            return ExistsSetU(self.var, self.sort, body) if ex else ForallSetU(self.var, self.sort, body)
        return ExistsSet(self.k, self.var, self.sort, body) if ex else ForallSet(self.k, self.var, self.sort, body)


@dataclass(frozen=True)
class PrenexForm:
    prefix: tuple[Quantifier, ...]
    matrix: Formula

    @property
    def set_prefix(self) -> tuple[Quantifier, ...]:
        return tuple(q for q in self.prefix if q.is_set)

    @property
    def fo_prefix(self) -> tuple[Quantifier, ...]:
        return tuple(q for q in self.prefix if not q.is_set)

    @property
    def m(self) -> int:
        return len(self.set_prefix)

    @property
    def r(self) -> int:
        return len(self.fo_prefix)

    @property
    def t(self) -> int:
        ks = [q.k for q in self.prefix if q.k is not None]
        return max(ks + [max_tw_parameter(self.matrix)])

    def is_sets_first(self) -> bool:
        sorts = [q.is_set for q in self.prefix]
        return sorts == sorted(sorts, reverse=True)

    def to_formula(self) -> Formula:
        body = self.matrix
        for q in reversed(self.prefix):
            body = q.wrap(body)
        return body


def is_quantifier_free(phi: Formula) -> bool:
    return not any(isinstance(n, QUANTIFIERS) for n in walk(phi))


def to_prenex(phi: Formula) -> PrenexForm:
    """Prenex normal form with all set quantifiers ahead of all FO quantifiers.

    Quantifiers are pulled out through ``not``/``and``/``or`` (dualizing
    under negation); the quantifier-free parts are left untouched.  An FO
    quantifier whose scope contains a set quantifier is traded for a
    singleton set quantifier ``∃_0 X_x`` plus FO variables pinned to the
    unique element of ``X_x``, which keeps equivalence on every structure
    with a non-empty universe.
    """
    fv = free_variables(phi)
    if fv:
        raise FormulaError(f"to_prenex expects a sentence; free: {sorted(fv)}")
    phi = rename_apart(phi)
    used = {n.var for n in walk(phi) if isinstance(n, QUANTIFIERS)}

    def fresh(base):
        for i in itertools.count(1):
            cand = f"{base}_{i}"
            if cand not in used:
                used.add(cand)
                return cand

    def pull(node):
        if isinstance(node, Not):
            s, f, m = pull(node.arg)
            return [q.dual() for q in s], [q.dual() for q in f], Not(m)
        if isinstance(node, (And, Or)):
            s, f, ms = [], [], []
            for a in node.args:
                sa, fa, ma = pull(a)
                s += sa
                f += fa
                ms.append(ma)
            return s, f, type(node)(tuple(ms))
        if isinstance(node, SET_QUANTIFIERS):
            s, f, m = pull(node.body)
            mode = "exists" if isinstance(node, (ExistsSet, ExistsSetU)) else "forall"
            k = node.k if isinstance(node, (ExistsSet, ForallSet)) else None
            return [Quantifier(mode, node.var, node.kind, k)] + s, f, m
        if isinstance(node, FO_QUANTIFIERS):
            s, f, m = pull(node.body)
            mode = "exists" if isinstance(node, Exists) else "forall"
            if not s:
                return [], [Quantifier(mode, node.var, FO)] + f, m
            holder = fresh(node.var.upper() + "set")
            witness = fresh(node.var + "w")
            pinned = iff(Mem(witness, holder), Eq(node.var, witness))
            if mode == "exists":
                head = [Quantifier("exists", holder, VSET, 0)]
                fo = [Quantifier("exists", node.var, FO), Quantifier("forall", witness, FO)]
                return head + s, fo + f, And((pinned, m))
            head = [Quantifier("forall", holder, VSET, 0)]
            fo = [Quantifier("forall", node.var, FO), Quantifier("exists", witness, FO)]
            return head + s, fo + f, Or((Not(pinned), m))
        return [], [], node

    s, f, m = pull(phi)
    return PrenexForm(tuple(s + f), m)
