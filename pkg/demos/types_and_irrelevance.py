# Annotated types and irrelevant vertices, notebook style.
# Run: python3 demos/types_and_irrelevance.py

from cmsotw import logic as L
from cmsotw import structures as S
from cmsotw.anntypes import (
    TypeEquivalence,
    TypeParams,
    annotated_type,
    find_irrelevant_tuple,
    is_irrelevant,
    type_verdict,
)
from cmsotw.semantics import evaluate

# two FO variables, no set variables, every quantifier ranges over V
params = TypeParams(m=0, r=2)
k3, p3 = S.generate("clique", 3), S.generate("path", 3)
tk, tp = annotated_type(k3, [k3.universe] * 2, params), annotated_type(p3, [p3.universe] * 2, params)
print("type(K3) =", tk.serialize())
print("type(P3) =", tp.serialize())
print("equal?", tk == tp)

# the verdict of a matching prenex sentence can be read off the type alone
phi = L.parse("(forall x (forall y (or (= x y) (edge x y))))")
pf = L.to_prenex(phi)
print("complete? K3:", type_verdict(pf, tk), "P3:", type_verdict(pf, tp))
print("naive check agrees:", evaluate(k3, phi), evaluate(p3, phi))

# one set variable with t = 1: the set level records whether tw(G, X) <= 1
params = TypeParams(m=1, r=0, t=1, card_cap=2)
grid = S.generate("grid", 2)
print("set-level type of grid2:", annotated_type(grid, [grid.universe], params).serialize())

# a removable endpoint of P12 for rank-1 sentences
p12 = S.generate("path", 12)
psi = TypeEquivalence(TypeParams(0, 1))
found = find_irrelevant_tuple(p12, [p12.universe], psi)
print("irrelevant tuple in P12:", [sorted(s) for s in found])
print("rank-1 types cannot see connectivity, so the middle vertex may go as well:", is_irrelevant(p12, [p12.universe], [{"5"}, {"5"}], psi))

# three distinct vertices in C3: no single vertex can go
c3 = S.generate("clique", 3)
distinct = L.parse("(exists x (exists y (exists z (and (not (= x y)) (and (not (= y z)) (not (= x z)))))))")
print("C3 singleton search:", find_irrelevant_tuple(c3, [c3.universe] * 3, [distinct], widen=False))
