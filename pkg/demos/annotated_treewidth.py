# Annotated treewidth on small grids, notebook style.
# Run: python3 demos/annotated_treewidth.py

from cmsotw import structures as S
from cmsotw.width import annotated_treewidth, enumerate_rooted_minors, treewidth, treewidth_exact

# the 3x3 grid and its outer face
grid = S.generate("grid", 3)
perimeter = S.grid_perimeter(3)
print("tw(grid3) =", treewidth(grid))
print("tw(grid3, perimeter) =", annotated_treewidth(grid, perimeter))

# the perimeter alone keeps the width at 2 on the 4x4 grid too
for n in (4,):
    g = S.generate("grid", n)
    print(f"tw(grid{n}) = {treewidth(g)}, tw(grid{n}, perimeter) = {annotated_treewidth(g, S.grid_perimeter(n))}")

# annotating every vertex gives plain treewidth back
for family, n in [("path", 5), ("cycle", 5), ("clique", 4), ("star", 4)]:
    g = S.generate(family, n)
    print(f"{family}{n}: tw = {treewidth(g)}, tw(G, V) = {annotated_treewidth(g, g.universe)}")

# rooted minors of a single edge with one root: the empty model, {u}, {u,v}
edge = S.graph("uv", [("u", "v")])
for model in enumerate_rooted_minors(edge, ["u"]):
    print("branch sets:", [sorted(b) for b in model.branch_sets])

# an exact decomposition with its bags
tw, td = treewidth_exact(S.generate("cycle", 5))
print("C5 width", tw, "bags", [sorted(b) for b in td.bags], "valid", td.is_valid(S.generate("cycle", 5)))
