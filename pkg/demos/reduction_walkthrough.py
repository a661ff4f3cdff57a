# The reduction driver end to end, plus a buffer search on an annulus.
# Run: python3 demos/reduction_walkthrough.py

from cmsotw import logic as L
from cmsotw import structures as S
from cmsotw.annuli import annulus_grid_fixture, find_buffer, influence, refine
from cmsotw.reduction import reduce_for_sentence, replay, toy_localizer
from cmsotw.semantics import evaluate

# every vertex of the 3x3 grid has a neighbour; reduce until treewidth <= 1
grid = S.generate("grid", 3)
phi = L.parse("(forall x (exists y (edge x y)))")
res = reduce_for_sentence(phi, grid, toy_localizer(1))
print(res.trace.format(grid.ordered), end="")
print("kept", list(res.reduced.universe), "edges", sorted(sorted(e) for e in res.reduced.edges))
print("verdict", res.verdict, "naive", evaluate(grid, phi))

# the trace replays to the same reduced graph and ranges
again = replay(grid, [grid.universe] * res.trace.h, res.trace)
print("replay matches:", again == (res.reduced, res.ranges))

# a set quantifier: grid3 keeps its treewidth-3 witness set, so use threshold 3
phi = L.parse("(existsSet 2 X (exists x (in x X)))")
print("exists_2 X nonempty:", reduce_for_sentence(phi, grid, toy_localizer(3)).verdict)

# buffers: 12 concentric 6-cycles, avoid the outer cycle
fixture = annulus_grid_fixture(12, 6)
outer = fixture.annulus.cycle(1)
span = find_buffer(fixture, outer, 3)
print("buffer of width 3 avoiding C1:", span, "influence size", len(influence(fixture, *span)))

# the (2, 1)-refinement of the same annulus: two blocks of six cycles
for w, block in sorted(refine(fixture.annulus, 2, 1).items()):
    print("block", w, "first cycle", block.cycles[0])
