"""
From a plabic graph to a binary code
====================================

Load the two shipped graphs, read off their boundary measurement matrices,
check the Pluecker coordinates and turn the sign pattern into a code.
"""

# the boundary measurement keeps edge weights as positive symbols
import sympy
from grassmann_isd import plabic
from grassmann_isd.codes import GrassmannCodeSpec, build_grassmann_code, min_weight_bruteforce

g = plabic.load_golden("gr24")
bm = plabic.boundary_measurement(g)
sympy.pprint(bm.sympy())

# binarization: positive entries become 1, negative entries and missing paths 0
tanner = plabic.binarize(bm)
print(tanner.tolist())

# every maximal minor is a signed sum over vertex-disjoint path families
coords = plabic.plucker_coordinates(bm)
for cols, value in coords.items():
    family = plabic.path_family_sum(g, [c + 1 for c in cols])
    print(cols, sympy.simplify(value), sympy.simplify(value - family) == 0)

# with all weights 1 the signed matrix need not be totally non-negative
unit = plabic.boundary_measurement(plabic.load_golden("gr26"), {i: 1 for i in range(12)})
print(plabic.is_totally_nonnegative(unit.values))

# the binarized matrix generates a code; its parity check is the kernel
code = build_grassmann_code(GrassmannCodeSpec(graph=g))
print(code.generator.to_text())
print(code.parity_check.to_text())
print("minimum weight and witness:", min_weight_bruteforce(code))

# the dimension of the cell fixes k: k(n - k) = 4 with n = 4
print(plabic.infer_k_from_dimension(4, 4))

# random graphs of any shape come from a seed
r = plabic.random_plabic_graph(8, 3, seed=1)
print(plabic.graph_to_tanner(r).tolist())
