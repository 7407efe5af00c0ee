"""
Counting subspaces and evaluating bounds
========================================

Gaussian binomials count subspaces of F_q^n. Spheres and balls in the
subspace distance follow from them, and so does the Gilbert-Varshamov radius.
"""

import itertools

import numpy as np
from grassmann_isd.bounds import CATALOG, evaluate_bound
from grassmann_isd.field import GF2, FqMatrix, rank
from grassmann_isd.subspace import (SubspaceBasis, ball_volume, gaussian_binomial, gv_radius,
                                    prange_success_probability, sphere_size, subspace_distance)

# the number of k-dimensional subspaces of F_2^4
print([gaussian_binomial(4, k, 2) for k in range(5)])

# brute force: collect the distinct row spaces of all 2 x 4 binary matrices of rank 2
spaces = set()
for bits in itertools.product([0, 1], repeat=8):
    m = np.array(bits).reshape(2, 4)
    if rank(FqMatrix(m, GF2)) == 2:
        span = {tuple((a * m[0] + b * m[1]) % 2) for a in (0, 1) for b in (0, 1)}
        spaces.add(frozenset(span))
print(len(spaces), gaussian_binomial(4, 2, 2))

# subspace distance dim U + dim V - 2 dim(U cap V)
u = SubspaceBasis(FqMatrix([[1, 0, 0, 0], [0, 1, 0, 0]], GF2))
v = SubspaceBasis(FqMatrix([[1, 0, 0, 0], [0, 0, 1, 0]], GF2))
print(subspace_distance(u, v))

# spheres, balls and the radius where the ball first covers q^(m(n-k)) syndromes
print(sphere_size(8, 6, 2, 2), ball_volume(8, 6, 2, 2), gv_radius(8, 4, 6, 2))

# the chance that a random information set avoids the support of a weight-t error
print(prange_success_probability(20, 10, 3))

# every closed form in the catalog is exact when the numbers allow it
for name in ("gaussian_decomposition_cost", "simple_code_failure", "key_size_bits"):
    entry = CATALOG[name]
    params = {"n": 110, "k": 7, "m": 18, "q": 2, "w": 12}
    res = evaluate_bound(name, **{p: params[p] for p in entry.params})
    print(name, entry.formula, res.value)
