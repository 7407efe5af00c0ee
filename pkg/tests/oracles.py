"""Brute-force reference implementations used only by the tests.

Nothing here imports the library's arithmetic: small fields get their own
tables so the oracles stay independent of the code under test.
"""

import itertools
from math import comb

import numpy as np

# GF(4) = {0, 1, a, a + 1} encoded 0..3, with a^2 = a + 1
_GF4_MUL = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
]


def field_ops(q):
    """(add, mul) on 0..q-1 for q in {2, 3, 4, 5}."""
    if q == 4:
        return (lambda a, b: a ^ b), (lambda a, b: _GF4_MUL[a][b])
    if q in (2, 3, 5):
        return (lambda a, b: (a + b) % q), (lambda a, b: (a * b) % q)
    raise ValueError(q)


def all_subspaces(n, q):
    """Every subspace of GF(q)^n as a frozenset of tuples, grouped by dimension."""
    add, mul = field_ops(q)
    vectors = list(itertools.product(range(q), repeat=n))
    zero = tuple([0] * n)
    layers = [{frozenset([zero])}]
    for _ in range(n):
        nxt = set()
        for space in layers[-1]:
            for v in vectors:
                if v in space:
                    continue
                grown = frozenset(
                    tuple(add(s_i, mul(c, v_i)) for s_i, v_i in zip(s, v))
                    for s in space for c in range(q)
                )
                nxt.add(grown)
        layers.append(nxt)
    return layers


def count_rref_forms(n, k, q):
    """Number of k x n reduced row echelon forms with k pivots over GF(q).

    Row i with pivot p_i has a free entry in every non-pivot column to the
    right of p_i; each choice of free entries is a distinct canonical form.
    """
    total = 0
    for pivots in itertools.combinations(range(n), k):
        free = sum(sum(1 for c in range(p + 1, n) if c not in pivots) for p in pivots)
        total += q**free
    return total


def span_size_rank(rows):
    """GF(2) rank as log2 of the span's cardinality."""
    span = {0}
    for r in rows:
        bits = int("".join(map(str, r)), 2) if len(r) else 0
        span |= {s ^ bits for s in span}
    return len(span).bit_length() - 1


def rank_census(m, n):
    """Count of m x n GF(2) matrices per rank, by exhaustive enumeration."""
    counts = {}
    for bits in itertools.product([0, 1], repeat=m * n):
        rows = [bits[i * n:(i + 1) * n] for i in range(m)]
        r = span_size_rank(rows)
        counts[r] = counts.get(r, 0) + 1
    return counts


def prange_probability(n, k, t):
    return comb(n - k, t) / comb(n, t)


def syndrome_leaders(h):
    """Minimum weight of a solution for every reachable syndrome (binary)."""
    h = np.asarray(h) % 2
    n = h.shape[1]
    best = {}
    for bits in itertools.product([0, 1], repeat=n):
        x = np.array(bits)
        s = tuple((h @ x % 2).tolist())
        w = int(x.sum())
        if s not in best or w < best[s]:
            best[s] = w
    return best


def subspace_counts(n, q):
    """Number of subspaces of GF(q)^n per dimension, by span closure.

    Vectors are encoded as base-q integers; a subspace is a membership mask.
    Each layer is grown by adjoining vectors not yet covered by a previous
    extension of the same space, so every superspace is built once per parent.
    """
    add, mul = field_ops(q)
    size = q**n
    digits = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(size, n)
    place = q ** np.arange(n - 1, -1, -1)
    addt = np.array([[add(a, b) for b in range(q)] for a in range(q)])
    mult = np.array([[mul(a, b) for b in range(q)] for a in range(q)])
    vadd = addt[digits[:, None, :], digits[None, :, :]] @ place
    vmul = np.stack([mult[c][digits] @ place for c in range(q)])
    layer = [np.array([0])]
    counts = [1]
    for _ in range(n):
        seen = {}
        for members in layer:
            covered = np.zeros(size, bool)
            covered[members] = True
            while not covered.all():
                v = int(np.argmin(covered))
                mask = np.zeros(size, bool)
                mask[vadd[members[:, None], vmul[:, v][None, :]].ravel()] = True
                covered |= mask
                seen.setdefault(mask.tobytes(), mask)
        layer = [np.flatnonzero(m) for m in seen.values()]
        counts.append(len(layer))
    return counts
