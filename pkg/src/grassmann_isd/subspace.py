"""Gaussian binomials, the subspace distance, and rank-metric sphere counts.

Everything here is exact integer or rational arithmetic so that identities
such as the q-Pascal recurrence can be checked to exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import InvalidArgument, Unsatisfiable
from .field import FqMatrix, rref


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n.

    ``k > n`` gives 0 by convention; negative arguments are rejected.
    """
    if n < 0 or k < 0 or q < 0:
        raise InvalidArgument("gaussian_binomial needs non-negative arguments", n=n, k=k, q=q)
    if k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    return num // den


def gaussian_binomial0(n: int, k: int, q: int) -> int:
    """Like :func:`gaussian_binomial` but 0 for any out-of-range index."""
    if n < 0 or k < 0 or k > n:
        return 0
    return gaussian_binomial(n, k, q)


def pascal_identity_residual(n: int, k: int, q: int) -> int:
    return (
        gaussian_binomial(n, k, q)
        - gaussian_binomial(n - 1, k, q)
        - q ** (n - k) * gaussian_binomial(n - 1, k - 1, q)
    )


@dataclass(frozen=True)
class SubspaceBasis:
    """Rows of ``vectors`` are a basis; linear independence is enforced."""

    vectors: FqMatrix

    def __post_init__(self):
        r = rref(self.vectors)[2]
        if r != self.vectors.rows:
            raise InvalidArgument("basis vectors are linearly dependent", rows=self.vectors.rows, rank=r)

    @property
    def ambient_dim(self) -> int:
        return self.vectors.cols

    @property
    def dim(self) -> int:
        return self.vectors.rows

    @classmethod
    def span(cls, vectors: FqMatrix) -> "SubspaceBasis":
        """Basis of the row space of an arbitrary (possibly dependent) matrix."""
        reduced, _, r, _ = rref(vectors)
        return cls(reduced[:r])


def intersection_dim(u: SubspaceBasis, v: SubspaceBasis) -> int:
    if u.ambient_dim != v.ambient_dim or u.vectors.field != v.vectors.field:
        raise InvalidArgument("subspaces live in different ambient spaces",
                              left=u.ambient_dim, right=v.ambient_dim)
    stacked = FqMatrix(np.vstack([u.vectors.data, v.vectors.data]), u.vectors.field)
    return u.dim + v.dim - rref(stacked)[2]


def subspace_distance(u: SubspaceBasis, v: SubspaceBasis) -> int:
    return u.dim + v.dim - 2 * intersection_dim(u, v)


def sphere_size(n: int, m: int, q: int, t: int) -> int:
    """Number of m x n matrices over GF(q) of rank exactly t."""
    if t < 0:
        raise InvalidArgument("radius must be non-negative", t=t)
    if t == 0:
        return 1
    if t > min(m, n):
        return 0
    num = den = 1
    for j in range(t):
        num *= (q**n - q**j) * (q**m - q**j)
        den *= q**t - q**j
    return num // den


def ball_volume(n: int, m: int, q: int, t: int) -> int:
    return sum(sphere_size(n, m, q, i) for i in range(t + 1))


def gv_radius(n: int, k: int, m: int, q: int) -> int:
    """Smallest t whose rank-metric ball reaches ``q^(m(n-k))`` elements."""
    if not 0 <= k <= n:
        raise InvalidArgument("need 0 <= k <= n", n=n, k=k)
    if q < 2:
        raise InvalidArgument("q must be at least 2", q=q)
    target = q ** (m * (n - k))
    vol = 0
    for t in range(min(m, n) + 1):
        vol += sphere_size(n, m, q, t)
        if vol >= target:
            return t
    raise Unsatisfiable("no radius up to min(m, n) reaches the threshold",
                        n=n, k=k, m=m, q=q, max_volume=str(vol))


def prange_success_probability(n: int, k: int, t: int) -> Fraction:
    """Chance that a uniformly random information set misses a weight-t error."""
    if t < 0 or k < 0 or k > n:
        raise InvalidArgument("need t >= 0 and 0 <= k <= n", n=n, k=k, t=t)
    if t > n - k:
        return Fraction(0)
    return Fraction(comb(n - k, t), comb(n, t))
