"""Code constructors, weight functions and brute-force oracles."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, DegenerateCode, InvalidArgument
from .field import GF2, FqMatrix, GF2m, kernel_basis, mat_mul, rref
from .plabic import PlabicGraph, graph_to_tanner, random_plabic_graph, tanner_over_field

HAMMING = "hamming"
GRASSMANN = "grassmann"
ORACLE_BUDGET = 1 << 24

# rank-metric parameter set of the plabic construction at 128-bit security: n, k, m, q, w
PRESETS = {"paper-128": dict(n=110, k=7, m=18, q=2, w=12)}


@dataclass
class LinearCode:
    n: int
    k: int
    field: GF2m
    metric: str
    generator: FqMatrix
    parity_check: FqMatrix
    design_weight: int = 0
    provenance: str = ""
    sparse_checks: FqMatrix | None = None  # redundant low-density rows, LDPC only

    def __post_init__(self):
        if self.metric not in (HAMMING, GRASSMANN):
            raise InvalidArgument(f"unknown metric {self.metric!r}")
        g, h = self.generator, self.parity_check
        if g.shape != (self.k, self.n) or h.shape != (self.n - self.k, self.n):
            raise InvalidArgument("generator/parity-check shapes disagree with (n, k)",
                                  n=self.n, k=self.k, g=g.shape, h=h.shape)
        if not mat_mul(g, h.T).is_zero():
            raise DegenerateCode("generator rows are not in the kernel of the parity check")
        if rref(g)[2] != self.k or rref(h)[2] != self.n - self.k:
            raise DegenerateCode("generator or parity check is rank deficient")

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def q(self) -> int:
        return self.field.q

    def weight(self, x) -> int:
        if self.metric == GRASSMANN:
            return grassmann_weight(x, self.field)
        return hamming_weight(x)

    def decoding_checks(self) -> FqMatrix:
        return self.sparse_checks if self.sparse_checks is not None else self.parity_check

    # -- bundle format -------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "n": self.n, "k": self.k, "m": self.m, "q": self.q,
            "metric": self.metric,
            "generator": self.generator.to_text(),
            "parity_check": self.parity_check.to_text(),
            "design_weight": self.design_weight,
            "provenance": self.provenance,
        }
        if self.sparse_checks is not None:
            doc["sparse_checks"] = self.sparse_checks.to_text()
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "LinearCode":
        try:
            doc = json.loads(text)
            g = FqMatrix.from_text(doc["generator"])
            h = FqMatrix.from_text(doc["parity_check"])
            sparse = FqMatrix.from_text(doc["sparse_checks"]) if "sparse_checks" in doc else None
            if doc.get("q", 2) != 2 or doc["m"] != g.field.m:
                raise InvalidArgument("bundle field does not match its matrices")
            return cls(doc["n"], doc["k"], g.field, doc["metric"], g, h,
                       doc.get("design_weight", 0), doc.get("provenance", ""), sparse)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InvalidArgument(f"malformed code bundle: {exc}") from None

    def save(self, path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path) -> "LinearCode":
        return cls.from_json(Path(path).read_text())


def hamming_weight(x) -> int:
    return int(np.count_nonzero(np.asarray(x)))


def grassmann_weight(x, field: GF2m = GF2) -> int:
    """GF(2)-rank of the m x n bit unfolding; plain Hamming weight when m = 1."""
    x = np.asarray(x, dtype=np.int64)
    if field.m == 1:
        return hamming_weight(x)
    cols = x[x != 0]
    if cols.size == 0:
        return 0
    return rref(FqMatrix(field.unfold(cols)))[2]


def _from_generator(g: FqMatrix, metric: str, w: int, provenance: str) -> LinearCode:
    r = rref(g)[2]
    if r != g.rows:
        raise DegenerateCode("generator is rank deficient", rows=g.rows, rank=r)
    h = kernel_basis(g)
    return LinearCode(g.cols, g.rows, g.field, metric, g, h, w, provenance)


def build_moore_generator(g: Sequence[int], k: int, field: GF2m) -> FqMatrix:
    """k x n matrix whose row j holds the q^j-th powers of the seed entries."""
    g = np.asarray(g, dtype=np.int64)
    n = g.size
    if not 0 <= k <= n:
        raise InvalidArgument("need 0 <= k <= n", n=n, k=k)
    field.check_elements(g)
    if n <= field.m:
        bits = FqMatrix(field.unfold(g).T)
        if rref(bits)[2] != n:
            raise DegenerateCode("seed entries are linearly dependent over GF(2)")
    rows = [field.frobenius_power(g, j) for j in range(k)]
    out = FqMatrix(np.array(rows, dtype=np.int64).reshape(k, n), field)
    if rref(out)[2] != k:
        raise DegenerateCode("Moore matrix has rank below k", k=k)
    return out


@dataclass
class GrassmannCodeSpec:
    """Either a plabic graph or a Moore seed vector, plus target parameters."""

    graph: PlabicGraph | None = None
    moore_seed: Sequence[int] | None = None
    n: int | None = None
    k: int | None = None
    m: int = 1
    q: int = 2
    w: int = 0
    field_seed: int | None = None  # lift a plabic Tanner matrix to GF(2^m)
    provenance: str = ""


def build_grassmann_code(spec: GrassmannCodeSpec) -> LinearCode:
    if spec.q != 2:
        raise InvalidArgument("only characteristic 2 is supported", q=spec.q)
    field_ = GF2m(spec.m)
    if spec.graph is not None:
        if spec.m > 1:
            g = tanner_over_field(spec.graph, field_, spec.field_seed or 0)
        else:
            g = graph_to_tanner(spec.graph)
        prov = spec.provenance or "graph:" + hashlib.sha256(spec.graph.to_text().encode()).hexdigest()[:16]
    elif spec.moore_seed is not None:
        g = build_moore_generator(spec.moore_seed, spec.k, field_)
        prov = spec.provenance or "moore"
    else:
        raise InvalidArgument("spec needs a graph or a Moore seed")
    if spec.n is not None and g.cols != spec.n or spec.k is not None and g.rows != spec.k:
        raise InvalidArgument("construction does not have the requested (n, k)",
                              want=(spec.n, spec.k), got=g.shape)
    return _from_generator(g, GRASSMANN, spec.w, prov)


def random_moore_seed(n: int, field: GF2m, seed: int) -> list:
    rng = np.random.default_rng(seed)
    return [int(v) for v in rng.integers(1, field.order, size=n)]


def build_preset(name: str, seed: int = 0) -> LinearCode:
    """Moore-matrix code with the parameters of a named preset (e.g. ``paper-128``)."""
    if name not in PRESETS:
        raise InvalidArgument(f"unknown preset {name!r}", known=sorted(PRESETS))
    p = PRESETS[name]
    f = GF2m(p["m"])
    spec = GrassmannCodeSpec(moore_seed=random_moore_seed(p["n"], f, seed), n=p["n"], k=p["k"],
                             m=p["m"], w=p["w"], provenance=f"preset:{name}:seed={seed}")
    return build_grassmann_code(spec)


def build_plabic_code(n: int, k: int, seed: int, w: int = 0, m: int = 1, density: float = 0.5) -> LinearCode:
    """Grassmann code from a seeded random plabic graph (binary or lifted to GF(2^m))."""
    graph = random_plabic_graph(n, k, seed, density)
    spec = GrassmannCodeSpec(graph=graph, n=n, k=k, m=m, w=w, field_seed=seed,
                             provenance=f"plabic:n={n}:k={k}:seed={seed}:m={m}")
    return build_grassmann_code(spec)


def gallager_checks(n: int, col_weight: int, row_weight: int, seed: int) -> np.ndarray:
    """Gallager band construction: one block of consecutive ones, then column permutations."""
    if n <= 0 or col_weight <= 0 or row_weight <= 0:
        raise InvalidArgument("LDPC parameters must be positive")
    if (n * col_weight) % row_weight or n % row_weight:
        raise InvalidArgument("n * col_weight and n must be divisible by row_weight",
                              n=n, col_weight=col_weight, row_weight=row_weight)
    rng = np.random.default_rng(seed)
    band_rows = n // row_weight
    band = np.zeros((band_rows, n), dtype=np.int64)
    for r in range(band_rows):
        band[r, r * row_weight:(r + 1) * row_weight] = 1
    blocks = [band] + [band[:, rng.permutation(n)] for _ in range(col_weight - 1)]
    return np.vstack(blocks)


def build_ldpc(n: int, col_weight: int, row_weight: int, seed: int, w: int = 0, m: int = 1) -> LinearCode:
    """Regular Gallager LDPC code (Hamming metric).

    The band construction has ``col_weight - 1`` redundant rows, so the
    code dimension is ``n - rank(H)``.  The sparse rows are kept for
    iterative decoding; ``parity_check`` holds an independent basis.  With
    ``m > 1`` the non-zero entries receive seeded random field values.
    """
    sparse = gallager_checks(n, col_weight, row_weight, seed)
    field_ = GF2m(m)
    if m > 1:
        rng = np.random.default_rng([seed, m])
        sparse = sparse * rng.integers(1, field_.order, size=sparse.shape)
    hs = FqMatrix(sparse, field_)
    reduced, _, r, _ = rref(hs)
    h = reduced[:r]
    g = kernel_basis(h)
    return LinearCode(n, n - r, field_, HAMMING, g, h, w,
                      f"ldpc:n={n}:wc={col_weight}:wr={row_weight}:seed={seed}:m={m}", hs)


def lift_code(a) -> LinearCode:
    """Systematic code with generator ``[I | a]`` and parity check ``[a^T | I]``."""
    if not isinstance(a, FqMatrix):
        a = FqMatrix(a)
    k, r = a.shape
    f = a.field
    g = np.hstack([np.eye(k, dtype=np.int64), a.data])
    h = np.hstack([a.data.T, np.eye(r, dtype=np.int64)])  # -a^T = a^T in characteristic 2
    return LinearCode(k + r, k, f, HAMMING if f.m == 1 else GRASSMANN,
                      FqMatrix(g, f), FqMatrix(h, f), 0, "lift")


def random_code(n: int, k: int, seed: int) -> LinearCode:
    """Uniform random binary [n, k] code with a full-rank parity check."""
    rng = np.random.default_rng(seed)
    while True:
        h = FqMatrix(rng.integers(0, 2, size=(n - k, n)))
        if rref(h)[2] == n - k:
            return LinearCode(n, k, GF2, HAMMING, kernel_basis(h), h, 0, f"random:n={n}:k={k}:seed={seed}")


# -- oracles -----------------------------------------------------------------


def _all_messages(k: int, order: int) -> np.ndarray:
    idx = np.arange(order**k, dtype=np.int64)
    digits = [(idx // order**i) % order for i in range(k)]
    return np.stack(digits[::-1], axis=1) if k else np.zeros((1, 0), dtype=np.int64)


def min_weight_bruteforce(code: LinearCode):
    """Exhaustive minimum metric weight over all non-zero codewords.

    Ties are broken by the lexicographically smallest witness.
    """
    budget = code.field.order**code.k
    if budget > ORACLE_BUDGET:
        raise BudgetExceeded("codebook too large for exhaustive search",
                             codewords=str(budget), limit=ORACLE_BUDGET)
    msgs = _all_messages(code.k, code.field.order)[1:]
    if msgs.shape[0] == 0:
        raise DegenerateCode("code has no non-zero codewords")
    words = _encode(msgs, code)
    if code.metric == GRASSMANN and code.m > 1:
        weights = np.array([grassmann_weight(wd, code.field) for wd in words])
    else:
        weights = np.count_nonzero(words, axis=1)
    best = int(weights.min())
    cands = words[weights == best]
    order = np.lexsort(cands.T[::-1])
    return best, cands[order[0]]


def _encode(msgs: np.ndarray, code: LinearCode) -> np.ndarray:
    g = code.generator.data
    if code.m == 1:
        return (msgs @ g) & 1
    out = np.zeros((msgs.shape[0], code.n), dtype=np.int64)
    for i in range(code.k):
        out ^= code.field.mul(msgs[:, i][:, None], g[i][None, :])
    return out


def syndrome_table(h: FqMatrix, max_weight: int | None = None) -> dict:
    """Minimum-weight coset leader for every reachable syndrome (binary only).

    Enumerates all 2^n vectors; keys are syndrome tuples, values are
    ``(weight, leader)``.
    """
    if h.field.m != 1:
        raise InvalidArgument("syndrome table oracle is binary only")
    n = h.cols
    if 2**n > ORACLE_BUDGET:
        raise BudgetExceeded("too many vectors for a syndrome table", n=n)
    vecs = _all_messages(n, 2)
    weights = vecs.sum(axis=1)
    order = np.lexsort((np.arange(len(vecs)), weights))
    synd = (vecs @ h.data.T) & 1
    table = {}
    for i in order:
        if max_weight is not None and weights[i] > max_weight:
            break
        key = tuple(int(v) for v in synd[i])
        if key not in table:
            table[key] = (int(weights[i]), vecs[i].copy())
    return table
