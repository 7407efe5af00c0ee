"""Syndrome decoders.

All decoders solve ``H x^T = s`` for a vector of weight at most ``w`` and
return a :class:`DecodeOutcome`; failing to find one is a normal outcome,
not an exception.  Randomness comes only from ``DecoderConfig.seed``, so a
decode is fully reproducible, row-operation counts included.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import ceil
from typing import Callable

import numpy as np

from .codes import LinearCode, hamming_weight
from .errors import DegenerateCode, InvalidArgument
from .field import FqMatrix, GF2m, OpCounter, mul_arrays, rref, rref_array

log = logging.getLogger(__name__)


@dataclass
class DecoderConfig:
    T: int = 1000
    l: int = 0
    p: int = 0
    seed: int = 0
    w: int | None = None
    subset_mode: str = "cyclic"  # or "uniform"

    def __post_init__(self):
        if self.T < 1:
            raise InvalidArgument("T must be at least 1", T=self.T)
        if self.l < 0 or self.p < 0:
            raise InvalidArgument("l and p must be non-negative", l=self.l, p=self.p)
        if self.w is not None and self.p > self.w:
            raise InvalidArgument("p must not exceed w", p=self.p, w=self.w)
        if self.subset_mode not in ("cyclic", "uniform"):
            raise InvalidArgument(f"unknown subset mode {self.subset_mode!r}")


@dataclass
class DecodeOutcome:
    success: bool
    error_vector: np.ndarray | None
    iterations_used: int
    ops: OpCounter
    weight_found: int | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def row_ops(self) -> int:
        return self.ops.total()

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "error_vector": None if self.error_vector is None else [int(v) for v in self.error_vector],
            "iterations_used": self.iterations_used,
            "row_ops": self.row_ops,
            "row_swaps": self.ops.row_swaps,
            "row_additions": self.ops.row_additions,
            "row_scalings": self.ops.row_scalings,
            "weight_found": self.weight_found,
            "diagnostics": self.diagnostics,
        }

    def same_result(self, other: "DecodeOutcome") -> bool:
        """Equality of everything except diagnostics."""
        vec_eq = (self.error_vector is None and other.error_vector is None) or (
            self.error_vector is not None and other.error_vector is not None
            and np.array_equal(self.error_vector, other.error_vector)
        )
        return (vec_eq and self.success == other.success and self.ops == other.ops
                and self.iterations_used == other.iterations_used
                and self.weight_found == other.weight_found)


def _as_matrix(h) -> FqMatrix:
    return h if isinstance(h, FqMatrix) else FqMatrix(h)


def _syndrome(h: FqMatrix, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64).reshape(-1, 1)
    return mul_arrays(h.data, x, h.field)[:, 0]


def syndrome_check(h, x, s) -> bool:
    """True iff ``H x^T = s`` (x a row vector, s a column)."""
    h = _as_matrix(h)
    x = np.asarray(x, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64)
    if x.shape != (h.cols,) or s.shape != (h.rows,):
        raise InvalidArgument("dimension mismatch", h=h.shape, x=x.shape, s=s.shape)
    return bool(np.array_equal(_syndrome(h, x), s))


def _setup(h, s):
    h = _as_matrix(h)
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (h.rows,):
        raise InvalidArgument("syndrome length must equal the number of parity checks",
                              rows=h.rows, got=s.shape)
    h.field.check_elements(s)
    aug = np.hstack([h.data, s[:, None]])
    return h, aug


def _finish(h, s, w, weight, x, it, ops, diag) -> DecodeOutcome:
    if x is None:
        return DecodeOutcome(False, None, it, ops, None, diag)
    wt = weight(x)
    if not (wt <= w and syndrome_check(h, x, s)):  # every success path goes through here
        raise AssertionError("decoder produced an invalid solution")
    return DecodeOutcome(True, x, it, ops, wt, diag)


def _pivot_solution(work, pivots, n):
    """Solution supported on the pivot columns, or None if the system is inconsistent."""
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    x[pivots] = work[: len(pivots), n]
    return x


# -- Prange ------------------------------------------------------------------


def prange_isd(h, s, w: int, config: DecoderConfig, weight: Callable | None = None) -> DecodeOutcome:
    """Plain information-set decoding with uniformly random column orders."""
    h, aug = _setup(h, s)
    n = h.cols
    if w > n:
        raise InvalidArgument("w exceeds the code length", w=w, n=n)
    weight = weight or hamming_weight
    rng = np.random.default_rng(config.seed)
    total = OpCounter()
    for it in range(1, config.T + 1):
        perm = rng.permutation(n)
        work = aug.copy()
        pivots = rref_array(work, h.field, list(perm) + [n], total)
        x = _pivot_solution(work, pivots, n)
        if x is not None and weight(x) <= w:
            return _finish(h, s, w, weight, x, it, total, {})
    return DecodeOutcome(False, None, config.T, total, None, {})


# -- Stern-style birthday decoding --------------------------------------------


def _nonzero_values(field: GF2m):
    if field.order - 1 <= 255:
        return list(range(1, field.order))
    return [1 << i for i in range(field.m)]


def _patterns(cols, p, values):
    for support in itertools.combinations(cols, p):
        for vals in itertools.product(values, repeat=p):
            yield support, vals


def stern_table_size(k: int, p: int, field: GF2m) -> int:
    from math import comb

    return comb(ceil(k / 2), p) * len(_nonzero_values(field)) ** p


def birthday_isd(h, s, w: int, config: DecoderConfig, weight: Callable | None = None) -> DecodeOutcome:
    """Stern's collision decoder.

    Per iteration the information set is split into two halves; weight-p
    patterns on the first half are stored in a table keyed by the first
    ``l`` rows of the reduced syndrome, patterns on the second half are
    matched against it, and each collision is extended through the pivot
    columns.  The empty pattern (the Prange candidate) is always tried
    first, so ``p = 0`` reproduces :func:`prange_isd` exactly.
    """
    h, aug = _setup(h, s)
    n, rows = h.cols, h.rows
    if config.p > w:
        raise InvalidArgument("p must not exceed w", p=config.p, w=w)
    if config.l > rows:
        raise InvalidArgument("l must not exceed n - k", l=config.l, rows=rows)
    weight = weight or hamming_weight
    f = h.field
    values = _nonzero_values(f)
    rng = np.random.default_rng(config.seed)
    total = OpCounter()
    diag = {"table_size": 0}
    for it in range(1, config.T + 1):
        perm = rng.permutation(n)
        work = aug.copy()
        pivots = rref_array(work, f, list(perm) + [n], total)
        x = _pivot_solution(work, pivots, n)
        if x is None:
            continue
        if weight(x) <= w:
            return _finish(h, s, w, weight, x, it, total, diag)
        if config.p == 0:
            continue
        r = len(pivots)
        s_red = work[:r, n]
        piv_set = set(pivots)
        info = [int(c) for c in perm if c not in piv_set]
        half = ceil(len(info) / 2)
        left, right = info[:half], info[half:]
        window = slice(0, min(config.l, r))

        def combo(support, vals):
            acc = np.zeros(r, dtype=np.int64)
            for c, v in zip(support, vals):
                acc ^= f.mul(work[:r, c], v)
            return acc

        table = {}
        for support, vals in _patterns(left, config.p, values):
            vec = s_red ^ combo(support, vals)
            table.setdefault(tuple(vec[window].tolist()), []).append((support, vals, vec))
        diag["table_size"] = sum(len(v) for v in table.values())
        for support_b, vals_b in _patterns(right, config.p, values):
            vec_b = combo(support_b, vals_b)
            for support_a, vals_a, vec_a in table.get(tuple(vec_b[window].tolist()), ()):
                cand = np.zeros(n, dtype=np.int64)
                cand[pivots] = vec_a ^ vec_b
                cand[list(support_a)] = vals_a
                cand[list(support_b)] = vals_b
                if weight(cand) <= w:
                    return _finish(h, s, w, weight, cand, it, total, diag)
    return DecodeOutcome(False, None, config.T, total, None, diag)


# -- Pluecker-window decoding ---------------------------------------------------


@dataclass
class CorrectnessReport:
    identity_blocks: tuple  # (H' x' + x_l, H'' x' + x_r)
    zero_blocks: tuple  # (H' x', H'' x')
    syndrome_blocks: tuple  # (s', s'')
    consistent: bool


def systematic_parity_check(h1: FqMatrix, h2: FqMatrix) -> FqMatrix:
    """Assemble ``[[I_l, 0, H'], [0, I_(n-k-l), H'']]``."""
    l, k = h1.shape
    r2 = h2.rows
    f = h1.field
    top = np.hstack([np.eye(l, dtype=np.int64), np.zeros((l, r2), dtype=np.int64), h1.data])
    bot = np.hstack([np.zeros((r2, l), dtype=np.int64), np.eye(r2, dtype=np.int64), h2.data])
    return FqMatrix(np.vstack([top, bot]).reshape(l + r2, l + r2 + k), f)


def correctness_transform(h1: FqMatrix, h2: FqMatrix, x, s) -> CorrectnessReport:
    """Block products of a systematic parity check against a candidate error.

    ``x`` is laid out as ``(x_l, x_r, x')`` matching the columns of
    :func:`systematic_parity_check`; ``s`` as ``(s', s'')``.  The candidate
    is consistent iff ``H' x' + x_l = s'`` and ``H'' x' + x_r = s''``.
    """
    l, k = h1.shape
    r2 = h2.rows
    if h2.cols != k or h1.field != h2.field:
        raise InvalidArgument("H' and H'' must share column count and field", h1=h1.shape, h2=h2.shape)
    x = np.asarray(x, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64)
    if x.shape != (l + r2 + k,) or s.shape != (l + r2,):
        raise InvalidArgument("dimension mismatch", x=x.shape, s=s.shape, l=l, r2=r2, k=k)
    f = h1.field
    xl, xr, xi = x[:l], x[l:l + r2], x[l + r2:]
    z1 = mul_arrays(h1.data, xi[:, None], f)[:, 0]
    z2 = mul_arrays(h2.data, xi[:, None], f)[:, 0]
    i1, i2 = z1 ^ xl, z2 ^ xr
    s1, s2 = s[:l], s[l:]
    ok = bool(np.array_equal(i1, s1) and np.array_equal(i2, s2))
    return CorrectnessReport((i1, i2), (z1, z2), (s1, s2), ok)


def plucker_decode(code: LinearCode, s, w: int, config: DecoderConfig) -> DecodeOutcome:
    """Information-set decoding over cyclic windows of Pluecker coordinates.

    Per iteration a window of ``k + l`` columns is taken from the current
    base column order, rotated one step left per iteration (a fresh base
    order is drawn every ``n`` iterations).  The parity check is reduced with
    the complement columns first, giving ``[[I, 0, H''], [0, I_l, H']]``;
    the order is rejected unless every complement column is a pivot, i.e.
    its maximal minor is non-zero.  Candidates carry weight at most one on
    the ``k`` information columns and are completed through the pivots.

    Acceptance uses the window weight bound ``w - n + k - 1`` when it is
    non-negative and the plain bound ``weight <= w`` otherwise; the branch is
    reported in ``diagnostics["branch"]``.
    """
    h = code.parity_check
    n, k = code.n, code.k
    rows = n - k
    l = config.l
    if l > rows:
        raise InvalidArgument("l must not exceed n - k", l=l, n_minus_k=rows)
    if rref(code.generator)[2] != k:
        raise DegenerateCode("generator is rank deficient")
    h, aug = _setup(h, s)
    f = h.field
    weight = code.weight
    values = _nonzero_values(f)
    bound = w - n + k - 1
    branch = "intersection" if bound >= 0 else "weight"
    rng = np.random.default_rng(config.seed)
    total = OpCounter()
    diag = {"branch": branch, "rejected": 0}
    log.debug("plucker_decode acceptance branch: %s", branch)
    n_comp = rows - l
    base = None
    for it in range(1, config.T + 1):
        step = (it - 1) % n
        if step == 0:
            base = rng.permutation(n)
        if config.subset_mode == "cyclic":
            window = [int(base[(step + j) % n]) for j in range(k + l)]
        else:
            window = [int(c) for c in rng.choice(n, size=k + l, replace=False)]
        in_window = set(window)
        complement = [int(c) for c in base if c not in in_window]
        order = list(rng.permutation(complement)) + list(rng.permutation(window)) + [n]
        work = aug.copy()
        pivots = rref_array(work, f, order, total)
        if len(pivots) != rows or set(pivots[:n_comp]) != set(complement) or n in pivots:
            diag["rejected"] += 1
            continue
        s_red = work[:rows, n]
        piv_set = set(pivots)
        info = [c for c in order[n_comp:-1] if c not in piv_set]
        cands = [(None, 0)] + [(c, v) for c in info for v in values]
        for c, v in cands:
            resid = s_red.copy() if c is None else s_red ^ f.mul(work[:rows, c], v)
            x = np.zeros(n, dtype=np.int64)
            x[pivots] = resid
            if c is not None:
                x[c] = v
            wt = weight(x)
            if wt > w:
                continue
            if branch == "intersection" and weight(x[window]) > bound:
                continue
            _check_blocks(work, pivots, info, n_comp, x, s_red, f)
            return _finish(h, s, w, weight, x, it, total, diag)
    return DecodeOutcome(False, None, config.T, total, None, diag)


def _check_blocks(work, pivots, info, n_comp, x, s_red, f):
    """Cross-check an accepted candidate through the block transform."""
    rows = len(pivots)
    h_win = FqMatrix(work[n_comp:rows][:, info], f)
    h_comp = FqMatrix(work[:n_comp][:, info], f)
    xs = np.concatenate([x[pivots[n_comp:]], x[pivots[:n_comp]], x[info]])
    ss = np.concatenate([s_red[n_comp:], s_red[:n_comp]])
    if not correctness_transform(h_win, h_comp, xs, ss).consistent:
        raise AssertionError("block transform disagrees with the reduced syndrome")


# -- LDPC baseline -------------------------------------------------------------


def bitflip_decode(h, s, w: int, max_iter: int = 50) -> DecodeOutcome:
    """Gallager-B style majority flipping in the syndrome domain.

    Starting from ``x = 0``, variables whose unsatisfied checks form a strict
    majority of their degree are flipped, restricted to those with the most
    unsatisfied checks so that short cycles cannot make the decoder oscillate.
    Over GF(2^m) the flip adds the majority value that would satisfy them.
    Each residual evaluation counts one row operation per check row.
    """
    h, _ = _setup(h, s)
    hd = h.data
    f = h.field
    rows, n = hd.shape
    deg = np.count_nonzero(hd, axis=0)
    need = deg // 2 + 1
    x = np.zeros(n, dtype=np.int64)
    ops = OpCounter()
    for it in range(1, max_iter + 1):
        resid = _syndrome(h, x) ^ s
        ops.row_additions += rows
        if not resid.any():
            if hamming_weight(x) <= w:
                return _finish(h, s, w, hamming_weight, x, it, ops, {})
            return DecodeOutcome(False, None, it, ops, None, {"reason": "weight"})
        unsat = resid != 0
        if f.m == 1:
            votes = (hd[unsat] != 0).sum(axis=0)
            flip = (votes >= need) & (votes == votes.max())
            if not flip.any():
                return DecodeOutcome(False, None, it, ops, None, {"reason": "stuck"})
            x ^= flip.astype(np.int64)
        else:
            delta = np.zeros(n, dtype=np.int64)
            score = np.zeros(n, dtype=np.int64)
            for v in range(n):
                checks = np.flatnonzero(unsat & (hd[:, v] != 0))
                if checks.size < need[v]:
                    continue
                wanted = [int(f.mul(resid[c], f.inv(int(hd[c, v])))) for c in checks]
                vals, counts = np.unique(wanted, return_counts=True)
                best = int(np.argmax(counts))
                if counts[best] >= need[v]:
                    delta[v] = vals[best]
                    score[v] = counts[best]
            delta[score < score.max()] = 0
            if not delta.any():
                return DecodeOutcome(False, None, it, ops, None, {"reason": "stuck"})
            x ^= delta
    return DecodeOutcome(False, None, max_iter, ops, None, {"reason": "max-iter"})

