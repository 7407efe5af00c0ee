"""Arithmetic over GF(2) and GF(2^m), dense matrices and instrumented elimination.

Field elements are bit-encoded polynomials stored in numpy ``int64`` arrays:
bit ``i`` of an element is the coefficient of ``x^i``.  Every elementary row
operation performed by :func:`rref` is tallied in an :class:`OpCounter`; those
tallies are the cost measure used by the decoders and the benchmark harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

# Lowest-weight primitive polynomial per extension degree (bit-encoded).
PRIMITIVE_POLYNOMIALS = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x187,
    9: 0x211, 10: 0x409, 11: 0x805, 12: 0x1107, 13: 0x2027, 14: 0x5007,
    15: 0x8003, 16: 0x1100B, 17: 0x20009, 18: 0x40081, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x1000087,
    25: 0x2000009, 26: 0x4000047, 27: 0x8000027, 28: 0x10000009,
    29: 0x20000005, 30: 0x40800007, 31: 0x80000009, 32: 0x100400007,
}

MAX_DEGREE = 32
_TABLE_DEGREE = 20  # log/antilog tables up to 2^20 entries


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


@lru_cache(maxsize=None)
def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


def _powers(m: int, poly: int, g: int) -> list:
    """Successive powers 1, g, g^2, ... until the sequence returns to 1."""
    out = [1]
    x = g
    while x != 1 and len(out) < (1 << m):
        out.append(x)
        a, b, r = x, g, 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> m & 1:
                a ^= poly
        x = r
    return out


@lru_cache(maxsize=None)
def _tables(m: int, poly: int):
    n = (1 << m) - 1
    for g in range(2, 1 << m):
        powers = _powers(m, poly, g)
        if len(powers) == n:
            break
    exp = np.array(powers + powers, dtype=np.int64)
    log = np.zeros(1 << m, dtype=np.int64)
    log[exp[:n]] = np.arange(n)
    exp.setflags(write=False)
    log.setflags(write=False)
    return log, exp


class GF2m:
    """The field GF(2^m) with a fixed reduction polynomial."""

    q = 2

    def __init__(self, m: int = 1, poly: int | None = None):
        if not 1 <= m <= MAX_DEGREE:
            raise InvalidArgument(f"extension degree must be in 1..{MAX_DEGREE}", m=m)
        if poly is None:
            poly = PRIMITIVE_POLYNOMIALS[m]
        if poly.bit_length() - 1 != m:
            raise InvalidArgument("reduction polynomial has wrong degree", m=m, poly=hex(poly))
        if not is_irreducible(poly):
            raise InvalidArgument("reduction polynomial is reducible", poly=hex(poly))
        self.m = m
        self.poly = poly
        self.order = 1 << m
        self._log = self._exp = None
        if 1 < m <= _TABLE_DEGREE:
            self._build_tables()

    def _build_tables(self):
        self._log, self._exp = _tables(self.m, self.poly)

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self):
        return hash((self.m, self.poly))

    def __repr__(self):
        return f"GF2m(m={self.m}, poly={hex(self.poly)})"

    # -- element arithmetic (vectorised) -------------------------------------

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return a & b
        if self._log is not None:
            out = self._exp[self._log[a] + self._log[b]]
            return np.where((a == 0) | (b == 0), 0, out)
        return self._mul_carryless(a, b)

    def _mul_carryless(self, a, b):
        a, b = np.broadcast_arrays(a.astype(np.uint64), b.astype(np.uint64))
        acc = np.zeros(a.shape, dtype=np.uint64)
        for i in range(self.m):
            bit = (b >> np.uint64(i)) & np.uint64(1)
            acc ^= np.where(bit == 1, a << np.uint64(i), np.uint64(0))
        poly = np.uint64(self.poly)
        for bit in range(2 * self.m - 2, self.m - 1, -1):
            hit = (acc >> np.uint64(bit)) & np.uint64(1)
            acc ^= np.where(hit == 1, poly << np.uint64(bit - self.m), np.uint64(0))
        return acc.astype(np.int64)

    def pow(self, x: int, e: int) -> int:
        result = 1
        x = int(x)
        while e:
            if e & 1:
                result = int(self.mul(result, x))
            x = int(self.mul(x, x))
            e >>= 1
        return result

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(x, self.order - 2)

    def frobenius_power(self, x, j: int):
        """Return ``x^(q^j)``; the Frobenius map has order ``m``."""
        if j < 0:
            raise InvalidArgument("frobenius exponent must be non-negative", j=j)
        out = np.asarray(x, dtype=np.int64)
        for _ in range(j % self.m):
            out = self.mul(out, out)
        return out if out.ndim else int(out)

    def unfold(self, x) -> np.ndarray:
        """Expand a vector over GF(2^m) into its m x n bit matrix (polynomial basis)."""
        x = np.asarray(x, dtype=np.int64)
        return ((x[None, :] >> np.arange(self.m)[:, None]) & 1).astype(np.uint8)

    def check_elements(self, a) -> None:
        a = np.asarray(a)
        if a.size and (a.min() < 0 or a.max() >= self.order):
            raise InvalidArgument("entry outside the field", m=self.m)


GF2 = GF2m(1)


@dataclass
class OpCounter:
    row_swaps: int = 0
    row_additions: int = 0
    row_scalings: int = 0

    def total(self) -> int:
        return self.row_swaps + self.row_additions + self.row_scalings

    def add(self, other: "OpCounter") -> None:
        self.row_swaps += other.row_swaps
        self.row_additions += other.row_additions
        self.row_scalings += other.row_scalings


class FqMatrix:
    """Dense matrix over a :class:`GF2m`; entries are read-only after construction."""

    __slots__ = ("data", "field")

    def __init__(self, entries, field: GF2m = GF2):
        data = np.array(entries, dtype=np.int64)
        if data.ndim == 1 and data.size == 0:
            data = data.reshape(0, 0)
        if data.ndim != 2:
            raise InvalidArgument("matrix entries must be two-dimensional", ndim=data.ndim)
        field.check_elements(data)
        data.setflags(write=False)
        self.data = data
        self.field = field

    @classmethod
    def zeros(cls, rows: int, cols: int, field: GF2m = GF2) -> "FqMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field: GF2m = GF2) -> "FqMatrix":
        return cls(np.eye(n, dtype=np.int64), field)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix(self.data.T, self.field)

    def __getitem__(self, idx):
        out = self.data[idx]
        if isinstance(out, np.ndarray) and out.ndim == 2:
            return FqMatrix(out, self.field)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FqMatrix)
            and self.field == other.field
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self):
        return f"FqMatrix({self.data.tolist()}, m={self.field.m})"

    def tolist(self):
        return self.data.tolist()

    def is_zero(self) -> bool:
        return not self.data.any()

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.field.m}"]
        lines += [" ".join(format(int(v), "x") for v in row) for row in self.data]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FqMatrix":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise InvalidArgument("empty matrix text")
        try:
            rows, cols, m = (int(t) for t in lines[0].split())
            body = [[int(t, 16) for t in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise InvalidArgument(f"malformed matrix text: {exc}") from None
        if len(body) != rows or any(len(r) != cols for r in body):
            raise InvalidArgument("matrix text does not match its header", rows=rows, cols=cols)
        data = np.array(body, dtype=np.int64).reshape(rows, cols)
        return cls(data, GF2m(m))


# -- elimination -------------------------------------------------------------


def rref_array(a: np.ndarray, field: GF2m, column_order: Sequence[int], counter: OpCounter):
    """In-place reduced row echelon form of ``a`` following ``column_order``.

    Pivot choice is the first non-zero entry, scanning rows top-down.
    Returns the pivot columns in the order they were found.
    """
    rows = a.shape[0]
    pivots = []
    r = 0
    binary = field.m == 1
    for c in column_order:
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            counter.row_swaps += 1
        piv = int(a[r, c])
        if piv != 1:
            a[r] = field.mul(a[r], field.inv(piv))
            counter.row_scalings += 1
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            if binary:
                a[others] ^= a[r]
            else:
                a[others] ^= field.mul(a[others, c][:, None], a[r][None, :])
            counter.row_additions += int(others.size)
        pivots.append(int(c))
        r += 1
    return pivots


def rref(matrix: FqMatrix, column_order: Iterable[int] | None = None):
    """Reduced row echelon form with instrumented row operations.

    Returns ``(reduced, pivots, rank, ops)``.  ``pivots`` are original column
    indices in the order they were eliminated.
    """
    order = list(range(matrix.cols)) if column_order is None else [int(c) for c in column_order]
    if sorted(order) != list(range(matrix.cols)):
        raise InvalidArgument(
            "column_order must be a permutation of the column indices",
            cols=matrix.cols, got=len(order),
        )
    work = matrix.data.copy()
    ops = OpCounter()
    pivots = rref_array(work, matrix.field, order, ops)
    return FqMatrix(work, matrix.field), pivots, len(pivots), ops


def rank(matrix: FqMatrix) -> int:
    return rref(matrix)[2]


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    if a.field != b.field:
        raise InvalidArgument("field mismatch", left=a.field.m, right=b.field.m)
    if a.cols != b.rows:
        raise InvalidArgument("dimension mismatch", left=a.shape, right=b.shape)
    return FqMatrix(mul_arrays(a.data, b.data, a.field), a.field)


def mul_arrays(a: np.ndarray, b: np.ndarray, field: GF2m) -> np.ndarray:
    if field.m == 1:
        return (a.astype(np.int64) @ b.astype(np.int64)) & 1
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for t in range(a.shape[1]):
        out ^= field.mul(a[:, t][:, None], b[t][None, :])
    return out


def kernel_basis(h: FqMatrix) -> FqMatrix:
    """Basis (as rows) of the right null space ``{x : h x^T = 0}``."""
    reduced, pivots, r, _ = rref(h)
    free = [c for c in range(h.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), h.cols), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, p in enumerate(pivots):
            basis[row, p] = reduced.data[i, f]  # -x = x in characteristic 2
    return FqMatrix(basis, h.field)


def hstack(*blocks: FqMatrix) -> FqMatrix:
    return FqMatrix(np.hstack([b.data for b in blocks]), blocks[0].field)


def frobenius_power(x, j: int, field: GF2m = GF2):
    return field.frobenius_power(x, j)
