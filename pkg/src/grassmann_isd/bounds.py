"""Catalog of closed-form complexity, probability and counting formulas.

Each entry is evaluated exactly (``fractions.Fraction``) when that is possible;
otherwise, or when the exact number would be absurdly large, only the base-2
logarithm is returned and the result is flagged as inexact.

    >>> evaluate_bound("gaussian_decomposition_cost", n=10, k=4).value
    Fraction(48, 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from .errors import InvalidArgument
from .subspace import gaussian_binomial0 as _gb

LOG_LIMIT_BITS = 1 << 13  # exact results beyond this size are reported as log2 only


class _Big:
    """Signed number kept as ``sign * 2**log2`` once it is too large to hold exactly."""

    def __init__(self, log2: float, sign: int = 1):
        self.log2 = log2
        self.sign = sign

    @staticmethod
    def of(x):
        if isinstance(x, _Big):
            return x
        x = Fraction(x)
        if x == 0:
            return None
        return _Big(_log2(abs(x)), 1 if x > 0 else -1)

    def __mul__(self, other):
        o = _Big.of(other)
        if o is None:
            return Fraction(0)
        return _Big(self.log2 + o.log2, self.sign * o.sign)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _Big.of(other)
        return _Big(self.log2 - o.log2, self.sign * o.sign)

    def __rtruediv__(self, other):
        o = _Big.of(other)
        if o is None:
            return Fraction(0)
        return _Big(o.log2 - self.log2, self.sign * o.sign)

    def __add__(self, other):
        o = _Big.of(other)
        if o is None:
            return self
        a, b = (self, o) if self.log2 >= o.log2 else (o, self)
        r = 1 + a.sign * b.sign * 2.0 ** (b.log2 - a.log2)
        if r == 0:
            return Fraction(0)
        return _Big(a.log2 + math.log2(abs(r)), a.sign * (1 if r > 0 else -1))

    __radd__ = __add__

    def __neg__(self):
        return _Big(self.log2, -self.sign)

    def __sub__(self, other):
        return self + (-_Big.of(other) if _Big.of(other) is not None else 0)

    def __rsub__(self, other):
        return (-self) + other

    def __pow__(self, e):
        return _Big(self.log2 * e, self.sign if e % 2 else 1)


@dataclass(frozen=True)
class BoundQuery:
    bound_id: str
    params: dict = field(default_factory=dict)


@dataclass
class BoundResult:
    bound_id: str
    value: Fraction | None
    log2: float | None
    exact: bool
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def approx(self) -> float | None:
        """Floating-point value when it is representable."""
        if self.value is not None:
            return float(self.value) if abs(self.log2 or 0) < 1000 else None
        if self.log2 is None or self.log2 >= 1000 or math.isnan(self.log2):
            return None
        return (-1.0 if "negative" in self.flags else 1.0) * 2.0**self.log2

    def as_dict(self) -> dict:
        return {
            "bound": self.bound_id,
            "value": None if self.value is None else _frac_str(self.value),
            "log2": self.log2,
            "approx": self.approx,
            "exact": self.exact,
            "flags": list(self.flags),
            "extra": {k: _extra_str(v) for k, v in self.extra.items()},
        }


def _extra_str(v):
    if isinstance(v, Fraction):
        return _frac_str(v)
    if isinstance(v, _Big):
        return {"log2": v.log2, "sign": v.sign}
    return v


def _shrink(v):
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        v = Fraction(v)
        if max(v.numerator.bit_length(), v.denominator.bit_length()) > LOG_LIMIT_BITS:
            return _Big.of(v)
    return v


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _log2(x) -> float:
    if isinstance(x, Fraction):
        if x <= 0:
            return -math.inf if x == 0 else math.nan
        return math.log2(x.numerator) - math.log2(x.denominator)
    return math.log2(x) if x > 0 else (-math.inf if x == 0 else math.nan)


def _qpow(q: int, e):
    """Exact ``q**e`` for integer e, or a log-domain value past the size limit."""
    bits = abs(e) * math.log2(q) if q > 1 else 0
    if bits > LOG_LIMIT_BITS:
        return _Big(e * math.log2(q))
    return Fraction(q) ** e


def _h2(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


# -- formulas ----------------------------------------------------------------
# each returns Fraction (exact) or a ("log2", float) tuple, optionally with extras


def _combinatorial_rank_isd(n, k, m, q):
    e = (n - k) * (((k + 1) * m) // n) - m
    return Fraction((n - k) ** 3 * m**3) * _qpow(q, e)


def _key_size_bits(n, k, m, q):
    base = k * (n - k) * m * m
    if q & (q - 1) == 0:
        return Fraction(base * (q.bit_length() - 1))
    return ("float", base * math.log2(q))


def _isd_exponent(n, k, t):
    # the (1 - k) factor is evaluated exactly as written
    e = n * _h2(t / n) - (1 - k) * _h2(t / (n - k))
    return ("log2", e)


def _simple_code_failure(q, m, w):
    return 1 / _qpow(q, m - w + 1)


def _prop2_bound(n, k, q):
    # factorised product, index shifted to 1..k so no factor has a zero denominator
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= Fraction(q * (q ** (n - i + 1) - 1), q**i - 1)
    return out


def _intersection_array(i, m, q):
    return _qpow(q, i * (i - 1) // 2) * _gb(m, i, q)


def _corollary1_prob(k1, k2, m, q):
    return 1 - k1 * _qpow(q, k1 * k2 - m)


def _theorem2_prob(k1, k2, m, q):
    return 1 - k2 * _qpow(q, 2 * k1 * k2 * k2 + k2 * (k2 + 1) - m)


def _sum_pow_terms(terms):
    """Sum of ``q**e * c`` for (e_log2, c) pairs with c >= 0, done in the log domain."""
    logs = [e + _log2(Fraction(c)) for e, c in terms if c]
    if not logs:
        return Fraction(0)
    top = max(logs)
    total = top + math.log2(math.fsum(2.0 ** (x - top) for x in logs))
    return ("float", 2.0**total) if total < 1000 else ("log2", total)


def _count_u(n, q, i):
    lq = math.log2(q)
    total = _sum_pow_terms([((j - 1) / 2 * lq, _gb(n, j, q)) for j in range(i + 1)])
    return total, {"product_form": _qpow(q, i * (i - 1) // 2)}


def _count_v(q, i, r):
    lq = math.log2(q)
    total = _sum_pow_terms([(j * (j - r) / 2 * lq, _gb(j, r, q)) for j in range(i + 1)])
    prod = Fraction(1)
    for j in range(i):
        prod = prod * (_qpow(q, j) - _qpow(q, j - r))
    return total, {"product_form": prod}


def _count_star(n, q, i, r, t):
    lq = math.log2(q)
    return _sum_pow_terms([
        (j * (j - r) / 2 * lq, _gb(n - r, j - r, q) * _gb(r, j - t, q) * _gb(j, r, q)) for j in range(i)
    ])


def _guess_probability(n, k, r, q):
    den = _gb(k, r, q)
    if den == 0:
        raise InvalidArgument("denominator [k r]_q vanishes", k=k, r=r)
    return Fraction(_gb(n - r, k - r, q), den)


def _remark2_complexity(n, k, r, q):
    lead = (n - k) ** 2 / 2
    e = Fraction(k * (k - r), 2) * (n - k) * math.log2(q)
    return ("log2", (math.log2(lead) if lead > 0 else -math.inf) + float(e))


def _theorem4_enumeration(n, l, d, x):
    total = Fraction(0)
    for a in range(1, d + 1):
        total += comb(n, l) * Fraction(a, n) ** d * (1 - Fraction(a, n)) ** (n - l) * Fraction(x) ** d
    return total


def _gaussian_decomposition_cost(n, k):
    return Fraction((n - k) * k * k, 2)


def _failure_probability_formula(q, lprime, w, r):
    return 1 / _qpow(q, lprime - 2 * w * r + 1)


@dataclass(frozen=True)
class CatalogEntry:
    params: tuple
    formula: str
    description: str
    fn: Callable


CATALOG = {
    "combinatorial_rank_isd": CatalogEntry(
        ("n", "k", "m", "q"), "(n-k)^3 m^3 q^((n-k)*floor((k+1)m/n) - m)",
        "combinatorial rank-metric syndrome decoding cost", _combinatorial_rank_isd),
    "key_size_bits": CatalogEntry(
        ("n", "k", "m", "q"), "k(n-k) m^2 log2(q)",
        "public key size in bits", _key_size_bits),
    "isd_exponent": CatalogEntry(
        ("n", "k", "t"), "2^(n H2(t/n) - (1-k) H2(t/(n-k)))",
        "asymptotic information-set decoding work factor", _isd_exponent),
    "simple_code_failure": CatalogEntry(
        ("q", "m", "w"), "1 / q^(m-w+1)",
        "decoding failure of a simple matrix code", _simple_code_failure),
    "prop2_bound": CatalogEntry(
        ("n", "k", "q"), "prod_{i=1..k} q (q^(n-i+1) - 1) / (q^i - 1)",
        "bound on the number of k-error patterns (factorised product form)", _prop2_bound),
    "intersection_array": CatalogEntry(
        ("i", "m", "q"), "q^(i(i-1)/2) [m i]_q",
        "Grassmann graph intersection array magnitude (sign dropped)", _intersection_array),
    "corollary1_prob": CatalogEntry(
        ("k1", "k2", "m", "q"), "1 - k1 q^(k1 k2) / q^m",
        "probability a random base spans a product space of full dimension", _corollary1_prob),
    "theorem2_prob": CatalogEntry(
        ("k1", "k2", "m", "q"), "1 - k2 q^(2 k1 k2^2 + k2(k2+1)) / q^m",
        "enumeration success for a fixed plus random base", _theorem2_prob),
    "count_u": CatalogEntry(
        ("n", "q", "i"), "sum_{j=0..i} q^((j-1)/2) [n j]_q",
        "basis-replacement count for U", _count_u),
    "count_v": CatalogEntry(
        ("q", "i", "r"), "sum_{j=0..i} q^(j(j-r)/2) [j r]_q",
        "basis-replacement count for V", _count_v),
    "count_star": CatalogEntry(
        ("n", "q", "i", "r", "t"), "sum_{j=0..i-1} q^(j(j-r)/2) [n-r j-r]_q [r j-t]_q [j r]_q",
        "basis-replacement count for the intersection", _count_star),
    "guess_probability": CatalogEntry(
        ("n", "k", "r", "q"), "[n-r k-r]_q / [k r]_q",
        "ratio for guessing error-free Pluecker coordinates (may exceed 1)", _guess_probability),
    "remark2_complexity": CatalogEntry(
        ("n", "k", "r", "q"), "((n-k)^2 / 2) q^((k(k-r)/2)(n-k))",
        "Pluecker decoding work factor", _remark2_complexity),
    "theorem4_enumeration": CatalogEntry(
        ("n", "l", "d", "x"), "sum_{a=1..d} C(n,l) (a/n)^d (1-a/n)^(n-l) x^d",
        "basis enumeration cost; l, d, x are free symbols", _theorem4_enumeration),
    "gaussian_decomposition_cost": CatalogEntry(
        ("n", "k"), "(n-k) k^2 / 2",
        "row operations of one Gaussian decomposition", _gaussian_decomposition_cost),
    "failure_probability_formula": CatalogEntry(
        ("q", "lprime", "w", "r"), "1 / q^(l' - 2 w r + 1)",
        "decryption failure probability", _failure_probability_formula),
}

_ALIASES = {"l'": "lprime", "l_prime": "lprime", "lp": "lprime", "α": "alpha"}


def _coerce(name, value):
    if isinstance(value, str):
        try:
            value = Fraction(value)
        except ValueError:
            raise InvalidArgument(f"parameter {name} is not a number", param=name, value=value) from None
    if name == "x":
        return Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise InvalidArgument(f"parameter {name} must be an integer", param=name)
        value = int(value)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InvalidArgument(f"parameter {name} must be a non-negative integer", param=name, value=str(value))
    return value


def evaluate_bound(query: BoundQuery | str, **params) -> BoundResult:
    if isinstance(query, str):
        query = BoundQuery(query, params)
    entry = CATALOG.get(query.bound_id)
    if entry is None:
        raise InvalidArgument(f"unknown bound {query.bound_id!r}", known=sorted(CATALOG))
    given = {_ALIASES.get(k, k): v for k, v in query.params.items()}
    args = {}
    for name in entry.params:
        if name not in given:
            raise InvalidArgument(f"missing parameter {name}", param=name, bound=query.bound_id)
        args[name] = _coerce(name, given[name])

    flags, extra = [], {}
    try:
        out = entry.fn(**args)
    except (ZeroDivisionError, ValueError, OverflowError) as exc:
        raise InvalidArgument(f"{query.bound_id} undefined for these parameters: {exc}", **args) from None
    if isinstance(out, tuple) and len(out) == 2 and isinstance(out[1], dict):
        out, extra = out
    out = _shrink(out)
    extra = {k: _shrink(v) for k, v in extra.items()}
    if isinstance(out, Fraction) and out == 0 and query.bound_id.startswith("count_"):
        out = ("float", 0.0)
    if isinstance(out, _Big):
        flags = ["log-only"] + (["negative"] if out.sign < 0 else [])
        result = BoundResult(query.bound_id, None, out.log2, False, flags, extra)
    elif isinstance(out, tuple):
        kind, x = out
        log2 = x if kind == "log2" else _log2(x)
        result = BoundResult(query.bound_id, None, log2, False, [kind], extra)
    else:
        result = BoundResult(query.bound_id, out, _log2(out), True, flags, extra)
    if query.bound_id == "guess_probability" and result.value is not None and result.value > 1:
        result.flags.append("exceeds-one")
    return result


def weight_within_bound(w: int, k: int, q: int = 2) -> bool:
    """Validation predicate ``w <= q^(k(k-1)/2)`` on the target error weight."""
    return w <= q ** (k * (k - 1) // 2)
