"""Monte-Carlo experiments: decoding failure against channel noise, and
row-operation cost against code length.

Every trial draws its randomness from ``SeedSequence([seed, point, trial])``,
so the same trial sees the same noise in every code series (common random
numbers) and results do not depend on worker scheduling.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .codes import (HAMMING, LinearCode, PRESETS, build_ldpc, build_plabic_code, build_preset,
                    random_code)
from .decoder import DecoderConfig, bitflip_decode, plucker_decode, syndrome_check
from .errors import InvalidArgument
from .field import mul_arrays

log = logging.getLogger(__name__)

# Gaussian-decomposition operation counts per security level (used as the iteration budget T)
TABLE1 = {128: 131072, 256: 1048576, 512: 8388608, 1024: 67108864}

# rank-metric parameter sets: n, k, m, q, w, security, source
TABLE2 = [
    dict(n=67, k=7, m=89, q=2, w=5, security=128, source="melchor2011new"),
    dict(n=100, k=80, m=96, q=2, w=5, security=192, source="gaborit2017identity"),
    dict(n=100, k=80, m=96, q=2, w=5, security=192, source="chang2018revocable"),
    dict(n=67, k=22, m=71, q=2, w=11, security=133, source="lau2018new"),
    dict(n=110, k=7, m=18, q=2, w=12, security=128, source="this construction"),
]

# values quoted in the prose next to the table; they disagree with TABLE1 and are kept for reference only
TEXT_T = {128: 32768, 256: 1048576, 512: 33554432, 1024: 1073741824}
# window parameter l quoted per security level alongside the failure curves
CAPTION_L = {128: 15, 256: 20, 512: 25, 1024: 30}

SIGMA_RANGE = (0.30, 0.85)
BENCH_PRESETS = {f"paper-{lvl}": lvl for lvl in TABLE1}


def security_tables() -> dict:
    return {
        "table1": dict(TABLE1),
        "table2": [dict(r) for r in TABLE2],
        "text_T": dict(TEXT_T),
        "caption_l": dict(CAPTION_L),
    }


def iteration_budget(level: int) -> int:
    if level not in TABLE1:
        raise InvalidArgument(f"unknown security level {level}", known=sorted(TABLE1))
    return TABLE1[level]


# -- specs ---------------------------------------------------------------------


@dataclass
class CodeSpec:
    name: str
    family: str  # plabic | ldpc | preset | random
    n: int = 24
    k: int = 12
    m: int = 1
    seed: int = 0
    w: int | None = None
    col_weight: int = 3
    row_weight: int = 6
    density: float = 0.5
    preset: str | None = None

    def build(self) -> LinearCode:
        if self.family == "plabic":
            return build_plabic_code(self.n, self.k, self.seed, w=self.w or 0, m=self.m, density=self.density)
        if self.family == "ldpc":
            return build_ldpc(self.n, self.col_weight, self.row_weight, self.seed, w=self.w or 0, m=self.m)
        if self.family == "preset":
            return build_preset(self.preset or "paper-128", self.seed)
        if self.family == "random":
            return random_code(self.n, self.k, self.seed)
        raise InvalidArgument(f"unknown code family {self.family!r}")

    @property
    def is_ldpc(self) -> bool:
        return self.family == "ldpc"


@dataclass
class ExperimentSpec:
    experiment: str  # failure_curve | row_cost
    code_specs: list = field(default_factory=list)
    sigma_grid: list = field(default_factory=lambda: [0.40, 0.50, 0.60])
    trials_per_point: int = 100
    security_level: int = 128
    seed: int = 0
    w: int = 2
    l: int = 0
    T: int | None = None  # overrides the security-level budget
    desk_scale: int = 1
    lengths: list = field(default_factory=list)
    field_degrees: list = field(default_factory=lambda: [1])
    planted_weight: int = 2
    smoke: bool = False  # allows sigma = 0 for noiseless sanity runs
    preset: str | None = None

    def __post_init__(self):
        self.code_specs = [c if isinstance(c, CodeSpec) else CodeSpec(**c) for c in self.code_specs]
        if self.experiment not in ("failure_curve", "row_cost"):
            raise InvalidArgument(f"unknown experiment {self.experiment!r}")
        if self.trials_per_point < 1:
            raise InvalidArgument("trials_per_point must be at least 1")
        if self.desk_scale < 1:
            raise InvalidArgument("desk_scale must be at least 1")
        iteration_budget(self.security_level)
        lo, hi = SIGMA_RANGE
        for s in self.sigma_grid:
            if not (lo <= s <= hi or (self.smoke and 0 <= s <= hi)):
                raise InvalidArgument(f"sigma {s} outside [{lo}, {hi}]", sigma=s)
        if list(self.lengths) != sorted(self.lengths):
            raise InvalidArgument("lengths must be ascending")

    @property
    def budget(self) -> int:
        return self.T if self.T is not None else max(1, iteration_budget(self.security_level) // self.desk_scale)

    def to_dict(self) -> dict:
        d = asdict(self)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidArgument("unknown spec fields", fields=sorted(unknown))
        return cls(**d)

    @classmethod
    def from_preset(cls, name: str, desk_scale: int = 1, **overrides) -> "ExperimentSpec":
        """Failure-curve spec for a ``paper-<level>`` preset.

        The preset code parameters are shrunk by ``desk_scale``; the LDPC
        partner gets the nearest length divisible by its row weight.
        """
        if name not in BENCH_PRESETS:
            raise InvalidArgument(f"unknown preset {name!r}", known=sorted(BENCH_PRESETS))
        level = BENCH_PRESETS[name]
        p = PRESETS["paper-128"]
        n = max(6, p["n"] // desk_scale)
        k = max(1, p["k"] // desk_scale)
        w = max(1, p["w"] // desk_scale)
        n_ldpc = max(6, 6 * round(n / 6))
        codes = [
            CodeSpec("grassmann", "plabic", n=n, k=k, w=w),
            CodeSpec("ldpc", "ldpc", n=n_ldpc, col_weight=3, row_weight=6, w=w),
        ]
        kw = dict(experiment="failure_curve", code_specs=codes, security_level=level,
                  l=min(CAPTION_L[level], n - k), w=w, desk_scale=desk_scale, preset=name,
                  sigma_grid=[0.30, 0.40, 0.50, 0.60, 0.70, 0.85])
        kw.update(overrides)
        return cls(**kw)


@dataclass
class PointRecord:
    series: str
    x: float
    value: float
    lo95: float
    hi95: float
    trials: int
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    spec: dict
    records: list
    version: str = __version__
    seed: int = 0
    checks: dict = field(default_factory=dict)
    codes: dict = field(default_factory=dict)
    wall_time: float | None = field(default=None, compare=False)

    def series(self, name: str) -> list:
        return [r for r in self.records if r.series == name]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "spec": self.spec,
            "records": [asdict(r) for r in self.records],
            "version": self.version,
            "seed": self.seed,
            "checks": self.checks,
            "codes": self.codes,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        return cls(d["spec"], [PointRecord(**r) for r in d["records"]], d["version"], d["seed"],
                   d.get("checks", {}), d.get("codes", {}), d.get("wall_time"))


def wilson_interval(successes: int, trials: int) -> tuple:
    from scipy.stats import binomtest  # slow import, only needed here

    if trials == 0:
        return (0.0, 1.0)
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return (float(ci.low), float(ci.high))


# -- workers ---------------------------------------------------------------------


def _pmap(fn, jobs, threads):
    if threads is None or threads <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


def _syndrome(h, e):
    return mul_arrays(h.data, e[:, None], h.field)[:, 0]


def _failure_trial(job):
    code, is_ldpc, sigma, w, T, l, seeds = job
    rng = np.random.default_rng(np.random.SeedSequence(seeds))
    noise = rng.standard_normal(code.n)
    dec_seed = int(rng.integers(0, 2**63))
    received = 1.0 + sigma * noise  # BPSK maps bit 0 to +1; the all-zero word is sent
    e = (received < 0).astype(np.int64)
    h = code.decoding_checks() if is_ldpc else code.parity_check
    s = _syndrome(h, e)
    if code.weight(e) > w:
        return {"failed": True, "over_budget": True, "mismatch": False, "row_ops": 0}
    if is_ldpc:
        out = bitflip_decode(h, s, w)
    else:
        out = plucker_decode(code, s, w, DecoderConfig(T=T, l=l, seed=dec_seed))
    ok = out.success and syndrome_check(h, out.error_vector, s)
    mismatch = bool(ok and not np.array_equal(out.error_vector, e))
    return {"failed": not ok, "over_budget": False, "mismatch": mismatch, "row_ops": out.row_ops}


def _rowcost_trial(job):
    code, is_ldpc, t, T, l, seeds = job
    rng = np.random.default_rng(np.random.SeedSequence(seeds))
    support = rng.choice(code.n, size=t, replace=False)
    values = rng.integers(1, code.field.order, size=t)
    dec_seed = int(rng.integers(0, 2**63))
    e = np.zeros(code.n, dtype=np.int64)
    e[support] = values
    h = code.decoding_checks() if is_ldpc else code.parity_check
    s = _syndrome(h, e)
    if is_ldpc:
        out = bitflip_decode(h, s, max(t, 0))
    else:
        out = plucker_decode(code, s, t, DecoderConfig(T=T, l=l, seed=dec_seed))
    return out.row_ops, out.success


def _code_summary(c: LinearCode) -> dict:
    return {"n": c.n, "k": c.k, "m": c.m, "metric": c.metric, "provenance": c.provenance}


# -- experiments -----------------------------------------------------------------


def run_failure_experiment(spec: ExperimentSpec, threads: int | None = None) -> ExperimentReport:
    """Failure rate per sigma for every code in ``spec.code_specs``.

    A trial fails when the hard-decision error pattern exceeds the weight
    budget, or the decoder reports failure, or its output has the wrong
    syndrome.  Successful decodes that return a different (equally light)
    error than the transmitted one are counted in ``extra["mismatch"]``.
    """
    if spec.experiment != "failure_curve":
        raise InvalidArgument("spec is not a failure_curve experiment")
    start = time.perf_counter()
    built = [(cs, cs.build()) for cs in spec.code_specs]
    records = []
    for pi, sigma in enumerate(spec.sigma_grid):
        for cs, code in built:
            w = cs.w if cs.w is not None else spec.w
            jobs = [(code, cs.is_ldpc, sigma, w, spec.budget, min(spec.l, code.n - code.k),
                     [spec.seed, pi, ti]) for ti in range(spec.trials_per_point)]
            results = _pmap(_failure_trial, jobs, threads)
            fails = sum(r["failed"] for r in results)
            lo, hi = wilson_interval(fails, len(results))
            records.append(PointRecord(cs.name, float(sigma), fails / len(results), lo, hi, len(results), {
                "failures": fails,
                "successes": len(results) - fails,
                "over_budget": sum(r["over_budget"] for r in results),
                "mismatch": sum(r["mismatch"] for r in results),
                "mean_row_ops": sum(r["row_ops"] for r in results) / len(results),
            }))
    report = ExperimentReport(spec.to_dict(), records, seed=spec.seed,
                              codes={cs.name: _code_summary(c) for cs, c in built})
    report.checks = failure_checks(report, [cs.name for cs in spec.code_specs])
    report.wall_time = time.perf_counter() - start
    return report


def failure_checks(report: ExperimentReport, names: list, sigma: float = 0.50) -> dict:
    checks = {}
    for name in names:
        pts = sorted(report.series(name), key=lambda r: r.x)
        viol = [(a.x, b.x) for a, b in zip(pts, pts[1:]) if b.hi95 < a.lo95]
        checks[f"monotone:{name}"] = not viol
    grass = [n for n in names if n != "ldpc" and "ldpc" not in n]
    ldpc = [n for n in names if "ldpc" in n]
    if grass and ldpc:
        g = [r for r in report.series(grass[0]) if math.isclose(r.x, sigma)]
        d = [r for r in report.series(ldpc[0]) if math.isclose(r.x, sigma)]
        if g and d:
            g, d = g[0], d[0]
            if g.hi95 < d.lo95:
                verdict = "grassmann-lower"
            elif d.hi95 < g.lo95:
                verdict = "ldpc-lower"
            else:
                verdict = "inconclusive"
            checks["verdict"] = {
                "sigma": sigma, "result": verdict,
                grass[0]: [g.value, g.lo95, g.hi95], ldpc[0]: [d.value, d.lo95, d.hi95],
            }
    return checks


def rowcost_code_specs(n: int, m: int, seed: int) -> list:
    """Rate-1/2 plabic code and a (2, 4) Gallager LDPC code of length ``n``."""
    suffix = "" if m == 1 else f"-q{2 ** m}"
    return [
        CodeSpec("grassmann" + suffix, "plabic", n=n, k=n // 2, m=m, seed=seed),
        CodeSpec("ldpc" + suffix, "ldpc", n=n, m=m, seed=seed, col_weight=2, row_weight=4),
    ]


def run_rowcost_experiment(lengths: list | None = None, field_degrees: list | None = None,
                           spec: ExperimentSpec | None = None, threads: int | None = None) -> ExperimentReport:
    """Mean row operations per decode against code length.

    Errors of weight ``spec.planted_weight`` with uniform non-zero values are
    planted; the ISD decoder is given exactly that weight.  Codes over
    GF(2^m) are decoded with the Hamming (symbol) weight, since the rank
    weight of a single vector over GF(4) never exceeds 2.
    """
    spec = spec or ExperimentSpec("row_cost")
    if spec.experiment != "row_cost":
        raise InvalidArgument("spec is not a row_cost experiment")
    lengths = list(lengths if lengths is not None else spec.lengths)
    degrees = list(field_degrees if field_degrees is not None else spec.field_degrees)
    if not lengths:
        raise InvalidArgument("no code lengths given")
    if lengths != sorted(lengths):
        raise InvalidArgument("lengths must be ascending")
    start = time.perf_counter()
    records, codes = [], {}
    for pi, n in enumerate(lengths):
        specs = spec.code_specs or [cs for m in degrees for cs in rowcost_code_specs(n, m, spec.seed)]
        for cs in specs:
            code = replace(cs.build(), metric=HAMMING)
            codes[f"{cs.name}@{n}"] = _code_summary(code)
            jobs = [(code, cs.is_ldpc, spec.planted_weight, spec.budget, min(spec.l, code.n - code.k),
                     [spec.seed, pi, ti]) for ti in range(spec.trials_per_point)]
            results = _pmap(_rowcost_trial, jobs, threads)
            ops = np.array([r[0] for r in results], dtype=float)
            mean = float(ops.mean())
            half = 1.96 * float(ops.std(ddof=1)) / math.sqrt(len(ops)) if len(ops) > 1 else 0.0
            records.append(PointRecord(cs.name, float(n), mean, mean - half, mean + half, len(ops), {
                "successes": int(sum(r[1] for r in results)),
                "k": code.k,
            }))
    report = ExperimentReport(spec.to_dict() | {"lengths": lengths, "field_degrees": degrees},
                              records, seed=spec.seed, codes=codes)
    report.checks = rowcost_checks(report)
    report.wall_time = time.perf_counter() - start
    return report


def rowcost_checks(report: ExperimentReport) -> dict:
    def by_x(name):
        return {r.x: r.value for r in report.series(name)}

    checks = {}
    g2, l2, g4 = by_x("grassmann"), by_x("ldpc"), by_x("grassmann-q4")
    if g2 and l2:
        checks["grassmann_exceeds_ldpc"] = all(g2[x] > l2[x] for x in g2 if x in l2)
    if g2 and g4:
        checks["q4_exceeds_q2"] = all(g4[x] > g2[x] for x in g2 if x in g4)
    return checks


# -- output --------------------------------------------------------------------

CSV_HEADER = ["series", "x", "value", "lo95", "hi95", "trials"]


def report_to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for r in report.records:
        wr.writerow([r.series, repr(r.x), repr(r.value), repr(r.lo95), repr(r.hi95), r.trials])
    return buf.getvalue()


def report_to_json(report: ExperimentReport, include_timing: bool = False) -> str:
    return json.dumps(report.to_dict(include_timing), indent=1, sort_keys=True) + "\n"


def emit_report(report: ExperimentReport, format: str = "json", path=None) -> str:
    """Serialise ``report``; written to ``path`` when given, returned either way."""
    if format == "csv":
        text = report_to_csv(report)
    elif format == "json":
        text = report_to_json(report)
    else:
        raise InvalidArgument(f"unknown format {format!r}")
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise InvalidArgument(f"cannot write report: {exc}", path=str(path)) from None
    return text


def load_report(text: str) -> ExperimentReport:
    return ExperimentReport.from_dict(json.loads(text))
