"""
Failure curves and row-operation cost
=====================================

Run small versions of the two experiments: decoding failure over a BPSK/AWGN
channel and the number of row operations per decode as the length grows.
"""

from grassmann_isd.bench import (CodeSpec, ExperimentSpec, emit_report, run_failure_experiment,
                                 run_rowcost_experiment, security_tables)

# iteration budgets per security level, and the preset code parameters
tables = security_tables()
print(tables["table1"])
print(tables["table2"][0])

# a plabic code against a (2, 4) LDPC code of the same length; every trial
# index sees the same noise for both codes
spec = ExperimentSpec(
    "failure_curve",
    code_specs=[CodeSpec("grassmann", "plabic", n=24, k=12, seed=0),
                CodeSpec("ldpc", "ldpc", n=24, col_weight=2, row_weight=4, seed=0)],
    sigma_grid=[0.3, 0.4, 0.5], trials_per_point=100, seed=0, w=3, T=500)
report = run_failure_experiment(spec, threads=2)
print(emit_report(report, "csv"))
print(report.checks)

# row operations per decode, over GF(2) and GF(4)
spec = ExperimentSpec("row_cost", trials_per_point=10, seed=0, T=300)
report = run_rowcost_experiment([12, 24], [1, 2], spec)
for r in report.records:
    print(f"{r.series:14s} n={int(r.x):3d} mean row ops {r.value:8.1f}")
print(report.checks)

# a preset shrunk for a desktop run divides the lengths, dimensions and budget by the scale
small = ExperimentSpec.from_preset("paper-128", desk_scale=4)
print([(c.name, c.n, c.k) for c in small.code_specs], small.budget)
