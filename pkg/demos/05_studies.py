"""
Studies and their CSV output
============================

Each study is also a CLI subcommand, e.g.

    pickands truncation --alpha 1.5 --delta 0.25 --T 2 --T 3 --T 4 --T 6 --reps 20000
"""

from pickands.cli import main
from pickands.studies import StudyConfig, run_study

# Exact discretisation ladders for alpha in {1, 2}
rep = run_study(StudyConfig("discretization", alphas=(1.0, 2.0), deltas=(1e-2, 1e-3, 1e-4), reps=0))
print(rep.to_csv())

# Truncation: one long path per replication, read on shorter windows
rep = run_study(StudyConfig("truncation", (1.5,), (0.25,), (2.0, 3.0, 4.0, 6.0), reps=5000))
for c in rep.checks:
    print(c)

# Variance of the two estimators along a horizon ladder
rep = run_study(StudyConfig("variance-blowup", (1.0,), (0.5,), (8.0, 16.0, 32.0, 64.0), reps=5000))
for r in rep.rows:
    print(r.stat, r.T, round(r.value, 4))

# Same thing from the command line, JSON to stdout; exit code 0 iff all checks pass
code = main(["closed-form", "--alpha", "2", "--delta", "0.5", "--format", "json"])
print("exit code", code)
