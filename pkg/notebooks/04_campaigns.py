"""
Running campaigns
=================

The harness wraps the protocols in seeded Monte Carlo and exhaustive
campaigns and produces a JSON or CSV report.
"""

# %%
import json

from onestep_ghz.harness import ExperimentConfig, run_experiment

cfg = ExperimentConfig(n_parties=5, protocol="both", trials=2000, seed=42)
report = run_experiment(cfg)
agg = report.aggregates
print("success rate", agg["success_rate"])
print("systems consumed per output", agg["systems_consumed_per_output"])
print("first patterns", dict(list(agg["pattern_histogram"].items())[:4]))

# %%
# Exhaustive mode visits every canonical input and both detector branches.
sweep = run_experiment(ExperimentConfig(n_parties=4, mode="exhaustive", protocol="both"))
print(len(sweep.trials), "records, all succeeded:", sweep.all_success)

# %%
# Oracle mode also checks every branch against a dense state-vector model.
check = run_experiment(ExperimentConfig(n_parties=3, mode="oracle-check", protocol="both"))
print("oracle mismatches:", check.oracle_mismatches)

# %%
print(json.dumps(check.trials[0], indent=2))
