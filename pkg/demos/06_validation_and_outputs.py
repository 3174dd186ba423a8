"""
Self-checks and file outputs
============================

``validate`` compares every fast path with a slow dense oracle.  Scenarios
and sweeps write plot-ready CSV files with a JSON sidecar.
"""
import json
import tempfile
from pathlib import Path

from fiberarray.scenario import parse_config, preset, preset_specs, run_scenario, validate

report = validate(verbose=True)
print("all checks passed:", report.passed)

spec = parse_config(json.dumps({"n_sites": 3, "initial": "EEG", "occupations": [0.1, 0.1],
                                "t_max": 2.0, "record_stride": 250, "measures": ["concurrence", "spin_squeezing"]}))
with tempfile.TemporaryDirectory() as tmp:
    res = run_scenario(spec, Path(tmp) / "eeg.csv")
    print("\n" + res.csv_path.read_text())
    print(json.loads(res.meta_path.read_text())["final_residual"])

# presets are small sweeps; this is the parameter grid behind fig2
for s in preset_specs(preset("fig2")):
    print(s.n_sites, s.initial, s.occupations)
