"""Check the analytic throughput formulas against the event simulator.

For each shipped scenario, simulate the original model and a few paths
for 1000 batches after a short warm-up, and print the relative error.

    python3 demos/03_simulate_check.py
"""

import random

from codeplan import (SimConfig, baseline_throughput, enumerate_paths, fixture_names,
                      fixture_path, path_throughput, simulate)
from codeplan.config import load_scenario

rng = random.Random(0)
for name in fixture_names():
    sc = load_scenario(fixture_path(name)).scenario
    runs = [(None, baseline_throughput(sc).th_0)]
    runs += [(p, path_throughput(sc, p).th_total) for p in rng.sample(enumerate_paths(sc), 3)]
    print(name)
    for p, analytic in runs:
        rep = simulate(SimConfig(sc, p, n_batches=1010, warmup_batches=10))
        err = abs(rep.measured_th_total - analytic) / analytic
        label = "original" if p is None else p.label()
        print(f"  {label:<16} analytic {analytic:10.1f}  measured {rep.measured_th_total:10.1f}  err {err:.1e}")
