"""Walk through the path space of the exp4 scenario.

Counts the candidate paths, prints the original model's throughput and
lists the paths that beat it, best ratio first.

    python3 demos/01_paths_and_throughput.py
"""

from codeplan import baseline_throughput, enumerate_paths, fixture_path
from codeplan.config import load_scenario
from codeplan.throughput import admissible_paths

sc = load_scenario(fixture_path("exp4")).scenario
paths = enumerate_paths(sc)
n_skip = sum(p.is_skip for p in paths)
print(f"{len(paths)} paths: {len(paths) - n_skip} cross, {n_skip} skip")

base = baseline_throughput(sc)
print(f"original model: {base.t_0 * 1e3:.3f} ms per batch of {sc.local.batch_size}, "
      f"Th_0 = {base.th_0:,.0f} samples/s")

# paths whose cycle beats the original model
adm = admissible_paths(sc)
print(f"{len(adm)} admissible paths with s = {sc.s}")
adm.sort(key=lambda row: -row[1].th_total)
print("\n  path              ratio   t_local   t_host  bottleneck")
for p, tp in adm[:12]:
    print(f"  {p.label():<16} {tp.th_total / base.th_0:6.4f}  "
          f"{tp.t_local_cycle * 1e3:7.4f}  {tp.t_host_cycle * 1e3:7.4f}  {tp.bottleneck.value}")

# with 8 of 32 samples offloaded no path can beat 32/24
best = adm[0][1].th_total / base.th_0
print(f"\nbest ratio {best:.4f}, ceiling b_l/(b_l - s) = {32 / 24:.4f}")
