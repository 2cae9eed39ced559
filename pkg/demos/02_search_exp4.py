"""Run the stagewise search on exp4 and compare it with brute force.

    python3 demos/02_search_exp4.py
"""

from codeplan import brute_force, code_search, fixture_path
from codeplan.config import load_scenario

bundle = load_scenario(fixture_path("exp4"))
sc, oracle, cfg = bundle.scenario, bundle.oracle, bundle.search

res = code_search(sc, oracle, cfg)
print(f"search: eps={cfg.epsilon}, c_stop={cfg.c_stop}, A_min={cfg.reward.a_min}, k={cfg.reward.k}")
print("\nstage  path              predicted F   A_p     F        c")
for rec in res.trace:
    pred = "-" if rec.predicted_reward is None else f"{rec.predicted_reward:10.1f}"
    print(f"{rec.stage:5d}  {rec.predicted_best.label():<16} {pred:>11}  "
          f"{rec.true_accuracy:.3f}  {rec.true_reward:7.1f}  {rec.c_after}")

best = res.best
print(f"\n{res.termination.value} after {res.stages_run} oracle calls")
print(f"best {best.path.label()}: A_av = {best.a_av:.4f}, "
      f"Th_p/Th_0 = {best.throughput.th_total / res.baseline.th_0:.4f}, F = {best.reward:.1f}")

bf = brute_force(sc, oracle, cfg)
print(f"brute force over {len(bf.evaluated)} admissible paths picks {bf.best_path.label()}")
