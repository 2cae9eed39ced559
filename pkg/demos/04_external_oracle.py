"""Plug an external accuracy evaluator into the search.

The evaluator is any program that reads one JSON request per line on
stdin and answers with {"accuracy": x}.  Here a tiny Python script plays
that role; a real one would train the path's links and report test
accuracy.

    python3 demos/04_external_oracle.py
"""

import sys
import tempfile
import textwrap
from pathlib import Path

from codeplan import ExternalOracle, code_search, fixture_path
from codeplan.config import load_scenario

EVALUATOR = textwrap.dedent("""
    import json, sys
    for line in sys.stdin:
        req = json.loads(line)
        lout, hin, hout, lin = req["r_p"]
        if req["kind"] == "skip":
            acc = 0.867 - 0.06 * (lin - lout - 1)
        else:
            # borrowed host blocks win back part of what was skipped
            acc = 0.867 - 0.06 * (lin - lout - 1) + 0.045 * (hout - hin + 1)
        print(json.dumps({"accuracy": max(0.0, min(1.0, acc))}), flush=True)
""")

bundle = load_scenario(fixture_path("exp4"))
with tempfile.TemporaryDirectory() as tmp:
    script = Path(tmp) / "evaluator.py"
    script.write_text(EVALUATOR)
    with ExternalOracle([sys.executable, str(script)], timeout=30) as oracle:
        res = code_search(bundle.scenario, oracle, bundle.search)

for rec in res.trace:
    print(f"stage {rec.stage}: {rec.predicted_best.label():<16} A_p={rec.true_accuracy:.3f} F={rec.true_reward:.1f}")
print(f"best {res.best_path.label()} with A_av={res.best.a_av:.4f}")
