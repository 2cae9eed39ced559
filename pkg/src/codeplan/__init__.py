"""Inference path planning for coordinated, block-partitioned DNN services.

Enumerate cross- and skip-connection paths between a local and a host
service, score them by throughput gain and accuracy, search for the best
one with an inverse-distance surrogate, and check the throughput model
against a discrete-event simulation.
"""

from pathlib import Path

from .model import (
    BlockProfile,
    LinkProfile,
    PathKind,
    PathSpec,
    Placement,
    Scenario,
    ServiceProfile,
    ValidationError,
    count_paths,
    enumerate_paths,
    path_distance,
)
from .throughput import (
    BaselineMetrics,
    Bottleneck,
    PathThroughput,
    admissible_paths,
    baseline_throughput,
    path_throughput,
)
from .oracle import ExternalOracle, OracleError, OracleMiss, SyntheticOracle, TableOracle
from .predictor import EvaluatedSet, predict_accuracy, predict_average_accuracy
from .reward import PathMetrics, RewardConfig, accuracy_reward, reward, throughput_reward
from .search import (
    NoAdmissiblePath,
    SearchConfig,
    SearchResult,
    Termination,
    brute_force,
    code_search,
)
from .dessim import SimConfig, SimReport, simulate
from .config import load_scenario

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a shipped scenario fixture, e.g. ``fixture_path("exp4")``."""
    if not name.endswith(".json"):
        name += ".json"
    return FIXTURE_DIR / name


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))
