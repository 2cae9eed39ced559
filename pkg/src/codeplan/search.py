"""Stagewise surrogate-guided path search and the exhaustive baseline.

Each stage predicts the accuracy of every admissible, not yet evaluated
path by inverse-distance weighting over the evaluated ones, scores it with
the reward, evaluates the predicted-best path with the oracle and updates a
stall counter.  The search stops after ``c_stop`` consecutive stages whose
true reward fails to improve on the previous one by ``epsilon``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .model import PathSpec, Scenario, ValidationError
from .oracle import OracleError
from .predictor import EvaluatedSet, predict_many
from .reward import PathMetrics, RewardConfig, accuracy_reward, average_accuracy, reward
from .throughput import BaselineMetrics, PathThroughput, admissible_paths, baseline_throughput

log = logging.getLogger(__name__)


class NoAdmissiblePath(RuntimeError):
    pass


class EvaluationBudgetExceeded(RuntimeError):
    pass


class Bootstrap(str, Enum):
    FIRST_ADMISSIBLE = "first_admissible"
    CHEAPEST_PATH = "cheapest_path"


class Termination(str, Enum):
    CONVERGED = "converged"
    EXHAUSTED = "exhausted"
    MAX_STAGES = "max_stages"
    NO_ADMISSIBLE_PATH = "no_admissible_path"


@dataclass(frozen=True)
class SearchConfig:
    reward: RewardConfig = RewardConfig()
    epsilon: float = 0.01
    c_stop: int = 3
    bootstrap: Bootstrap = Bootstrap.FIRST_ADMISSIBLE
    max_stages: Optional[int] = None  # None: |P'|
    rebuild_q: bool = True
    max_evaluations: int = 100_000  # brute force guard

    def __post_init__(self):
        object.__setattr__(self, "bootstrap", Bootstrap(self.bootstrap))
        if self.c_stop < 1:
            raise ValidationError("c_stop must be >= 1")
        if self.max_stages is not None and self.max_stages < 1:
            raise ValidationError("max_stages must be >= 1")
        if not self.epsilon >= 0:
            raise ValidationError("epsilon must be >= 0")


@dataclass(frozen=True)
class StageRecord:
    stage: int
    predicted_best: PathSpec
    predicted_reward: Optional[float]  # None for the bootstrap stage
    true_accuracy: float
    true_reward: float
    c_after: int
    metrics: PathMetrics


@dataclass
class SearchState:
    n: int = 0
    evaluated: EvaluatedSet = field(default_factory=EvaluatedSet)
    q: float = 0.0
    q_prv: float = -1.0
    c: int = 0
    trace: list = field(default_factory=list)


@dataclass(frozen=True)
class SearchResult:
    best: PathMetrics
    stages_run: int
    termination: Termination
    trace: tuple = ()
    evaluated: tuple = ()  # PathMetrics of every oracle-evaluated path
    baseline: Optional[BaselineMetrics] = None

    @property
    def best_path(self) -> PathSpec:
        return self.best.path


def _best_of(metrics) -> PathMetrics:
    """Highest true reward; ties go to the lexicographically first path."""
    return min(metrics, key=lambda m: (-m.reward, m.path))


def _evaluate(oracle, path: PathSpec, scenario: Scenario) -> float:
    try:
        return oracle.evaluate(path, scenario)
    except OracleError as exc:
        if exc.path is None:
            exc.path = path
        raise


def _admissible_or_raise(scenario: Scenario) -> list[tuple[PathSpec, PathThroughput]]:
    adm = admissible_paths(scenario)
    if not adm:
        raise NoAdmissiblePath(
            f"no path of scenario {scenario.scenario_id!r} beats the original throughput"
        )
    return adm


def _bootstrap(adm, rule: Bootstrap) -> int:
    if rule is Bootstrap.FIRST_ADMISSIBLE:
        return 0
    # shortest cycle; first in path order on ties
    return min(range(len(adm)), key=lambda i: (adm[i][1].cycle, i))


def predicted_rewards(candidates, known: EvaluatedSet, scenario, baseline, cfg: RewardConfig):
    """Predicted reward of each ``(path, throughput)`` candidate."""
    paths = [p for p, _ in candidates]
    a_hat = predict_many(paths, known, scenario.n_f)
    out = []
    for (p, tp), a in zip(candidates, a_hat):
        a_av = average_accuracy(tp, baseline.a_0, float(a))
        out.append(accuracy_reward(a_av, cfg) * (tp.th_total - baseline.th_0))
    return out


def code_search(scenario: Scenario, oracle, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    adm = _admissible_or_raise(scenario)
    baseline = baseline_throughput(scenario)
    max_stages = cfg.max_stages or len(adm)
    state = SearchState()
    done = [False] * len(adm)
    # only used when Q persists across stages
    stale_q: dict[int, float] = {}
    evaluated = []
    termination = None

    while state.c != cfg.c_stop:
        if all(done):
            termination = Termination.EXHAUSTED
            break
        if state.n >= max_stages:
            termination = Termination.MAX_STAGES
            break
        state.n += 1

        if len(state.evaluated) == 0:
            pick = _bootstrap(adm, cfg.bootstrap)
            predicted = None
        else:
            open_idx = [i for i in range(len(adm)) if not done[i]]
            if cfg.rebuild_q:
                fresh = open_idx
            else:
                fresh = [i for i in open_idx if i not in stale_q]
            if fresh:
                scores = predicted_rewards(
                    [adm[i] for i in fresh], state.evaluated, scenario, baseline, cfg.reward
                )
                q_map = dict(zip(fresh, scores))
            else:
                q_map = {}
            if not cfg.rebuild_q:
                stale_q.update(q_map)
                q_map = {i: stale_q[i] for i in open_idx}
            # adm is in path order, so the smallest index wins ties
            pick = max(open_idx, key=lambda i: (q_map[i], -i))
            predicted = q_map[pick]

        path, tp = adm[pick]
        a_p = _evaluate(oracle, path, scenario)
        m = reward(path, tp, a_p, baseline, cfg.reward)
        done[pick] = True
        evaluated.append(m)
        state.evaluated.add(path, a_p)

        state.q = m.reward
        if state.q - state.q_prv < cfg.epsilon:
            state.c += 1
        else:
            state.c = 0
        state.q_prv = state.q
        state.trace.append(
            StageRecord(state.n, path, predicted, a_p, m.reward, state.c, m)
        )
        log.debug("stage %d: %s A=%.4f F=%.6g c=%d", state.n, path.label(), a_p, m.reward, state.c)

    if termination is None:
        termination = Termination.CONVERGED
    return SearchResult(
        best=_best_of(evaluated),
        stages_run=state.n,
        termination=termination,
        trace=tuple(state.trace),
        evaluated=tuple(evaluated),
        baseline=baseline,
    )


def brute_force(scenario: Scenario, oracle, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Evaluate every admissible path and return the true-reward argmax."""
    adm = _admissible_or_raise(scenario)
    if len(adm) > cfg.max_evaluations:
        raise EvaluationBudgetExceeded(
            f"{len(adm)} admissible paths exceed max_evaluations={cfg.max_evaluations}"
        )
    baseline = baseline_throughput(scenario)
    table = []
    for path, tp in adm:
        a_p = _evaluate(oracle, path, scenario)
        table.append(reward(path, tp, a_p, baseline, cfg.reward))
    return SearchResult(
        best=_best_of(table),
        stages_run=len(table),
        termination=Termination.EXHAUSTED,
        evaluated=tuple(table),
        baseline=baseline,
    )
