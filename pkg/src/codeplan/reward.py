"""Reward of a path: sigmoid accuracy term times throughput gain."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import PathSpec, ValidationError
from .throughput import BaselineMetrics, PathThroughput


@dataclass(frozen=True)
class RewardConfig:
    k: float = 100.0
    a_min: float = 0.86

    def __post_init__(self):
        if not self.k > 0:
            raise ValidationError("reward slope k must be > 0")
        if not 0.0 < self.a_min < 1.0:
            raise ValidationError("a_min must lie in (0, 1)")


@dataclass(frozen=True)
class PathMetrics:
    path: PathSpec
    throughput: PathThroughput
    a_p: float
    a_av: float
    reward: float


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def accuracy_reward(a_av: float, cfg: RewardConfig) -> float:
    return _sigmoid(cfg.k * (a_av - cfg.a_min))


def throughput_reward(th_p: float, th_0: float) -> float:
    return th_p - th_0


def average_accuracy(tp: PathThroughput, a_0: float, a_p: float) -> float:
    """Throughput-weighted blend of the main-stream and path accuracies."""
    return (tp.th_local * a_0 + tp.th_host * a_p) / tp.th_total


def reward(
    path: PathSpec,
    tp: PathThroughput,
    a_p: float,
    baseline: BaselineMetrics,
    cfg: RewardConfig,
) -> PathMetrics:
    a_av = average_accuracy(tp, baseline.a_0, a_p)
    f = accuracy_reward(a_av, cfg) * throughput_reward(tp.th_total, baseline.th_0)
    return PathMetrics(path=path, throughput=tp, a_p=a_p, a_av=a_av, reward=f)
