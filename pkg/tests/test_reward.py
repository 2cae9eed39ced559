import math
import random

import pytest

from codeplan import PathSpec, RewardConfig, accuracy_reward, reward, throughput_reward
from codeplan.reward import average_accuracy
from codeplan.throughput import BaselineMetrics, Bottleneck, PathThroughput


def test_sigmoid_midpoint():
    cfg = RewardConfig(k=37.0, a_min=0.86)
    assert accuracy_reward(0.86, cfg) == 0.5


def test_sigmoid_value():
    cfg = RewardConfig(k=100.0, a_min=0.8)
    # sigmoid(2)
    assert accuracy_reward(0.82, cfg) == pytest.approx(1 / (1 + math.exp(-2)), rel=1e-12)
    assert accuracy_reward(0.82, cfg) == pytest.approx(0.880797077977882, rel=1e-12)


def test_sigmoid_limits():
    cfg = RewardConfig(k=1000.0, a_min=0.5)
    vals = [accuracy_reward(a, cfg) for a in (0.3, 0.1, 0.0)]
    assert vals[0] > vals[1] > vals[2] >= 0.0
    assert vals[2] < 1e-200


def test_sigmoid_increasing():
    cfg = RewardConfig()
    xs = [i / 200 for i in range(201)]
    ys = [accuracy_reward(x, cfg) for x in xs]
    assert all(b >= a for a, b in zip(ys, ys[1:]))
    assert all(b > a for a, b in zip(ys[150:], ys[151:]))


def test_throughput_reward():
    assert throughput_reward(10.0, 10.0) == 0.0
    assert throughput_reward(1.4 * 10.0, 10.0) == pytest.approx(4.0, rel=1e-12)
    assert throughput_reward(8.0, 10.0) < 0


def test_config_invariants():
    with pytest.raises(ValueError):
        RewardConfig(k=0)
    with pytest.raises(ValueError):
        RewardConfig(a_min=1.0)


def _tp(th_local, th_host):
    return PathThroughput(th_local, th_host, th_local + th_host, 1.0, 1.0, Bottleneck.LOCAL)


def test_reward_assembly():
    base = BaselineMetrics(th_0=10.0, t_0=3.2, a_0=0.867)
    cfg = RewardConfig(k=100, a_min=0.86)
    tp = _tp(10.5, 3.5)
    m = reward(PathSpec.cross(0, 1, 4, 5), tp, 0.833, base, cfg)
    a_av = (10.5 * 0.867 + 3.5 * 0.833) / 14.0
    assert m.a_av == pytest.approx(a_av, abs=1e-15)
    assert m.reward == accuracy_reward(m.a_av, cfg) * (14.0 - 10.0)
    assert m.reward > 0


def test_no_offload_ignores_path_accuracy():
    base = BaselineMetrics(th_0=10.0, t_0=3.2, a_0=0.9)
    cfg = RewardConfig()
    tp = _tp(12.0, 0.0)
    m1 = reward(PathSpec.skip(0, 2), tp, 0.1, base, cfg)
    m2 = reward(PathSpec.skip(0, 2), tp, 0.7, base, cfg)
    assert m1.a_av == m2.a_av == 0.9
    assert m1.reward == m2.reward == accuracy_reward(0.9, cfg) * 2.0


def test_average_between_components():
    rng = random.Random(2)
    for _ in range(1000):
        a0, ap = rng.random(), rng.random()
        tp = _tp(rng.uniform(0.1, 10), rng.uniform(0, 10))
        av = average_accuracy(tp, a0, ap)
        assert min(a0, ap) - 1e-15 <= av <= max(a0, ap) + 1e-15


def test_reward_monotone():
    base = BaselineMetrics(th_0=10.0, t_0=3.2, a_0=0.85)
    cfg = RewardConfig()
    p = PathSpec.skip(0, 2)
    rs = [reward(p, _tp(9.0, th_h), 0.8, base, cfg).reward for th_h in (2.0, 3.0, 4.0)]
    assert rs[0] < rs[1] < rs[2]
    rs = [reward(p, _tp(9.0, 3.0), a, base, cfg).reward for a in (0.7, 0.8, 0.9)]
    assert rs[0] < rs[1] < rs[2]
