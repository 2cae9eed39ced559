"""Analytic steady-state throughput of the original model and of each path.

Each steady-state cycle the local service pushes one batch of ``b_l``
samples.  On a path, ``s`` of them leave after block ``lout`` and rejoin at
block ``lin``; the middle blocks only see ``b_l - s``.  For cross paths the
host runs its own ``b_h`` samples plus the reserved ``s`` across
``hin..hout`` while the local side keeps working, so one cycle lasts
``max(t_local, t_host)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .model import PathSpec, Scenario, ValidationError, enumerate_paths


class Bottleneck(str, Enum):
    LOCAL = "local"
    HOST = "host"


@dataclass(frozen=True)
class BaselineMetrics:
    th_0: float
    t_0: float
    a_0: float


@dataclass(frozen=True)
class PathThroughput:
    th_local: float
    th_host: float
    th_total: float
    t_local_cycle: float
    t_host_cycle: float
    bottleneck: Bottleneck
    # diagnostic only: rate of the host's own samples under this path
    host_own_throughput: Optional[float] = None

    @property
    def cycle(self) -> float:
        return max(self.t_local_cycle, self.t_host_cycle)


def baseline_throughput(scenario: Scenario) -> BaselineMetrics:
    local = scenario.local
    b_l = local.batch_size
    t_0 = sum(block.time(b_l) for block in local.blocks)
    return BaselineMetrics(th_0=b_l / t_0, t_0=t_0, a_0=local.base_accuracy)


def host_baseline_cycle(scenario: Scenario) -> Optional[float]:
    """Time for the host to run one batch of its own workload, or None."""
    host = scenario.host
    if host is None:
        return None
    return sum(block.time(host.batch_size) for block in host.blocks)


def local_cycle_time(scenario: Scenario, path: PathSpec, s: int) -> float:
    local = scenario.local
    b_l = local.batch_size
    t = 0.0
    for i, block in enumerate(local.blocks):
        if path.lout < i < path.lin:
            t += block.time(b_l - s)
        else:
            t += block.time(b_l)
    if path.is_skip:
        t += scenario.skip_link_for(path.lout, path.lin).time(s)
    return t


def host_cycle_time(scenario: Scenario, path: PathSpec, s: int) -> float:
    if path.is_skip:
        return 0.0
    host = scenario.host
    b_h = host.batch_size
    t = 0.0
    for j, block in enumerate(host.blocks):
        if path.hin <= j <= path.hout:
            t += block.time(b_h + s)
        else:
            t += block.time(b_h)
    return t + scenario.entry_link.time(s) + scenario.exit_link.time(s)


def path_throughput(scenario: Scenario, path: PathSpec) -> PathThroughput:
    """Two-stream throughput of ``path``; ``s == 0`` degenerates to the baseline."""
    scenario.validate_path(path)
    b_l = scenario.local.batch_size
    s = scenario.s
    if s > b_l:
        raise ValidationError(f"s={s} exceeds b_l={b_l}")
    host_base = host_baseline_cycle(scenario)

    if s == 0:
        base = baseline_throughput(scenario)
        host_own = None if host_base is None else scenario.host.batch_size / host_base
        return PathThroughput(
            th_local=base.th_0,
            th_host=0.0,
            th_total=base.th_0,
            t_local_cycle=base.t_0,
            t_host_cycle=0.0,
            bottleneck=Bottleneck.LOCAL,
            host_own_throughput=host_own,
        )

    t_local = local_cycle_time(scenario, path, s)
    t_host = host_cycle_time(scenario, path, s)
    cycle = max(t_local, t_host)
    bottleneck = Bottleneck.HOST if t_host > t_local else Bottleneck.LOCAL
    if path.is_skip:
        host_own = None if host_base is None else scenario.host.batch_size / host_base
    else:
        host_own = scenario.host.batch_size / cycle
    th_local = (b_l - s) / cycle
    th_host = s / cycle
    return PathThroughput(
        th_local=th_local,
        th_host=th_host,
        th_total=th_local + th_host,
        t_local_cycle=t_local,
        t_host_cycle=t_host,
        bottleneck=bottleneck,
        host_own_throughput=host_own,
    )


def all_path_throughputs(scenario: Scenario) -> list[tuple[PathSpec, PathThroughput]]:
    return [(p, path_throughput(scenario, p)) for p in enumerate_paths(scenario)]


def admissible_paths(scenario: Scenario) -> list[tuple[PathSpec, PathThroughput]]:
    """Paths that strictly beat the original model's throughput, in path order.

    ``Th_p > Th_0`` is decided on cycle times (``cycle < t_0``), which is the
    same condition without the rounding of the two-stream rate sum.
    """
    t_0 = baseline_throughput(scenario).t_0
    return [(p, tp) for p, tp in all_path_throughputs(scenario) if is_admissible(tp, t_0)]


def is_admissible(tp: PathThroughput, t_0: float) -> bool:
    return tp.th_host > 0 and tp.cycle < t_0
