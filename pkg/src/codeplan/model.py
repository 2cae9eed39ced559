"""Domain types for block-partitioned services, links and inference paths.

A path is identified by its vector ``r = [lout, hin, hout, lin]``.  Cross
paths route the offloaded samples from local block ``lout`` through host
blocks ``hin..hout`` and back into local block ``lin``.  Skip paths stay on
the local service and carry the sentinel ``n_f`` in both host slots so that
every path lives in one integer metric space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

DEFAULT_N_F = 100


class ValidationError(ValueError):
    """An input object violates one of its invariants."""


class PathKind(str, Enum):
    CROSS = "cross"
    SKIP = "skip"


class Placement(str, Enum):
    ON_HOST = "on_host"
    ON_LOCAL = "on_local"


@dataclass(frozen=True)
class BlockProfile:
    """Affine timing of one frozen block: ``tau(m) = a + c * m`` seconds."""

    index: int
    fixed_cost_a: float
    per_sample_cost_c: float

    def __post_init__(self):
        if self.index < 0:
            raise ValidationError(f"block index must be >= 0, got {self.index}")
        if not self.fixed_cost_a >= 0:
            raise ValidationError(f"block {self.index}: fixed cost a must be >= 0")
        if not self.per_sample_cost_c > 0:
            raise ValidationError(f"block {self.index}: per-sample cost c must be > 0")

    def time(self, m: float) -> float:
        return self.fixed_cost_a + self.per_sample_cost_c * m


@dataclass(frozen=True)
class ServiceProfile:
    service_id: str
    blocks: tuple[BlockProfile, ...]
    batch_size: int
    base_accuracy: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValidationError(f"service {self.service_id!r} has no blocks")
        for i, b in enumerate(self.blocks):
            if b.index != i:
                raise ValidationError(
                    f"service {self.service_id!r}: block indices must be 0..N-1, "
                    f"found {b.index} at position {i}"
                )
        if self.batch_size < 1:
            raise ValidationError(f"service {self.service_id!r}: batch_size must be >= 1")
        if not 0.0 <= self.base_accuracy <= 1.0:
            raise ValidationError(f"service {self.service_id!r}: base_accuracy not in [0, 1]")

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_costs(cls, service_id, costs, batch_size, base_accuracy=0.0):
        """Build from a sequence of ``(a, c)`` pairs."""
        blocks = tuple(BlockProfile(i, float(a), float(c)) for i, (a, c) in enumerate(costs))
        return cls(service_id, blocks, batch_size, base_accuracy)


@dataclass(frozen=True)
class LinkProfile:
    fixed_cost_a: float = 0.0
    per_sample_cost_c: float = 0.0
    placement: Placement = Placement.ON_HOST

    def __post_init__(self):
        if not self.fixed_cost_a >= 0 or not self.per_sample_cost_c >= 0:
            raise ValidationError("link costs must be >= 0")

    def time(self, m: float) -> float:
        return self.fixed_cost_a + self.per_sample_cost_c * m


@dataclass(frozen=True, order=True)
class PathSpec:
    """One inference path.  Ordering is lexicographic on ``r``."""

    lout: int
    hin: int
    hout: int
    lin: int
    kind: PathKind = field(default=PathKind.CROSS, compare=False)

    @classmethod
    def cross(cls, lout: int, hin: int, hout: int, lin: int) -> "PathSpec":
        return cls(lout, hin, hout, lin, PathKind.CROSS)

    @classmethod
    def skip(cls, lout: int, lin: int, n_f: int = DEFAULT_N_F) -> "PathSpec":
        return cls(lout, n_f, n_f, lin, PathKind.SKIP)

    @property
    def r(self) -> tuple[int, int, int, int]:
        return (self.lout, self.hin, self.hout, self.lin)

    @property
    def is_skip(self) -> bool:
        return self.kind is PathKind.SKIP

    def vector(self, n_f: int) -> tuple[int, int, int, int]:
        """``r`` with skip paths materialized against ``n_f``."""
        if self.is_skip:
            return (self.lout, n_f, n_f, self.lin)
        return self.r

    def key(self) -> tuple:
        """Hashable identity that ignores the sentinel value of skip paths."""
        if self.is_skip:
            return ("skip", self.lout, self.lin)
        return ("cross",) + self.r

    def label(self) -> str:
        if self.is_skip:
            return f"skip[{self.lout},-,-,{self.lin}]"
        return "cross[{},{},{},{}]".format(*self.r)


@dataclass(frozen=True)
class Scenario:
    local: ServiceProfile
    host: Optional[ServiceProfile] = None
    entry_link: LinkProfile = LinkProfile()
    exit_link: LinkProfile = LinkProfile()
    skip_link: LinkProfile = LinkProfile(placement=Placement.ON_LOCAL)
    offload_count_s: int = 0
    n_f: int = DEFAULT_N_F
    scenario_id: str = "scenario"
    # per (lout, lin) skip link overrides
    skip_overrides: Mapping[tuple[int, int], LinkProfile] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "skip_overrides", dict(self.skip_overrides))
        s = self.offload_count_s
        if not 0 <= s <= self.local.batch_size:
            raise ValidationError(
                f"offload count s={s} must satisfy 0 <= s <= b_l={self.local.batch_size}"
            )
        if self.n_f <= self.local.n_blocks:
            raise ValidationError(f"n_f={self.n_f} must exceed the local block count")
        if self.host is not None and self.n_f <= self.host.n_blocks:
            raise ValidationError(f"n_f={self.n_f} must exceed the host block count")

    @property
    def s(self) -> int:
        return self.offload_count_s

    def skip_link_for(self, lout: int, lin: int) -> LinkProfile:
        return self.skip_overrides.get((lout, lin), self.skip_link)

    def validate_path(self, path: PathSpec) -> None:
        """Raise :class:`ValidationError` naming the first violated constraint."""
        n_l = self.local.n_blocks
        if not 0 <= path.lout:
            raise ValidationError(f"constraint 0 <= lout violated: lout={path.lout}")
        if not path.lout < path.lin:
            raise ValidationError(
                f"constraint lout < lin violated: lout={path.lout}, lin={path.lin}"
            )
        if not path.lin < n_l:
            raise ValidationError(f"constraint lin < N_l violated: lin={path.lin}, N_l={n_l}")
        if path.is_skip:
            if path.hin != path.hout:
                raise ValidationError("skip path must have hin == hout == N_f")
            return
        if self.host is None:
            raise ValidationError("cross path given but the scenario has no host service")
        n_h = self.host.n_blocks
        if not 0 <= path.hin <= path.hout:
            raise ValidationError(
                f"constraint 0 <= hin <= hout violated: hin={path.hin}, hout={path.hout}"
            )
        if not path.hout < n_h:
            raise ValidationError(f"constraint hout < N_h violated: hout={path.hout}, N_h={n_h}")

    def path_from_vector(self, r: Sequence[int]) -> PathSpec:
        """Interpret a raw 4-vector; host slots equal to ``n_f`` mean a skip path."""
        if len(r) != 4:
            raise ValidationError(f"path vector needs 4 entries, got {len(r)}")
        lout, hin, hout, lin = (int(v) for v in r)
        if hin == self.n_f or hout == self.n_f:
            path = PathSpec(lout, hin, hout, lin, PathKind.SKIP)
        else:
            path = PathSpec.cross(lout, hin, hout, lin)
        self.validate_path(path)
        return path


def enumerate_paths(scenario: Scenario) -> list[PathSpec]:
    """Every legal path of ``scenario`` in lexicographic order of ``r``."""
    n_l = scenario.local.n_blocks
    n_f = scenario.n_f
    paths = []
    for lout in range(n_l):
        for lin in range(lout + 1, n_l):
            if scenario.host is not None:
                n_h = scenario.host.n_blocks
                for hin in range(n_h):
                    for hout in range(hin, n_h):
                        paths.append(PathSpec.cross(lout, hin, hout, lin))
            paths.append(PathSpec.skip(lout, lin, n_f))
    paths.sort()
    return paths


def count_paths(n_local: int, n_host: Optional[int]) -> int:
    """Closed-form size of the path set."""
    local_pairs = math.comb(n_local, 2)
    host_pairs = 0 if not n_host else math.comb(n_host, 2) + n_host
    return local_pairs * host_pairs + local_pairs


def path_distance(p1: PathSpec, p2: PathSpec, n_f: int) -> float:
    """Euclidean distance between the materialized path vectors."""
    v1 = p1.vector(n_f)
    v2 = p2.vector(n_f)
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(v1, v2)))
