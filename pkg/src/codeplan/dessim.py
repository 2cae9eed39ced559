"""Discrete-event simulation of the local and host batch pipelines.

The local service runs one batch at a time through its blocks.  On a cross
path the ``s`` reserved samples of batch ``k`` fork after block ``lout``
and travel through the entry link, host blocks ``hin..hout`` (riding in the
host's own batch) and the exit link.  They rejoin the local service at
block ``lin`` together with batch ``k + 1``, which waits there until they
are back.  The host runs one batch of its own ``b_h`` samples per cycle and
needs the forked group before it can start the cycle that carries it.

With deterministic block times this settles into a period of
``max(t_local, t_host)``, the analytic cycle.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Optional

from .model import PathSpec, Scenario, ValidationError

LOCAL, HOST = 0, 1
# pseudo block ids for links; real blocks are >= 0
SKIP_LINK, ENTRY_LINK, EXIT_LINK = -1, -2, -3


@dataclass(frozen=True)
class SimConfig:
    scenario: Scenario
    path: Optional[PathSpec] = None
    n_batches: int = 1000
    warmup_batches: int = 0

    def __post_init__(self):
        if self.n_batches < 1:
            raise ValidationError("n_batches must be >= 1")
        if not 0 <= self.warmup_batches < self.n_batches:
            raise ValidationError("need 0 <= warmup_batches < n_batches")
        if self.path is not None:
            self.scenario.validate_path(self.path)


@dataclass
class SimReport:
    measured_th_total: float
    measured_th_local: float
    measured_th_host: float
    local_busy: list
    host_busy: list
    host_own_throughput: Optional[float]
    completed_batches: int
    elapsed: float
    events: int
    # samples finished per admitting batch, for conservation checks
    completed_by_batch: dict = field(default_factory=dict, repr=False)
    trace: list = field(default_factory=list, repr=False)


class _Sim:
    def __init__(self, cfg: SimConfig, keep_trace: bool):
        sc = cfg.scenario
        self.cfg = cfg
        self.sc = sc
        self.local = sc.local
        self.host = sc.host
        self.b_l = sc.local.batch_size
        self.s = sc.s if cfg.path is not None else 0
        # s == 0 moves no samples; that is the original model
        self.path = cfg.path if self.s > 0 else None
        self.cross = self.path is not None and not self.path.is_skip

        self.heap: list = []
        self.now = 0.0
        self.events = 0
        self.keep_trace = keep_trace
        self.trace: list = []
        self.local_busy = [0.0] * self.local.n_blocks
        self.host_busy = [0.0] * (self.host.n_blocks if self.host else 0)

        self.batch = 0
        self.main_count = 0
        self.joined = (None, 0)  # (origin batch, count) riding from lin on
        self.waiting_join = False
        self.completion_times: list = []
        self.main_done: list = []
        self.joined_done: list = []
        self.by_origin: dict = defaultdict(int)
        self.returned: deque = deque()

        self.host_tokens: deque = deque()
        self.host_running = False
        self.host_carry = (None, 0)
        self.host_cycles = 0
        self.host_cycle_ends: list = []

    def schedule(self, dt, service, block, batch, count):
        # equal timestamps resolve by (service, block, batch)
        heapq.heappush(self.heap, (self.now + dt, service, block, batch, count))

    def run(self):
        self.start_local_batch()
        if self.host is not None:
            self.try_start_host()
        while self.heap and len(self.completion_times) < self.cfg.n_batches:
            t, service, block, batch, count = heapq.heappop(self.heap)
            self.now = t
            self.events += 1
            if self.keep_trace:
                self.trace.append((t, service, block, batch, count))
            if service == LOCAL:
                if block >= 0:
                    self.local_busy[block] += self.local_time(block, count)
                self.on_local_done(block)
            else:
                if block >= 0:
                    self.host_busy[block] += self.host_time(block, count)
                self.on_host_done(block, batch)

    # local service
    def local_time(self, block, m):
        if block == SKIP_LINK:
            return self.sc.skip_link_for(self.path.lout, self.path.lin).time(m)
        return self.local.blocks[block].time(m)

    def run_local(self, block, count):
        self.schedule(self.local_time(block, count), LOCAL, block, self.batch, count)

    def start_local_batch(self):
        self.main_count = self.b_l
        self.joined = (None, 0)
        self.run_local(0, self.b_l)

    def on_local_done(self, block):
        p = self.path
        if p is not None and block == p.lout:
            self.main_count = self.b_l - self.s
            if p.is_skip:
                self.run_local(SKIP_LINK, self.s)
                return
            self.host_tokens.append((self.batch, self.s))
            self.try_start_host()
            self.advance_local(block + 1)
        elif block == SKIP_LINK:
            self.joined = (self.batch, self.s)
            self.advance_local(p.lout + 1)
        elif block == self.local.n_blocks - 1:
            self.finish_local_batch()
        else:
            self.advance_local(block + 1)

    def advance_local(self, block):
        p = self.path
        if p is not None and p.lout < block < p.lin:
            self.run_local(block, self.main_count)
            return
        if self.cross and block == p.lin and self.batch > 0:
            if not self.returned:
                self.waiting_join = True
                return
            self.waiting_join = False
            self.joined = self.returned.popleft()
        self.run_local(block, self.main_count + self.joined[1])

    def finish_local_batch(self):
        self.completion_times.append(self.now)
        self.main_done.append(self.main_count)
        self.joined_done.append(self.joined[1])
        self.by_origin[self.batch] += self.main_count
        origin, count = self.joined
        if origin is not None:
            self.by_origin[origin] += count
        self.batch += 1
        if self.batch < self.cfg.n_batches:
            self.start_local_batch()

    # host service
    def host_time(self, block, m):
        if block == ENTRY_LINK:
            return self.sc.entry_link.time(m)
        if block == EXIT_LINK:
            return self.sc.exit_link.time(m)
        return self.host.blocks[block].time(m)

    def run_host(self, block, count):
        self.schedule(self.host_time(block, count), HOST, block, self.host_cycles, count)

    def host_count(self, block):
        b_h = self.host.batch_size
        if self.cross and self.path.hin <= block <= self.path.hout:
            return b_h + self.host_carry[1]
        return b_h

    def try_start_host(self):
        if self.host_running:
            return
        if self.cross:
            if not self.host_tokens:
                return
            self.host_carry = self.host_tokens.popleft()
        self.host_running = True
        self.host_step(0)

    def host_step(self, block):
        if self.cross and block == self.path.hin:
            self.run_host(ENTRY_LINK, self.host_carry[1])
        else:
            self.run_host(block, self.host_count(block))

    def on_host_done(self, block, cycle):
        p = self.path
        if block == ENTRY_LINK:
            self.run_host(p.hin, self.host_count(p.hin))
            return
        if self.cross and block == p.hout:
            self.run_host(EXIT_LINK, self.host_carry[1])
            return
        if block == EXIT_LINK:
            self.returned.append(self.host_carry)
            if self.waiting_join:
                self.advance_local(p.lin)
            nxt = p.hout + 1
        else:
            nxt = block + 1
        if nxt < self.host.n_blocks:
            self.host_step(nxt)
            return
        self.host_cycles += 1
        self.host_cycle_ends.append(self.now)
        self.host_running = False
        self.try_start_host()


def simulate(cfg: SimConfig, keep_trace: bool = False) -> SimReport:
    """Run the pipelines until ``n_batches`` local batches complete.

    Rates cover batches ``warmup_batches..n_batches-1``, timed from the
    completion of the last warm-up batch (or zero) to the final completion.
    """
    sim = _Sim(cfg, keep_trace)
    sim.run()
    w = cfg.warmup_batches
    times = sim.completion_times
    start = times[w - 1] if w > 0 else 0.0
    end = times[-1]
    elapsed = end - start
    th_local = sum(sim.main_done[w:]) / elapsed
    th_host = sum(sim.joined_done[w:]) / elapsed

    host_own = None
    if sim.host is not None:
        n_host = sum(1 for t in sim.host_cycle_ends if start < t <= end)
        host_own = n_host * sim.host.batch_size / elapsed

    return SimReport(
        measured_th_total=th_local + th_host,
        measured_th_local=th_local,
        measured_th_host=th_host,
        local_busy=[b / end for b in sim.local_busy],
        host_busy=[b / end for b in sim.host_busy],
        host_own_throughput=host_own,
        completed_batches=len(times) - w,
        elapsed=elapsed,
        events=sim.events,
        completed_by_batch=dict(sim.by_origin),
        trace=sim.trace,
    )
