"""
Ring Worker
Per-worker cooperation state, the cooperate step, the drain loop and the
worker body run by the orchestrator
"""

import logging
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Protocol, Tuple

import numpy as np

from ..config.configuration_manager import GesConfig, RingConfig
from ..core.exceptions import WatchdogTimeoutError
from ..core.interfaces import ICooperationChannel
from ..ges.kernel import RouteMinimizer, SolveResult, derive_rng
from ..model.instance import Instance
from ..model.solution import Solution
from ..profiler.counters import OpCounters, COOP
from .channels import RingTopology
from .messages import CooperationMessage, MessageLog

logger = logging.getLogger(__name__)


@dataclass
class WorkerState:
    index: int
    rng: np.random.Generator
    best: Optional[Solution] = None
    last_sent_route_count: Optional[int] = None
    finished: bool = False
    finished_sent: bool = False
    finished_from_prev: bool = False
    pending: Optional[Solution] = None   # received, adopted at the next outer boundary
    rounds: int = 0
    first_finished_round: Optional[int] = None

    @property
    def best_route_count(self) -> Optional[int]:
        return self.best.route_count if self.best is not None else None

    def mark_finished(self) -> None:
        if not self.finished:
            self.finished = True
            self.first_finished_round = self.rounds

    def dump(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "best_route_count": self.best_route_count,
            "last_sent_route_count": self.last_sent_route_count,
            "finished": self.finished,
            "finished_sent": self.finished_sent,
            "finished_from_prev": self.finished_from_prev,
            "rounds": self.rounds,
            "first_finished_round": self.first_finished_round,
        }


def _complete(sol: Solution, inst: Instance) -> bool:
    return sol.feasible and len(sol.assignment) == inst.n


def cooperate(state: WorkerState, inbox: Optional[ICooperationChannel],
              outbox: Optional[ICooperationChannel], topology: RingTopology, inst: Instance,
              log: Optional[MessageLog] = None,
              counters: Optional[OpCounters] = None) -> Tuple[WorkerState, bool]:
    """
    Send to next(i) when the best route count dropped since the last send or
    finished is newly set, then take everything pending from prev(i).
    """
    if topology.p == 1:
        return state, state.finished

    state.rounds += 1
    units = 0

    # send phase
    count = state.best_route_count
    decreased = count is not None and (state.last_sent_route_count is None
                                       or count < state.last_sent_route_count)
    newly_finished = state.finished and not state.finished_sent
    if decreased or newly_finished:
        routes = tuple(tuple(r) for r in state.best.to_id_lists()) if decreased else None
        message = CooperationMessage(state.index, count if count is not None else 0,
                                     state.finished, routes)
        outbox.send(message)
        if log is not None:
            log.record(message, topology.next(state.index), state.last_sent_route_count)
        units += message.payload_units
        if decreased:
            state.last_sent_route_count = count
        if state.finished:
            state.finished_sent = True

    # receive phase
    for message in inbox.drain():
        units += message.payload_units
        if message.finished:
            state.finished_from_prev = True
            state.mark_finished()
        if message.routes is None:
            continue
        if state.best is not None and message.route_count >= state.best.route_count:
            continue
        candidate = Solution.from_routes(message.routes, inst)
        if not _complete(candidate, inst):
            logger.warning(f"Worker {state.index} dropped an invalid solution from worker {message.sender}")
            continue
        state.best = candidate
        state.pending = candidate

    if counters is not None:
        with counters.track(COOP):
            counters.add(COOP, units)
        counters.coop_rounds += 1
    return state, state.finished


def drain_until_finished(state: WorkerState, inbox: Optional[ICooperationChannel],
                         outbox: Optional[ICooperationChannel], topology: RingTopology,
                         inst: Instance, ring_config: RingConfig,
                         log: Optional[MessageLog] = None, counters: Optional[OpCounters] = None,
                         stop_event: Optional[threading.Event] = None) -> WorkerState:
    """
    Keep relaying after the local loop ended, until finished has come back
    from prev(i). Raises WatchdogTimeoutError when that takes too long.
    """
    state.mark_finished()
    if topology.p == 1:
        return state
    started = time.monotonic()
    while True:
        cooperate(state, inbox, outbox, topology, inst, log, counters)
        if state.finished_sent and state.finished_from_prev:
            return state
        if stop_event is not None and stop_event.is_set():
            # orchestrator abort
            return state
        if time.monotonic() - started > ring_config.watchdog_seconds:
            raise WatchdogTimeoutError(
                f"Worker {state.index} waited {ring_config.watchdog_seconds}s for finished", state.dump())
        time.sleep(ring_config.poll_interval)


class Kernel(Protocol):
    def solve(self, rng=None, coop_hook=None, boundary_hook=None) -> SolveResult: ...


@dataclass
class WorkerResult:
    index: int
    best: Optional[Solution]
    solve_result: Optional[SolveResult]
    counters: OpCounters
    state: WorkerState = field(repr=False, default=None)


class RingWorker:
    """One ring member: runs a kernel with cooperation hooks, then drains"""

    def __init__(self, index: int, inst: Instance, ges_config: GesConfig, ring_config: RingConfig,
                 topology: RingTopology, inbox: Optional[ICooperationChannel],
                 outbox: Optional[ICooperationChannel], log: Optional[MessageLog] = None,
                 stop_event: Optional[threading.Event] = None, kernel: Optional[Kernel] = None):
        self.index = index
        self.inst = inst
        self.ges_config = ges_config
        self.ring_config = ring_config
        self.topology = topology
        self.inbox = inbox
        self.outbox = outbox
        self.log = log
        self.stop_event = stop_event or threading.Event()
        self.counters = OpCounters()
        self.kernel = kernel or RouteMinimizer(inst, ges_config, self.counters, name=f"worker-{index}")
        self.state = WorkerState(index, derive_rng(ges_config.rng_seed, index))
        self.logger = logging.getLogger(f"{__name__}.RingWorker")

    def _cooperate(self) -> bool:
        cooperate(self.state, self.inbox, self.outbox, self.topology, self.inst, self.log, self.counters)
        if self.stop_event.is_set():
            self.state.mark_finished()
        return self.state.finished

    def coop_hook(self, current: Solution) -> bool:
        return self._cooperate()

    def boundary_hook(self, best: Solution) -> Optional[Solution]:
        state = self.state
        if state.best is None:
            # the starting solution is everyone's baseline, never broadcast
            state.best = best
            state.last_sent_route_count = best.route_count
        elif best.route_count < state.best.route_count:
            state.best = best
        self._cooperate()
        received, state.pending = state.pending, None
        if received is not None and received.route_count < best.route_count:
            return received
        return None

    def run(self) -> WorkerResult:
        self.logger.info(f"Worker {self.index} started")
        result = self.kernel.solve(self.state.rng, self.coop_hook, self.boundary_hook)
        # with restore_initial_on_failure the kernel best is reported as is
        if (self.ges_config.restore_initial_on_failure or self.state.best is None
                or result.best.route_count < self.state.best.route_count):
            self.state.best = result.best
        drain_until_finished(self.state, self.inbox, self.outbox, self.topology, self.inst,
                             self.ring_config, self.log, self.counters, self.stop_event)
        self.logger.info(f"Worker {self.index} stopped with {self.state.best_route_count} routes "
                         f"({result.stop_reason}), finished in round {self.state.first_finished_round} "
                         f"of {self.state.rounds}")
        return WorkerResult(self.index, self.state.best, result, self.counters, self.state)
