"""
Ring Orchestrator
Launches p workers on threads, wires the ring and returns the best solution
"""

import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, asdict, field
from typing import Callable, Dict, List, Optional

from ..config.configuration_manager import GesConfig, RingConfig
from ..core.base_classes import BaseComponent
from ..core.exceptions import OrchestrationError, UnsolvableInstanceError, WatchdogTimeoutError
from ..model.instance import Instance
from ..model.solution import Solution
from ..profiler.counters import OpCounters
from .channels import RingChannel, RingTopology
from .messages import MessageLog
from .worker import Kernel, RingWorker, WorkerResult

# Builds the kernel for worker i; tests plug scripted kernels in here
KernelFactory = Callable[[int, OpCounters], Kernel]


@dataclass
class ParallelRunResult:
    best: Solution
    best_worker: int
    worker_route_counts: Dict[int, int]
    counters: OpCounters
    wall_seconds: float
    message_log: MessageLog
    workers: List[WorkerResult] = field(default_factory=list, repr=False)

    @property
    def route_count(self) -> int:
        return self.best.route_count


class RingOrchestrator(BaseComponent):
    """Runs the ring to completion; any worker failure aborts the whole run"""

    def __init__(self, inst: Instance, ges_config: Optional[GesConfig] = None,
                 ring_config: Optional[RingConfig] = None,
                 stop_event: Optional[threading.Event] = None,
                 kernel_factory: Optional[KernelFactory] = None):
        self.ges_config = ges_config or GesConfig()
        self.ring_config = ring_config or RingConfig()
        super().__init__("RingOrchestrator", asdict(self.ring_config))
        self.inst = inst
        self.stop_event = stop_event or threading.Event()
        self.kernel_factory = kernel_factory

    def _build_workers(self, log: MessageLog) -> List[RingWorker]:
        p = self.get_config('workers', 1)
        topology = RingTopology(p)
        # channels[i] carries messages from worker i to next(i)
        channels = [RingChannel(self.get_config('channel_capacity', 4)) for _ in range(p)] if p > 1 else [None]
        workers = []
        for i in range(p):
            worker = RingWorker(i, self.inst, self.ges_config, self.ring_config, topology,
                                inbox=channels[topology.prev(i)], outbox=channels[i],
                                log=log, stop_event=self.stop_event)
            if self.kernel_factory is not None:
                worker.kernel = self.kernel_factory(i, worker.counters)
            workers.append(worker)
        self._channels = channels
        return workers

    def run(self) -> ParallelRunResult:
        self.initialize()
        started = time.monotonic()
        log = MessageLog(self.get_config('message_log'))
        workers = self._build_workers(log)
        p = len(workers)
        self.logger.info(f"Starting ring of {p} workers on {self.inst.name} (n={self.inst.n})")

        results: List[WorkerResult] = []
        errors: List[BaseException] = []
        try:
            with ThreadPoolExecutor(max_workers=p, thread_name_prefix="ges-worker") as pool:
                futures = {pool.submit(w.run): w.index for w in workers}
                for future in as_completed(futures):
                    try:
                        results.append(future.result())
                    except Exception as e:
                        self.logger.error(f"Worker {futures[future]} failed: {e}")
                        errors.append(e)
                        self.stop_event.set()
        finally:
            for channel in self._channels:
                if channel is not None:
                    channel.close()
            log.close()

        if errors:
            # watchdog and unsolvable errors keep their type for the exit code mapping
            passthrough = [e for e in errors if isinstance(e, (WatchdogTimeoutError, UnsolvableInstanceError))]
            if passthrough:
                raise passthrough[0]
            raise OrchestrationError(f"{len(errors)} worker(s) failed: {errors[0]}") from errors[0]

        results.sort(key=lambda r: r.index)
        candidates = [r for r in results if r.best is not None]
        if not candidates:
            raise OrchestrationError("No worker produced a solution")
        winner = min(candidates, key=lambda r: (r.best.route_count, r.index))

        merged = OpCounters()
        for r in results:
            merged.merge(r.counters)
        elapsed = time.monotonic() - started
        self.logger.info(f"Ring finished: {winner.best.route_count} routes from worker {winner.index} "
                         f"in {elapsed:.2f}s")
        return ParallelRunResult(winner.best, winner.index,
                                 {r.index: r.best.route_count for r in candidates},
                                 merged, elapsed, log, results)


def run_parallel(inst: Instance, config: Optional[GesConfig] = None, p: int = 4,
                 ring_config: Optional[RingConfig] = None) -> Solution:
    """Best solution over p cooperating workers"""
    ring = ring_config or RingConfig()
    if ring.workers != p:
        ring = RingConfig(**{**asdict(ring), 'workers': p})
    return RingOrchestrator(inst, config, ring).run().best
