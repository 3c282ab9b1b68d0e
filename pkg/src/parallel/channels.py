"""
Ring topology and bounded point-to-point channels
"""

import threading
from collections import deque
from dataclasses import dataclass
from typing import List

from ..core.exceptions import ContractViolationError, OrchestrationError
from ..core.interfaces import ICooperationChannel
from .messages import CooperationMessage


@dataclass(frozen=True)
class RingTopology:
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ContractViolationError(f"A ring needs at least one worker, got {self.p}")

    def next(self, i: int) -> int:
        return (i + 1) % self.p

    def prev(self, i: int) -> int:
        return (i - 1 + self.p) % self.p


class RingChannel(ICooperationChannel):
    """Non-blocking mailbox; when full, the oldest message is overwritten"""

    def __init__(self, capacity: int = 4):
        if capacity < 1:
            raise ContractViolationError(f"Channel capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._queue: deque = deque(maxlen=capacity)
        self._lock = threading.Lock()
        self._closed = False
        self.overwritten = 0

    def send(self, message: CooperationMessage) -> None:
        with self._lock:
            if self._closed:
                raise OrchestrationError("Send on a closed cooperation channel")
            if len(self._queue) == self.capacity:
                self.overwritten += 1
            self._queue.append(message)

    def drain(self) -> List[CooperationMessage]:
        with self._lock:
            if self._closed:
                raise OrchestrationError("Receive on a closed cooperation channel")
            messages = list(self._queue)
            self._queue.clear()
        return messages

    def close(self) -> None:
        with self._lock:
            self._closed = True
            self._queue.clear()

    @property
    def closed(self) -> bool:
        return self._closed
