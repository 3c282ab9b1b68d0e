"""
Cooperation messages and the message log

Wire record: 4-byte big-endian length, then sender (4 bytes), route_count
(4 bytes), finished (1 byte), payload flag (1 byte) and the payload as
solution-file body text.
"""

import logging
import struct
import threading
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from ..core.exceptions import OrchestrationError
from ..data.instance_io import SolutionFile, parse_solution_body

logger = logging.getLogger(__name__)

_HEADER = struct.Struct(">IIBB")
_LENGTH = struct.Struct(">I")

Routes = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class CooperationMessage:
    sender: int
    route_count: int
    finished: bool
    routes: Optional[Routes] = None

    @property
    def has_payload(self) -> bool:
        return self.routes is not None

    @property
    def payload_units(self) -> int:
        """Point ids carried; the O(n) message size"""
        return sum(len(r) for r in self.routes) if self.routes is not None else 0

    def encode(self) -> bytes:
        body = b""
        if self.routes is not None:
            text = SolutionFile("", len(self.routes), [list(r) for r in self.routes]).body()
            body = text.encode("utf-8")
        record = _HEADER.pack(self.sender, self.route_count, int(self.finished),
                              int(self.routes is not None)) + body
        return _LENGTH.pack(len(record)) + record

    @classmethod
    def decode(cls, data: bytes) -> "CooperationMessage":
        if len(data) < _LENGTH.size + _HEADER.size:
            raise OrchestrationError(f"Truncated cooperation message of {len(data)} bytes")
        (length,) = _LENGTH.unpack_from(data)
        if length != len(data) - _LENGTH.size:
            raise OrchestrationError(f"Message length prefix {length} does not match {len(data) - 4} bytes")
        sender, route_count, finished, flag = _HEADER.unpack_from(data, _LENGTH.size)
        routes = None
        if flag:
            body = data[_LENGTH.size + _HEADER.size:].decode("utf-8")
            routes = tuple(tuple(r) for r in parse_solution_body(body).routes)
        return cls(sender, route_count, bool(finished), routes)


class MessageLog:
    """
    One record per sent message, kept in memory and optionally written as
    timestamped lines through a dedicated logger.
    """

    def __init__(self, path: Optional[str] = None):
        self.records: List[Dict[str, Any]] = []
        self._lock = threading.Lock()
        self._logger = logging.getLogger(f"{__name__}.log")
        self._handler: Optional[logging.Handler] = None
        if path:
            self._handler = logging.FileHandler(path, mode="w")
            self._handler.setFormatter(logging.Formatter("%(asctime)s %(message)s"))
            self._logger.addHandler(self._handler)
            self._logger.setLevel(logging.INFO)

    def record(self, message: CooperationMessage, receiver: int,
               previous_sent: Optional[int]) -> None:
        entry = {
            "time": time.time(),
            "sender": message.sender,
            "receiver": receiver,
            "route_count": message.route_count,
            "previous_sent": previous_sent,
            "finished": message.finished,
            "payload": message.has_payload,
            "payload_units": message.payload_units,
        }
        with self._lock:
            self.records.append(entry)
        self._logger.info(" ".join(f"{k}={v}" for k, v in entry.items() if k != "time"))

    def send_discipline_violations(self) -> List[Dict[str, Any]]:
        """Payload messages whose route count did not drop below the sender's previous send"""
        return [r for r in self.records
                if r["payload"] and r["previous_sent"] is not None
                and r["route_count"] >= r["previous_sent"]]

    def close(self) -> None:
        if self._handler is not None:
            self._logger.removeHandler(self._handler)
            self._handler.close()
            self._handler = None
