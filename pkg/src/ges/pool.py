"""
Ejection pool and penalty counters
"""

from typing import Dict, Iterable, List


class EjectionPool:
    """LIFO stack of unserved request ids"""

    def __init__(self, requests: Iterable[int] = ()):
        self._stack: List[int] = list(requests)

    def __len__(self) -> int:
        return len(self._stack)

    def __bool__(self) -> bool:
        return bool(self._stack)

    def __contains__(self, request_id: int) -> bool:
        return request_id in self._stack

    def push(self, request_id: int) -> None:
        self._stack.append(request_id)

    def push_bottom(self, request_id: int) -> None:
        # retried only after everything ejected later
        self._stack.insert(0, request_id)

    def pop(self) -> int:
        return self._stack.pop()

    def as_list(self) -> List[int]:
        return list(self._stack)


class PenaltyCounters:
    """p[h] per request id; starts at 1 and only grows within an outer iteration"""

    def __init__(self, request_ids: Iterable[int]):
        self._p: Dict[int, int] = {rid: 1 for rid in request_ids}

    def __getitem__(self, request_id: int) -> int:
        return self._p[request_id]

    def increment(self, request_id: int) -> int:
        self._p[request_id] += 1
        return self._p[request_id]

    def p_sum(self, request_ids: Iterable[int]) -> int:
        return sum(self._p[rid] for rid in request_ids)

    def as_dict(self) -> Dict[int, int]:
        return dict(self._p)
