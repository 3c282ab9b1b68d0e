"""
Core Interfaces for the Route Minimization System
Kernels, cooperation channels and configuration sources are swappable behind these
"""

from abc import ABC, abstractmethod
from typing import Any, Callable, List, Optional, Tuple, TYPE_CHECKING

if TYPE_CHECKING:
    import numpy as np
    from ..model.instance import Instance
    from ..model.solution import Solution
    from ..parallel.messages import CooperationMessage
    from ..profiler.counters import OpCounters


# Called after every inner iteration with the working solution; returns the finished flag
CoopHook = Callable[["Solution"], bool]


class IRouteMinimizer(ABC):
    """Interface for a single-worker fleet minimization kernel"""

    @abstractmethod
    def initial_solution(self) -> "Solution":
        """Build the starting solution for this worker"""
        pass

    @abstractmethod
    def minimize_routes_once(self, solution: "Solution", rng: "np.random.Generator",
                             coop_hook: Optional[CoopHook] = None,
                             initial: Optional["Solution"] = None) -> Tuple["Solution", bool]:
        """Run one route-elimination attempt; return (new best, success flag)"""
        pass

    @abstractmethod
    def get_counters(self) -> "OpCounters":
        """Get the operation counters this kernel writes to"""
        pass


class ICooperationChannel(ABC):
    """Interface for a point-to-point cooperation mailbox"""

    @abstractmethod
    def send(self, message: "CooperationMessage") -> None:
        """Deliver without blocking"""
        pass

    @abstractmethod
    def drain(self) -> List["CooperationMessage"]:
        """Take every pending message without waiting"""
        pass

    @abstractmethod
    def close(self) -> None:
        """Disconnect the channel"""
        pass


class IConfigurationManager(ABC):
    """Interface for configuration management"""

    @abstractmethod
    def get_config(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        pass

    @abstractmethod
    def set_config(self, key: str, value: Any) -> None:
        """Set configuration value"""
        pass

    @abstractmethod
    def reload_config(self) -> None:
        """Reload configuration from source"""
        pass
