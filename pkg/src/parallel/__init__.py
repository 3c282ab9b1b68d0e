"""
Parallel ring cooperation
"""

from .channels import RingChannel, RingTopology
from .messages import CooperationMessage, MessageLog
from .orchestrator import ParallelRunResult, RingOrchestrator, run_parallel
from .worker import RingWorker, WorkerState, cooperate, drain_until_finished

__all__ = [
    'RingChannel', 'RingTopology', 'CooperationMessage', 'MessageLog',
    'ParallelRunResult', 'RingOrchestrator', 'run_parallel',
    'RingWorker', 'WorkerState', 'cooperate', 'drain_until_finished',
]
