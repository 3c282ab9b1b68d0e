"""
Operation counting, cost model and scaling analysis
"""

from .counters import OpCounters, PHASES, ejection_phase
from .cost_model import CostModelParams, dominant_term, eval_T_in_pes, eval_T_pes
from .scaling import (BoundVerdict, ScalingReport, SpeedupResult, check_pessimistic_bounds,
                      compute_speedup, fit_exponent)

__all__ = [
    'OpCounters', 'PHASES', 'ejection_phase',
    'CostModelParams', 'dominant_term', 'eval_T_in_pes', 'eval_T_pes',
    'BoundVerdict', 'ScalingReport', 'SpeedupResult', 'check_pessimistic_bounds',
    'compute_speedup', 'fit_exponent',
]
