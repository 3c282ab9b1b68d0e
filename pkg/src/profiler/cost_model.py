"""
Pessimistic cost model of the parallel search
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CostModelParams:
    s1: float = 1.0
    s2: float = 1.0
    s3: float = 1.0
    s4: float = 1.0
    s5: float = 1.0
    s6: float = 1.0
    s7: float = 1.0
    z1: int = 1
    z2: int = 1
    k_max: int = 3
    I: int = 100
    p: int = 1
    n: int = 100

    def __post_init__(self):
        for name in ("s1", "s2", "s3", "s4", "s5", "s6", "s7"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")
        for name in ("z1", "z2", "I", "n"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.k_max < 1 or self.p < 1:
            raise ValueError(f"k_max and p must be >= 1, got {self.k_max} and {self.p}")


def eval_T_in_pes(params: CostModelParams) -> float:
    """Cost of one inner iteration: squeeze/perturb, ejection and cooperation terms"""
    n, p = params.n, params.p
    return params.s5 * n ** 4 + params.s6 * p * n ** (params.k_max + 2) + params.s7 * p * n


def eval_T_pes(params: CostModelParams) -> float:
    """Total pessimistic cost over z1 outer and z2 inner iterations"""
    n, p = params.n, params.p
    inner = eval_T_in_pes(params)
    return (params.s1 * n
            + params.z1 * (params.s2 * n + params.z2 * inner + params.s3 * n)
            + params.s4 * p * n)


def dominant_term(params: CostModelParams) -> float:
    """n^(k_max+2) + p*n, the asymptotic order of eval_T_pes"""
    return params.n ** (params.k_max + 2) + params.p * params.n
