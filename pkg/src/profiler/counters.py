"""
Operation Counters
Per-phase elementary-operation tallies collected by each worker
"""

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator

INSERTION = "insertion_tests"
SQUEEZE = "squeeze_move_evals"
EJECTION = "ejection_steps"
PERTURB = "perturb_move_evals"
COOP = "coop_payload_units"

PHASES = (INSERTION, SQUEEZE, EJECTION, PERTURB, COOP)


def ejection_phase(k: int) -> str:
    return f"{EJECTION}_k{k}"


@dataclass
class OpCounters:
    """
    Run totals per phase plus, for every tracked call, the number of calls and
    the largest single-call tally. Bound checks use the per-call maxima.
    """
    insertion_tests: int = 0
    squeeze_move_evals: int = 0
    ejection_steps: Dict[int, int] = field(default_factory=dict)
    perturb_move_evals: int = 0
    coop_payload_units: int = 0
    coop_rounds: int = 0
    z1_observed: int = 0
    z2_observed: int = 0
    calls: Dict[str, int] = field(default_factory=dict)
    per_call_max: Dict[str, int] = field(default_factory=dict)

    def add(self, phase: str, amount: int = 1) -> None:
        if phase == EJECTION or amount < 0:
            raise ValueError(f"Use add_ejection for {EJECTION}; amounts must be nonnegative")
        setattr(self, phase, getattr(self, phase) + amount)

    def add_ejection(self, k: int, amount: int = 1) -> None:
        self.ejection_steps[k] = self.ejection_steps.get(k, 0) + amount

    def tally(self, phase: str) -> int:
        """Run total for a phase name, including `ejection_steps_k<k>` names"""
        if phase == EJECTION:
            return sum(self.ejection_steps.values())
        if phase.startswith(EJECTION + "_k"):
            return self.ejection_steps.get(int(phase[len(EJECTION) + 2:]), 0)
        return getattr(self, phase)

    @contextmanager
    def track(self, phase: str) -> Iterator["OpCounters"]:
        """Record the tally accumulated inside the block as one call of `phase`"""
        before = self.tally(phase)
        try:
            yield self
        finally:
            used = self.tally(phase) - before
            self.calls[phase] = self.calls.get(phase, 0) + 1
            if used > self.per_call_max.get(phase, 0):
                self.per_call_max[phase] = used
            elif phase not in self.per_call_max:
                self.per_call_max[phase] = used

    def merge(self, other: "OpCounters") -> "OpCounters":
        """Sum totals and call counts, keep the larger per-call maximum"""
        self.insertion_tests += other.insertion_tests
        self.squeeze_move_evals += other.squeeze_move_evals
        for k, value in other.ejection_steps.items():
            self.add_ejection(k, value)
        self.perturb_move_evals += other.perturb_move_evals
        self.coop_payload_units += other.coop_payload_units
        self.coop_rounds += other.coop_rounds
        self.z1_observed += other.z1_observed
        self.z2_observed += other.z2_observed
        for phase, count in other.calls.items():
            self.calls[phase] = self.calls.get(phase, 0) + count
        for phase, value in other.per_call_max.items():
            self.per_call_max[phase] = max(self.per_call_max.get(phase, 0), value)
        return self

    def reset(self) -> None:
        fresh = OpCounters()
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(fresh, name))

    def snapshot(self) -> Dict[str, int]:
        """Flat copy of every tally, keyed by phase name"""
        snap = {phase: self.tally(phase) for phase in PHASES}
        for k in sorted(self.ejection_steps):
            snap[ejection_phase(k)] = self.ejection_steps[k]
        snap["coop_rounds"] = self.coop_rounds
        snap["z1_observed"] = self.z1_observed
        snap["z2_observed"] = self.z2_observed
        for phase, value in self.per_call_max.items():
            snap[f"{phase}.per_call_max"] = value
        return snap
