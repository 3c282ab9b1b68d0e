"""
Scaling Analysis
Log-log exponent fits, pessimistic bound shape checks, speedup/cost metrics
and the CSV scaling report
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from .counters import INSERTION, SQUEEZE, PERTURB, COOP, EJECTION

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["phase", "n", "p", "repetition", "tally", "wall_seconds"]
PER_CALL = ".per_call_max"
MIN_FIT_SIZES = 3


def fit_exponent(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """
    Least-squares slope of log(tally) against log(n).

    Returns:
        (exponent, residual) where residual is the RMS of the log-space errors
    """
    if len(points) < MIN_FIT_SIZES:
        raise ValueError(f"Exponent fitting needs at least {MIN_FIT_SIZES} points, got {len(points)}")
    sizes = np.array([p[0] for p in points], dtype=float)
    tallies = np.array([p[1] for p in points], dtype=float)
    if np.any(sizes <= 0) or np.any(tallies <= 0):
        raise ValueError("Sizes and tallies must be positive for a log-log fit")
    if len(np.unique(sizes)) < 2:
        raise ValueError("Exponent fitting needs at least two distinct sizes")
    log_n = np.log(sizes)
    log_t = np.log(tallies)
    fit = stats.linregress(log_n, log_t)
    errors = log_t - (fit.slope * log_n + fit.intercept)
    residual = float(np.sqrt(np.mean(errors ** 2)))
    return float(fit.slope), residual


def _ejection_degree(phase: str) -> Optional[int]:
    base = phase[:-len(PER_CALL)] if phase.endswith(PER_CALL) else phase
    prefix = EJECTION + "_k"
    return int(base[len(prefix):]) if base.startswith(prefix) else None


def pessimistic_bound(phase: str) -> Optional[Tuple[str, Callable[[float, float], float]]]:
    """Bound label and bound(n, p) for a per-call phase, None when unbounded here"""
    base = phase[:-len(PER_CALL)] if phase.endswith(PER_CALL) else phase
    if base == INSERTION:
        return "n^2", lambda n, p: n ** 2
    if base in (SQUEEZE, PERTURB):
        return "n^4", lambda n, p: n ** 4
    if base == COOP:
        return "p*n", lambda n, p: p * n
    k = _ejection_degree(phase)
    if k is not None:
        return f"n^{k + 2}", lambda n, p, k=k: n ** (k + 2)
    return None


@dataclass
class BoundVerdict:
    phase: str
    bound: str
    constant: float
    worst_ratio: float
    passed: bool
    sizes: List[int] = field(default_factory=list)


def check_pessimistic_bounds(measurements: Union["ScalingReport", pd.DataFrame],
                             slack: float = 2.0) -> Dict[str, BoundVerdict]:
    """
    For each per-call phase, calibrate c = max tally/bound at the smallest n and
    require tally <= slack * c * bound at every larger n.
    """
    df = measurements.rows if isinstance(measurements, ScalingReport) else measurements
    verdicts = {}
    for phase, group in df.groupby("phase", sort=True):
        bounded = pessimistic_bound(phase) if phase.endswith(PER_CALL) else None
        if bounded is None:
            continue
        label, bound = bounded
        sizes = sorted(group["n"].unique())
        if len(sizes) < 2:
            logger.warning(f"Bound check for {phase} needs at least two sizes")
            continue
        ratios = group.apply(lambda row: row["tally"] / bound(row["n"], row["p"]), axis=1)
        smallest = group["n"] == sizes[0]
        constant = float(ratios[smallest].max())
        larger = ratios[~smallest]
        if constant <= 0:
            worst = math.inf if (larger > 0).any() else 0.0
        else:
            worst = float(larger.max() / constant)
        verdicts[phase] = BoundVerdict(phase, label, constant, worst, worst <= slack,
                                       [int(n) for n in sizes])
    return verdicts


@dataclass(frozen=True)
class SpeedupResult:
    p: int
    speedup: float
    cost: float
    superlinear: bool


def compute_speedup(t_sequential: float, t_parallel: float, p: int) -> SpeedupResult:
    """S = t_seq / t_par and C = p * t_par"""
    if t_sequential <= 0 or t_parallel <= 0:
        raise ValueError(f"Times must be positive, got {t_sequential} and {t_parallel}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    speedup = t_sequential / t_parallel
    return SpeedupResult(p, speedup, p * t_parallel, speedup > p)


class ScalingReport:
    """
    Measurement rows plus everything derived from them: fitted exponents,
    bound verdicts and the speedup/cost table.
    """

    def __init__(self, rows: pd.DataFrame):
        self.rows = rows[REPORT_COLUMNS].reset_index(drop=True)
        self.exponents: Dict[str, Tuple[float, float]] = {}
        self.verdicts: Dict[str, BoundVerdict] = {}
        self.speedups = pd.DataFrame(columns=["n", "p", "t_parallel", "speedup", "cost", "superlinear"])
        self.notes: List[str] = []

    @classmethod
    def from_measurements(cls, rows: Iterable[dict], slack: float = 2.0) -> "ScalingReport":
        report = cls(pd.DataFrame(list(rows), columns=REPORT_COLUMNS))
        report.fit_all()
        report.verdicts = check_pessimistic_bounds(report.rows, slack) if report.size_count() >= 2 else {}
        if report.size_count() < 2:
            report.notes.append("bound checks skipped: fewer than 2 sizes")
        return report

    def size_count(self) -> int:
        return int(self.rows["n"].nunique()) if not self.rows.empty else 0

    def mean_tallies(self, p: Optional[int] = None) -> pd.DataFrame:
        """Mean tally per (phase, n) at one worker count (the smallest by default)"""
        if self.rows.empty:
            return pd.DataFrame(columns=["phase", "n", "tally"])
        base_p = p if p is not None else int(self.rows["p"].min())
        subset = self.rows[self.rows["p"] == base_p]
        return subset.groupby(["phase", "n"], as_index=False)["tally"].mean()

    def fit_all(self) -> None:
        if self.size_count() < MIN_FIT_SIZES:
            message = f"exponents not fitted: {self.size_count()} sizes measured, {MIN_FIT_SIZES} needed"
            logger.warning(message)
            self.notes.append(message)
            return
        for phase, group in self.mean_tallies().groupby("phase"):
            points = [(n, t) for n, t in zip(group["n"], group["tally"]) if t > 0]
            if len(points) < MIN_FIT_SIZES:
                continue
            self.exponents[phase] = fit_exponent(points)

    def add_speedups(self, n: int, t_sequential: float, parallel_times: Dict[int, float]) -> None:
        records = []
        for p, t_par in sorted(parallel_times.items()):
            result = compute_speedup(t_sequential, t_par, p)
            records.append({"n": n, "p": p, "t_parallel": t_par, "speedup": result.speedup,
                            "cost": result.cost, "superlinear": result.superlinear})
        frame = pd.DataFrame(records)
        self.speedups = frame if self.speedups.empty else pd.concat([self.speedups, frame], ignore_index=True)

    def summary_lines(self) -> List[str]:
        lines = []
        for phase, (exponent, residual) in sorted(self.exponents.items()):
            lines.append(f"exponent phase={phase} value={exponent:.3f} residual={residual:.3g}")
        for phase, verdict in sorted(self.verdicts.items()):
            status = "pass" if verdict.passed else "fail"
            lines.append(f"bound phase={phase} bound={verdict.bound} c={verdict.constant:.4g} "
                         f"worst_ratio={verdict.worst_ratio:.3f} verdict={status}")
        for row in self.speedups.itertuples(index=False):
            lines.append(f"speedup n={row.n} p={row.p} S={row.speedup:.3f} C={row.cost:.3f} "
                         f"superlinear={row.superlinear}")
        lines.extend(f"note {note}" for note in self.notes)
        # eval_T_in_pes keeps the factor p on the ejection term; the measured bound is per worker
        lines.append("model ejection_term=p*n^(k_max+2) per_worker_bound=n^(k+2)")
        return lines

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Measurement rows followed by the summary block as `#` lines"""
        path = Path(path)
        self.rows.to_csv(path, index=False)
        with open(path, "a") as f:
            for line in self.summary_lines():
                f.write(f"# {line}\n")
        logger.info(f"Scaling report saved to {path}")
        return path

    def plot(self, path: Union[str, Path]) -> Path:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        path = Path(path)
        means = self.mean_tallies()
        fig, ax = plt.subplots(figsize=(8, 6))
        for phase, group in means.groupby("phase"):
            if phase.endswith(PER_CALL) or (group["tally"] <= 0).all():
                continue
            label = phase
            if phase in self.exponents:
                label += f" (n^{self.exponents[phase][0]:.2f})"
            ax.loglog(group["n"], group["tally"].clip(lower=1), marker="o", label=label)
        ax.set_xlabel("n (requests)")
        ax.set_ylabel("operations per run")
        ax.legend(fontsize="small")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        logger.info(f"Scaling plot saved to {path}")
        return path
