"""Search for the auxiliary interaction time T_A that reproduces target onsets.

The onset of disturbance-induced non-Markovianity depends on how long qubit A
interacted with the bath, and that duration is a free parameter of the model.
:func:`calibrate_ta` scans candidate durations, locates the onset coupling for
each target scenario by bisection, and reports which durations reproduce all
targets within a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import ModelConfig
from .nonmarkov import DEFAULT_N_STEPS, DEFAULT_T_MAX, EPS_ONSET, measure, with_axis
from .spectral import DisturbanceConfig, Lorentzian, Ohmic

SZ_A = 0.05


@dataclass(frozen=True)
class OnsetTarget:
    name: str
    template: ModelConfig
    axis: str
    target: float
    upper: float


def default_targets() -> list[OnsetTarget]:
    """Reference onset couplings for sz_a = 0.05, one per bath scenario."""
    return [
        OnsetTarget("ohmic s=0.5", ModelConfig(Ohmic(0.0, 0.5)), "eta", 3.6, 6.0),
        OnsetTarget("ohmic s=1", ModelConfig(Ohmic(0.0, 1.0)), "eta", 4.0, 6.0),
        OnsetTarget("ohmic s=2", ModelConfig(Ohmic(0.0, 2.0)), "eta", 2.8, 6.0),
        OnsetTarget("lorentzian d/l=1", ModelConfig(Lorentzian(0.0, 1.0, 1.0)), "gamma", 6.2, 20.0),
    ]


def onset_by_bisection(
    is_nonmarkovian: Callable[[float], bool], upper: float, lower: float = 0.0, resolution: float = 1e-3
) -> float | None:
    """Smallest coupling in [lower, upper] that turns the dynamics non-Markovian.

    Assumes a single onset in the bracket; returns None when even ``upper``
    stays Markovian.
    """
    if not is_nonmarkovian(upper):
        return None
    if is_nonmarkovian(lower):
        return lower
    lo, hi = lower, upper
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if is_nonmarkovian(mid):
            hi = mid
        else:
            lo = mid
    return hi


def target_onset(
    target: OnsetTarget,
    t_a: float,
    sz_a: float = SZ_A,
    t_max: float = DEFAULT_T_MAX,
    n_steps: int = DEFAULT_N_STEPS,
    resolution: float = 1e-3,
) -> float | None:
    base = ModelConfig(target.template.bath, DisturbanceConfig(True, t_a, sz_a), target.template.omega_s)

    def hit(value: float) -> bool:
        return measure(with_axis(base, target.axis, value), t_max, n_steps).n_value > EPS_ONSET

    return onset_by_bisection(hit, target.upper, resolution=resolution)


@dataclass(frozen=True)
class CalibrationResult:
    ta_values: np.ndarray
    onsets: np.ndarray  # shape (len(ta_values), len(targets)); nan = no onset
    targets: tuple[OnsetTarget, ...]
    tolerance: float

    def deviations(self) -> np.ndarray:
        goal = np.array([t.target for t in self.targets])
        return np.abs(self.onsets - goal)

    def worst(self, columns: Sequence[int] | None = None) -> np.ndarray:
        dev = self.deviations()
        if columns is not None:
            dev = dev[:, list(columns)]
        # a missing onset disqualifies the row
        return np.where(np.isnan(dev).any(axis=1), np.inf, np.nan_to_num(dev, nan=0.0).max(axis=1))

    def best(self, columns: Sequence[int] | None = None) -> tuple[float, float]:
        """(T_A, worst deviation) minimising the largest deviation over ``columns``."""
        w = self.worst(columns)
        k = int(np.argmin(w))
        return float(self.ta_values[k]), float(w[k])

    def success(self, columns: Sequence[int] | None = None) -> bool:
        return self.best(columns)[1] <= self.tolerance

    def summary(self) -> str:
        lines = ["t_a  " + "  ".join(f"{t.name:>18s}" for t in self.targets)]
        for ta, row in zip(self.ta_values, self.onsets):
            cells = "  ".join(f"{'-' if np.isnan(v) else f'{v:.3f}':>18s}" for v in row)
            lines.append(f"{ta:4.2f} {cells}")
        return "\n".join(lines)


def calibrate_ta(
    ta_values: Sequence[float] = tuple(np.round(np.arange(0.05, 5.0001, 0.05), 10)),
    targets: Sequence[OnsetTarget] | None = None,
    tolerance: float = 0.5,
    sz_a: float = SZ_A,
    t_max: float = DEFAULT_T_MAX,
    n_steps: int = DEFAULT_N_STEPS,
    resolution: float = 1e-2,
) -> CalibrationResult:
    targets = tuple(targets if targets is not None else default_targets())
    ta_values = np.asarray(ta_values, dtype=float)
    onsets = np.full((len(ta_values), len(targets)), np.nan)
    for i, ta in enumerate(ta_values):
        for j, tgt in enumerate(targets):
            v = target_onset(tgt, ta, sz_a, t_max, n_steps, resolution)
            if v is not None:
                onsets[i, j] = v
    return CalibrationResult(ta_values, onsets, targets, tolerance)
