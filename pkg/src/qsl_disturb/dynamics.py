"""Reduced dynamics of the system qubit S in a bath disturbed by qubit A.

The channel is pure dephasing: populations are frozen and the coherence is
multiplied by

    f(t) = [cos G_I(t) - i <sz_a> sin G_I(t)] exp(i omega_s t - G_R(t))

where ``t`` is the time elapsed since S started interacting with the bath.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO, Union

import numpy as np

from .spectral import (
    ArrayLike,
    DisturbanceConfig,
    SpectralDensity,
    _check_times,
    _out,
    g_imag_cross,
    g_imag_cross_rate,
    g_real_rate,
)

TRAJECTORY_COLUMNS = ("t", "re_f", "im_f", "abs_f", "g_r", "g_i", "c_l1")


def fmt(x: float) -> str:
    """Round-trippable float formatting used by every CSV writer."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class QubitState:
    """Qubit density matrix in the {|e>, |g>} basis, stored as (rho_ee, rho_eg)."""

    rho_ee: float
    rho_eg: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "rho_ee", float(self.rho_ee))
        object.__setattr__(self, "rho_eg", complex(self.rho_eg))
        if not 0.0 <= self.rho_ee <= 1.0:
            raise ValueError(f"rho_ee must lie in [0, 1], got {self.rho_ee}")
        if abs(self.rho_eg) ** 2 > self.rho_ee * (1.0 - self.rho_ee) + 1e-12:
            raise ValueError("state is not positive: |rho_eg|^2 > rho_ee rho_gg")

    @classmethod
    def from_bloch(cls, r1: float, r2: float, r3: float) -> "QubitState":
        """``rho = (I + r.sigma)/2`` with |e> the +1 eigenstate of sigma_z."""
        if r1 * r1 + r2 * r2 + r3 * r3 > 1.0 + 1e-12:
            raise ValueError("Bloch vector longer than 1")
        return cls(rho_ee=min(max(0.5 * (1.0 + r3), 0.0), 1.0), rho_eg=0.5 * complex(r1, -r2))

    @classmethod
    def maximally_coherent(cls, phase: float = np.pi / 4) -> "QubitState":
        """Equatorial pure state; the default phase gives r1 = r2 = 1/sqrt(2)."""
        return cls.from_bloch(np.cos(phase), np.sin(phase), 0.0)

    @property
    def rho_gg(self) -> float:
        return 1.0 - self.rho_ee

    @property
    def bloch(self) -> tuple[float, float, float]:
        return (2 * self.rho_eg.real, -2 * self.rho_eg.imag, 2 * self.rho_ee - 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.rho_ee, self.rho_eg], [np.conj(self.rho_eg), self.rho_gg]], dtype=complex
        )

    def purity(self) -> float:
        return self.rho_ee**2 + self.rho_gg**2 + 2 * abs(self.rho_eg) ** 2


@dataclass(frozen=True)
class ModelConfig:
    bath: SpectralDensity
    dist: DisturbanceConfig = field(default_factory=DisturbanceConfig)
    # interaction picture by default; the free phase never changes |f|
    omega_s: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.omega_s) and self.omega_s >= 0):
            raise ValueError(f"omega_s must be >= 0, got {self.omega_s}")

    def undisturbed(self) -> "ModelConfig":
        return ModelConfig(self.bath, DisturbanceConfig(), self.omega_s)


def dephasing_factor(cfg: ModelConfig, t: ArrayLike) -> ArrayLike:
    """Coherence multiplier f(t) of the system qubit; f(0) = 1."""
    tt = _check_times(t)
    g_r = np.asarray(cfg.bath.g_real(tt))
    phase = np.exp(1j * cfg.omega_s * tt - g_r)
    if not cfg.dist.active:
        return _out(phase.astype(complex), t)
    g_i = np.asarray(g_imag_cross(cfg.bath, cfg.dist, tt))
    f = (np.cos(g_i) - 1j * cfg.dist.sz_a * np.sin(g_i)) * phase
    return _out(f, t)


def dephasing_factor_rate(cfg: ModelConfig, t: ArrayLike) -> ArrayLike:
    """Analytic time derivative of :func:`dephasing_factor`."""
    tt = _check_times(t)
    g_r = np.asarray(cfg.bath.g_real(tt))
    g_r_dot = np.asarray(g_real_rate(cfg.bath, tt))
    phase = np.exp(1j * cfg.omega_s * tt - g_r)
    if cfg.dist.active:
        sz = cfg.dist.sz_a
        g_i = np.asarray(g_imag_cross(cfg.bath, cfg.dist, tt))
        g_i_dot = np.asarray(g_imag_cross_rate(cfg.bath, cfg.dist, tt))
        amp = np.cos(g_i) - 1j * sz * np.sin(g_i)
        amp_dot = (-np.sin(g_i) - 1j * sz * np.cos(g_i)) * g_i_dot
    else:
        amp, amp_dot = 1.0, 0.0
    fdot = (amp_dot + amp * (1j * cfg.omega_s - g_r_dot)) * phase
    return _out(np.asarray(fdot, dtype=complex), t)


def evolve_state(cfg: ModelConfig, initial: QubitState, t: float) -> QubitState:
    f = dephasing_factor(cfg, float(t))
    return QubitState(initial.rho_ee, initial.rho_eg * f)


def coherence_l1(state: QubitState) -> float:
    """l1-norm of coherence, the sum of |off-diagonal| entries (= 2|rho_eg|)."""
    return 2.0 * abs(state.rho_eg)


def time_grid(t_max: float, n_steps: int) -> np.ndarray:
    if n_steps < 2:
        raise ValueError(f"n_steps must be >= 2, got {n_steps}")
    if not (np.isfinite(t_max) and t_max > 0):
        raise ValueError(f"t_max must be > 0, got {t_max}")
    return np.linspace(0.0, t_max, n_steps + 1)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of f, G_R, G_I and the l1 coherence on a uniform time grid."""

    t: np.ndarray
    f: np.ndarray
    g_r: np.ndarray
    g_i: np.ndarray
    c_l1: np.ndarray

    def __post_init__(self):
        n = len(self.t)
        if any(len(a) != n for a in (self.f, self.g_r, self.g_i, self.c_l1)):
            raise ValueError("trajectory arrays must have equal length")
        if n >= 2:
            dt = np.diff(self.t)
            if np.any(dt <= 0):
                raise ValueError("time grid must be strictly increasing")
            if not np.allclose(dt, dt[0], rtol=1e-9, atol=0):
                raise ValueError("time grid must be uniform")
        for a in (self.t, self.f, self.g_r, self.g_i, self.c_l1):
            a.setflags(write=False)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def rows(self):
        for k in range(len(self.t)):
            fk = self.f[k]
            yield (self.t[k], fk.real, fk.imag, abs(fk), self.g_r[k], self.g_i[k], self.c_l1[k])

    def write_csv(self, fh: TextIO) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for row in self.rows():
            w.writerow([fmt(v) for v in row])

    def to_csv(self, path: Union[str, Path]) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            self.write_csv(fh)


def read_trajectory_csv(path: Union[str, Path]) -> Trajectory:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(h.strip() for h in header) != TRAJECTORY_COLUMNS:
            raise ValueError(f"unexpected trajectory header {header}")
        data = np.array([[float(v) for v in row] for row in reader])
    return Trajectory(
        t=data[:, 0], f=data[:, 1] + 1j * data[:, 2], g_r=data[:, 4], g_i=data[:, 5], c_l1=data[:, 6]
    )


def coherence_trajectory(
    cfg: ModelConfig, initial: QubitState, t_max: float, n_steps: int
) -> Trajectory:
    t = time_grid(t_max, n_steps)
    f = np.asarray(dephasing_factor(cfg, t))
    g_r = np.asarray(cfg.bath.g_real(t))
    g_i = np.asarray(g_imag_cross(cfg.bath, cfg.dist, t))
    c_l1 = coherence_l1(initial) * np.abs(f)
    return Trajectory(t=t, f=f, g_r=g_r, g_i=g_i, c_l1=c_l1)
