"""Qubit dephasing in a bosonic bath disturbed by an auxiliary qubit.

Closed-form decoherence functions for Ohmic and Lorentzian baths, the reduced
dynamics of the system qubit, a coherence-based non-Markovianity measure and
relative-purity quantum speed limit times.
"""

from .dynamics import (
    ModelConfig,
    QubitState,
    Trajectory,
    coherence_l1,
    coherence_trajectory,
    dephasing_factor,
    dephasing_factor_rate,
    evolve_state,
)
from .nonmarkov import NonMarkovResult, measure, measure_from_trajectory, onset, sweep
from .qsl import (
    QslResult,
    closed_system_bound,
    hermitian_singular_values,
    qsl_dephasing,
    qsl_generic,
    qsl_sweep,
    relative_purity,
)
from .spectral import (
    DisturbanceConfig,
    Lorentzian,
    Ohmic,
    QuadratureError,
    g_imag_cross,
    g_real,
    oracle_quadrature,
    psi,
)

__version__ = "0.1.0"
