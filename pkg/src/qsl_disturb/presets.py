"""Sweep recipes: named parameter sets for the standard sweeps.

The duration T_A of the auxiliary qubit's interaction is not part of the
reference parameter sets.  The values here come from
:func:`qsl_disturb.calibration.calibrate_ta` (T_A grid 0.05..5 step 0.05,
sz_a = 0.05, t_max = 20, 4000 steps), choosing per bath family the T_A that
minimises the largest onset deviation:

=============  =====  ==========================================
family         T_A    onsets at that T_A (targets)
=============  =====  ==========================================
Ohmic          0.50   eta* = 3.29, 3.95, 2.84  (3.6, 4.0, 2.8)
Lorentzian     4.65   gamma* = 6.20            (6.2)
=============  =====  ==========================================

No single T_A matches all four targets within +-0.5; the best joint choice
(T_A = 1.0) misses the Lorentzian onset by about 2.1.  Rerun
``notebooks/calibrate_ta.py`` to regenerate the table.

The QSL recipes leave the coupling open; eta = 1 is used for the Ohmic ones.
"""

from __future__ import annotations

CALIBRATED_TA_OHMIC = 0.5
CALIBRATED_TA_LORENTZIAN = 4.65

#: Keys mirror the long CLI flags.
PRESETS: dict[str, dict[str, object]] = {
    "fig2a": {"command": "nonmark", "bath": "ohmic", "s": 0.5, "sweep": "eta:0:6:0.05",
              "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig2b": {"command": "nonmark", "bath": "ohmic", "s": 1.0, "sweep": "eta:0:6:0.05",
              "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig2c": {"command": "nonmark", "bath": "ohmic", "s": 2.0, "sweep": "eta:0:6:0.05",
              "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig3a": {"command": "nonmark", "bath": "lorentzian", "delta-over-lambda": 1.0,
              "sweep": "gamma:0:10:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_LORENTZIAN, "paired": True},
    "fig3b": {"command": "nonmark", "bath": "lorentzian", "gamma": 10.0,
              "sweep": "delta_over_lambda:0:6:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_LORENTZIAN,
              "paired": True},
    "fig4a": {"command": "qsl", "bath": "ohmic", "s": 0.5, "eta": 1.0, "tau-d": 1.0,
              "sweep": "tau:0:5:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig4b": {"command": "qsl", "bath": "ohmic", "s": 1.0, "eta": 1.0, "tau-d": 1.0,
              "sweep": "tau:0:5:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig4c": {"command": "qsl", "bath": "ohmic", "s": 2.0, "eta": 1.0, "tau-d": 1.0,
              "sweep": "tau:0:5:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_OHMIC, "paired": True},
    "fig5": {"command": "qsl", "bath": "lorentzian", "gamma": 10.0, "delta-over-lambda": 1.0,
             "tau-d": 1.0, "sweep": "tau:0:5:0.05", "sz-a": 0.05, "ta": CALIBRATED_TA_LORENTZIAN,
             "paired": True},
}


def default_ta(bath_kind: str) -> float:
    return CALIBRATED_TA_OHMIC if bath_kind == "ohmic" else CALIBRATED_TA_LORENTZIAN
