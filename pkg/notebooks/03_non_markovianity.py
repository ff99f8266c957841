# %% [markdown]
# # Disturbance-induced non-Markovianity
#
# N is the total increase of the l1 coherence over the run.  Without the
# auxiliary qubit the Ohmic bath is Markovian for s <= 2 and becomes
# non-Markovian for s > 2.

# %%
import numpy as np

from qsl_disturb import DisturbanceConfig, Lorentzian, ModelConfig, Ohmic, measure, onset, sweep
from qsl_disturb.presets import CALIBRATED_TA_LORENTZIAN, CALIBRATED_TA_OHMIC

for s in (0.5, 1.0, 2.0, 3.0):
    print(f"s={s}: N = {measure(ModelConfig(Ohmic(1.0, s))).n_value:.4g}")

# %% [markdown]
# With <sz_a> = 0.05 the coupling strength at which N first becomes positive
# is finite for every s.  The undisturbed sweep stays at zero.

# %%
etas = np.round(np.arange(0, 6.0001, 0.05), 10)
for s in (0.5, 1.0, 2.0):
    cfg = ModelConfig(Ohmic(0.0, s), DisturbanceConfig(True, CALIBRATED_TA_OHMIC, 0.05))
    res = sweep(cfg, "eta", etas, jobs=4)
    ref = sweep(cfg.undisturbed(), "eta", etas, jobs=4)
    print(f"s={s}: onset eta* = {onset(res)}, undisturbed max N = {max(r.n_value for _, r in ref):.1e}")

# %% [markdown]
# ## Lorentzian bath
#
# At detuning Delta/lambda = 1 the disturbance switches on non-Markovianity
# above a critical gamma.  Sweeping the detuning at gamma = 10 shows a second,
# purely environmental onset near Delta/lambda = 3.7.

# %%
cfg = ModelConfig(Lorentzian(0.0, 1.0, 1.0), DisturbanceConfig(True, CALIBRATED_TA_LORENTZIAN, 0.05))
print("gamma* =", onset(sweep(cfg, "gamma", np.round(np.arange(0, 10.0001, 0.05), 10), jobs=4)))

ratios = np.round(np.arange(0, 6.0001, 0.1), 10)
env = sweep(ModelConfig(Lorentzian(10.0, 1.0, 0.0)), "delta_over_lambda", ratios)
print("environmental onset Delta/lambda =", onset(env))

# %% [markdown]
# The sweeps above are the `fig2a`..`fig3b` presets:
#
#     qsl-disturb --preset fig2b --out fig2b.csv --plot
#     gnuplot fig2b.gp
