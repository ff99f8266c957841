# %% [markdown]
# # Decoherence functions and their quadrature oracle
#
# G_R(t) sets the decay of the system qubit's coherence and psi(t) feeds the
# phase picked up through the auxiliary qubit.  Both have closed forms for the
# Ohmic family; here they are compared with direct adaptive quadrature of the
# frequency integrals.

# %%
import numpy as np

from qsl_disturb import Lorentzian, Ohmic, g_real, oracle_quadrature, psi

times = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
for s in (0.5, 1.0, 2.0, 3.0):
    bath = Ohmic(1.0, s)
    err = max(
        abs(bath.g_real(t) - oracle_quadrature(bath, "gr_kernel", t)) / max(1, bath.g_real(t))
        for t in times
    )
    print(f"s={s:3.1f}  G_R(1)={g_real(bath, 1.0):.6f}  psi(1)={psi(bath, 1.0):.6f}  max err {err:.1e}")

# %% [markdown]
# At s = 1 the Gamma(s-1) prefactor blows up and the closed form switches to
# the logarithmic branch.  Nearby exponents join it smoothly:

# %%
t = np.linspace(0.1, 10, 5)
for s in (0.9999, 1.0, 1.0001):
    print(s, np.round(Ohmic(1.0, s).g_real(t), 6))

# %% [markdown]
# ## Lorentzian bath
#
# For the Lorentzian density J(w) > 0 at w = 0, so psi integrated over
# [0, inf) diverges.  Integrating over the full real line gives finite values,
# and the damped closed form used by the library reproduces them.

# %%
bath = Lorentzian(gamma=10.0, lam=1.0, delta=1.0)
for t in (0.5, 2.0, 8.0):
    q_gr = oracle_quadrature(bath, "gr_kernel", t)
    q_psi = oracle_quadrature(bath, "psi_kernel", t)
    print(f"t={t:3.1f}  G_R {bath.g_real(t):.10f} vs {q_gr:.10f}   psi {bath.psi(t):.10f} vs {q_psi:.10f}")

# %% [markdown]
# The undamped variant (`printed_forms`) misses the e^{-lambda t} factor on
# the sine term and carries the opposite sign and a constant offset in psi.
# The offset cancels in the cross term G_I and the sign only flips G_I, so
# |f| is unchanged, but G_R itself is off:

# %%
g_pr, p_pr = bath.printed_forms(np.array([0.5, 2.0, 8.0]))
print("undamped G_R:", np.round(g_pr, 6))
print("damped   G_R:", np.round(bath.g_real(np.array([0.5, 2.0, 8.0])), 6))
