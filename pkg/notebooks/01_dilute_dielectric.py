# %% [markdown]
# # Ideal metal facing a dilute dielectric
#
# For a dielectric with permittivity ``1 + eta`` and small ``eta`` the Matsubara
# sum has closed forms to second order in ``eta``. This script compares them
# with the exact engine and with the low- and high-temperature expansions.

# %%
import numpy as np

from thermocasimir import dilute as dl
from thermocasimir.lifshitz import PlateConfig, free_energy, pressure
from thermocasimir.permittivity import Dilute, IdealMetal

a, eta = 2e-6, 0.1

# %% [markdown]
# ## Relative thermal correction to the pressure
#
# The correction is negative at room temperature, has a minimum of about
# -0.7% near 270 K and changes sign near 343 K.

# %%
for T in (50.0, 150.0, 270.0, 343.0, 400.0):
    p = dl.DiluteParams.from_temperature(eta, a, T)
    print(f"T = {T:6.1f} K  tau = {p.tau:6.3f}  delta_P = {dl.dilute_relative_thermal_correction_P(p): .5f}")

# %% [markdown]
# ## Closed form against the exact engine
#
# The closed forms keep ``eta`` and ``eta**2``; the engine is exact in ``eta``.
# Their ratio differs from one at order ``eta**2``.

# %%
for T in (10.0, 300.0, 1500.0):
    p = dl.DiluteParams.from_temperature(eta, a, T)
    cfg = PlateConfig(a, T)
    rF = free_energy(cfg, IdealMetal(), Dilute(eta)) / dl.dilute_free_energy(p)
    rP = pressure(cfg, IdealMetal(), Dilute(eta)) / dl.dilute_pressure(p)
    print(f"T = {T:6.1f} K  engine/closed F = {rF:.6f}  P = {rP:.6f}")

# %% [markdown]
# ## Asymptotic expansions
#
# The low-temperature expansion is accurate for ``tau`` below about one and the
# classical limit takes over for ``tau`` of several units.

# %%
for tau in np.geomspace(0.05, 20.0, 8):
    p = dl.DiluteParams(eta, float(tau), a)
    exact = dl.dilute_free_energy(p)
    low = dl.low_T_free_energy(p) / exact - 1
    high = dl.high_T_free_energy(p) / exact - 1
    print(f"tau = {tau:7.3f}  low-T error = {low: .2e}  high-T error = {high: .2e}")

# %% [markdown]
# The entropy stays non-negative for the dilute case at every temperature.

# %%
taus = np.geomspace(1e-3, 50.0, 200)
print("min entropy bracket:", min(dl.entropy_bracket(eta, float(t)) for t in taus))
