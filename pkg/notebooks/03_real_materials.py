# %% [markdown]
# # Real materials: gold against silicon and alumina
#
# The built-in fallback models are a pure Drude gold and single-oscillator
# silicon; alumina uses its two-oscillator representation. The thermal
# correction to the free energy has opposite sign for the two dielectrics.

# %%
import numpy as np

from thermocasimir.lifshitz import PlateConfig, free_energy, zero_temperature_free_energy
from thermocasimir.materials import builtin_material
from thermocasimir.permittivity import eval_epsilon

gold = builtin_material("au-drude").model
silicon = builtin_material("si-fallback").model
alumina = builtin_material("alumina").model

# %% [markdown]
# Permittivity along the imaginary frequency axis.

# %%
for xi in np.geomspace(1e11, 1e18, 8):
    print(f"xi = {xi:8.1e} rad/s  Si = {float(eval_epsilon(silicon, xi)):7.3f}"
          f"  Al2O3 = {float(eval_epsilon(alumina, xi)):7.3f}")

# %%
def delta_F(a, dielectric, T=300.0):
    f0 = zero_temperature_free_energy(a, gold, dielectric)
    return free_energy(PlateConfig(a, T), gold, dielectric) / f0 - 1


for a_um in (0.3, 0.5, 0.75, 0.95, 1.2, 1.4):
    a = a_um * 1e-6
    print(f"a = {a_um:4.2f} um  delta_F(Si) = {delta_F(a, silicon): .5f}"
          f"  delta_F(Al2O3) = {delta_F(a, alumina): .5f}")
