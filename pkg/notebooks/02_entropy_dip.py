# %% [markdown]
# # Negative Casimir entropy for a constant-permittivity dielectric
#
# An ideal metal facing a dielectric with ``eps = 7`` at 600 nm has a finite
# temperature interval where the entropy is negative. At low temperature the
# entropy vanishes as ``tau**2`` with a coefficient fixed by the static
# permittivity, so the Nernst heat theorem holds.

# %%
import warnings

import numpy as np
from scipy.constants import e as ELEMENTARY_CHARGE
from scipy.optimize import brentq, minimize_scalar

from thermocasimir.asymptotics import ConstEpsAsymptotics
from thermocasimir.lifshitz import (LowConfidenceWarning, PlateConfig, effective_temperature,
                                    entropy)
from thermocasimir.permittivity import Constant, IdealMetal

a, eps = 600e-9, Constant(7.0)
warnings.simplefilter("ignore", LowConfidenceWarning)


def S(T):
    return entropy(PlateConfig(a, T), IdealMetal(), eps)


# %%
for T in (50.0, 137.0, 200.0, 238.0, 311.0, 400.0):
    print(f"T = {T:5.0f} K  S = {S(T) / (1e3 * ELEMENTARY_CHARGE): .3f} keV/(m^2 K)")

# %%
lo, hi = brentq(S, 80.0, 200.0), brentq(S, 250.0, 420.0)
res = minimize_scalar(S, bounds=(lo, hi), method="bounded")
print(f"negative on [{lo:.1f}, {hi:.1f}] K")
print(f"minimum {res.fun / (1e3 * ELEMENTARY_CHARGE):.2f} keV/(m^2 K) at {res.x:.1f} K")

# %% [markdown]
# ## Approach to zero
#
# The leading ``tau**2`` law is only reached well below ``tau = 0.01`` for
# ``eps = 7``; above that the next terms are not small.

# %%
for tau in (0.1, 0.02, 0.005, 0.002):
    x = ConstEpsAsymptotics(7.0, a, tau)
    T = tau * effective_temperature(a) / (2 * np.pi)
    print(f"tau = {tau:6.3f}  engine / leading law = {S(T) / x.entropy:.3f}")
