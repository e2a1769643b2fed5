"""Thermal Casimir free energy, pressure and entropy between a metal and a dielectric.

The :mod:`~thermocasimir.lifshitz` engine evaluates the Lifshitz formula for
any pair of permittivity models; :mod:`~thermocasimir.dilute` and
:mod:`~thermocasimir.asymptotics` hold the closed forms and asymptotic
expansions used to check it.
"""

from .lifshitz import (PlateConfig, SolverSettings, ThermalQuantities, effective_temperature,
                       entropy, free_energy, pressure, relative_thermal_correction_F,
                       relative_thermal_correction_P, sweep, thermal_quantities,
                       zero_temperature_free_energy)
from .materials import MaterialRecord, MaterialStore, builtin_material, resolve_material
from .permittivity import (Constant, Dilute, Drude, DrudeParams, IdealMetal, NinhamParsegian,
                           OpticalDataset, Tabulated, eval_epsilon, load_optical_csv)

__version__ = "0.1.0"

__all__ = [
    "PlateConfig", "SolverSettings", "ThermalQuantities", "effective_temperature",
    "free_energy", "zero_temperature_free_energy", "pressure", "entropy",
    "relative_thermal_correction_F", "relative_thermal_correction_P", "thermal_quantities",
    "sweep", "IdealMetal", "Constant", "Dilute", "NinhamParsegian", "Drude", "DrudeParams",
    "OpticalDataset", "Tabulated", "eval_epsilon", "load_optical_csv", "MaterialRecord",
    "MaterialStore", "builtin_material", "resolve_material",
]
