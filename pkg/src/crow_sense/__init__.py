"""Bound states, Green's functions and force sensitivity of a waveguide-assisted optomechanical sensor."""

__version__ = "0.1.0"

from .params import SystemParams, default_params, validate  # noqa: E402
from .spectral import Sheet, SheetPoint  # noqa: E402
from .greenfn import Pole, find_poles, long_time_field, effective_couplings  # noqa: E402
from .noise import sensitivity_curve  # noqa: E402
from .estimator import CrowForceSensor  # noqa: E402

__all__ = [
    "SystemParams",
    "default_params",
    "validate",
    "Sheet",
    "SheetPoint",
    "Pole",
    "find_poles",
    "long_time_field",
    "effective_couplings",
    "sensitivity_curve",
    "CrowForceSensor",
]
