"""Model parameters, validation, and SI conversion.

All frequencies and rates are dimensionless, measured in units of the
mechanical frequency omega_m.  The only SI quantities are the three anchors
``omega_m_si``, ``mass_si`` and ``temperature_si``; they enter solely through
:func:`force_si_factor` and :func:`thermal_coth`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Mapping

from scipy import constants

from .errors import ConfigurationError

__all__ = [
    "SystemParams",
    "ValidationReport",
    "default_params",
    "validate",
    "force_si_factor",
    "thermal_coth_argument",
    "thermal_coth",
    "parse_config",
    "load_config",
    "apply_overrides",
    "params_from_config",
]


@dataclass(frozen=True)
class SystemParams:
    """Immutable parameter set of the sensor + waveguide model.

    Defaults reproduce the reference configuration (band centre 8, hopping 3,
    sensing cavity at 4, observing cavity at 2, 30 waveguide sites).
    """

    delta_w: float = 8.0
    xi_w: float = 3.0
    delta_s: float = 4.0
    delta_o: float = 2.0
    xi_s: float = 4.0
    xi_o: float = 2.0
    kappa_s: float = 0.01
    kappa_o: float = 0.05
    gamma_m: float = 1e-5
    g: float = 0.002
    e_o: float = 2e5
    n_sites: int = 30
    theta: float = math.pi / 2
    mean_q: float = 0.0
    omega_m_si: float = 2 * math.pi * 0.5e9
    mass_si: float = 1.4e-18
    temperature_si: float = 300.0

    @property
    def band_edges(self) -> tuple[float, float]:
        """Lower and upper edge of the waveguide band."""
        return self.delta_w - 2 * self.xi_w, self.delta_w + 2 * self.xi_w

    @property
    def delta_s_eff(self) -> complex:
        """Complex sensing-cavity detuning including loss and mean displacement."""
        return self.delta_s - 0.5j * self.kappa_s + self.g * self.mean_q

    @property
    def delta_o_eff(self) -> complex:
        return self.delta_o - 0.5j * self.kappa_o

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ValidationReport:
    """Violated invariants of a parameter set; empty means valid."""

    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def default_params() -> SystemParams:
    """Reference parameter set."""
    return SystemParams()


def validate(p: SystemParams) -> ValidationReport:
    """Check all parameter invariants and list the violated ones."""
    out = []
    for f in fields(p):
        value = getattr(p, f.name)
        if f.name == "n_sites":
            continue
        if not math.isfinite(value):
            out.append(f"{f.name} is finite")
    if not p.xi_w > 0:
        out.append("xi_w > 0")
    if not (isinstance(p.n_sites, int) and p.n_sites >= 2):
        out.append("n_sites ≥ 2")
    for name in ("kappa_s", "kappa_o", "gamma_m"):
        if not getattr(p, name) >= 0:
            out.append(f"{name} ≥ 0")
    lo, hi = p.band_edges
    if not lo < hi:
        out.append("band edges ω₁ < ω₂")
    for name in ("omega_m_si", "mass_si"):
        if not getattr(p, name) > 0:
            out.append(f"{name} > 0")
    if not p.temperature_si >= 0:
        out.append("temperature_si ≥ 0")
    return ValidationReport(tuple(out))


def force_si_factor(p: SystemParams) -> float:
    """Conversion from sqrt(S_add) to force sensitivity in N/sqrt(Hz).

    Returns ``sqrt(hbar * m * omega_m)``.
    """
    if not (p.mass_si > 0 and p.omega_m_si > 0):
        raise ConfigurationError("force_si_factor needs mass_si > 0 and omega_m_si > 0")
    return math.sqrt(constants.hbar * p.mass_si * p.omega_m_si)


def thermal_coth_argument(p: SystemParams, temperature: float | None = None) -> float:
    """hbar omega_m / (2 k_B T); ``inf`` at zero temperature."""
    t = p.temperature_si if temperature is None else temperature
    if t < 0:
        raise ConfigurationError("temperature must be non-negative")
    if t == 0:
        return math.inf
    return constants.hbar * p.omega_m_si / (2 * constants.k * t)


def thermal_coth(p: SystemParams, temperature: float | None = None) -> float:
    """Thermal occupation factor coth(hbar omega_m / 2 k_B T), equal to 1 at T = 0."""
    x = thermal_coth_argument(p, temperature)
    if math.isinf(x):
        return 1.0
    return 1.0 / math.tanh(x)


# ---------------------------------------------------------------- config files

_FIELD_TYPES = {f.name: (int if f.name == "n_sites" else float) for f in fields(SystemParams)}


def _coerce(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise ConfigurationError(f"unknown parameter {key!r}")
    kind = _FIELD_TYPES[key]
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(raw)
    except ValueError:
        raise ConfigurationError(f"cannot parse {key} = {raw!r} as {kind.__name__}") from None


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        out[key] = _coerce(key, raw)
    return out


def load_config(path: str | Path) -> dict:
    return parse_config(Path(path).read_text())


def _parse_assignments(assignments: Iterable[str]) -> dict:
    out = {}
    for item in assignments:
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not of the form key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        out[key] = _coerce(key, raw)
    return out


def apply_overrides(p: SystemParams, overrides: Mapping | Iterable[str]) -> SystemParams:
    """Return a copy of ``p`` with overrides given as a mapping or ``key=value`` strings."""
    if isinstance(overrides, Mapping):
        changes = {k: _coerce(k, str(v)) for k, v in overrides.items()}
    else:
        changes = _parse_assignments(overrides)
    return replace(p, **changes)


def params_from_config(path: str | Path | None = None, overrides: Iterable[str] = ()) -> SystemParams:
    """Defaults, then the config file, then ``key=value`` overrides."""
    p = default_params()
    if path is not None:
        p = replace(p, **load_config(path))
    return apply_overrides(p, list(overrides))
