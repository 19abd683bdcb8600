"""Mechanical response, homodyne transfer, added noise and force sensitivity.

The additive-noise spectrum is

.. math::
    S_{add}(ω) = \\tfrac12\\{γ_m \\coth\\tfrac{ħω_m}{2k_BT}
        + |A(ω)|^2 [1/κ_o + κ_o|ᾱ_o(ω)|^2 + κ_s|ᾱ_s(ω)|^2 + B(ω)] + (ω → -ω)\\},

    A(ω) = [2 \\sum_n e^{-iθ} ᾱ_s(ω) G_n χ_m(ω - ω_{r_n}) + \\mathrm{c.c.}]^{-1},

with the reservoir term ``B(ω) = Σ_ij ᾱ_i(ω) J_ij(ω) conj(ᾱ_j(ω))``, which
vanishes outside the band.  ``S_add`` is even in ω; all functions here take
``ω >= 0`` and carry out the ``ω → -ω`` half internally.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConfigurationError, DomainError, MechanicalResonanceError,
                     NoResponseError, ResonanceError)
from .greenfn import EffectiveCouplings, effective_couplings, find_poles, green_arrays, long_time_field
from .params import SystemParams, force_si_factor, thermal_coth
from .spectral import Sheet, spectral_density

log = logging.getLogger(__name__)

__all__ = [
    "NoiseComponents",
    "SensitivityCurve",
    "chi_m",
    "green_real_axis",
    "transfer_A",
    "reservoir_B",
    "s_add",
    "sensitivity_curve",
    "thermal_floor",
    "zero_point_line",
    "couplings_for",
]

REAL_OFFSET = 1e-9
NO_RESPONSE = 1e-30
GRID_NUDGE = 1e-6


def chi_m(omega, p: SystemParams):
    """Mechanical susceptibility ``ω_m / (ω² - ω_m² + i γ_m ω / 2)`` with ``ω_m = 1``.

    Raises
    ------
    MechanicalResonanceError
        At ``ω = ±ω_m`` when ``γ_m = 0``.
    """
    omega = np.asarray(omega, dtype=float)
    den = omega * omega - 1.0 + 0.5j * p.gamma_m * omega
    if np.any(den == 0):
        raise MechanicalResonanceError("lossless mechanical susceptibility is singular at ω = ±ω_m")
    out = 1.0 / den
    return out if out.ndim else complex(out)


def _real_poles(p: SystemParams, poles=None):
    if poles is None:
        poles = find_poles(p)
    return [q.location.real for q in poles if q.is_bound_state and q.is_real]


def green_real_axis(omega, p: SystemParams, poles=None, tol: float = REAL_OFFSET):
    """``(ᾱ_s(ω), ᾱ_o(ω))`` as boundary values from above on the physical sheet.

    In the band the functions are evaluated at ``ω + 1e-9 i``.

    Raises
    ------
    ResonanceError
        If ``ω`` is within ``tol`` of a real bound-state pole.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    lo, hi = p.band_edges
    lossless = p.kappa_s == 0 or p.kappa_o == 0
    real = _real_poles(p, poles) if (poles is not None or lossless) else []
    for w_r in real:
        hit = np.abs(omega - w_r) <= tol
        if np.any(hit):
            raise ResonanceError(f"ω={omega[hit][0]} sits on the real bound-state pole {w_r}")
    z = omega + 1j * np.where((omega >= lo) & (omega <= hi), REAL_OFFSET, 0.0)
    a_s, a_o = green_arrays(z, p, Sheet.ONE)
    if not (np.all(np.isfinite(a_s)) and np.all(np.isfinite(a_o))):
        bad = omega[~(np.isfinite(a_s) & np.isfinite(a_o))][0]
        raise ResonanceError(f"Green's function diverges at ω={bad}")
    return a_s, a_o


def couplings_for(p: SystemParams, poles=None) -> EffectiveCouplings:
    """Effective couplings for a parameter set (pole search included)."""
    poles = find_poles(p) if poles is None else poles
    return effective_couplings(p, long_time_field(p, poles))


def _bracket(omega, a_s, p: SystemParams, couplings: EffectiveCouplings):
    total = np.zeros(np.shape(omega), dtype=complex)
    for w_r, g_n in couplings.shifts:
        total = total + g_n * chi_m(omega - w_r, p)
    return 2 * np.exp(-1j * p.theta) * a_s * total


def transfer_A(omega, p: SystemParams, couplings: EffectiveCouplings, a_s=None):
    """Real transfer weight ``A(ω)``.

    Raises
    ------
    NoResponseError
        If the bracket plus its conjugate is below ``1e-30`` in magnitude.
    """
    omega = np.asarray(omega, dtype=float)
    if a_s is None:
        a_s = green_real_axis(omega, p)[0].reshape(omega.shape)
    x = _bracket(omega, a_s, p, couplings)
    den = (x + np.conj(x)).real
    if np.any(np.abs(den) < NO_RESPONSE):
        raise NoResponseError("signal transfer vanishes: A(ω) is undefined")
    out = 1.0 / den
    return out if out.ndim else float(out)


def reservoir_B(omega, a_s, a_o, p: SystemParams):
    """``Σ_ij ᾱ_i J_ij conj(ᾱ_j)``; exactly zero outside the open band."""
    j_ss, j_so, j_oo = spectral_density(omega, p)
    j_ss, j_so, j_oo = (x.reshape(np.shape(omega)) for x in (j_ss, j_so, j_oo))
    val = (j_ss * np.abs(a_s) ** 2 + j_oo * np.abs(a_o) ** 2
           + 2 * j_so * (a_s * np.conj(a_o)).real)
    lo, hi = p.band_edges
    inside = (np.asarray(omega) > lo) & (np.asarray(omega) < hi)
    return np.where(inside, val, 0.0)


@dataclass(frozen=True)
class NoiseComponents:
    """Per-frequency breakdown; the fields add up to ``S_add``."""

    thermal: np.ndarray
    shot: np.ndarray
    cavity_o: np.ndarray
    cavity_s: np.ndarray
    reservoir: np.ndarray

    def total(self) -> np.ndarray:
        return self.thermal + self.shot + self.cavity_o + self.cavity_s + self.reservoir

    def as_dict(self) -> dict:
        return {"thermal": self.thermal, "shot": self.shot, "cav_o": self.cavity_o,
                "cav_s": self.cavity_s, "reservoir": self.reservoir}


def _one_sided(omega, p, couplings, poles):
    """|A|² and the bracketed field terms at one sign of ω."""
    a_s, a_o = green_real_axis(omega, p, poles)
    a_s, a_o = a_s.reshape(omega.shape), a_o.reshape(omega.shape)
    a2 = transfer_A(omega, p, couplings, a_s) ** 2
    b = reservoir_B(omega, a_s, a_o, p)
    return a2, a2 / p.kappa_o, a2 * p.kappa_o * np.abs(a_o) ** 2, a2 * p.kappa_s * np.abs(a_s) ** 2, a2 * b


def s_add(omega, p: SystemParams, couplings: EffectiveCouplings | None = None,
          temperature: float | None = None, include_thermal: bool = True, poles=None):
    """Added-noise spectrum at ``ω >= 0`` and its components.

    ``include_thermal=False`` drops the mechanical thermal input (the optical
    noise alone).  Returns ``(s_add, NoiseComponents)``.

    Raises
    ------
    ConfigurationError
        If ``κ_o = 0`` (no readout port).
    """
    if not p.kappa_o > 0:
        raise ConfigurationError("s_add needs kappa_o > 0")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(omega < 0):
        raise DomainError("s_add is even in ω; pass ω >= 0")
    if poles is None and (couplings is None or p.kappa_s == 0):
        poles = find_poles(p)
    if couplings is None:
        couplings = couplings_for(p, poles)
    plus = _one_sided(omega, p, couplings, poles)
    minus = _one_sided(-omega, p, couplings, poles)
    thermal = p.gamma_m * thermal_coth(p, temperature) if include_thermal else 0.0
    comps = NoiseComponents(
        thermal=np.full(omega.shape, thermal),
        shot=0.5 * (plus[1] + minus[1]),
        cavity_o=0.5 * (plus[2] + minus[2]),
        cavity_s=0.5 * (plus[3] + minus[3]),
        reservoir=0.5 * (plus[4] + minus[4]),
    )
    total = comps.total()
    if np.any(total < 0):
        raise DomainError("negative added noise; check parameters")
    return total, comps


@dataclass(frozen=True)
class SensitivityCurve:
    """``S_add`` and ``F_s`` on a frequency grid; failed points are NaN."""

    omega_grid: np.ndarray
    s_add: np.ndarray
    f_s: np.ndarray
    components: NoiseComponents
    temperature_si: float
    include_thermal: bool
    thermal_floor: float
    zero_point_line: float
    couplings: EffectiveCouplings | None = field(default=None, repr=False)

    def minimum(self) -> tuple[float, float]:
        """``(ω, F_s)`` at the smallest finite F_s."""
        i = int(np.nanargmin(self.f_s))
        return float(self.omega_grid[i]), float(self.f_s[i])


def thermal_floor(p: SystemParams, temperature: float | None = None) -> float:
    """``sqrt(ħ m ω_m γ_m coth(ħω_m/2k_BT))`` in N/sqrt(Hz)."""
    return force_si_factor(p) * math.sqrt(p.gamma_m * thermal_coth(p, temperature))


def zero_point_line(p: SystemParams) -> float:
    """The thermal floor at zero temperature."""
    return thermal_floor(p, 0.0)


def sensitivity_curve(p: SystemParams, omega_grid, temperature: float | None = None,
                      include_thermal: bool = True, couplings: EffectiveCouplings | None = None,
                      poles=None) -> SensitivityCurve:
    """Force sensitivity ``F_s = sqrt(ħ m ω_m S_add)`` on a grid.

    Points that hit a pole are retried once shifted by ``1e-6`` (with a
    warning); points that still fail are stored as NaN.
    """
    omega = np.asarray(omega_grid, dtype=float)
    if omega.ndim != 1:
        raise DomainError("omega_grid must be one-dimensional")
    if poles is None and (couplings is None or p.kappa_s == 0):
        poles = find_poles(p)
    if couplings is None:
        couplings = couplings_for(p, poles)
    factor = force_si_factor(p)
    try:
        total, comps = s_add(omega, p, couplings, temperature, include_thermal, poles)
    except (ResonanceError, MechanicalResonanceError, NoResponseError):
        total, comps = _pointwise(omega, p, couplings, temperature, include_thermal, poles)
    t_si = p.temperature_si if temperature is None else temperature
    return SensitivityCurve(omega, total, factor * np.sqrt(total), comps, t_si, include_thermal,
                            thermal_floor(p, temperature), zero_point_line(p), couplings)


def _pointwise(omega, p, couplings, temperature, include_thermal, poles):
    out = np.full(omega.shape, np.nan)
    parts = {k: np.full(omega.shape, np.nan) for k in ("thermal", "shot", "cavity_o", "cavity_s", "reservoir")}
    for i, w in enumerate(omega):
        for trial in (w, w + GRID_NUDGE):
            try:
                val, comp = s_add([trial], p, couplings, temperature, include_thermal, poles)
            except (ResonanceError, MechanicalResonanceError, NoResponseError) as exc:
                log.warning("ω=%.17g: %s", trial, exc)
                continue
            if trial != w:
                log.warning("ω=%.17g shifted by %g to avoid a pole", w, GRID_NUDGE)
            out[i] = val[0]
            for k in parts:
                parts[k][i] = getattr(comp, k)[0]
            break
    return out, NoiseComponents(**parts)
