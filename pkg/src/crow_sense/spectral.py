"""Reservoir spectral density and self-energy on both Riemann sheets.

The waveguide is a uniform tight-binding chain with dispersion
``omega(k) = delta_w - 2 xi_w cos k``.  The sensing cavity couples to site 1,
the observing cavity to site ``n_sites``.  With the mode functions
``sqrt(2/pi) sin(n k)`` the self-energy integral has the closed form

.. math::
    σ_{ij}(z) = \\frac{ξ_i ξ_j}{2 ξ_w} \\frac{(-ζ)^{|n_i-n_j|} - (-ζ)^{n_i+n_j}}{s},
    \\qquad u = \\frac{z-Δ_w}{2ξ_w},\\; s = \\sqrt{u^2-1},\\; ζ = u - s,

where the sign of ``s`` selects the sheet: ``|ζ| <= 1`` on the physical sheet,
``|ζ| >= 1`` on the continued one.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, SingularPointError
from .params import SystemParams

__all__ = [
    "Sheet",
    "Site",
    "SheetPoint",
    "SpectralMatrix",
    "rho",
    "coupling_v",
    "spectral_matrix",
    "spectral_density",
    "zeta",
    "self_energy",
    "self_energy_components",
    "self_energy_quadrature",
]


class Sheet(enum.Enum):
    ONE = 1
    TWO = 2

    @classmethod
    def coerce(cls, value) -> "Sheet":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            return {"ONE": cls.ONE, "I": cls.ONE, "1": cls.ONE,
                    "TWO": cls.TWO, "II": cls.TWO, "2": cls.TWO}[value.upper()]
        return cls(int(value))


class Site(enum.Enum):
    S = "S"
    O = "O"  # noqa: E741


@dataclass(frozen=True)
class SheetPoint:
    """Complex frequency together with the Riemann sheet it lives on."""

    z: complex
    sheet: Sheet = Sheet.ONE

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "sheet", Sheet.coerce(self.sheet))


@dataclass(frozen=True)
class SpectralMatrix:
    j_ss: float
    j_so: float
    j_os: float
    j_oo: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.j_ss, self.j_so], [self.j_os, self.j_oo]])


def _site_index(site, p: SystemParams) -> int:
    site = Site(site) if not isinstance(site, Site) else site
    return 1 if site is Site.S else p.n_sites


def _site_coupling(site, p: SystemParams) -> float:
    site = Site(site) if not isinstance(site, Site) else site
    return p.xi_s if site is Site.S else p.xi_o


def rho(omega, p: SystemParams):
    """Density of states ``1/sqrt((2 xi_w)^2 - (delta_w - omega)^2)`` inside the open band."""
    omega = np.asarray(omega, dtype=float)
    lo, hi = p.band_edges
    if np.any((omega <= lo) | (omega >= hi)):
        raise DomainError(f"rho is defined only inside the open band ({lo}, {hi})")
    out = 1.0 / np.sqrt((2 * p.xi_w) ** 2 - (p.delta_w - omega) ** 2)
    return out if out.ndim else float(out)


def _band_k(omega, p: SystemParams):
    # branch k in [0, pi]; cos k = (delta_w - omega) / (2 xi_w)
    c = np.clip((p.delta_w - omega) / (2 * p.xi_w), -1.0, 1.0)
    return np.arccos(c)


def coupling_v(site, omega, p: SystemParams):
    """Mode coupling ``sqrt(2/pi) xi_i sin(n_i k(omega))`` on the closed band."""
    omega = np.asarray(omega, dtype=float)
    lo, hi = p.band_edges
    if np.any((omega < lo) | (omega > hi)):
        raise DomainError(f"coupling_v is defined only on the closed band [{lo}, {hi}]")
    n = _site_index(site, p)
    out = np.sqrt(2 / np.pi) * _site_coupling(site, p) * np.sin(n * _band_k(omega, p))
    return out if out.ndim else float(out)


def spectral_matrix(omega: float, p: SystemParams) -> SpectralMatrix:
    """The 2x2 spectral density ``J_ij = rho V_i V_j`` at one in-band frequency."""
    r = rho(omega, p)
    vs = coupling_v(Site.S, omega, p)
    vo = coupling_v(Site.O, omega, p)
    cross = r * vs * vo
    return SpectralMatrix(r * vs * vs, cross, cross, r * vo * vo)


def spectral_density(omega, p: SystemParams):
    """Vectorised ``(j_ss, j_so, j_oo)`` on an arbitrary real grid.

    Entries are exactly zero outside the open band.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    lo, hi = p.band_edges
    inside = (omega > lo) & (omega < hi)
    j_ss = np.zeros_like(omega)
    j_so = np.zeros_like(omega)
    j_oo = np.zeros_like(omega)
    w = omega[inside]
    if w.size:
        r = 1.0 / np.sqrt((2 * p.xi_w) ** 2 - (p.delta_w - w) ** 2)
        k = _band_k(w, p)
        vs = np.sqrt(2 / np.pi) * p.xi_s * np.sin(k)
        vo = np.sqrt(2 / np.pi) * p.xi_o * np.sin(p.n_sites * k)
        j_ss[inside] = r * vs * vs
        j_so[inside] = r * vs * vo
        j_oo[inside] = r * vo * vo
    return j_ss, j_so, j_oo


def zeta(z, p: SystemParams, sheet=Sheet.ONE):
    """Return ``(zeta, s)`` for complex ``z`` on the requested sheet.

    Raises
    ------
    SingularPointError
        If ``z`` is a band edge (``s = 0``).
    """
    sheet = Sheet.coerce(sheet)
    z = np.asarray(z, dtype=complex)
    u = (z - p.delta_w) / (2 * p.xi_w)
    s = np.sqrt(u * u - 1.0)
    if np.any(s == 0):
        raise SingularPointError("self-energy is singular at the band edges")
    flip = np.abs(u - s) > np.abs(u + s)
    s = np.where(flip, -s, s)
    if sheet is Sheet.TWO:
        s = -s
    return u - s, s


def _check_sheet_one(z, p: SystemParams):
    lo, hi = p.band_edges
    on_cut = (z.imag == 0) & (z.real >= lo) & (z.real <= hi)
    if np.any(on_cut):
        raise DomainError("sheet ONE self-energy is undefined on the band segment of the real axis")


def self_energy_components(z, p: SystemParams, sheet=Sheet.ONE):
    """Vectorised closed-form ``(sigma_ss, sigma_so, sigma_oo)``."""
    sheet = Sheet.coerce(sheet)
    z = np.asarray(z, dtype=complex)
    if sheet is Sheet.ONE:
        _check_sheet_one(z, p)
    zt, s = zeta(z, p, sheet)
    q = -zt
    n = p.n_sites
    pref = 1.0 / (2 * p.xi_w * s)
    ss = p.xi_s ** 2 * pref * (1.0 - q ** 2)
    so = p.xi_s * p.xi_o * pref * (q ** (n - 1) - q ** (n + 1))
    oo = p.xi_o ** 2 * pref * (1.0 - q ** (2 * n))
    return ss, so, oo


def self_energy(pt: SheetPoint, p: SystemParams) -> np.ndarray:
    """2x2 self-energy matrix at one sheet point; ordering (S, O)."""
    if not isinstance(pt, SheetPoint):
        pt = SheetPoint(pt)
    ss, so, oo = (complex(x) for x in self_energy_components(pt.z, p, pt.sheet))
    return np.array([[ss, so], [so, oo]])


def self_energy_quadrature(z: complex, p: SystemParams, epsrel: float = 1e-13) -> np.ndarray:
    """Physical-sheet self-energy by adaptive quadrature of ``∫ J(ω)/(z-ω) dω``.

    Independent of the closed form and much slower; kept as an oracle.  The
    integral is taken in the mode variable ``k`` (``dω = dk / rho``), which
    removes the inverse-square-root edge singularities of the density of
    states.  A breakpoint is placed where the band frequency equals ``Re z``.
    """
    z = complex(z)
    lo, hi = p.band_edges
    if z.imag == 0 and lo <= z.real <= hi:
        raise DomainError("quadrature oracle needs z off the band segment")
    n = p.n_sites
    couplings = np.array([p.xi_s ** 2, p.xi_s * p.xi_o, p.xi_o ** 2])

    def integrand(k):
        s1 = np.sin(k)
        sn = np.sin(n * k)
        return (2 / np.pi) * couplings * np.array([s1 * s1, s1 * sn, sn * sn]) / (
            z - p.delta_w + 2 * p.xi_w * np.cos(k))

    k_res = float(_band_k(z.real, p))
    points = [k_res] if 0 < k_res < np.pi else None
    (ss, so, oo), _ = integrate.quad_vec(integrand, 0.0, np.pi, epsabs=0.0, epsrel=epsrel,
                                         points=points, limit=5000)
    return np.array([[ss, so], [so, oo]])
