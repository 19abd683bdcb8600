"""Green's functions of the two cavities, their poles, and long-time amplitudes.

Conventions
-----------
Laplace transform ``O(z) = ∫_0^∞ O(t) exp(izt) dt`` and inverse along a line
above the real axis.  The Green's functions solve the homogeneous mean-field
problem with ``alpha_o(0) = 1``, ``alpha_s(0) = 0``:

.. math::
    ᾱ_s(z) = i σ_{so}(z)/D(z), \\qquad ᾱ_o(z) = i [z - Δ̃_s - σ_{ss}(z)]/D(z).

Deforming the inverse-transform contour around the band cut gives

.. math::
    ᾱ(t) = \\sum_n c_n e^{-i ω_n t} + Ī_1(t) + Ī_2(t),\\qquad c_n = -i\\,\\mathrm{Res}_{z=ω_n} ᾱ(z),

where the sum runs over physical-sheet zeros of ``D`` outside the band and
continued-sheet zeros below the cut.  ``Pole.residue_*`` store the residue
in ``z``; ``Pole.amplitude_*`` the time-domain coefficient ``c_n``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import (ConvergenceError, DegeneratePoleError, DomainError,
                     NearResonantDriveError, PoleHitError)
from .params import SystemParams
from .spectral import Sheet, SheetPoint, _check_sheet_one, self_energy_components, zeta
from . import _contour

log = logging.getLogger(__name__)

__all__ = [
    "Pole",
    "SearchBox",
    "LongTimeField",
    "EffectiveCouplings",
    "default_search_boxes",
    "dee",
    "dee_array",
    "green_pair",
    "green_arrays",
    "find_poles",
    "residue_at",
    "residue_contour",
    "nonexp_integrals",
    "branch_cut_series",
    "reconstruct_green",
    "driven_field",
    "long_time_field",
    "effective_couplings",
]

DEDUP_TOL = 1e-7
REAL_TOL = 1e-9
POLISH_TOL = 1e-12
MAX_POLISH_ITER = 200


# ------------------------------------------------------------------ D(z), ᾱ(z)

def dee_array(z, p: SystemParams, sheet=Sheet.ONE):
    """Vectorised ``D(z)`` on one sheet."""
    ss, so, oo = self_energy_components(z, p, sheet)
    z = np.asarray(z, dtype=complex)
    return (z - p.delta_s_eff - ss) * (z - p.delta_o_eff - oo) - so * so


def dee(pt: SheetPoint, p: SystemParams) -> complex:
    if not isinstance(pt, SheetPoint):
        pt = SheetPoint(pt)
    return complex(dee_array(pt.z, p, pt.sheet))


def _geometric(x, n: int):
    """``x (1 - x^(2n)) / (1 - x^2) = x + x^3 + ... + x^(2n-1)``, stable near ``x^2 = 1``."""
    x = np.asarray(x, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = x * (1.0 - x ** (2 * n)) / (1.0 - x * x)
    near = np.abs(1.0 - x * x) < 1e-3
    if np.any(near):
        xn = x[near]
        out = np.array(out, copy=True)
        out[near] = sum(xn ** (2 * k + 1) for k in range(n))
    return out


def _scaled_parts(z, p: SystemParams, sheet):
    """Numerators and denominator of ᾱ(z), rescaled by a common factor.

    In terms of ``zeta`` the self-energies are ``σ_ss = (ξ_s²/ξ_w) ζ``,
    ``σ_so = (ξ_s ξ_o/ξ_w)(-1)^(N-1) ζ^N`` and
    ``σ_oo = (ξ_o²/ξ_w)(ζ + ζ³ + ... + ζ^(2N-1))``.  On the continued sheet
    ``|ζ| > 1`` and every term is divided by ``ζ^(2N)`` so nothing overflows.
    Returns ``(num_s, num_o, den)`` with ``ᾱ_s = i num_s/den`` and
    ``ᾱ_o = i num_o/den``.
    """
    sheet = Sheet.coerce(sheet)
    z = np.asarray(z, dtype=complex)
    if sheet is Sheet.ONE:
        _check_sheet_one(z, p)
    zt, _ = zeta(z, p, sheet)
    n = p.n_sites
    a = p.xi_s ** 2 / p.xi_w
    b = p.xi_o ** 2 / p.xi_w
    c = p.xi_s * p.xi_o / p.xi_w
    sign = -1.0 if n % 2 == 0 else 1.0
    a_s = z - p.delta_s_eff - a * zt
    if sheet is Sheet.ONE:
        so = c * sign * zt ** n
        den = a_s * (z - p.delta_o_eff - b * _geometric(zt, n)) - so * so
        return so, a_s, den
    if p.xi_o == 0:
        # observing cavity decoupled: nothing to rescale, and r^(2N) may underflow
        return np.zeros_like(z), a_s, a_s * (z - p.delta_o_eff)
    r = 1.0 / zt
    r2n = r ** (2 * n)
    den = a_s * ((z - p.delta_o_eff) * r2n - b * _geometric(r, n)) - c * c
    return c * sign * r ** n, a_s * r2n, den


def _den_and_slope(z: complex, p: SystemParams, sheet: Sheet):
    """Scaled denominator, its exact z-derivative, and ``D'`` on the same scale."""
    z = complex(z)
    zt = complex(zeta(z, p, sheet)[0])
    n = p.n_sites
    a = p.xi_s ** 2 / p.xi_w
    b = p.xi_o ** 2 / p.xi_w
    c = p.xi_s * p.xi_o / p.xi_w
    zp = p.xi_w * (1.0 - 1.0 / (zt * zt))   # dz/dζ
    k = np.arange(n)
    a_s = z - p.delta_s_eff - a * zt
    da_s = zp - a
    if sheet is Sheet.ONE:
        a_o = z - p.delta_o_eff - b * complex(np.sum(zt ** (2 * k + 1)))
        da_o = zp - b * complex(np.sum((2 * k + 1) * zt ** (2 * k)))
        den = a_s * a_o - c * c * zt ** (2 * n)
        d_zeta = da_s * a_o + a_s * da_o - 2 * n * c * c * zt ** (2 * n - 1)
        slope = d_zeta / zp
        return den, slope, slope
    r = 1.0 / zt
    r2n = r ** (2 * n)
    a_o = (z - p.delta_o_eff) * r2n - b * complex(np.sum(r ** (2 * k + 1)))
    da_o = zp * r2n - b * complex(np.sum((2 * k + 1) * r ** (2 * n - 2 * k)))
    den = a_s * a_o - c * c
    d_scaled = (da_s * a_o + a_s * da_o - 2 * n * c * c * r) / zp
    # d/dz (D r^(2N)) = D' r^(2N) + D d(r^(2N))/dz, and dr/dz = -r² / zp
    return den, d_scaled - 2 * n * den * r / zp, d_scaled


def green_arrays(z, p: SystemParams, sheet=Sheet.ONE):
    """Vectorised ``(ᾱ_s(z), ᾱ_o(z))``; no pole check."""
    num_s, num_o, den = _scaled_parts(z, p, sheet)
    with np.errstate(divide="ignore", invalid="ignore"):
        return 1j * num_s / den, 1j * num_o / den


def green_pair(pt: SheetPoint, p: SystemParams, pole_tol: float = 1e-14) -> tuple[complex, complex]:
    """Green's functions ``(ᾱ_s, ᾱ_o)`` at a sheet point.

    Raises
    ------
    PoleHitError
        If ``pt`` coincides with a zero of ``D``.
    """
    if not isinstance(pt, SheetPoint):
        pt = SheetPoint(pt)
    num_s, num_o, den = (complex(x) for x in _scaled_parts(pt.z, p, pt.sheet))
    scale = max(abs(num_s), abs(num_o), 1.0)
    if abs(den) <= pole_tol * scale:
        raise PoleHitError(f"D(z) vanishes at z={pt.z} on sheet {pt.sheet.name}", pole=pt)
    return 1j * num_s / den, 1j * num_o / den


# --------------------------------------------------------------------- poles

@dataclass(frozen=True)
class SearchBox:
    """Axis-aligned rectangle of the complex plane on one sheet."""

    sheet: Sheet
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        object.__setattr__(self, "sheet", Sheet.coerce(self.sheet))
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError(f"degenerate search box {self}")

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (self.re_min - pad <= z.real <= self.re_max + pad
                and self.im_min - pad <= z.imag <= self.im_max + pad)


@dataclass(frozen=True)
class Pole:
    """A simple zero of ``D`` with the residues of ``ᾱ_s`` and ``ᾱ_o``."""

    location: complex
    sheet: Sheet
    residue_s: complex
    residue_o: complex
    is_bound_state: bool
    is_real: bool = True
    resolved: bool = True
    derivative: complex = 0j

    @property
    def amplitude_s(self) -> complex:
        """Coefficient of ``exp(-i w t)`` in ᾱ_s(t)."""
        return -1j * self.residue_s

    @property
    def amplitude_o(self) -> complex:
        return -1j * self.residue_o

    def sort_key(self):
        return (self.sheet.value, self.location.real, self.location.imag)


def default_search_boxes(p: SystemParams, reach: float = 20.0, depth: float = 10.0,
                         edge_gap: float = 1e-9) -> list[SearchBox]:
    """Physical-sheet strips on both sides of the band plus the region below the cut.

    The physical-sheet strips extend down to ``-max(kappa)/2``: cavity losses
    push the otherwise real zeros into the lower half plane by at most that.
    """
    lo, hi = p.band_edges
    below = max(p.kappa_s, p.kappa_o) / 2 + 1e-6
    return [
        SearchBox(Sheet.ONE, lo - reach, lo - edge_gap, -below, 1e-6),
        SearchBox(Sheet.ONE, hi + edge_gap, hi + reach, -below, 1e-6),
        SearchBox(Sheet.TWO, lo, hi, -depth, -edge_gap),
    ]


def _derivative(f, z: complex, h: float) -> complex:
    """Richardson-refined central difference."""
    d1 = (f(z + h) - f(z - h)) / (2 * h)
    h2 = h / 2
    d2 = (f(z + h2) - f(z - h2)) / (2 * h2)
    return (4 * d2 - d1) / 3


def _edge_distance(z: complex, p: SystemParams) -> float:
    lo, hi = p.band_edges
    return min(abs(z - lo), abs(z - hi))


def dee_derivative(z: complex, sheet, p: SystemParams, method: str = "exact") -> complex:
    """``dD/dz`` at ``z``.

    ``method="exact"`` differentiates the closed form through ``zeta``;
    ``method="difference"`` uses a Richardson-refined central difference with
    step ``min(1e-6, 0.01 * distance to the nearest band edge)``.
    """
    sheet = Sheet.coerce(sheet)
    z = complex(z)
    if method == "difference":
        h = min(1e-6, 0.01 * _edge_distance(z, p))
        return _derivative(lambda w: complex(dee_array(w, p, sheet)), z, h)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    den, slope, d_scaled = _den_and_slope(z, p, sheet)
    if sheet is Sheet.ONE:
        return slope
    return d_scaled * complex(zeta(z, p, sheet)[0]) ** (2 * p.n_sites)


def residue_at(z_r: complex, sheet, p: SystemParams) -> tuple[complex, complex]:
    """Residues of ``(ᾱ_s, ᾱ_o)`` at a simple zero of ``D``.

    ``(i σ_so/D', i(z - Δ̃_s - σ_ss)/D')`` with the exact derivative of the
    closed form.  On the continued sheet numerator and ``D'`` are rescaled
    together.

    Raises
    ------
    DegeneratePoleError
        If ``D'`` is too small for the zero to be simple.
    """
    sheet = Sheet.coerce(sheet)
    z_r = complex(z_r)
    _, _, d = _den_and_slope(z_r, p, sheet)
    num_s, num_o, _ = (complex(x) for x in _scaled_parts(z_r, p, sheet))
    scale = max(abs(num_o), 1.0 if sheet is Sheet.ONE else 0.0, 1e-300)
    if not np.isfinite(d) or abs(d) < 1e-10 * scale:
        raise DegeneratePoleError(f"|D'| too small at {z_r}: pole is not simple")
    return 1j * num_s / d, 1j * num_o / d


def residue_contour(z_r: complex, sheet, p: SystemParams, radius: float = 1e-3,
                    nodes: int = 256) -> tuple[complex, complex]:
    """Residues by the trapezoid rule for ``(1/2πi)∮ ᾱ dz`` on a small circle."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    w = z_r + radius * np.exp(1j * theta)
    a_s, a_o = green_arrays(w, p, sheet)
    dz = 1j * radius * np.exp(1j * theta)
    return (complex(np.mean(a_s * dz) / 1j), complex(np.mean(a_o * dz) / 1j))


def _polish(z0: complex, sheet: Sheet, p: SystemParams):
    """Newton iteration on the (scaled) denominator of ᾱ."""
    z = complex(z0)
    for _ in range(MAX_POLISH_ITER):
        den, slope, _ = _den_and_slope(z, p, sheet)
        if slope == 0 or not np.isfinite(slope):
            return z, False
        dz = den / slope
        # damp steps that would jump across the band edges
        lim = max(0.5 * _edge_distance(z, p), 1e-12)
        if abs(dz) > lim:
            dz *= lim / abs(dz)
        z -= dz
        if abs(dz) <= POLISH_TOL * max(1.0, abs(z)):
            return z, True
    return z, False


def find_poles(p: SystemParams, search=None, min_cell: float = 1e-4) -> list[Pole]:
    """All simple zeros of ``D`` inside the search boxes.

    Zeros are counted with the argument principle on recursively subdivided
    cells and polished by Newton's method.  Candidates whose polishing fails are
    returned with ``resolved=False``; physical-sheet zeros off the real axis are
    returned with ``is_real=False``.
    """
    boxes = default_search_boxes(p) if search is None else list(search)
    lo, hi = p.band_edges
    found: list[Pole] = []

    for box in boxes:

        def f(w, _sheet=box.sheet):
            return _scaled_parts(w, p, _sheet)[2]

        cells = _contour.locate_zeros(f, box.re_min, box.re_max, box.im_min, box.im_max,
                                      min_cell=min_cell)
        for cell, count in cells:
            found.extend(_resolve_cell(f, cell, count, box.sheet, p, min_cell))

    found.sort(key=Pole.sort_key)
    out: list[Pole] = []
    for pole in found:
        if out and out[-1].sheet is pole.sheet and abs(out[-1].location - pole.location) < DEDUP_TOL:
            continue
        out.append(pole)
    return out


def _resolve_cell(f, cell, count, sheet: Sheet, p: SystemParams, min_cell: float,
                  depth: int = 0) -> list[Pole]:
    """Newton-polish the zero isolated in ``cell``; split the cell when that fails."""
    a, b, c, d = cell
    centre = complex(0.5 * (a + b), 0.5 * (c + d))
    size = max(b - a, d - c)
    if count == 1:
        z, ok = _polish(centre, sheet, p)
        pad = 1e-9 * size
        if ok and a - pad <= z.real <= b + pad and c - pad <= z.imag <= d + pad:
            return [_make_pole(z, sheet, p, True)]
    if size > min_cell and depth < 12:
        sub = _contour.locate_zeros(f, a, b, c, d, min_cell=min_cell, max_cell=size / 4)
        if not (len(sub) == 1 and sub[0][0] == cell):
            out = []
            for sub_cell, sub_count in sub:
                out.extend(_resolve_cell(f, sub_cell, sub_count, sheet, p, min_cell, depth + 1))
            return out
    if count > 1:
        log.warning("cell %s holds %d zeros; treated as degenerate", cell, count)
    return [_make_pole(centre, sheet, p, False)]


def _make_pole(z: complex, sheet: Sheet, p: SystemParams, resolved: bool) -> Pole:
    lo, hi = p.band_edges
    if resolved:
        try:
            res_s, res_o = residue_at(z, sheet, p)
        except DegeneratePoleError:
            res_s = res_o = complex("nan")
            resolved = False
    else:
        res_s = res_o = complex("nan")
    outside = z.real < lo or z.real > hi
    is_real = abs(z.imag) < REAL_TOL
    if sheet is Sheet.ONE and is_real:
        z = complex(z.real, 0.0)
    bound = sheet is Sheet.ONE and outside
    if bound and not is_real:
        log.info("physical-sheet pole %s is off the real axis", z)
    return Pole(location=z, sheet=sheet, residue_s=res_s, residue_o=res_o,
                is_bound_state=bound, is_real=is_real if sheet is Sheet.ONE else False,
                resolved=resolved)


def contributing_poles(poles, p: SystemParams) -> list[Pole]:
    """Poles enclosed by the deformed inverse-transform contour."""
    lo, hi = p.band_edges
    out = []
    for pole in poles:
        if not pole.resolved:
            continue
        z = pole.location
        if pole.sheet is Sheet.ONE and (z.real < lo or z.real > hi) and z.imag <= REAL_TOL:
            out.append(pole)
        elif pole.sheet is Sheet.TWO and lo < z.real < hi and z.imag < 0:
            out.append(pole)
    return out


# ------------------------------------------------------- branch-cut integrals

def _cut_jump(edge: float, x, p: SystemParams):
    """``ᾱ^I - ᾱ^II`` at ``edge - i x`` for both components, shape (2, len(x))."""
    z = edge - 1j * np.asarray(x, dtype=float)
    s1, o1 = green_arrays(z, p, Sheet.ONE)
    s2, o2 = green_arrays(z, p, Sheet.TWO)
    return np.array([s1 - s2, o1 - o2])


def _edge_integral(edge: float, t: float, p: SystemParams, laguerre_nodes: int,
                   epsrel: float) -> np.ndarray:
    """``∫_0^∞ e^{-xt} [ᾱ^I - ᾱ^II](edge - ix) dx`` for both components."""
    x_c = 10.0 / t
    # near part: substitution x = y^2 removes the sqrt behaviour at the edge
    def near(y):
        return 2 * y * np.exp(-y * y * t) * _cut_jump(edge, [y * y], p)[:, 0]

    y_c = math.sqrt(x_c)
    breaks = [y for y in y_c * np.geomspace(1e-4, 1.0, 9)[:-1]]
    near_val, near_err = integrate.quad_vec(near, 0.0, y_c, epsabs=1e-14, epsrel=epsrel,
                                            points=breaks, limit=4000)
    y_k, w_k = special.roots_laguerre(laguerre_nodes)
    tail_vals = _cut_jump(edge, x_c + y_k / t, p)
    tail = math.exp(-x_c * t) / t * (tail_vals @ w_k)
    y_k2, w_k2 = special.roots_laguerre(2 * laguerre_nodes)
    tail2 = math.exp(-x_c * t) / t * (_cut_jump(edge, x_c + y_k2 / t, p) @ w_k2)
    total = near_val + tail
    err = near_err + np.max(np.abs(tail - tail2))
    scale = max(np.max(np.abs(total)), 1e-300)
    if not np.all(np.isfinite(total)) or err > max(1e-6 * scale, 1e-12):
        raise ConvergenceError(
            f"branch-cut integral at edge {edge}, t={t}: {laguerre_nodes} Laguerre nodes, "
            f"error estimate {err:.3g} (tail {np.max(np.abs(tail)):.3g})")
    return total


def nonexp_integrals(t: float, p: SystemParams, component: str = "s",
                     laguerre_nodes: int = 64, epsrel: float = 1e-10) -> tuple[complex, complex]:
    """Branch-cut contributions ``(Ī_1(t), Ī_2(t))`` to ᾱ_s(t) (or ᾱ_o(t)).

    .. math::
        Ī_1 = \\frac{i e^{-iω_1 t}}{2π} ∫_0^∞ dx\\, e^{-xt} [ᾱ^I - ᾱ^{II}](ω_1 - ix),\\quad
        Ī_2 = -\\frac{i e^{-iω_2 t}}{2π} ∫_0^∞ dx\\, e^{-xt} [ᾱ^I - ᾱ^{II}](ω_2 - ix).
    """
    if not t > 0:
        raise DomainError("branch-cut integrals need t > 0")
    idx = {"s": 0, "o": 1}[component]
    lo, hi = p.band_edges
    i1 = _edge_integral(lo, t, p, laguerre_nodes, epsrel)[idx]
    i2 = _edge_integral(hi, t, p, laguerre_nodes, epsrel)[idx]
    pref1 = 1j * np.exp(-1j * lo * t) / (2 * np.pi)
    pref2 = -1j * np.exp(-1j * hi * t) / (2 * np.pi)
    return complex(pref1 * i1), complex(pref2 * i2)


def _cut_nodes(y_min=1e-6, y_max=3000.0, ratio=1.25, order=24):
    """Composite Gauss-Legendre nodes in ``y = sqrt(x)`` on geometric panels."""
    edges = [0.0]
    y = y_min
    while y < y_max:
        edges.append(y)
        y *= ratio
    edges.append(y_max)
    g, gw = np.polynomial.legendre.leggauss(order)
    ys, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        ys.append(0.5 * (b - a) * g + 0.5 * (b + a))
        ws.append(0.5 * (b - a) * gw)
    y = np.concatenate(ys)
    w = np.concatenate(ws)
    # dx = 2 y dy
    return y * y, 2 * y * w


def branch_cut_series(t, p: SystemParams, ratio: float = 1.25, order: int = 24):
    """``Ī_1 + Ī_2`` for ᾱ_s and ᾱ_o on a whole time grid at once.

    Uses one fixed composite rule for all times, so the jump across the cut
    is evaluated only once.  ``t = 0`` is allowed: the two edge integrals
    diverge logarithmically there on their own, but their sum converges.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("branch-cut integrals need t >= 0")
    lo, hi = p.band_edges
    x, w = _cut_nodes(ratio=ratio, order=order)
    out = np.zeros((2, t.size), dtype=complex)
    for edge, sign in ((lo, 1.0), (hi, -1.0)):
        jump = _cut_jump(edge, x, p)                        # (2, nx)
        kernel = np.exp(-np.outer(t, x)) * w                # (nt, nx)
        integral = jump @ kernel.T                          # (2, nt)
        out += sign * 1j * np.exp(-1j * edge * t) / (2 * np.pi) * integral
    return out[0], out[1]


def reconstruct_green(t, p: SystemParams, poles=None):
    """ᾱ_s(t), ᾱ_o(t) from the pole sum plus the branch-cut integrals."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if poles is None:
        poles = find_poles(p)
    enclosed = contributing_poles(poles, p)
    a_s = np.zeros(t.size, dtype=complex)
    a_o = np.zeros(t.size, dtype=complex)
    for pole in enclosed:
        phase = np.exp(-1j * pole.location * t)
        a_s += pole.amplitude_s * phase
        a_o += pole.amplitude_o * phase
    cut_s, cut_o = branch_cut_series(t, p)
    return a_s + cut_s, a_o + cut_o


def driven_field(t, p: SystemParams, poles=None):
    """Driven mean fields ``α_j(t) = E_o ∫_0^t ᾱ_j`` from the same decomposition.

    Each pole contributes ``E_o c_n (1 - e^{-iω_n t})/(iω_n)``; the time
    integral of the branch-cut terms is done in closed form under the ``x``
    integral.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("driven_field needs t >= 0")
    if poles is None:
        poles = find_poles(p)
    out = np.zeros((2, t.size), dtype=complex)
    for pole in contributing_poles(poles, p):
        w = pole.location
        if abs(w) <= 1e-6:
            raise NearResonantDriveError(f"pole at {w} is resonant with the drive", pole=pole)
        ramp = (1 - np.exp(-1j * w * t)) / (1j * w)
        out[0] += pole.amplitude_s * ramp
        out[1] += pole.amplitude_o * ramp
    lo, hi = p.band_edges
    x, wts = _cut_nodes()
    for edge, sign in ((lo, 1.0), (hi, -1.0)):
        rate = x + 1j * edge
        jump = _cut_jump(edge, x, p) * (wts / rate)
        kernel = 1 - np.exp(-np.outer(t, rate))
        out += sign * 1j / (2 * np.pi) * (jump @ kernel.T)
    return p.e_o * out[0], p.e_o * out[1]


# ------------------------------------------------------------ long-time field

@dataclass(frozen=True)
class LongTimeField:
    """Long-time mean field of the sensing cavity.

    ``alpha_s(t) ≈ Σ amplitude·exp(-i ω t) + static_part + nonexp_part``.
    """

    oscillating: tuple[tuple[float, complex], ...]
    static_part: complex
    nonexp_part: complex
    poles: tuple[Pole, ...] = field(default=(), repr=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.static_part + self.nonexp_part, dtype=complex)
        for pole in self.poles:
            if pole.is_bound_state:
                amp = 1j * pole.amplitude_s / pole.location
                out = out + amp * np.exp(-1j * pole.location * t)
        return out


def _cut_time_integral(p: SystemParams) -> complex:
    """``∫_0^∞ (Ī_1 + Ī_2) dτ`` for ᾱ_s, with the τ integral done in closed form.

    ``∫_0^∞ e^{-iω_e τ - xτ} dτ = 1/(i z)`` with ``z = ω_e - ix``, hence
    ``∫ Ī dτ = ±(1/2π) ∫_0^∞ [ᾱ^I - ᾱ^II](z)/z dx``.
    """
    lo, hi = p.band_edges
    if min(abs(lo), abs(hi)) < 1e-9:
        raise NearResonantDriveError("drive frequency coincides with a band edge")
    total = 0j
    for edge, sign in ((lo, 1.0), (hi, -1.0)):
        def f(y, _edge=edge):
            x = y * y
            return 2 * y * _cut_jump(_edge, [x], p)[0, 0] / (_edge - 1j * x)

        val, err = integrate.quad_vec(f, 0.0, np.inf, epsabs=1e-15, epsrel=1e-11, limit=4000)
        total += sign * val / (2 * np.pi)
    return complex(total)


def long_time_field(p: SystemParams, poles=None, near_tol: float = 1e-6) -> LongTimeField:
    """Long-time decomposition of the driven sensing-cavity mean field."""
    if poles is None:
        poles = find_poles(p)
    unresolved = [q for q in poles if not q.resolved]
    if unresolved:
        raise ConvergenceError(f"{len(unresolved)} unresolved pole candidates, e.g. {unresolved[0].location}")
    enclosed = contributing_poles(poles, p)
    for pole in enclosed:
        if abs(pole.location) <= near_tol:
            raise NearResonantDriveError(f"pole at {pole.location} is resonant with the drive", pole=pole)
    e = p.e_o
    oscillating = tuple((float(q.location.real), complex(1j * e * q.amplitude_s / q.location))
                        for q in enclosed if q.is_bound_state)
    static = complex(-e * sum(1j * q.amplitude_s / q.location for q in enclosed))
    nonexp = e * _cut_time_integral(p)
    # stored poles carry residues already multiplied by the drive
    return LongTimeField(oscillating, static, nonexp, poles=tuple(
        Pole(q.location, q.sheet, e * q.residue_s, e * q.residue_o, q.is_bound_state,
             q.is_real, q.resolved) for q in enclosed))


@dataclass(frozen=True)
class EffectiveCouplings:
    """Linearised optomechanical coupling ``G(t) = G_0 + Σ G_n exp(-i ω_n t)``."""

    g0: complex
    bound: tuple[tuple[float, complex], ...] = ()

    @property
    def shifts(self) -> list[tuple[float, complex]]:
        """``(ω_rn, G_n)`` including the static term at ``ω_r0 = 0``."""
        return [(0.0, self.g0)] + list(self.bound)

    def scaled(self, factor: float) -> "EffectiveCouplings":
        return EffectiveCouplings(self.g0 * factor, tuple((w, gn * factor) for w, gn in self.bound))


def effective_couplings(p: SystemParams, field_=None) -> EffectiveCouplings:
    """``G_n = -i g E_o Z_n/ω_rn`` for each bound state and the static ``G_0``."""
    if field_ is None:
        field_ = long_time_field(p)
    bound = tuple((w, p.g * amp) for w, amp in field_.oscillating)
    return EffectiveCouplings(p.g * (field_.static_part + field_.nonexp_part), bound)
