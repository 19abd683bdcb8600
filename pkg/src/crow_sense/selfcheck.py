"""Fast invariant suite behind ``crow-sense selfcheck``."""
from __future__ import annotations

import numpy as np
from scipy import integrate

from . import chainsim, greenfn
from .params import SystemParams, validate
from .spectral import Sheet, self_energy, self_energy_quadrature, spectral_density, zeta


def _rel(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / max(np.linalg.norm(np.asarray(b)), 1e-300))


def run_checks(p: SystemParams):
    """Return ``[(name, passed, detail), ...]``."""
    out = []

    def add(name, ok, detail):
        out.append((name, bool(ok), detail))

    rep = validate(p)
    add("parameters valid", rep.ok, "; ".join(rep) or "no violations")
    if not rep.ok:
        return out
    lo, hi = p.band_edges

    zs = [p.delta_w + 0.5j, lo - 1 + 0.1j, hi + 2 - 0.3j, p.delta_w + 3 - 1e-3j]
    err = max(_rel(self_energy(z, p), self_energy_quadrature(z, p)) for z in zs)
    add("self-energy closed form vs quadrature", err < 1e-8, f"max rel. error {err:.2e}")

    w = np.linspace(lo, hi, 3)[1:-1]
    sums = []
    for idx, target in ((0, p.xi_s ** 2), (2, p.xi_o ** 2)):
        val = integrate.quad(lambda x: spectral_density(x, p)[idx][0], lo, hi, limit=2000)[0]
        sums.append(abs(val - target) / max(target, 1e-300) if target else abs(val))
    add("spectral sum rules", max(sums) < 1e-6, f"rel. errors {sums[0]:.1e}, {sums[1]:.1e}")

    zt1 = zeta(np.array(zs), p, Sheet.ONE)[0]
    zt2 = zeta(np.array(zs), p, Sheet.TWO)[0]
    err = float(np.max(np.abs(zt1 * zt2 - 1)))
    add("zeta(I) * zeta(II) = 1", err < 1e-12, f"max deviation {err:.1e}")

    w = np.linspace(lo, hi, 9)[1:-1]
    above = np.array([self_energy(x + 1e-12j, p) for x in w])
    below = np.array([self_energy(greenfn.SheetPoint(x - 1e-12j, Sheet.TWO), p) for x in w])
    err = float(np.max(np.abs(above - below)))
    add("continuation across the cut", err < 1e-8, f"max jump {err:.1e}")
    j_ss = spectral_density(w, p)[0]
    err = float(np.max(np.abs(above[:, 0, 0].imag + np.pi * j_ss)))
    add("Im sigma_ss = -pi J_ss on the band", err < 1e-6, f"max deviation {err:.1e}")

    poles = greenfn.find_poles(p)
    unresolved = [q for q in poles if not q.resolved]
    add("all pole candidates resolved", not unresolved, f"{len(poles)} poles, {len(unresolved)} unresolved")
    worst = 0.0
    for q in poles:
        if q.resolved and q.sheet is Sheet.ONE:
            radius = min(1e-3, 0.3 * greenfn._edge_distance(q.location, p))
            ref = greenfn.residue_contour(q.location, q.sheet, p, radius=radius)
            # absolute floor: roundoff of the trapezoid sum on the circle
            for got, want in zip((q.residue_s, q.residue_o), ref):
                worst = max(worst, abs(got - want) / (1e-6 * abs(want) + 1e-13))
    add("residues vs contour integral", worst <= 1.0, f"worst error / tolerance {worst:.1e}")

    a_s, a_o = greenfn.reconstruct_green([0.0, 1e-3], p, poles)
    short = 1 - 1j * p.delta_o_eff * 1e-3
    err = max(abs(a_s[0]), abs(a_o[0] - 1), abs(a_s[1]), abs(a_o[1] - short))
    add("reconstruction at t -> 0", err < 1e-3, f"deviation from alpha_s = 0, alpha_o = 1 - i D_o t: {err:.1e}")

    try:
        fld = greenfn.long_time_field(p, poles)
        z0 = 1e-13j if lo <= 0.0 <= hi else 0.0   # boundary value from above on the band
        direct = p.e_o * greenfn.green_pair(greenfn.SheetPoint(z0), p)[0]
        total = fld.static_part + fld.nonexp_part
        # the two parts cancel to a small remainder; measure against their size
        size = max(abs(direct), abs(fld.static_part), abs(fld.nonexp_part), 1e-300)
        err = abs(total - direct) / size
        add("static + non-exponential = E_o alpha_s(0)", err < 1e-8, f"error relative to parts {err:.1e}")
    except Exception as exc:  # reported, not raised
        add("static + non-exponential = E_o alpha_s(0)", False, f"{type(exc).__name__}: {exc}")

    modes = chainsim.chain_normal_modes(p.replace(xi_s=0.0, xi_o=0.0))
    k = np.arange(1, p.n_sites + 1)
    exact = np.sort(p.delta_w - 2 * p.xi_w * np.cos(k * np.pi / (p.n_sites + 1)))
    err = float(np.max(np.abs(modes - exact)))
    add("isolated chain normal modes", err < 1e-8, f"max deviation {err:.1e}")

    t = np.linspace(0.0, 10.0, 201)
    _, s_sim, o_sim = chainsim.green_probe(p, 10.0, t)
    s_rec, o_rec = greenfn.reconstruct_green(t, p, poles)
    peak = max(np.max(np.abs(s_sim)), 1e-300)
    err = float(np.max(np.abs(s_sim - s_rec)) / peak)
    add("chain simulation vs pole + cut reconstruction (t <= 10)", err < 1e-2, f"rel. L-inf error {err:.1e}")
    return out
