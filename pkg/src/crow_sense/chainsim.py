"""Direct time integration of the mean-field cavity + waveguide equations.

Site equations (units of omega_m)::

    dα_s/dt = -i Δ̃_s α_s - i ξ_s α_1
    dα_o/dt = -i Δ̃_o α_o - i ξ_o α_N + E_o
    dα_n/dt = -i Δ_w α_n + i ξ_w (α_{n-1} + α_{n+1}) [- i ξ_s α_s on n=1] [- i ξ_o α_o on n=N]

The observing cavity sits on site ``N = n_sites``.  The simulated chain can be
longer than ``N`` (``n_chain``): the frequency-domain model treats the
waveguide as semi-infinite, and a chain long enough that no reflection from
its far end returns to site ``N`` before ``t_end`` reproduces that model
exactly on ``[0, t_end]``.  ``n_chain = n_sites`` gives a chain that ends at
the observing cavity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, StiffnessError
from .params import SystemParams

__all__ = [
    "ChainState",
    "ToleranceSpec",
    "ChainTrace",
    "reflection_free_length",
    "derivative",
    "generator_matrix",
    "chain_normal_modes",
    "integrate",
    "green_probe",
]


@dataclass(frozen=True)
class ChainState:
    alpha_s: complex
    alpha_o: complex
    alpha_chain: np.ndarray
    time: float = 0.0

    @classmethod
    def zeros(cls, n_chain: int, time: float = 0.0) -> "ChainState":
        return cls(0j, 0j, np.zeros(n_chain, dtype=complex), time)

    @classmethod
    def from_vector(cls, y, time: float = 0.0) -> "ChainState":
        y = np.asarray(y, dtype=complex)
        return cls(complex(y[0]), complex(y[1]), y[2:].copy(), time)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([[self.alpha_s, self.alpha_o], np.asarray(self.alpha_chain, dtype=complex)])

    def norm(self) -> float:
        """``|α_s|² + |α_o|² + Σ|α_n|²``."""
        return float(abs(self.alpha_s) ** 2 + abs(self.alpha_o) ** 2
                     + np.sum(np.abs(self.alpha_chain) ** 2))


@dataclass(frozen=True)
class ToleranceSpec:
    rtol: float = 1e-10
    atol: float = 1e-12
    method: str = "DOP853"
    max_step: float = math.inf


@dataclass(frozen=True)
class ChainTrace:
    """Sampled trajectory; ``chain`` has shape ``(len(t), n_chain)``."""

    t: np.ndarray
    alpha_s: np.ndarray
    alpha_o: np.ndarray
    chain: np.ndarray

    def state(self, i: int) -> ChainState:
        return ChainState(complex(self.alpha_s[i]), complex(self.alpha_o[i]), self.chain[i], float(self.t[i]))

    def norms(self) -> np.ndarray:
        return np.abs(self.alpha_s) ** 2 + np.abs(self.alpha_o) ** 2 + np.sum(np.abs(self.chain) ** 2, axis=1)


def reflection_free_length(p: SystemParams, t_end: float, pad: int = 20) -> int:
    """Shortest chain whose far-end reflection cannot reach site N before ``t_end``.

    Waves travel at most at the maximal group velocity ``2 xi_w``.
    """
    return p.n_sites + int(math.ceil(p.xi_w * t_end)) + pad


def _rhs_vector(y: np.ndarray, p: SystemParams, drive: float) -> np.ndarray:
    n = p.n_sites
    a_s, a_o, c = y[0], y[1], y[2:]
    out = np.empty_like(y)
    out[0] = -1j * p.delta_s_eff * a_s - 1j * p.xi_s * c[0]
    out[1] = -1j * p.delta_o_eff * a_o - 1j * p.xi_o * c[n - 1] + drive
    hop = np.zeros_like(c)
    hop[1:] += c[:-1]
    hop[:-1] += c[1:]
    dc = -1j * p.delta_w * c + 1j * p.xi_w * hop
    dc[0] -= 1j * p.xi_s * a_s
    dc[n - 1] -= 1j * p.xi_o * a_o
    out[2:] = dc
    return out


def derivative(state: ChainState, p: SystemParams) -> ChainState:
    """Time derivative of the mean-field state (returned as a tangent ChainState)."""
    if len(state.alpha_chain) < p.n_sites:
        raise DomainError(f"chain of {len(state.alpha_chain)} sites is shorter than n_sites={p.n_sites}")
    d = _rhs_vector(state.to_vector(), p, p.e_o)
    return ChainState.from_vector(d, state.time)


def generator_matrix(p: SystemParams, n_chain: int | None = None) -> np.ndarray:
    """Matrix ``M`` with ``dy/dt = -i M y`` for the undriven equations."""
    n_chain = p.n_sites if n_chain is None else n_chain
    dim = n_chain + 2
    eye = np.eye(dim, dtype=complex)
    cols = [_rhs_vector(eye[:, j], p, 0.0) for j in range(dim)]
    return 1j * np.array(cols).T


def chain_normal_modes(p: SystemParams, n_chain: int | None = None) -> np.ndarray:
    """Sorted eigenfrequencies of the bare waveguide block of the generator."""
    m = generator_matrix(p, n_chain)[2:, 2:]
    return np.sort(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))


def integrate(p: SystemParams, t_end: float, dt_ctrl: ToleranceSpec | None = None, grid=None,
              n_chain: int | None = None, initial: ChainState | None = None) -> ChainTrace:
    """Integrate the mean-field equations from ``initial`` (default: empty) to ``t_end``.

    Raises
    ------
    DomainError
        If ``t_end <= 0``.
    StiffnessError
        If the adaptive step size underflows.
    """
    if not t_end > 0:
        raise DomainError("t_end must be positive")
    tol = dt_ctrl or ToleranceSpec()
    if initial is not None:
        n_chain = len(initial.alpha_chain)
    n_chain = reflection_free_length(p, t_end) if n_chain is None else int(n_chain)
    if n_chain < p.n_sites:
        raise DomainError(f"n_chain={n_chain} is shorter than n_sites={p.n_sites}")
    y0 = (initial or ChainState.zeros(n_chain)).to_vector()
    grid = np.linspace(0.0, t_end, 1001) if grid is None else np.asarray(grid, dtype=float)
    sol = solve_ivp(lambda t, y: _rhs_vector(y, p, p.e_o), (0.0, t_end), y0, method=tol.method,
                    t_eval=grid, rtol=tol.rtol, atol=tol.atol, max_step=tol.max_step)
    if sol.status != 0:
        raise StiffnessError(f"integration failed at t={sol.t[-1] if sol.t.size else 0.0}: {sol.message}")
    y = sol.y
    return ChainTrace(sol.t, y[0], y[1], y[2:].T)


def green_probe(p: SystemParams, t_end: float, grid=None, n_chain: int | None = None,
                dt_ctrl: ToleranceSpec | None = None):
    """Green's functions ``(t, ᾱ_s(t), ᾱ_o(t))`` from a driven trajectory.

    ``α_j(t) = E_o ∫_0^t ᾱ_j``, so ``ᾱ_j = (1/E_o) dα_j/dt``; the derivative is
    taken exactly by evaluating the equations of motion on the sampled states.
    """
    if p.e_o == 0:
        raise DomainError("green_probe needs a nonzero drive e_o")
    trace = integrate(p, t_end, dt_ctrl, grid, n_chain)
    y = np.vstack([trace.alpha_s, trace.alpha_o, trace.chain.T])
    d = np.array([_rhs_vector(y[:, i], p, p.e_o) for i in range(y.shape[1])]).T
    return trace.t, d[0] / p.e_o, d[1] / p.e_o
