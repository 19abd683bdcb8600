import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crow_sense import greenfn
from crow_sense.chainsim import (ChainState, ToleranceSpec, chain_normal_modes, derivative,
                                 generator_matrix, green_probe, integrate, reflection_free_length)
from crow_sense.errors import DomainError
from crow_sense.params import SystemParams

CLOSED = SystemParams(kappa_s=0.0, kappa_o=0.0, e_o=0.0)
TIGHT = ToleranceSpec(rtol=1e-12, atol=1e-14)


def test_zero_state_is_stationary_without_drive():
    d = derivative(ChainState.zeros(30), CLOSED)
    assert d.norm() == 0
    with pytest.raises(DomainError):
        derivative(ChainState.zeros(5), CLOSED)


def test_state_roundtrip():
    s = ChainState(1j, 2.0, np.arange(4, dtype=complex))
    assert np.array_equal(ChainState.from_vector(s.to_vector()).to_vector(), s.to_vector())
    assert s.norm() == pytest.approx(1 + 4 + 14)


def test_norm_conserved_single_site_excitation():
    p = CLOSED.replace(xi_s=0.0, xi_o=0.0)
    chain = np.zeros(p.n_sites, dtype=complex)
    chain[0] = 1.0
    tr = integrate(p, 100.0, TIGHT, initial=ChainState(0j, 0j, chain))
    assert np.max(np.abs(tr.norms() - 1.0)) < 1e-9


def test_two_site_beat():
    # N=2: eigenvalues delta_w -/+ xi_w, so |α_1|² = cos²(ξ_w t)
    p = CLOSED.replace(n_sites=2, xi_s=0.0, xi_o=0.0)
    t = np.linspace(0, 5, 201)
    tr = integrate(p, 5.0, TIGHT, grid=t, initial=ChainState(0j, 0j, np.array([1, 0], dtype=complex)))
    assert np.allclose(np.abs(tr.chain[:, 0]) ** 2, np.cos(p.xi_w * t) ** 2, atol=1e-9)


def test_generator_hermitian_when_lossless():
    m = generator_matrix(CLOSED)
    assert np.allclose(m, m.conj().T, atol=0)
    lossy = generator_matrix(SystemParams())
    assert lossy[0, 0] == pytest.approx(4 - 0.005j)


@given(st.integers(2, 60), st.floats(0.5, 6.0))
@settings(max_examples=20, deadline=None)
def test_normal_modes(n, xi_w):
    p = SystemParams(n_sites=n, xi_w=xi_w)
    k = np.arange(1, n + 1)
    exact = np.sort(p.delta_w - 2 * xi_w * np.cos(k * np.pi / (n + 1)))
    assert np.max(np.abs(chain_normal_modes(p) - exact)) < 1e-8


def test_short_time_drive():
    p = SystemParams()
    t = np.linspace(0, 1e-3, 5)
    tr = integrate(p, 1e-3, grid=t)
    assert np.allclose(tr.alpha_o, p.e_o * t, rtol=1e-2)
    assert np.max(np.abs(tr.alpha_s)) < 1e-6 * p.e_o * 1e-3


def test_green_probe_initial_values():
    t, a_s, a_o = green_probe(SystemParams(), 1.0, np.linspace(0, 1, 11))
    assert a_o[0] == 1 and a_s[0] == 0


def test_reflection_free_chain_matches_reconstruction():
    p = SystemParams(delta_s=2.4)
    t = np.linspace(0, 20, 201)
    _, a_s, a_o = green_probe(p, 20.0, t)
    r_s, r_o = greenfn.reconstruct_green(t, p)
    assert np.max(np.abs(a_s - r_s)) < 1e-6 * np.max(np.abs(a_s))
    assert np.max(np.abs(a_o - r_o)) < 1e-5


def test_reflection_free_length():
    assert reflection_free_length(SystemParams(), 100.0) == 30 + 300 + 20
    with pytest.raises(DomainError):
        integrate(SystemParams(), 10.0, n_chain=10)
    with pytest.raises(DomainError):
        integrate(SystemParams(), 0.0)
