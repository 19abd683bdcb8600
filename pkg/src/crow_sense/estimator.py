"""scikit-learn style front end.

``fit`` solves the pole problem for the configured parameters; ``predict``
returns the force sensitivity at the frequencies in ``X`` and ``transform``
the noise breakdown.  There are no learned weights: the estimator only
caches the expensive, parameter-dependent pieces.
"""
from __future__ import annotations

import math
from dataclasses import fields

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .greenfn import effective_couplings, find_poles, long_time_field
from .noise import s_add, sensitivity_curve
from .params import SystemParams, validate
from .errors import ConfigurationError

__all__ = ["CrowForceSensor", "COMPONENT_NAMES"]

COMPONENT_NAMES = ("thermal", "shot", "cav_o", "cav_s", "reservoir")


class CrowForceSensor(TransformerMixin, BaseEstimator):
    """Force sensor backed by a coupled-cavity waveguide reservoir.

    Parameters
    ----------
    delta_w, xi_w, delta_s, delta_o, xi_s, xi_o, kappa_s, kappa_o, gamma_m, g, e_o,
    n_sites, theta, mean_q, omega_m_si, mass_si, temperature_si
        Model parameters, see :class:`~crow_sense.params.SystemParams`.
    include_thermal : bool
        Include the mechanical thermal input in ``S_add``.

    Attributes
    ----------
    params_ : SystemParams
    poles_ : list of Pole
    field_ : LongTimeField
    couplings_ : EffectiveCouplings
    """

    def __init__(self, delta_w=8.0, xi_w=3.0, delta_s=4.0, delta_o=2.0, xi_s=4.0, xi_o=2.0,
                 kappa_s=0.01, kappa_o=0.05, gamma_m=1e-5, g=0.002, e_o=2e5, n_sites=30,
                 theta=math.pi / 2, mean_q=0.0, omega_m_si=2 * math.pi * 0.5e9, mass_si=1.4e-18,
                 temperature_si=300.0, include_thermal=True):
        self.delta_w = delta_w
        self.xi_w = xi_w
        self.delta_s = delta_s
        self.delta_o = delta_o
        self.xi_s = xi_s
        self.xi_o = xi_o
        self.kappa_s = kappa_s
        self.kappa_o = kappa_o
        self.gamma_m = gamma_m
        self.g = g
        self.e_o = e_o
        self.n_sites = n_sites
        self.theta = theta
        self.mean_q = mean_q
        self.omega_m_si = omega_m_si
        self.mass_si = mass_si
        self.temperature_si = temperature_si
        self.include_thermal = include_thermal

    @classmethod
    def from_params(cls, p: SystemParams, **kwargs) -> "CrowForceSensor":
        return cls(**p.to_dict(), **kwargs)

    def system_params(self) -> SystemParams:
        names = [f.name for f in fields(SystemParams)]
        return SystemParams(**{k: getattr(self, k) for k in names})

    def fit(self, X=None, y=None):
        """Locate poles and effective couplings; ``X`` and ``y`` are ignored."""
        p = self.system_params()
        report = validate(p)
        if not report.ok:
            raise ConfigurationError("invalid parameters: " + "; ".join(report))
        self.params_ = p
        self.poles_ = find_poles(p)
        self.field_ = long_time_field(p, self.poles_)
        self.couplings_ = effective_couplings(p, self.field_)
        self.n_features_in_ = 1
        return self

    def _omega(self, X):
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2:
            if X.shape[1] != 1:
                raise ValueError(f"X must hold one frequency column, got {X.shape[1]}")
            X = X[:, 0]
        return np.abs(X)

    def predict(self, X):
        """Force sensitivity ``F_s`` in N/sqrt(Hz) at each frequency."""
        check_is_fitted(self, "couplings_")
        omega = self._omega(X)
        curve = sensitivity_curve(self.params_, omega, include_thermal=self.include_thermal,
                                  couplings=self.couplings_, poles=self.poles_)
        return curve.f_s

    def transform(self, X):
        """Noise breakdown, columns ordered as ``COMPONENT_NAMES``."""
        check_is_fitted(self, "couplings_")
        omega = self._omega(X)
        _, comps = s_add(omega, self.params_, self.couplings_, include_thermal=self.include_thermal,
                         poles=self.poles_)
        return np.column_stack([comps.thermal, comps.shot, comps.cavity_o, comps.cavity_s,
                                comps.reservoir])

    def bound_states(self):
        check_is_fitted(self, "poles_")
        return [q for q in self.poles_ if q.is_bound_state]
