import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from crow_sense.errors import ConfigurationError
from crow_sense.estimator import COMPONENT_NAMES, CrowForceSensor
from crow_sense.noise import sensitivity_curve
from crow_sense.params import SystemParams


@pytest.fixture(scope="module")
def fitted():
    return CrowForceSensor(delta_s=2.4, temperature_si=0.0).fit()


def test_params_roundtrip():
    est = CrowForceSensor(delta_s=2.4, xi_w=5.0)
    assert est.get_params()["delta_s"] == 2.4
    assert est.system_params() == SystemParams(delta_s=2.4, xi_w=5.0)
    assert clone(est).get_params() == est.get_params()
    assert CrowForceSensor.from_params(SystemParams(g=0.01)).g == 0.01


def test_unfitted_raises():
    with pytest.raises(NotFittedError):
        CrowForceSensor().predict([[1.0]])


def test_invalid_params_rejected():
    with pytest.raises(ConfigurationError):
        CrowForceSensor(xi_w=0.0).fit()


def test_predict_matches_curve(fitted):
    w = np.linspace(0.9, 1.1, 21)
    f = fitted.predict(w.reshape(-1, 1))
    ref = sensitivity_curve(fitted.params_, w, couplings=fitted.couplings_, poles=fitted.poles_)
    assert np.array_equal(f, ref.f_s)
    assert np.array_equal(fitted.predict(w), f)


def test_transform_columns(fitted):
    w = np.array([[0.5], [1.0], [1.5]])
    comps = fitted.transform(w)
    assert comps.shape == (3, len(COMPONENT_NAMES))
    total = comps.sum(axis=1)
    factor = fitted.predict(w) / np.sqrt(total)
    assert np.allclose(factor, factor[0], rtol=1e-12)
    with pytest.raises(ValueError):
        fitted.transform(np.ones((3, 2)))


def test_bound_states(fitted):
    locs = [q.location.real for q in fitted.bound_states()]
    assert np.allclose(locs, [-0.0051924, 0.9303089, 14.0085686], atol=1e-6)
    assert fitted.n_features_in_ == 1


def test_include_thermal_flag():
    w = [[1.0]]
    hot = CrowForceSensor(xi_w=12.0).fit()
    cold = CrowForceSensor(xi_w=12.0, include_thermal=False).fit()
    assert cold.transform(w)[0, 0] == 0
    assert hot.transform(w)[0, 0] > 0
    assert cold.predict(w)[0] < hot.predict(w)[0]
