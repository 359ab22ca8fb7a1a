import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnomech.errors import FitError
from magnomech.lineshape import LORENTZIAN_Q, fano_q_from_parts, fit_lineshape


def fano(x, x0, gamma, A, q, c0=0.3, c1=0.0):
    eps = (x - x0) / gamma
    return c0 + c1 * eps + A * ((q + eps) ** 2 / (1 + eps**2) - 1)


X = np.linspace(-10, 10, 801)


def test_lorentzian_recovered():
    y = 0.5 + 0.2 / (1 + ((X - 0.3) / 1.2) ** 2)
    fit = fit_lineshape(X, y, 0.0, 1.0)
    assert fit.kind == "lorentzian"
    assert fit.center == pytest.approx(0.3, abs=1e-9)
    assert fit.fwhm == pytest.approx(2.4, rel=1e-9)
    assert fit.fano_q == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(q=st.floats(-0.95, 0.95), x0=st.floats(-1, 1), gamma=st.floats(0.5, 2.0),
       A=st.floats(0.05, 1.0).flatmap(lambda a: st.sampled_from([a, -a])))
def test_round_trip(q, x0, gamma, A):
    y = fano(X, x0, gamma, A, q, c1=0.01)
    fit = fit_lineshape(X, y, 0.2, 1.0)
    assert fit.center == pytest.approx(x0, abs=1e-7)
    assert fit.fwhm == pytest.approx(2 * gamma, rel=1e-7)
    assert fit.fano_q == pytest.approx(q, abs=1e-7)
    assert fit.amplitude == pytest.approx(A, rel=1e-7)
    assert np.allclose(fit.evaluate(X), y, atol=1e-9)


def test_q_root_choice():
    # (A, q) and (-A q^2, -1/q) give the same curve; the |q| <= 1 root is reported
    A, q = fano_q_from_parts(0.4, 0.3)
    assert abs(q) <= 1
    A2, q2 = fano_q_from_parts(-0.4, -0.3)
    assert q2 == pytest.approx(q)
    assert A2 == pytest.approx(-A)


def test_asymmetry_sign():
    up = fit_lineshape(X, fano(X, 0, 1, 0.3, 0.4), 0, 1)
    down = fit_lineshape(X, fano(X, 0, 1, 0.3, -0.4), 0, 1)
    assert up.kind == down.kind == "fano"
    assert up.fano_q > LORENTZIAN_Q and down.fano_q < -LORENTZIAN_Q


def test_flat_data_rejected():
    with pytest.raises(FitError):
        fit_lineshape(X, np.full_like(X, 0.4), 0, 1)


def test_input_checks():
    with pytest.raises(FitError):
        fit_lineshape(X[:5], X[:5], 0, 1)
    with pytest.raises(FitError):
        fit_lineshape(X, X, 0, -1)
