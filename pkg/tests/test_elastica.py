import numpy as np
import pytest

from magnomech.elastica import (ANCHOR_DIAMETER, COUPLING_ANCHOR, COUPLING_CEILING, ElasticSphere,
                                calibrate_velocity, characteristic, coupling_vs_diameter,
                                dimensionless_roots, mode_catalog, spheroidal_frequency)
from magnomech.errors import RootBracketError, ValidationError
from magnomech.units import TWO_PI


def poisson_ratio(nu):
    """v_T/v_L for Poisson ratio ``nu``."""
    return np.sqrt((1 - 2 * nu) / (2 * (1 - nu)))


class TestCharacteristic:
    def test_tabulated_roots(self):
        # classical values for nu = 1/4 in shear units (omega a / v_T)
        vr = poisson_ratio(0.25)
        assert dimensionless_roots(2, vr, 1)[0] == pytest.approx(2.6399, abs=2e-4)
        assert dimensionless_roots(0, vr, 1)[0] == pytest.approx(4.4400, abs=2e-4)

    def test_breathing_mode_equation(self):
        # l = 0: tan(xi) = xi / (1 - (xi/2)^2 (v_L/v_T)^2)
        vr = poisson_ratio(0.3)
        eta = dimensionless_roots(0, vr, 1)[0]
        xi = eta * vr
        assert np.tan(xi) == pytest.approx(xi / (1 - 0.25 * xi**2 / vr**2), rel=1e-8)

    def test_vectorized(self):
        vr = 0.53
        eta = np.linspace(0.5, 10, 7)
        vec = characteristic(eta, 2, vr)
        assert np.allclose(vec, [characteristic(e, 2, vr) for e in eta])

    def test_root_exhaustion(self):
        with pytest.raises(RootBracketError):
            dimensionless_roots(2, 0.53, 50, eta_max=10.0)


class TestFrequencies:
    def test_literature_constants_close(self):
        f = spheroidal_frequency(ElasticSphere(ANCHOR_DIAMETER), 1, 2)
        # uncalibrated room-temperature YIG constants land ~13% above the anchor
        assert 0.85 < 11.42e6 / f < 1.0

    def test_calibration(self):
        s = calibrate_velocity(ElasticSphere(ANCHOR_DIAMETER))
        assert spheroidal_frequency(s, 1, 2) == pytest.approx(11.42e6, rel=1e-12)
        assert s.velocity_ratio == pytest.approx(ElasticSphere(1.0).velocity_ratio)

    def test_half_at_double_diameter(self):
        s = calibrate_velocity(ElasticSphere(ANCHOR_DIAMETER)).with_diameter(500e-6)
        assert spheroidal_frequency(s, 1, 2) == pytest.approx(5.71e6, rel=1e-3)

    def test_velocity_scaling(self):
        s = ElasticSphere(1e-3)
        assert spheroidal_frequency(s.scaled_velocities(2), 2, 3) == pytest.approx(
            2 * spheroidal_frequency(s, 2, 3), rel=1e-12)

    @pytest.mark.parametrize("field,value", [("diameter", 0.0), ("density", -1.0)])
    def test_validation(self, field, value):
        kw = {"diameter": 1e-3, field: value}
        with pytest.raises(ValidationError):
            ElasticSphere(**kw)

    def test_velocity_order(self):
        with pytest.raises(ValidationError):
            ElasticSphere(1e-3, v_longitudinal=1000, v_transverse=2000)


class TestCatalog:
    def test_degeneracy_and_order(self):
        s = calibrate_velocity(ElasticSphere(ANCHOR_DIAMETER))
        cat = mode_catalog(s, 5, 4)
        for l in range(6):
            for n in range(1, 5):
                assert sum(1 for m in cat if (m.n, m.l) == (n, l)) == 2 * l + 1
            f = [next(m.frequency for m in cat if (m.n, m.l) == (n, l)) for n in range(1, 5)]
            assert np.all(np.diff(f) > 0)
        freqs = [m.frequency for m in cat]
        assert freqs == sorted(freqs)

    def test_s12_lowest_quadrupole(self):
        s = calibrate_velocity(ElasticSphere(ANCHOR_DIAMETER))
        quads = [m for m in mode_catalog(s, 4, 3) if m.l == 2]
        assert min(quads, key=lambda m: m.frequency).n == 1
        assert quads[0].frequency == pytest.approx(11.42e6)

    def test_limit(self):
        with pytest.raises(ValidationError):
            mode_catalog(ElasticSphere(1e-3), 11, 1)


class TestCoupling:
    def test_anchor(self):
        assert coupling_vs_diameter(ANCHOR_DIAMETER) / TWO_PI == pytest.approx(4.1e-3)

    def test_monotone(self):
        g = coupling_vs_diameter(np.geomspace(50e-6, 5e-3, 20), exponent=1.5)
        assert np.all(np.diff(g) < 0)

    def test_ceiling(self):
        assert coupling_vs_diameter(ANCHOR_DIAMETER) <= COUPLING_CEILING
        with pytest.raises(ValidationError):
            coupling_vs_diameter(ANCHOR_DIAMETER, g0=1.1 * COUPLING_CEILING)
        assert COUPLING_ANCHOR < COUPLING_CEILING

    def test_bad_diameter(self):
        with pytest.raises(ValidationError):
            coupling_vs_diameter(0.0)
