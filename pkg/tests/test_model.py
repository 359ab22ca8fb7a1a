import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import devices
from magnomech import model, units
from magnomech.errors import ValidationError
from magnomech.model import MINUS, PLUS, DriveTone, SystemParams
from magnomech.units import TWO_PI, hbar


class TestUnits:
    @given(st.floats(-80, 60))
    def test_dbm_round_trip(self, dbm):
        back = units.watts_to_dbm(units.dbm_to_watts(dbm))
        assert back == pytest.approx(dbm, rel=1e-12, abs=1e-12)

    @given(st.floats(1e-3, 5.0))
    def test_field_round_trip(self, H):
        w = model.magnon_frequency(H)
        assert model.field_for_frequency(w) == pytest.approx(H, rel=1e-12)

    def test_linewidth_convention(self):
        assert units.fwhm_hz_to_half_rate(2.0) == pytest.approx(TWO_PI)
        assert units.half_rate_to_fwhm_hz(math.pi * 300) == pytest.approx(300)

    def test_zero_dbm(self):
        assert units.dbm_to_watts(0.0) == pytest.approx(1e-3)


class TestParams:
    def test_reference_device(self):
        p = SystemParams.reference_device()
        assert p.omega_a / TWO_PI == pytest.approx(7.86e9)
        assert p.kappa_a / math.pi == pytest.approx(3.35e6)
        assert p.kappa_e == pytest.approx(p.kappa_a / 2)
        assert 2 * p.g_ma == pytest.approx(p.omega_b)

    @pytest.mark.parametrize("name", ["omega_a", "kappa_a", "kappa_m", "omega_b", "kappa_b"])
    def test_positive(self, name):
        with pytest.raises(ValidationError) as err:
            SystemParams.reference_device(**{name: 0.0})
        assert err.value.field == name

    def test_external_exceeds_total(self):
        p = SystemParams.reference_device()
        with pytest.raises(ValidationError):
            p.replace(kappa_e=1.01 * p.kappa_a)

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            SystemParams.reference_device(g_mb=float("nan"))

    def test_drive_validation(self):
        with pytest.raises(ValidationError):
            DriveTone(1e9, -1.0)
        with pytest.raises(ValidationError):
            DriveTone(0.0, 1.0)


class TestMagnonFrequency:
    def test_linear(self):
        assert model.magnon_frequency(0.4) == pytest.approx(2 * model.magnon_frequency(0.2))

    def test_resonant_field(self):
        assert model.magnon_frequency(0.2807) / TWO_PI == pytest.approx(7.86e9, rel=1e-3)

    @pytest.mark.parametrize("H", [0.0, -0.1])
    def test_non_positive(self, H):
        with pytest.raises(ValidationError):
            model.magnon_frequency(H)


class TestHybridize:
    def test_symmetric_point(self):
        p = devices.reference()
        b = model.hybridize(p)
        assert b.theta == pytest.approx(math.pi / 4)
        assert b.splitting == pytest.approx(2 * p.g_ma)
        assert b.kappa_plus == pytest.approx(0.5 * (p.kappa_a + p.kappa_m))
        assert b.kappa_minus == pytest.approx(b.kappa_plus)
        assert b.photon_amplitude(PLUS) == pytest.approx(1 / math.sqrt(2))
        assert b.magnon_amplitude(PLUS) == pytest.approx(1 / math.sqrt(2))
        assert b.photon_amplitude(MINUS) == pytest.approx(-1 / math.sqrt(2))

    def test_reference_linewidths_resolved(self):
        p = devices.reference()
        b = model.hybridize(p)
        assert 2 * b.kappa_plus / TWO_PI == pytest.approx(2.235e6)
        assert b.resolved_sideband(p.omega_b)

    def test_decoupling_limit(self):
        p = devices.reference()
        far = p.replace(omega_m=p.omega_a - 100 * p.g_ma)
        b = model.hybridize(far)
        assert b.theta == pytest.approx(0.01, rel=1e-3)
        assert b.kappa_plus == pytest.approx(p.kappa_a, rel=1e-3)
        assert b.omega_plus == pytest.approx(p.omega_a + p.g_ma / 100, rel=1e-9)

    @settings(max_examples=200)
    @given(g=st.floats(1e5, 1e9), delta=st.floats(-1e10, 1e10))
    def test_invariants(self, g, delta):
        p = devices.reference().replace(g_ma=g, omega_m=devices.reference().omega_a + delta)
        b = model.hybridize(p)
        assert b.splitting == pytest.approx(math.sqrt(4 * g**2 + delta**2), rel=1e-9)
        assert b.kappa_plus + b.kappa_minus == pytest.approx(p.kappa_a + p.kappa_m, rel=1e-12)
        assert b.omega_plus > b.omega_minus
        assert 0 < b.theta < math.pi / 2
        assert b.magnon_weight(PLUS) + b.magnon_weight(MINUS) == pytest.approx(1.0)

    @settings(max_examples=100)
    @given(g=st.floats(1e6, 1e8), delta=st.floats(-1e9, 1e9))
    def test_eigenvectors(self, g, delta):
        # hybrid modes diagonalize the coupled photon-magnon matrix
        p = devices.reference().replace(g_ma=g, omega_m=devices.reference().omega_a + delta)
        b = model.hybridize(p)
        H = np.array([[p.omega_a, g], [g, p.omega_m]])
        for k in (PLUS, MINUS):
            v = np.array([b.photon_amplitude(k), b.magnon_amplitude(k)])
            assert np.allclose(H @ v, b.omega(k) * v, rtol=1e-12, atol=1e-12 * p.omega_a)

    def test_needs_coupling(self):
        with pytest.raises(ValidationError):
            model.hybridize(devices.reference().replace(g_ma=0.0))


class TestDriveResponse:
    def test_zero_power(self):
        p = devices.reference()
        r = model.drive_response(p, DriveTone(p.omega_a, 0.0))
        assert r.amp_plus == 0 and r.amp_minus == 0 and r.C_plus == 0

    def test_resonant_critical(self):
        # on resonance with kappa_e,+ = kappa_+/2: |A|^2 = P/(hbar omega_d kappa_+)
        p = devices.reference().replace(kappa_m=devices.reference().kappa_a, kappa_e=devices.reference().kappa_a)
        b = model.hybridize(p)
        assert b.kappa_e_plus == pytest.approx(b.kappa_plus / 2)
        d = DriveTone(b.omega_plus, 1e-3)
        A = model.steady_state_amplitude(p, b, d).amp_plus
        assert abs(A) ** 2 == pytest.approx(1e-3 / (hbar * d.omega_d * b.kappa_plus), rel=1e-12)

    def test_power_scaling(self):
        p = devices.reference()
        d = DriveTone(p.omega_a, 1e-3)
        r1 = model.drive_response(p, d)
        r4 = model.drive_response(p, d.with_power(4e-3))
        assert abs(r4.amp_plus) == pytest.approx(2 * abs(r1.amp_plus))
        assert r4.G_minus == pytest.approx(2 * r1.G_minus)

    def test_symmetric_coupling(self):
        p = devices.reference()
        b = model.hybridize(p)
        r = model.drive_response(p, DriveTone(p.omega_a + 1e6, 1e-3))
        assert r.G_plus == pytest.approx(abs(r.amp_plus) * p.g_mb / 2)
        assert r.G_minus == pytest.approx(abs(r.amp_minus) * p.g_mb / 2)
        assert r.C_plus == pytest.approx(r.G_plus**2 / (b.kappa_plus * p.kappa_b))

    def test_photon_like_mode_decouples(self):
        p = devices.reference()
        far = p.replace(omega_m=p.omega_a - 1000 * p.g_ma)
        r = model.drive_response(far, DriveTone(far.omega_a, 1e-3))
        assert r.G_plus / (abs(r.amp_plus) * p.g_mb) < 1e-5

    def test_enhanced_coupling_order(self):
        # 0 dBm, triple resonance, no line loss: G/2pi is several kHz and
        # G/kappa_b is tens, the same orders as the quoted ~30 kHz and ~10^2
        p = devices.reference()
        probe, d = model.triple_resonance_drive(p, "red", 1e-3)
        G = model.probe_coupling(p, d, probe)
        assert 1e3 < G / TWO_PI < 1e5
        assert 10 < G / p.kappa_b < 1e3

    @settings(max_examples=50)
    @given(delta=st.floats(-3e7, 3e7), power=st.floats(1e-6, 1e-1))
    def test_nonnegative(self, delta, power):
        p = devices.reference()
        r = model.drive_response(p, DriveTone(p.omega_a + delta, power))
        assert r.G_plus >= 0 and r.G_minus >= 0 and r.C_plus >= 0 and r.C_minus >= 0

    def test_magnon_reconstruction(self):
        # with kappa_a = kappa_m the hybrid amplitudes reproduce the linear magnon state
        from magnomech.dynamics import core
        p = devices.symmetric(devices.reference()).replace(g_mb=0.0)
        d = DriveTone(p.omega_a + 3e6, 1e-3)
        b = model.hybridize(p)
        m = model.magnon_steady_state(b, model.steady_state_amplitude(p, b, d))
        assert m == pytest.approx(core.steady_state(p, d).m, rel=1e-10)


class TestDriveGeometry:
    def test_triple_resonance(self):
        p = devices.reference()
        b = model.hybridize(p)
        probe, d = model.triple_resonance_drive(p, "red", 1e-3)
        assert probe == PLUS
        assert d.omega_d == pytest.approx(b.omega_minus)
        probe, d = model.triple_resonance_drive(p, "blue", 1e-3)
        assert probe == MINUS
        assert d.omega_d == pytest.approx(b.omega_plus)

    def test_branch_check(self):
        with pytest.raises(ValidationError):
            model.locked_drive(devices.reference(), PLUS, "green", 1e-3)

    def test_mode_labels(self):
        b = model.hybridize(devices.reference())
        assert b.omega("+") == b.omega(PLUS)
        with pytest.raises(ValidationError):
            b.omega(0)
