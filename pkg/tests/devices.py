"""Reference devices shared by the test modules."""
from magnomech import model
from magnomech.model import SystemParams


def reference():
    return SystemParams.reference_device()


def deep_resolved(factor=10.0):
    """Triple-resonance device with the phonon frequency raised ``factor`` times."""
    p = SystemParams.reference_device()
    return p.replace(omega_b=p.omega_b * factor).triple_resonance()


def split_device(g_ma_over_omega_b=1.0):
    """Reference linewidths, magnon on the cavity, hybrid splitting larger than omega_b."""
    p = SystemParams.reference_device()
    return p.replace(g_ma=g_ma_over_omega_b * p.omega_b)


def power_for_cooperativity(params, drive_fn, probe, C):
    """Drive power giving cooperativity ``C`` (C is linear in power)."""
    ref = drive_fn(1e-3)
    return 1e-3 * C / model.probe_cooperativity(params, ref, probe)


def triple_power(params, branch, C):
    probe, _ = model.triple_resonance_drive(params, branch, 1e-3)
    return power_for_cooperativity(
        params, lambda p: model.triple_resonance_drive(params, branch, p)[1], probe, C)


def sideband_power(params, branch, C):
    probe = model.MINUS if branch == "red" else model.PLUS
    return power_for_cooperativity(
        params, lambda p: model.locked_drive(params, probe, branch, p), probe, C)


def symmetric(p):
    """Copy with kappa_m = kappa_a."""
    return p.replace(kappa_m=p.kappa_a)

