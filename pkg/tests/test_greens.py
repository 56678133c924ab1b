"""
This module contains tests for point Green's functions.

The tests include:
- Closed forms for constant potentials, open and closed.
- Agreement of the two-solution construction with the closed forms over a grid.
- A step channel, compared with its hand-built Green's function.
- A harmonic channel, closed on both sides, and its ground-state pole.
- Stiff harmonic channels on the default box, against parabolic cylinder functions.
- Dispatch between the analytic and numeric paths.
- Insensitivity to the box size for Morse, linear and exponential channels.
"""

import numpy as np
import pytest
from scipy.special import gamma, pbdv

from deltachannel.errors import PoleProximity, ThresholdSingularity
from deltachannel.greens import (ANALYTIC, NUMERIC, greens_constant, greens_point,
                                 greens_point_numeric)
from deltachannel.model import (Closed, Constant, Exponential, Harmonic, Linear, Morse, Open, Step,
                                Tabulated)
from deltachannel.numerics import IntegratorConfig

TIGHT = IntegratorConfig(rtol=1e-12, atol=1e-12)


def test_constant_open_and_closed(units):
    """
    GIVEN a free channel and a channel at v0 = 1, both at E = 0.5
    WHEN the point Green's function is evaluated
    THEN it should be -i (open, k = 1) and -1 (closed, kappa = 1)
    """
    open_value = greens_constant(0.0, 0.5, units)
    closed_value = greens_constant(1.0, 0.5, units)

    assert open_value.value == pytest.approx(-1j)
    assert open_value.openness == "open/open"
    assert closed_value.value == pytest.approx(-1.0)
    assert closed_value.value.imag == 0.0
    assert closed_value.openness == "closed/closed"


def test_constant_at_threshold(units):
    """
    GIVEN a channel at v0 = 0.5
    WHEN the Green's function is requested at E = 0.5
    THEN a ThresholdSingularity should be raised
    """
    with pytest.raises(ThresholdSingularity):
        greens_constant(0.5, 0.5, units)


@pytest.mark.parametrize("energy", np.linspace(0.05, 2.45, 50))
def test_numeric_matches_constant(units, energy):
    """
    GIVEN a channel at v0 = 1, closed below E = 1 and open above
    WHEN its Green's function is built from two integrated solutions
    THEN it should match the closed form to 1e-8, with a Wronskian drift below 1e-8
    """
    numeric = greens_point_numeric(Constant(1.0), 0.3, energy, units, TIGHT, box=(-10.0, 10.0))
    exact = greens_constant(1.0, energy, units)

    assert numeric.method == NUMERIC
    assert numeric.value == pytest.approx(exact.value, rel=1e-8)
    assert numeric.wronskian_drift < 1e-8


def test_step_channel(units, quad):
    """
    GIVEN a step from 0 to 1 at x = 2 and E = 0.5 (open left, closed right)
    WHEN the Green's function is evaluated at x = 0
    THEN it should match 2 u_L u_R / W built by hand and have Im G < 0
    """
    # u_L = e^{-ix}; u_R = cos(x - 2) - sin(x - 2) left of the step
    u_left = np.array([1.0, -1j])
    u_right = np.array([np.cos(2.0) + np.sin(2.0), np.sin(2.0) - np.cos(2.0)])
    w = u_left[0] * u_right[1] - u_left[1] * u_right[0]
    expected = 2.0 * u_left[0] * u_right[0] / w

    g = greens_point(Step(0.0, 1.0, 2.0), 0.0, 0.5, units, quad)

    assert g.value == pytest.approx(expected, rel=1e-8)
    assert g.value.imag < 0
    assert isinstance(g.left_asym, Open)
    assert isinstance(g.right_asym, Closed)
    assert g.openness == "open/closed"


def test_harmonic_is_real(units):
    """
    GIVEN a harmonic channel, closed on both sides, between its first two levels
    WHEN the Green's function is evaluated
    THEN its imaginary part should vanish
    """
    g = greens_point(Harmonic(1.0), 0.3, 1.0, units, TIGHT, box=(-8.0, 8.0))

    assert g.value.imag == 0.0
    assert g.value.real != 0.0
    assert g.openness == "closed/closed"


def test_harmonic_ground_state_pole(units):
    """
    GIVEN a harmonic channel with omega = 1
    WHEN the Green's function is requested at its ground-state energy 0.5
    THEN a PoleProximity error should be raised
    """
    with pytest.raises(PoleProximity):
        greens_point(Harmonic(1.0), 0.3, 0.5, units, TIGHT, box=(-8.0, 8.0))


@pytest.mark.parametrize("force_const, energy", [(36.0, 6.0), (100.0, 10.0)])
def test_stiff_harmonic_channel(units, quad, force_const, energy):
    """
    GIVEN a stiff harmonic channel on the default box, between two of its levels
    WHEN the Green's function is evaluated with the default and with short chunks
    THEN both should give the same real value
    """
    stiff = Harmonic(force_const)

    g = greens_point(stiff, 0.3, energy, units, quad)
    short = greens_point(stiff, 0.3, energy, units, IntegratorConfig(chunk_length=2.0))

    assert g.openness == "closed/closed"
    assert g.value.imag == 0.0
    assert np.isfinite(g.value.real) and g.value.real != 0.0
    assert g.value == pytest.approx(short.value, rel=1e-6)


def test_stiff_harmonic_value(units, quad):
    """
    GIVEN a harmonic channel with omega = 6 at E = 6, midway between its first two levels
    WHEN the Green's function is evaluated at x = 0.3
    THEN it should match 2 D(z) D(-z) / W built from parabolic cylinder functions
    """
    omega, energy, x = 6.0, 6.0, 0.3
    order = energy / omega - 0.5
    z = np.sqrt(2.0 * omega) * x
    d_plus, _ = pbdv(order, z)
    d_minus, _ = pbdv(order, -z)
    w = np.sqrt(2.0 * omega) * -np.sqrt(2.0 * np.pi) / gamma(-order)

    g = greens_point(Harmonic(omega ** 2), x, energy, units, quad)

    assert g.value.real == pytest.approx(2.0 * d_plus * d_minus / w, rel=1e-6)
    assert g.value.real == pytest.approx(-0.1553, abs=1e-3)


@pytest.mark.parametrize("potential, method", [
    (Constant(0.2), ANALYTIC),
    (Step(0.0, 0.2, 1.0), NUMERIC),
    (Linear(0.1, 0.0, -2.0, 2.0), NUMERIC),
    (Exponential(0.5, 1.0), NUMERIC),
    (Tabulated(((-1.0, 0.0), (1.0, 0.2))), NUMERIC),
    (Morse(1.0, 1.0), NUMERIC),
])
def test_dispatch(units, quad, potential, method):
    """
    GIVEN channels of several kinds
    WHEN greens_point is called
    THEN only constant channels should take the analytic path
    """
    g = greens_point(potential, 0.5, 1.5, units, quad, box=(-4.0, 20.0))

    assert g.method == method
    assert np.isfinite(g.value) and g.value.imag < 0


@pytest.mark.parametrize("potential", [
    Morse(1.0, 0.5),
    Linear(0.1, 0.0, -2.0, 2.0),
    Exponential(0.5, 1.0),
])
def test_box_doubling(units, quad, potential):
    """
    GIVEN a Morse, a linear and an exponential channel, open on the right
    WHEN the box is doubled
    THEN the Green's function should change by less than 1e-6
    """
    small = greens_point(potential, 0.5, 1.5, units, quad, box=(-4.0, 40.0))
    large = greens_point(potential, 0.5, 1.5, units, quad, box=(-8.0, 80.0))

    assert abs(large.value - small.value) < 1e-6 * abs(small.value)
