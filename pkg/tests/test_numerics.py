"""
This module contains tests for single-channel propagation.

The tests include:
- Closed-form transfer matrices for free and flat regions.
- Agreement of transfer matrices and numeric integration.
- Log-scale bookkeeping for growing solutions, also across deep closed regions.
- Refusing states that are no longer finite.
- The Wronskian helper.
"""

import numpy as np
import pytest

from deltachannel.errors import IntegrationFailure
from deltachannel.model import Constant, Step, Tabulated
from deltachannel.numerics import IntegratorConfig, free_transfer, propagate, use_analytic, wronskian


def true_state(step):
    """Undo the normalization of a propagated state."""
    return step.state * np.exp(step.log_scale)


def test_free_transfer_carries_plane_wave():
    """
    GIVEN the transfer matrix of a region with k = 1
    WHEN it is applied to (1, i), the state of e^{ix} at x = 0
    THEN the result should be e^{ix} at x = d
    """
    d = 2.7
    state = free_transfer(-1.0, d) @ np.array([1.0, 1j])

    assert state == pytest.approx(np.exp(1j * d) * np.array([1.0, 1j]), abs=1e-12)


def test_free_transfer_at_zero_wavenumber():
    """
    GIVEN a region where V = E
    WHEN its transfer matrix is built
    THEN it should be the linear-solution matrix [[1, d], [0, 1]]
    """
    assert free_transfer(0.0, 3.0) == pytest.approx(np.array([[1.0, 3.0], [0.0, 1.0]]))


def test_propagate_leftwards(units, quad):
    """
    GIVEN e^{ix} sampled at x = 5
    WHEN it is propagated to x = -5 with transfer matrices
    THEN it should equal e^{ix} sampled at x = -5
    """
    start = np.exp(5j) * np.array([1.0, 1j])

    step = propagate(Constant(0.0), 0.5, units, 5.0, -5.0, start, quad, analytic=True)

    assert true_state(step) == pytest.approx(np.exp(-5j) * np.array([1.0, 1j]), abs=1e-12)


@pytest.mark.parametrize("energy", [0.1, 0.5, 1.3])
def test_transfer_matches_integration(units, quad, energy):
    """
    GIVEN a step potential with its edge inside the interval
    WHEN a state is propagated with transfer matrices and with solve_ivp
    THEN both results should agree to 1e-8
    """
    potential = Step(0.0, 0.3, 1.0)
    start = np.array([1.0, 1j])

    analytic = propagate(potential, energy, units, -5.0, 5.0, start, quad, analytic=True)
    numeric = propagate(potential, energy, units, -5.0, 5.0, start, quad, analytic=False)

    assert true_state(numeric) == pytest.approx(true_state(analytic), rel=1e-8, abs=1e-8)


@pytest.mark.parametrize("analytic", [True, False])
def test_growing_solution_keeps_its_scale(units, quad, analytic):
    """
    GIVEN a closed region with kappa = 1 and the growing solution e^{x}
    WHEN it is propagated across 50 units of length
    THEN the state should stay normalized and the log-scale should be 50
    """
    step = propagate(Constant(1.0), 0.5, units, 0.0, 50.0, [1.0, 1.0], quad, analytic)

    assert np.max(np.abs(step.state)) == pytest.approx(1.0)
    assert step.log_scale + np.log(abs(step.psi)) == pytest.approx(50.0, rel=1e-8)
    assert step.dpsi / step.psi == pytest.approx(1.0, rel=1e-8)


def test_propagate_to_same_point(units, quad):
    """
    GIVEN a state
    WHEN it is propagated over an empty interval
    THEN it should come back unchanged with zero log-scale
    """
    step = propagate(Constant(0.0), 0.5, units, 1.0, 1.0, [2.0, 3.0], quad)

    assert step.state == pytest.approx([2.0, 3.0])
    assert step.log_scale == 0.0


def test_use_analytic():
    """
    GIVEN piecewise-constant and smooth potentials
    WHEN the propagation method is chosen
    THEN transfer matrices should be used only for piecewise-constant ones
    and only when prefer_analytic is set
    """
    assert use_analytic(Step(0.0, 1.0), IntegratorConfig())
    assert not use_analytic(Step(0.0, 1.0), IntegratorConfig(prefer_analytic=False))
    assert not use_analytic(Tabulated(((0.0, 0.0), (1.0, 1.0))), IntegratorConfig())


def test_wronskian():
    """
    GIVEN the states (1, 0) and (0, 1)
    WHEN their Wronskian is formed
    THEN it should be 1, and -1 with the arguments swapped
    """
    assert wronskian([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert wronskian([0.0, 1.0], [1.0, 0.0]) == -1.0


@pytest.mark.parametrize("analytic", [True, False])
def test_deep_closed_region_does_not_overflow(units, quad, analytic):
    """
    GIVEN a closed region with kappa = 100, far deeper than one chunk can hold
    WHEN the growing solution is propagated across 20 units of length
    THEN the state should stay finite and the log-scale should be 2000
    """
    step = propagate(Constant(5000.5), 0.5, units, 0.0, 20.0, [1.0, 100.0], quad, analytic)

    assert np.isfinite(step.state).all()
    assert np.max(np.abs(step.state)) == pytest.approx(1.0)
    assert step.log_scale + np.log(abs(step.psi)) == pytest.approx(2000.0, rel=1e-8)
    assert step.dpsi / step.psi == pytest.approx(100.0, rel=1e-8)


@pytest.mark.parametrize("analytic", [True, False])
def test_non_finite_state_raises(units, quad, analytic):
    """
    GIVEN a state that is not finite
    WHEN it is propagated
    THEN an IntegrationFailure should be raised instead of returning nan
    """
    with pytest.raises(IntegrationFailure):
        propagate(Constant(0.0), 0.5, units, 0.0, 1.0, [np.nan, 0.0], quad, analytic)
