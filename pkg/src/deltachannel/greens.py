"""
Point Green's functions G_n^0(x_n, x_n; E) of uncoupled channels.

G is the coincident-point element of [E - H_nn]^-1 with outgoing waves on open
sides and decaying waves on closed sides. With u_left satisfying the left
boundary condition and u_right the right one,

    G(x, x) = (2m / hbar^2) u_left(x) u_right(x) / W,   W = u_left u_right' - u_left' u_right

which for a constant potential reduces to -i m / (hbar^2 k) above the
threshold and -m / (hbar^2 kappa) below it.

Functions:
- greens_constant(v0, E, units): closed form for a constant potential.
- greens_point_numeric(p, x_pt, E, units, quad, box): two-solution construction.
- greens_point(p, x_pt, E, units, quad, box): analytic fast path or numeric.
"""

from dataclasses import dataclass

import numpy as np

from deltachannel.errors import PoleProximity
from deltachannel.log import get_logger
from deltachannel.model import LEFT, RIGHT, Closed, Constant, Open, channel_openness
from deltachannel.numerics import IntegratorConfig, propagate, wronskian

logger = get_logger(__name__)

ANALYTIC = "analytic"
NUMERIC = "numeric"


@dataclass(frozen=True)
class GreensPointValue:
    value: complex
    left_asym: object
    right_asym: object
    method: str
    wronskian_drift: float = 0.0

    @property
    def openness(self):
        """Label such as 'open/closed' for the left and right asymptotes."""
        return f"{self.left_asym.label}/{self.right_asym.label}"


@dataclass(frozen=True)
class BasisSolutionPair:
    """u_left and u_right as (u, u') at one point, with their Wronskian."""

    u_left: np.ndarray
    u_right: np.ndarray
    wronskian: complex


def greens_constant(v0, energy, units):
    """
    Point Green's function of a constant potential.

    Args:
        v0 (float): The constant potential.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.

    Returns:
        GreensPointValue: -i m/(hbar^2 k) if open, -m/(hbar^2 kappa) if closed.

    Raises:
        ThresholdSingularity: If E sits on v0.
    """
    asym = channel_openness(Constant(v0), energy, LEFT, units)
    scale = units.mass / units.hbar ** 2
    if isinstance(asym, Open):
        value = -1j * scale / asym.k
    else:
        value = complex(-scale / asym.kappa)
    return GreensPointValue(value, asym, asym, ANALYTIC)


def _boundary_state(asym, side):
    """
    (u, u') at a box edge for the outgoing or decaying solution on that side.

    Open sides use e^{-ikx} on the left and e^{+ikx} on the right; closed sides
    use e^{+kappa x} on the left and e^{-kappa x} on the right, all with unit
    value at the edge.
    """
    sign = -1.0 if side == LEFT else 1.0
    if isinstance(asym, Open):
        return np.array([1.0, sign * 1j * asym.k], dtype=complex)
    return np.array([1.0, -sign * asym.kappa], dtype=complex)


def basis_pair(p, x_pt, energy, units, quad, box, left_asym, right_asym):
    """
    Propagate the left and right boundary solutions to x_pt.

    Returns:
        tuple: (BasisSolutionPair, log-scale of u_left, log-scale of u_right).
    """
    x_min, x_max = box
    left = propagate(p, energy, units, x_min, x_pt, _boundary_state(left_asym, LEFT), quad)
    right = propagate(p, energy, units, x_max, x_pt, _boundary_state(right_asym, RIGHT), quad)
    pair = BasisSolutionPair(left.state, right.state, wronskian(left.state, right.state))
    return pair, left.log_scale, right.log_scale


def _wronskian_drift(p, x_pt, energy, units, quad, box, pair, log_left, log_right,
                     left_asym, right_asym):
    """
    Largest relative change of the Wronskian between x_pt and the box edges.

    Each solution is carried on to the opposite edge and the Wronskian is formed
    there against the other solution's boundary data.
    """
    x_min, x_max = box
    right_on = propagate(p, energy, units, x_pt, x_min, pair.u_right, quad)
    left_on = propagate(p, energy, units, x_pt, x_max, pair.u_left, quad)
    at_min = wronskian(_boundary_state(left_asym, LEFT), right_on.state)
    at_max = wronskian(left_on.state, _boundary_state(right_asym, RIGHT))
    # true W at x_pt carries exp(log_left + log_right); at x_min u_left is
    # unscaled and u_right carries exp(log_right + right_on.log_scale)
    ratio_min = at_min / pair.wronskian * np.exp(right_on.log_scale - log_left)
    ratio_max = at_max / pair.wronskian * np.exp(left_on.log_scale - log_right)
    return float(max(abs(ratio_min - 1.0), abs(ratio_max - 1.0)))


def greens_point_numeric(p, x_pt, energy, units, quad=IntegratorConfig(), box=(-20.0, 20.0)):
    """
    Point Green's function of an arbitrary potential by the two-solution method.

    Args:
        p (PotentialSpec): Channel potential.
        x_pt (float): Evaluation point, strictly inside the box.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.
        quad (IntegratorConfig, optional): Integrator settings.
        box (tuple, optional): (x_min, x_max) of the computational box.

    Returns:
        GreensPointValue: method="numeric".

    Raises:
        ThresholdSingularity: If E sits on an asymptote.
        PoleProximity: If E is at or near a bound state of the channel.
        IntegrationFailure: If the integrator fails.
    """
    left_asym = channel_openness(p, energy, LEFT, units, box)
    right_asym = channel_openness(p, energy, RIGHT, units, box)
    pair, log_left, log_right = basis_pair(p, x_pt, energy, units, quad, box, left_asym, right_asym)

    u_l, u_r = pair.u_left, pair.u_right
    size = abs(u_l[0]) * abs(u_r[1]) + abs(u_l[1]) * abs(u_r[0])
    if abs(pair.wronskian) < quad.pole_tol * size:
        raise PoleProximity(f"energy {energy:.12g} is at a bound state (|W| = {abs(pair.wronskian):.3g})")

    # exp(log) scales of u_left and u_right cancel between numerator and W
    value = complex(units.factor * u_l[0] * u_r[0] / pair.wronskian)
    if isinstance(left_asym, Closed) and isinstance(right_asym, Closed):
        value = complex(value.real, 0.0)

    drift = 0.0
    if quad.check_wronskian:
        drift = _wronskian_drift(p, x_pt, energy, units, quad, box, pair, log_left, log_right,
                                 left_asym, right_asym)
        if drift > quad.wronskian_tol:
            logger.warning("Wronskian drift %.3g at E=%.12g exceeds %.3g",
                           drift, energy, quad.wronskian_tol)
    logger.debug("G(%.6g, %.6g; %.12g) = %s", x_pt, x_pt, energy, value)
    return GreensPointValue(value, left_asym, right_asym, NUMERIC, drift)


def greens_point(p, x_pt, energy, units, quad=IntegratorConfig(), box=(-20.0, 20.0)):
    """
    Point Green's function with the analytic fast path for constant potentials.

    Args:
        p (PotentialSpec): Channel potential.
        x_pt (float): Evaluation point.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.
        quad (IntegratorConfig, optional): Integrator settings.
        box (tuple, optional): (x_min, x_max).

    Returns:
        GreensPointValue: method "analytic" for Constant, "numeric" otherwise.
    """
    if isinstance(p, Constant):
        return greens_constant(p.v0, energy, units)
    return greens_point_numeric(p, x_pt, energy, units, quad, box)
