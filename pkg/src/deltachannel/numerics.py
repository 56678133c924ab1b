"""
Propagation of single-channel wave states.

A state is the pair (psi, psi') of one channel at a point. propagate() carries
it across an interval of the homogeneous equation

    psi'' = (2m / hbar^2) (V(x) - E) psi

either in closed form, when the potential is constant on every piece, or with
scipy.integrate.solve_ivp. The interval is cut at the potential's breakpoints
and every chunk_length. Within a piece the state is renormalized whenever its
size has changed by more than exp(MAX_LOG_GROWTH): flat pieces are split into
sub-steps with kappa * length bounded by it, and solve_ivp stops on a terminal
event and restarts. The discarded magnitude is accumulated in log_scale, so
growing solutions of deep or stiff closed regions never overflow. The true
state is state * exp(log_scale).

This is the one integrator shared by the Green's functions, the effective
single-channel solver and the coupled-channel oracle.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from deltachannel.errors import IntegrationFailure

# largest change of log|state| between renormalizations
MAX_LOG_GROWTH = 40.0

# solve_ivp methods that accept complex states
SOLVER_METHODS = ("RK45", "RK23", "DOP853", "Radau", "BDF")


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-10
    atol: float = 1e-10
    method: str = "DOP853"
    # longest piece between cuts; rescaling inside a piece follows MAX_LOG_GROWTH
    chunk_length: float = 10.0
    pole_tol: float = 1e-8
    wronskian_tol: float = 1e-8
    condition_limit: float = 1e12
    # closed-form transfer matrices on piecewise-constant channels
    prefer_analytic: bool = True
    check_wronskian: bool = True


class Propagated(NamedTuple):
    state: np.ndarray
    log_scale: float

    @property
    def psi(self):
        return self.state[0]

    @property
    def dpsi(self):
        return self.state[1]


def free_transfer(q2, length):
    """
    Transfer matrix of psi'' = q2 psi across a region of the given length.

    Args:
        q2 (complex): (2m / hbar^2)(V - E) of the region.
        length (float): Signed length; negative propagates leftwards.

    Returns:
        numpy.ndarray: 2x2 complex matrix mapping (psi, psi') at the start
        to (psi, psi') at the end.
    """
    q = np.sqrt(complex(q2))
    qd = q * length
    if abs(qd) < 1e-8:
        # series limit q -> 0
        cosh_qd = 1.0 + qd ** 2 / 2
        sinh_over_q = length * (1.0 + qd ** 2 / 6)
    else:
        cosh_qd = np.cosh(qd)
        sinh_over_q = np.sinh(qd) / q
    return np.array([[cosh_qd, sinh_over_q],
                     [q2 * sinh_over_q, cosh_qd]], dtype=complex)


def _cut_points(potential, x_from, x_to, chunk_length):
    """
    Ordered points from x_from to x_to at which propagation is interrupted.

    Returns:
        list: Points in the direction of travel, both ends included.
    """
    lo, hi = min(x_from, x_to), max(x_from, x_to)
    cuts = {x for x in potential.breakpoints() if lo < x < hi}
    n_chunks = int(np.ceil((hi - lo) / chunk_length)) if chunk_length > 0 else 1
    cuts.update(np.linspace(lo, hi, n_chunks + 1)[1:-1].tolist())
    points = sorted(cuts, reverse=x_to < x_from)
    return [x_from] + points + [x_to]


def _normalized(state, x):
    """Split a state into its unit-maximum direction and the log of its size."""
    if not np.isfinite(state).all():
        raise IntegrationFailure(f"state is no longer finite at x={x:.6g}")
    norm = np.max(np.abs(state))
    if norm == 0:
        return state, 0.0
    return state / norm, float(np.log(norm))


def _transfer_piece(q2, a, b, state):
    """
    Carry a state across a flat piece, in sub-steps of bounded growth.

    Returns:
        tuple: (normalized state at b, log-scale gained).
    """
    kappa = abs(np.sqrt(complex(q2)).real)
    n_steps = max(1, int(np.ceil(kappa * abs(b - a) / MAX_LOG_GROWTH)))
    transfer = free_transfer(q2, (b - a) / n_steps)
    log_scale = 0.0
    for i in range(n_steps):
        state, gained = _normalized(transfer @ state, a + (i + 1) * (b - a) / n_steps)
        log_scale += gained
    return state, log_scale


def _integrate_piece(potential, energy, factor, a, b, state, config):
    """
    Integrate one piece with solve_ivp, keeping V evaluations inside (a, b).

    Integration stops whenever the state has grown or shrunk by exp(MAX_LOG_GROWTH)
    and restarts from the renormalized state.

    Returns:
        tuple: (normalized state at b, log-scale gained).
    """
    lo, hi = min(a, b), max(a, b)
    # stay off the endpoints so a step at a breakpoint is seen from inside the piece
    margin = 1e-9 * (hi - lo)

    def rhs(x, y):
        v = potential.value(min(max(x, lo + margin), hi - margin))
        return [y[1], factor * (v - energy) * y[0]]

    def rescale(x, y):
        return MAX_LOG_GROWTH - abs(np.log(max(np.max(np.abs(y)), 1e-300)))
    rescale.terminal = True

    x, log_scale = a, 0.0
    state, gained = _normalized(state, a)
    while True:
        sol = solve_ivp(rhs, (x, b), state, method=config.method,
                        rtol=config.rtol, atol=config.atol, events=rescale)
        if sol.status == -1:
            raise IntegrationFailure(f"integration from {x:.6g} to {b:.6g} failed: {sol.message}")
        if sol.status == 0:
            state, last = _normalized(sol.y[:, -1], b)
            return state, log_scale + gained + last
        x_event = float(sol.t_events[0][-1])
        if x_event == x:
            raise IntegrationFailure(f"integration stalled at x={x:.6g}")
        state, step = _normalized(sol.y_events[0][-1], x_event)
        log_scale += step
        if x_event == b:
            return state, log_scale + gained
        x = x_event


def propagate(potential, energy, units, x_from, x_to, state, config, analytic=False):
    """
    Carry a (psi, psi') state of one channel from x_from to x_to.

    Args:
        potential (PotentialSpec): Channel potential.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.
        x_from (float): Start point.
        x_to (float): End point; may lie left of x_from.
        state (array-like): (psi, psi') at x_from.
        config (IntegratorConfig): Tolerances and chunking.
        analytic (bool, optional): Use closed-form transfer matrices. Only
            valid for piecewise-constant potentials.

    Returns:
        Propagated: Normalized state at x_to and the accumulated log-scale.

    Raises:
        IntegrationFailure: If solve_ivp reports failure or the state stops
            being finite.
    """
    state = np.asarray(state, dtype=complex)
    log_scale = 0.0
    if x_from == x_to:
        return Propagated(state, log_scale)
    factor = units.factor
    points = _cut_points(potential, x_from, x_to, config.chunk_length)
    for a, b in zip(points[:-1], points[1:]):
        if a == b:
            continue
        if analytic:
            q2 = factor * (potential.value(0.5 * (a + b)) - energy)
            state, gained = _transfer_piece(q2, a, b, state)
        else:
            state, gained = _integrate_piece(potential, energy, factor, a, b, state, config)
        log_scale += gained
    return Propagated(state, log_scale)


def use_analytic(potential, config):
    """
    Whether a channel may be propagated with closed-form transfer matrices.

    Args:
        potential (PotentialSpec): Channel potential.
        config (IntegratorConfig): Numeric settings.

    Returns:
        bool: True for piecewise-constant potentials when prefer_analytic is set.
    """
    return config.prefer_analytic and potential.piecewise_constant


def wronskian(left, right):
    """
    Wronskian u_left * u_right' - u_left' * u_right of two states at one point.

    Args:
        left (array-like): (u, u') of the left solution.
        right (array-like): (u, u') of the right solution.

    Returns:
        complex: The Wronskian.
    """
    return left[0] * right[1] - left[1] * right[0]
