"""
Exact coupled-channel solution of the star-coupled system.

The full N-channel equations are matched directly, without Green's functions
or effective deltas. Channel n >= 2 is a_n u_n^L(x) left of x_n and
b_n u_n^R(x) right of it, where u_n^L and u_n^R are outgoing (or decaying)
at their box edge. Channel 1 is described by its state (psi_1, psi_1') just
right of every distinct crossing point, linked by propagation between
crossings, by the incident plus reflected wave on the left and by the
transmitted wave on the right. The jump conditions

    psi_1'(x+) - psi_1'(x-) = (2m/hbar^2) sum_n K0_1n psi_n(x)     (n crossing at x)
    psi_n'(x_n+) - psi_n'(x_n-) = (2m/hbar^2) K0_1n psi_1(x_n)

close one square complex linear system, solved once per energy.

Only the model description and the shared propagator are used here.

Functions:
- solve_coupled_exact(model, E, quad): TransitionResult from the full system.
- oracle_unitarity(result): flux-ledger defect of a result.
- oracle_sweep(model, grid, quad, jobs): solve_coupled_exact over a grid.
"""

from dataclasses import dataclass
from functools import partial

import numpy as np

from deltachannel.errors import DeltaChannelError, IncidenceClosed, NumericalBreakdown
from deltachannel.log import get_logger
from deltachannel.model import LEFT, RIGHT, Open, channel_openness
from deltachannel.numerics import IntegratorConfig, propagate, use_analytic
from deltachannel.transition import TransitionResult, sweep_map

logger = get_logger(__name__)

ORACLE = "oracle"


@dataclass
class MatchingSystem:
    """Square complex system matrix @ unknowns = rhs, with its condition estimate."""

    matrix: np.ndarray
    rhs: np.ndarray
    condition: float = np.nan

    def solve(self, condition_limit):
        """
        Solve after scaling every column to unit maximum.

        Args:
            condition_limit (float): Largest acceptable condition number.

        Returns:
            numpy.ndarray: The unknowns.

        Raises:
            NumericalBreakdown: If the scaled matrix is too badly conditioned.
        """
        scale = np.max(np.abs(self.matrix), axis=0)
        scale[scale == 0] = 1.0
        scaled = self.matrix / scale
        self.condition = float(np.linalg.cond(scaled))
        if not self.condition < condition_limit:
            raise NumericalBreakdown(f"matching system has condition number {self.condition:.3g}")
        return np.linalg.solve(scaled, self.rhs) / scale


def _edge_wave(asym, side, x_edge):
    """(psi, psi') at a box edge of the outgoing or decaying wave on that side."""
    direction = -1.0 if side == LEFT else 1.0
    if isinstance(asym, Open):
        phase = np.exp(direction * 1j * asym.k * x_edge)
        return np.array([phase, direction * 1j * asym.k * phase])
    return np.array([1.0, -direction * asym.kappa], dtype=complex)


def _flux(asym, amplitude):
    """Outgoing current |amplitude|^2 k of an edge wave, in units of hbar/m."""
    return asym.k * abs(amplitude) ** 2 if isinstance(asym, Open) else 0.0


def solve_coupled_exact(model, energy, quad=IntegratorConfig()):
    """
    Transition probabilities from the full coupled-channel equations.

    Args:
        model (ScatteringModel): A validated model.
        energy (float): Total energy E.
        quad (IntegratorConfig, optional): Integrator settings.

    Returns:
        TransitionResult: mode="oracle".

    Raises:
        ThresholdSingularity: Channel-tagged, if E sits on an asymptote.
        IncidenceClosed: If channel 1 is closed on the left.
        NumericalBreakdown: If the matching system is ill-conditioned.
    """
    units = model.units
    factor = units.factor
    x_min, x_max = model.box
    p1 = model.channel1

    left1 = channel_openness(p1, energy, LEFT, units, model.box)
    if not isinstance(left1, Open):
        raise IncidenceClosed(f"channel 1 is closed on the left at E={energy:.12g}")
    right1 = channel_openness(p1, energy, RIGHT, units, model.box)
    analytic1 = use_analytic(p1, quad)

    points = sorted({channel.coupling.crossing_point for channel in model.coupled})
    if not points:
        points = [0.5 * (x_min + x_max)]
    n_points = len(points)
    n_channels = len(model.coupled)

    # unknown layout: r', t', (psi, psi') right of each point, (a', b') per channel
    R_COL, T_COL = 0, 1

    def state_col(j):
        return 2 + 2 * j

    def channel_col(i):
        return 2 + 2 * n_points + 2 * i

    size = 2 + 2 * n_points + 2 * n_channels
    matrix = np.zeros((size, size), dtype=complex)
    rhs = np.zeros(size, dtype=complex)

    # Channel-1 waves at the outermost crossings
    phase = np.exp(1j * left1.k * x_min)
    incident = propagate(p1, energy, units, x_min, points[0],
                         np.array([phase, 1j * left1.k * phase]), quad, analytic1)
    reflected = propagate(p1, energy, units, x_min, points[0],
                          _edge_wave(left1, LEFT, x_min), quad, analytic1)
    transmitted = propagate(p1, energy, units, x_max, points[-1],
                            _edge_wave(right1, RIGHT, x_max), quad, analytic1)

    # Coupled-channel edge solutions carried to their crossing
    channel_waves = []
    for i, channel in enumerate(model.coupled):
        try:
            left_n = channel_openness(channel.potential, energy, LEFT, units, model.box)
            right_n = channel_openness(channel.potential, energy, RIGHT, units, model.box)
            analytic_n = use_analytic(channel.potential, quad)
            x_n = channel.coupling.crossing_point
            wave_l = propagate(channel.potential, energy, units, x_min, x_n,
                               _edge_wave(left_n, LEFT, x_min), quad, analytic_n)
            wave_r = propagate(channel.potential, energy, units, x_max, x_n,
                               _edge_wave(right_n, RIGHT, x_max), quad, analytic_n)
        except DeltaChannelError as err:
            raise err.tag(channel.index)
        channel_waves.append((left_n, right_n, wave_l, wave_r))

    row = 0
    for j, x_j in enumerate(points):
        s = state_col(j)
        # value continuity of channel 1 at x_j
        matrix[row, s] = 1.0
        if j == 0:
            matrix[row, R_COL] = -reflected.state[0]
            rhs[row] = incident.state[0] * np.exp(incident.log_scale)
        else:
            transfer = _segment_transfer(p1, energy, units, points[j - 1], x_j, quad, analytic1)
            matrix[row, state_col(j - 1):state_col(j - 1) + 2] = -transfer[0]
        # derivative jump of channel 1 at x_j
        matrix[row + 1, s + 1] = 1.0
        if j == 0:
            matrix[row + 1, R_COL] = -reflected.state[1]
            rhs[row + 1] = incident.state[1] * np.exp(incident.log_scale)
        else:
            matrix[row + 1, state_col(j - 1):state_col(j - 1) + 2] = -transfer[1]
        for i, channel in enumerate(model.coupled):
            if channel.coupling.crossing_point == x_j:
                wave_l = channel_waves[i][2]
                matrix[row + 1, channel_col(i)] = -factor * channel.coupling.bare_strength * wave_l.state[0]
        row += 2

    # transmitted wave right of the last crossing
    last = state_col(n_points - 1)
    matrix[row, last] = 1.0
    matrix[row, T_COL] = -transmitted.state[0]
    matrix[row + 1, last + 1] = 1.0
    matrix[row + 1, T_COL] = -transmitted.state[1]
    row += 2

    for i, channel in enumerate(model.coupled):
        _, _, wave_l, wave_r = channel_waves[i]
        a, b = channel_col(i), channel_col(i) + 1
        j = points.index(channel.coupling.crossing_point)
        # continuity of channel n at x_n
        matrix[row, a] = wave_l.state[0]
        matrix[row, b] = -wave_r.state[0]
        # derivative jump of channel n, driven by psi_1(x_n)
        matrix[row + 1, b] = wave_r.state[1]
        matrix[row + 1, a] = -wave_l.state[1]
        matrix[row + 1, state_col(j)] = -factor * channel.coupling.bare_strength
        row += 2

    system = MatchingSystem(matrix, rhs)
    unknowns = system.solve(quad.condition_limit)
    logger.debug("E=%.12g oracle system size %d, condition %.3g", energy, size, system.condition)

    k_in = left1.k
    r = unknowns[R_COL] * np.exp(-reflected.log_scale)
    t = unknowns[T_COL] * np.exp(-transmitted.log_scale)
    R = float(abs(r) ** 2)
    T_elastic = float(_flux(right1, t) / k_in)
    T_1n = {}
    for i, channel in enumerate(model.coupled):
        left_n, right_n, wave_l, wave_r = channel_waves[i]
        a = unknowns[channel_col(i)] * np.exp(-wave_l.log_scale)
        b = unknowns[channel_col(i) + 1] * np.exp(-wave_r.log_scale)
        T_1n[channel.index] = float((_flux(left_n, a) + _flux(right_n, b)) / k_in)
    return TransitionResult.assemble(energy, R, T_elastic, T_1n, ORACLE)


def _segment_transfer(potential, energy, units, x_from, x_to, quad, analytic):
    """
    2x2 matrix carrying (psi, psi') of one channel from x_from to x_to.

    Returns:
        numpy.ndarray: Columns are the images of (1, 0) and (0, 1).
    """
    columns = []
    for unit in ((1.0, 0.0), (0.0, 1.0)):
        step = propagate(potential, energy, units, x_from, x_to, unit, quad, analytic)
        columns.append(step.state * np.exp(step.log_scale))
    return np.column_stack(columns)


def oracle_unitarity(result):
    """
    Closure error of the flux ledger of a result.

    Args:
        result (TransitionResult): Typically an oracle result.

    Returns:
        float: |R + T_elastic + sum T_1n - 1|.
    """
    return abs(result.total - 1.0)


def _safe_point(model, quad, energy):
    """solve_coupled_exact that turns solver errors into a failed record."""
    try:
        return solve_coupled_exact(model, energy, quad)
    except DeltaChannelError as err:
        logger.warning("oracle at E=%.12g failed: %s", energy, err)
        return TransitionResult.failed(energy, model.channel_indices, ORACLE, str(err))


def oracle_sweep(model, grid, quad=IntegratorConfig(), jobs=1):
    """
    Run the coupled-channel solution over an energy grid.

    Args:
        model (ScatteringModel): A validated model.
        grid (EnergyGrid): The energies.
        quad (IntegratorConfig, optional): Integrator settings.
        jobs (int, optional): Worker processes.

    Returns:
        list: One TransitionResult per grid point, in grid order.
    """
    return sweep_map(partial(_safe_point, model, quad), grid.points(), jobs)
