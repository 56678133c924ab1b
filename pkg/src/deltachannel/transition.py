"""
Transition probabilities out of channel 1.

The probability of leaving channel 1 into channel n is the current absorbed by
the complex scatterer at x_n divided by the incident current:

    T_1n = (2 K0_1n^2 / hbar) (-Im G_n^0(x_n, x_n; E)) |psi_1(x_n)|^2 / (hbar k_in / m)

The minus sign makes T_1n non-negative for outgoing Green's functions, whose
imaginary part is never positive.

Functions:
- transition_probability(K0, g, psi_at_xn, k_in, units)
- elastic_rt(sol): elastic reflection and transmission probabilities.
- compute_point(model, E, mode, quad, lenient): one energy, full pipeline.
- energy_sweep(model, grid, mode, quad, jobs, lenient): every grid energy.
- sweep_map(func, energies, jobs): order-preserving, optionally parallel map.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from deltachannel.effective import (BORN, EXACT, build_effective_deltas, channel_greens,
                                    solve_effective, solve_uncoupled_wave)
from deltachannel.errors import DeltaChannelError
from deltachannel.log import get_logger
from deltachannel.numerics import IntegratorConfig

logger = get_logger(__name__)

MODES = (EXACT, BORN)
OK = "ok"
SKIPPED = "skipped"
FAILED = "failed"


@dataclass(frozen=True)
class TransitionResult:
    energy: float
    R: float
    T_elastic: float
    T_1n: dict = field(default_factory=dict)
    unitarity_defect: float = 0.0
    mode: str = EXACT
    status: str = OK
    message: str = ""

    @property
    def total(self):
        """R + T_elastic + sum of T_1n, ignoring skipped channels."""
        return self.R + self.T_elastic + float(np.nansum(list(self.T_1n.values())))

    @classmethod
    def assemble(cls, energy, R, T_elastic, T_1n, mode, status=OK, message=""):
        """
        Build a result and fill in its unitarity defect.

        Returns:
            TransitionResult: The assembled record.
        """
        total = R + T_elastic + float(np.nansum(list(T_1n.values())))
        return cls(energy, R, T_elastic, dict(T_1n), abs(total - 1.0), mode, status, message)

    @classmethod
    def failed(cls, energy, channels, mode, message):
        """
        Record for an energy at which the computation failed.

        Args:
            energy (float): The energy.
            channels (list): Coupled channel indices.
            mode (str): Computation mode.
            message (str): Why it failed.

        Returns:
            TransitionResult: All probabilities nan, status "failed".
        """
        return cls(energy, np.nan, np.nan, {n: np.nan for n in channels}, np.nan,
                   mode, FAILED, message)


def transition_probability(K0, g, psi_at_xn, k_in, units):
    """
    Probability of a transition from channel 1 into one coupled channel.

    Args:
        K0 (float): Bare coupling strength K0_1n.
        g (GreensPointValue): G_n^0(x_n, x_n; E).
        psi_at_xn (complex): psi_1 at the crossing point.
        k_in (float): Incident wavenumber of channel 1.
        units (UnitSystem): hbar and mass.

    Returns:
        float: T_1n.
    """
    absorbed = 2.0 * K0 ** 2 / units.hbar * (-g.value.imag) * abs(psi_at_xn) ** 2
    incident_flux = units.hbar * k_in / units.mass
    return float(absorbed / incident_flux)


def elastic_rt(sol):
    """
    Elastic reflection and transmission probabilities.

    Args:
        sol (EffectiveSolution): Channel-1 solution.

    Returns:
        tuple: (R, T_elastic); T_elastic is 0 when channel 1 is closed on the right.
    """
    R = abs(sol.r) ** 2
    if sol.k_out is None:
        return float(R), 0.0
    return float(R), float(sol.k_out / sol.k_in * abs(sol.t) ** 2)


def compute_point(model, energy, mode=EXACT, quad=IntegratorConfig(), lenient=False):
    """
    Transition probabilities at one energy.

    Green's functions of the coupled channels give the complex deltas; channel 1
    is solved with them (exact) or without them (born), and each T_1n is read
    off psi_1 at its crossing point.

    Args:
        model (ScatteringModel): A validated model.
        energy (float): Total energy E.
        mode (str, optional): "exact" or "born".
        quad (IntegratorConfig, optional): Integrator settings.
        lenient (bool, optional): Skip coupled channels sitting on a threshold.

    Returns:
        TransitionResult: The record for this energy.

    Raises:
        DeltaChannelError: Channel-tagged when a coupled channel fails.
        ValueError: If mode is unknown.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode '{mode}', expected one of {MODES}")
    greens, skipped = channel_greens(model, energy, quad, lenient)
    deltas = build_effective_deltas(model, energy, quad, greens)
    crossings = [channel.coupling.crossing_point for channel in model.coupled]
    if mode == EXACT:
        sol = solve_effective(model.channel1, deltas, energy, model.units, quad, model.box,
                              probes=crossings)
    else:
        sol = solve_uncoupled_wave(model.channel1, energy, model.units, quad, model.box,
                                   probes=crossings)

    T_1n = {}
    for channel in model.coupled:
        if channel.index in skipped:
            T_1n[channel.index] = np.nan
            continue
        coupling = channel.coupling
        T_1n[channel.index] = transition_probability(
            coupling.bare_strength, greens[channel.index], sol.psi(coupling.crossing_point),
            sol.k_in, model.units)
    R, T_elastic = elastic_rt(sol)
    status, message = OK, ""
    if skipped:
        status = SKIPPED
        message = "skipped channels " + " ".join(str(n) for n in skipped)
    result = TransitionResult.assemble(energy, R, T_elastic, T_1n, mode, status, message)
    logger.debug("E=%.12g R=%.6g T=%.6g defect=%.3g", energy, R, T_elastic, result.unitarity_defect)
    return result


def _safe_point(model, mode, quad, lenient, energy):
    """compute_point that turns solver errors into a failed record."""
    try:
        return compute_point(model, energy, mode, quad, lenient)
    except DeltaChannelError as err:
        logger.warning("E=%.12g failed: %s", energy, err)
        return TransitionResult.failed(energy, model.channel_indices, mode, str(err))


def sweep_map(func, energies, jobs=1):
    """
    Apply func to every energy, in grid order.

    Args:
        func (callable): Picklable function of one energy.
        energies (iterable): The energies.
        jobs (int, optional): Worker processes; 1 runs in-process.

    Returns:
        list: func(E) for each energy, in input order.
    """
    energies = [float(e) for e in energies]
    if jobs <= 1 or len(energies) <= 1:
        return [func(energy) for energy in energies]
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(func, energies))


def energy_sweep(model, grid, mode=EXACT, quad=IntegratorConfig(), jobs=1, lenient=False):
    """
    Transition probabilities over an energy grid.

    Per-point failures are recorded as failed results and do not stop the sweep.

    Args:
        model (ScatteringModel): A validated model.
        grid (EnergyGrid): The energies.
        mode (str, optional): "exact" or "born".
        quad (IntegratorConfig, optional): Integrator settings.
        jobs (int, optional): Worker processes.
        lenient (bool, optional): Skip coupled channels sitting on a threshold.

    Returns:
        list: One TransitionResult per grid point, in grid order.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode '{mode}', expected one of {MODES}")
    return sweep_map(partial(_safe_point, model, mode, quad, lenient), grid.points(), jobs)
