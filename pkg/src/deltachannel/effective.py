"""
Effective single-channel problem for channel 1.

Every coupled channel n is folded into channel 1 as a complex point scatterer
at its crossing point x_n with energy-dependent strength

    K_1n^2(E) = (K0_1n)^2 G_n^0(x_n, x_n; E)

and channel 1 is then solved alone with a unit wave incident from the left.

Functions:
- channel_greens(model, E, quad, lenient): Green's value of every coupled channel.
- merge_deltas(deltas): sort by position and sum coincident strengths.
- build_effective_deltas(model, E, quad, greens): the complex scatterers.
- solve_effective(channel1, deltas, E, units, quad, box, ...): psi_1, r and t.
- solve_uncoupled_wave(channel1, E, units, quad, box, probes): no scatterers.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from deltachannel.errors import DeltaChannelError, IncidenceClosed, NumericalBreakdown, ThresholdSingularity
from deltachannel.greens import greens_point
from deltachannel.log import get_logger
from deltachannel.model import LEFT, RIGHT, Open, channel_openness
from deltachannel.numerics import IntegratorConfig, propagate, use_analytic

logger = get_logger(__name__)

EXACT = "exact"
BORN = "born"


@dataclass(frozen=True)
class EffectiveDelta:
    position: float
    strength: complex
    channels: tuple = ()


@dataclass(frozen=True)
class EffectiveSolution:
    """
    Solution of the effective channel-1 equation.

    Left of the box psi_1 = amplitude * e^{i k_in x} + r e^{-i k_in x}. On the
    right it is t e^{i k_out x} when channel 1 is open there; when it is closed
    k_out is None and t multiplies e^{-kappa_out (x - x_max)}.
    """

    psi_at: tuple
    r: complex
    t: complex
    k_in: float
    k_out: Optional[float]
    mode: str = EXACT
    kappa_out: Optional[float] = None

    def psi(self, x):
        """
        Value of psi_1 at a recorded position.

        Args:
            x (float): A delta position or probe point.

        Returns:
            complex: psi_1(x).

        Raises:
            KeyError: If psi_1 was not recorded at x.
        """
        for position, value in self.psi_at:
            if position == x:
                return value
        raise KeyError(f"psi_1 not recorded at x={x}")


def channel_greens(model, energy, quad=IntegratorConfig(), lenient=False):
    """
    Point Green's function of every coupled channel at its crossing point.

    Args:
        model (ScatteringModel): The model.
        energy (float): Total energy E.
        quad (IntegratorConfig, optional): Integrator settings.
        lenient (bool, optional): Skip channels sitting on a threshold instead
            of raising.

    Returns:
        tuple: (dict mapping channel index to GreensPointValue, list of skipped
        channel indices).

    Raises:
        DeltaChannelError: Tagged with the channel index it came from.
    """
    greens = {}
    skipped = []
    for channel in model.coupled:
        try:
            greens[channel.index] = greens_point(
                channel.potential, channel.coupling.crossing_point, energy,
                model.units, quad, model.box)
        except ThresholdSingularity as err:
            if not lenient:
                raise err.tag(channel.index)
            logger.warning("skipping channel %d at E=%.12g: %s", channel.index, energy, err.message)
            skipped.append(channel.index)
        except DeltaChannelError as err:
            raise err.tag(channel.index)
    return greens, skipped


def merge_deltas(deltas):
    """
    Sort deltas by position and merge those sharing a position.

    Args:
        deltas (list): EffectiveDelta objects.

    Returns:
        list: Merged EffectiveDelta objects in increasing position.
    """
    merged = {}
    for delta in deltas:
        if delta.position in merged:
            previous = merged[delta.position]
            delta = EffectiveDelta(delta.position, previous.strength + delta.strength,
                                   previous.channels + delta.channels)
        merged[delta.position] = delta
    return [merged[x] for x in sorted(merged)]


def build_effective_deltas(model, energy, quad=IntegratorConfig(), greens=None):
    """
    Fold every coupled channel into a complex delta on channel 1.

    Args:
        model (ScatteringModel): The model.
        energy (float): Total energy E.
        quad (IntegratorConfig, optional): Integrator settings.
        greens (dict, optional): Precomputed Green's values by channel index;
            channels missing from it are left out.

    Returns:
        list: Merged EffectiveDelta objects sorted by position.
    """
    if greens is None:
        greens, _ = channel_greens(model, energy, quad)
    deltas = []
    for channel in model.coupled:
        if channel.index not in greens:
            continue
        coupling = channel.coupling
        strength = coupling.bare_strength ** 2 * greens[channel.index].value
        deltas.append(EffectiveDelta(coupling.crossing_point, strength, (channel.index,)))
    return merge_deltas(deltas)


def _right_state(right_asym, x_max):
    """Outgoing or decaying channel-1 state at x_max with unit coefficient."""
    if isinstance(right_asym, Open):
        phase = np.exp(1j * right_asym.k * x_max)
        return np.array([phase, 1j * right_asym.k * phase])
    return np.array([1.0, -right_asym.kappa], dtype=complex)


def solve_effective(channel1, deltas, energy, units, quad=IntegratorConfig(), box=(-20.0, 20.0),
                    probes=(), amplitude=1.0, mode=EXACT):
    """
    Solve channel 1 with complex point scatterers for left incidence.

    The solution is built from the right: the outgoing (or decaying) state at
    x_max is carried leftwards, applying psi'(x-) = psi'(x+) - (2m/hbar^2) g psi(x)
    at each delta, and split into incident and reflected waves at x_min.

    Args:
        channel1 (PotentialSpec): Channel-1 potential.
        deltas (list): EffectiveDelta objects.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.
        quad (IntegratorConfig, optional): Integrator settings.
        box (tuple, optional): (x_min, x_max).
        probes (iterable, optional): Extra positions at which to record psi_1.
        amplitude (complex, optional): Incident amplitude.
        mode (str, optional): Label stored on the solution.

    Returns:
        EffectiveSolution: psi_1 at every delta and probe, r and t.

    Raises:
        IncidenceClosed: If channel 1 is closed on the left.
        NumericalBreakdown: If the asymptotic split is ill-conditioned.
    """
    x_min, x_max = box
    left_asym = channel_openness(channel1, energy, LEFT, units, box)
    if not isinstance(left_asym, Open):
        raise IncidenceClosed(f"channel 1 is closed on the left at E={energy:.12g}")
    right_asym = channel_openness(channel1, energy, RIGHT, units, box)
    k_in = left_asym.k
    analytic = use_analytic(channel1, quad)

    jumps = {delta.position: delta.strength for delta in merge_deltas(deltas)}
    stops = sorted(set(jumps) | {float(x) for x in probes}, reverse=True)

    state = _right_state(right_asym, x_max)
    x, log_scale = x_max, 0.0
    recorded = []
    for stop in stops:
        step = propagate(channel1, energy, units, x, stop, state, quad, analytic)
        state, log_scale = step.state, log_scale + step.log_scale
        recorded.append((stop, state[0], log_scale))
        if stop in jumps:
            state = np.array([state[0], state[1] - units.factor * jumps[stop] * state[0]])
        x = stop
    step = propagate(channel1, energy, units, x, x_min, state, quad, analytic)
    state, log_total = step.state, log_scale + step.log_scale

    # split (psi, psi') at x_min into e^{ikx} and e^{-ikx} parts
    phase = np.exp(1j * k_in * x_min)
    waves = np.array([[phase, 1 / phase], [1j * k_in * phase, -1j * k_in / phase]])
    condition = np.linalg.cond(waves)
    if condition > quad.condition_limit:
        raise NumericalBreakdown(f"asymptotic split has condition number {condition:.3g}")
    incident, reflected = np.linalg.solve(waves, state)
    if incident == 0:
        raise NumericalBreakdown(f"no incident wave at E={energy:.12g}")

    norm = amplitude / incident
    psi_at = tuple((position, complex(value * norm * np.exp(scale - log_total)))
                   for position, value, scale in sorted(recorded))
    k_out = right_asym.k if isinstance(right_asym, Open) else None
    kappa_out = None if k_out is not None else right_asym.kappa
    return EffectiveSolution(
        psi_at=psi_at,
        r=complex(reflected * norm),
        t=complex(norm * np.exp(-log_total)),
        k_in=k_in,
        k_out=k_out,
        mode=mode,
        kappa_out=kappa_out,
    )


def solve_uncoupled_wave(channel1, energy, units, quad=IntegratorConfig(), box=(-20.0, 20.0), probes=()):
    """
    Scattering wave of the bare channel-1 potential.

    Args:
        channel1 (PotentialSpec): Channel-1 potential.
        energy (float): Total energy E.
        units (UnitSystem): hbar and mass.
        quad (IntegratorConfig, optional): Integrator settings.
        box (tuple, optional): (x_min, x_max).
        probes (iterable, optional): Positions at which to record psi_1.

    Returns:
        EffectiveSolution: mode="born".
    """
    return solve_effective(channel1, [], energy, units, quad, box, probes=probes, mode=BORN)
