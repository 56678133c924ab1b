"""
Model description for star-coupled multi-channel scattering.

Channel 1 carries the incident wave and couples to every other channel n
through a single delta at the crossing point x_n with bare strength K0_1n.
Channels n >= 2 do not couple to each other.

Contents:
- Potential catalog: Constant, Step, Linear, Harmonic, Morse, Exponential,
Tabulated. Each reports value(x), its breakpoints and its natural limits.
- UnitSystem, CouplingSpec, CoupledChannel, ScatteringModel, EnergyGrid.
- potential_value(p, x): evaluates a potential.
- asymptote(p, side, box): asymptotic value used for boundary conditions.
- channel_openness(p, E, side, units, box): Open(k) or Closed(kappa).
- validate_model(model): report-style well-formedness check.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import ClassVar, Union

import numpy as np

from deltachannel.errors import ThresholdSingularity

# Energies closer than this to a channel asymptote are refused.
THRESHOLD_EPS = 1e-9
# validate_model warns when a box edge is this far from the natural limit.
EDGE_WARN_TOL = 1e-6

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class Constant:
    v0: float
    kind: ClassVar[str] = "constant"
    piecewise_constant: ClassVar[bool] = True

    def value(self, x):
        return float(self.v0)

    def breakpoints(self):
        return ()

    def limit(self, side):
        return float(self.v0)


@dataclass(frozen=True)
class Step:
    """v_left for x < x_step, v_right for x >= x_step."""

    v_left: float
    v_right: float
    x_step: float = 0.0
    kind: ClassVar[str] = "step"
    piecewise_constant: ClassVar[bool] = True

    def value(self, x):
        return float(self.v_left if x < self.x_step else self.v_right)

    def breakpoints(self):
        return (self.x_step,)

    def limit(self, side):
        return float(self.v_left if side == LEFT else self.v_right)


@dataclass(frozen=True)
class Linear:
    """slope * x + v_at_origin on [x_lo, x_hi], held constant outside the window."""

    slope: float
    v_at_origin: float
    x_lo: float
    x_hi: float
    kind: ClassVar[str] = "linear"
    piecewise_constant: ClassVar[bool] = False

    def value(self, x):
        x = min(max(x, self.x_lo), self.x_hi)
        return self.slope * x + self.v_at_origin

    def breakpoints(self):
        return (self.x_lo, self.x_hi)

    def limit(self, side):
        return self.value(self.x_lo if side == LEFT else self.x_hi)


@dataclass(frozen=True)
class Harmonic:
    force_const: float
    center: float = 0.0
    v_min: float = 0.0
    kind: ClassVar[str] = "harmonic"
    piecewise_constant: ClassVar[bool] = False

    def value(self, x):
        return 0.5 * self.force_const * (x - self.center) ** 2 + self.v_min

    def breakpoints(self):
        return ()

    def limit(self, side):
        # grows on both sides; flattened at the box edges
        return None


@dataclass(frozen=True)
class Morse:
    depth: float
    width_param: float
    center: float = 0.0
    v_offset: float = 0.0
    kind: ClassVar[str] = "morse"
    piecewise_constant: ClassVar[bool] = False

    def value(self, x):
        return self.depth * (1.0 - np.exp(-self.width_param * (x - self.center))) ** 2 + self.v_offset

    def breakpoints(self):
        return ()

    def limit(self, side):
        decaying = RIGHT if self.width_param > 0 else LEFT
        return self.depth + self.v_offset if side == decaying else None


@dataclass(frozen=True)
class Exponential:
    amplitude: float
    decay: float
    v_offset: float = 0.0
    kind: ClassVar[str] = "exponential"
    piecewise_constant: ClassVar[bool] = False

    def value(self, x):
        return self.amplitude * np.exp(-self.decay * x) + self.v_offset

    def breakpoints(self):
        return ()

    def limit(self, side):
        if self.decay == 0:
            return self.amplitude + self.v_offset
        decaying = RIGHT if self.decay > 0 else LEFT
        return self.v_offset if side == decaying else None


@dataclass(frozen=True)
class Tabulated:
    """Linear interpolation through (x, v) samples, constant beyond the ends."""

    samples: tuple
    kind: ClassVar[str] = "tabulated"
    piecewise_constant: ClassVar[bool] = False

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(
            (float(x), float(v)) for x, v in self.samples))

    @cached_property
    def xs(self):
        return np.array([x for x, _ in self.samples])

    @cached_property
    def vs(self):
        return np.array([v for _, v in self.samples])

    def value(self, x):
        return float(np.interp(x, self.xs, self.vs))

    def breakpoints(self):
        return tuple(x for x, _ in self.samples)

    def limit(self, side):
        return self.samples[0][1] if side == LEFT else self.samples[-1][1]


PotentialSpec = Union[Constant, Step, Linear, Harmonic, Morse, Exponential, Tabulated]

POTENTIAL_KINDS = {cls.kind: cls for cls in (
    Constant, Step, Linear, Harmonic, Morse, Exponential, Tabulated)}


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    mass: float = 1.0

    @property
    def factor(self):
        """2m / hbar^2, the coefficient turning energies into squared wavenumbers."""
        return 2.0 * self.mass / self.hbar ** 2


@dataclass(frozen=True)
class Open:
    k: float

    @property
    def label(self):
        return "open"


@dataclass(frozen=True)
class Closed:
    kappa: float

    @property
    def label(self):
        return "closed"


Openness = Union[Open, Closed]


@dataclass(frozen=True)
class CouplingSpec:
    channel_index: int
    crossing_point: float
    bare_strength: float


@dataclass(frozen=True)
class CoupledChannel:
    potential: PotentialSpec
    coupling: CouplingSpec

    @property
    def index(self):
        return self.coupling.channel_index


@dataclass(frozen=True)
class ScatteringModel:
    channel1: PotentialSpec
    coupled: tuple = ()
    units: UnitSystem = field(default_factory=UnitSystem)
    box: tuple = (-20.0, 20.0)

    def __post_init__(self):
        object.__setattr__(self, "coupled", tuple(self.coupled))
        object.__setattr__(self, "box", (float(self.box[0]), float(self.box[1])))

    @property
    def channel_indices(self):
        return [channel.index for channel in self.coupled]

    def channel(self, index):
        """
        Look up a coupled channel by its index.

        Args:
            index (int): Channel index n >= 2.

        Returns:
            CoupledChannel: The matching channel.

        Raises:
            KeyError: If no coupled channel has that index.
        """
        for channel in self.coupled:
            if channel.index == index:
                return channel
        raise KeyError(f"no coupled channel with index {index}")


@dataclass(frozen=True)
class EnergyGrid:
    e_min: float
    e_max: float
    steps: int = 1

    def points(self):
        """
        Uniform grid inclusive of both ends.

        Returns:
            numpy.ndarray: steps energies; a single e_min when steps == 1.
        """
        if self.steps == 1:
            return np.array([float(self.e_min)])
        return np.linspace(self.e_min, self.e_max, self.steps)


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def potential_value(p, x):
    """
    Evaluate a potential at x.

    Args:
        p (PotentialSpec): The potential.
        x (float): Position inside the computational box.

    Returns:
        float: V(x).
    """
    return p.value(x)


def asymptote(p, side, box=None):
    """
    Asymptotic value of a potential on one side.

    Sides whose natural limit diverges are flattened at the box edge.

    Args:
        p (PotentialSpec): The potential.
        side (str): "left" or "right".
        box (tuple, optional): (x_min, x_max). Needed only for diverging sides.

    Returns:
        float: The asymptotic value.

    Raises:
        ValueError: If the side diverges and no box is given.
    """
    limit = p.limit(side)
    if limit is not None:
        return float(limit)
    if box is None:
        raise ValueError(f"{p.kind} potential diverges on the {side}; a box is required")
    return float(p.value(box[0] if side == LEFT else box[1]))


def channel_openness(p, energy, side, units=UnitSystem(), box=None, eps=THRESHOLD_EPS):
    """
    Classify the asymptotic behaviour of a channel at energy E.

    Args:
        p (PotentialSpec): The channel potential.
        energy (float): Total energy E.
        side (str): "left" or "right".
        units (UnitSystem, optional): hbar and mass.
        box (tuple, optional): (x_min, x_max) for diverging potentials.
        eps (float, optional): Threshold tolerance.

    Returns:
        Open | Closed: Open(k) above the asymptote, Closed(kappa) below.

    Raises:
        ThresholdSingularity: If |E - v_asym| <= eps.
    """
    v_asym = asymptote(p, side, box)
    gap = energy - v_asym
    if abs(gap) <= eps:
        raise ThresholdSingularity(energy, v_asym)
    wavenumber = float(np.sqrt(units.factor * abs(gap)))
    return Open(wavenumber) if gap > 0 else Closed(wavenumber)


def _check_potential(p, label, box, report):
    """Append the violations and warnings of one potential to report."""
    before = len(report.violations)
    if isinstance(p, Tabulated):
        if len(p.samples) < 2:
            report.violations.append(f"{label}: tabulated potential needs at least 2 samples")
        elif np.any(np.diff(p.xs) <= 0):
            report.violations.append(f"{label}: tabulated x values are not strictly increasing")
    if isinstance(p, Linear) and not p.x_lo < p.x_hi:
        report.violations.append(f"{label}: linear window needs x_lo < x_hi")
    if isinstance(p, Morse) and p.width_param == 0:
        report.violations.append(f"{label}: morse width_param must be nonzero")
    if isinstance(p, Step) and not box[0] < p.x_step < box[1]:
        report.warnings.append(f"{label}: step at {p.x_step} lies outside the box")
    if len(report.violations) > before:
        return
    # Box edges should sit in the asymptotic region
    for side, edge in ((LEFT, box[0]), (RIGHT, box[1])):
        limit = p.limit(side)
        if limit is not None and abs(p.value(edge) - limit) > EDGE_WARN_TOL:
            report.warnings.append(
                f"{label}: V({edge}) differs from its {side} limit {limit:.6g}; enlarge the box")


def validate_model(model):
    """
    Check a model for well-formedness.

    Args:
        model (ScatteringModel): The model.

    Returns:
        ValidationReport: ok when no violations were found. Warnings do not
        make a model invalid.
    """
    report = ValidationReport()
    units = model.units
    if not units.hbar > 0 or not units.mass > 0:
        report.violations.append("units: hbar and mass must be strictly positive")
    x_min, x_max = model.box
    if not x_min < x_max:
        report.violations.append("box: x_min must be smaller than x_max")
        return report

    _check_potential(model.channel1, "channel 1", model.box, report)
    seen = set()
    for channel in model.coupled:
        coupling = channel.coupling
        label = f"channel {coupling.channel_index}"
        if coupling.channel_index < 2:
            report.violations.append(f"{label}: coupled channel index must be >= 2")
        if coupling.channel_index in seen:
            report.violations.append(f"{label}: duplicate channel index")
        seen.add(coupling.channel_index)
        if coupling.bare_strength < 0:
            report.violations.append(f"{label}: K0 must be non-negative")
        x_cross = coupling.crossing_point
        if x_cross in (x_min, x_max):
            report.violations.append(f"{label}: crossing at box edge")
        elif not x_min < x_cross < x_max:
            report.violations.append(f"{label}: crossing point {x_cross} outside box")
        _check_potential(channel.potential, label, model.box, report)
    return report
