"""
deltachannel: multi-channel 1D scattering with delta couplings in a star topology.

Every coupled channel is folded into channel 1 as a complex point scatterer
whose strength is the bare coupling squared times the channel's point Green's
function, and transition probabilities are read off the resulting
single-channel wave. An independent coupled-channel solver checks the result.
"""

from deltachannel.effective import (BORN, EXACT, EffectiveDelta, EffectiveSolution,
                                    build_effective_deltas, solve_effective, solve_uncoupled_wave)
from deltachannel.greens import GreensPointValue, greens_constant, greens_point, greens_point_numeric
from deltachannel.model import (Closed, Constant, CoupledChannel, CouplingSpec, EnergyGrid,
                                Exponential, Harmonic, Linear, Morse, Open, ScatteringModel, Step,
                                Tabulated, UnitSystem, channel_openness, potential_value,
                                validate_model)
from deltachannel.numerics import IntegratorConfig
from deltachannel.oracle import oracle_sweep, oracle_unitarity, solve_coupled_exact
from deltachannel.transition import (TransitionResult, compute_point, elastic_rt, energy_sweep,
                                     transition_probability)

__version__ = "1.0"
