"""
This file is used to configure the pytest framework.

It provides the models shared by the test modules: the flat two-channel
benchmark, its closed-channel variant, a channel 1 ending in a high wall, the
symmetric three-channel model, a five-channel model with distinct crossings,
and models with numeric Green's functions.
"""

from pathlib import Path

import pytest

from deltachannel.model import (Constant, CoupledChannel, CouplingSpec, Morse, ScatteringModel,
                                Step, Tabulated, UnitSystem)
from deltachannel.numerics import IntegratorConfig

CONFIG_DIR = Path(__file__).parent.parent.joinpath('configs')


def coupled(index, potential, x_cross, k0):
    """Shorthand for a coupled channel."""
    return CoupledChannel(potential, CouplingSpec(index, x_cross, k0))


@pytest.fixture
def make_channel():
    """Fixture to create a coupled channel from (index, potential, x_cross, K0)."""
    return coupled


@pytest.fixture
def units():
    """Reduced units hbar = m = 1."""
    return UnitSystem()


@pytest.fixture
def quad():
    """Default integrator settings."""
    return IntegratorConfig()


@pytest.fixture
def flat_model():
    """Fixture to create the flat two-channel model for a given K0."""
    def _flat_model(k0=0.5, v2=0.0):
        return ScatteringModel(Constant(0.0), [coupled(2, Constant(v2), 0.0, k0)])
    return _flat_model


@pytest.fixture
def walled_model():
    """Fixture to create a model whose channel 1 ends in a wall of the given height at x = 0."""
    def _walled_model(height=20000.0):
        return ScatteringModel(Step(0.0, height, 0.0), [coupled(2, Constant(0.0), -1.0, 0.5)])
    return _walled_model


@pytest.fixture
def three_channel_model():
    """Three flat channels coupled at the origin with equal strength."""
    return ScatteringModel(Constant(0.0), [coupled(2, Constant(0.0), 0.0, 0.5),
                                           coupled(3, Constant(0.0), 0.0, 0.5)])


@pytest.fixture
def five_channel_model():
    """Five constant channels with distinct crossings, some closed at low energy."""
    return ScatteringModel(Constant(0.0), [
        coupled(2, Constant(0.3), -1.5, 0.4),
        coupled(3, Constant(-0.2), 0.0, 0.3),
        coupled(4, Constant(0.7), 0.8, 0.5),
        coupled(5, Constant(1.1), 2.0, 0.35),
    ])


@pytest.fixture
def numeric_model():
    """Channel 1 with a tabulated barrier, a step channel and a Morse channel."""
    barrier = Tabulated(((-1.0, 0.0), (0.0, 0.3), (1.0, 0.0)))
    return ScatteringModel(
        barrier,
        [coupled(2, Step(-0.2, 0.4, 0.5), -0.5, 0.4),
         coupled(3, Morse(depth=1.0, width_param=1.0, center=0.0, v_offset=-0.5), 1.5, 0.3)],
        box=(-3.0, 16.0),
    )


@pytest.fixture
def config_files():
    """The shipped model files."""
    return sorted(CONFIG_DIR.glob('*.ini'))
