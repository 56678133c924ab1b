"""
Exception hierarchy for deltachannel.

Every solver error may carry the index of the coupled channel it came from.
Errors raised inside a per-channel computation are tagged with tag() before
they propagate, so messages read "channel 3: ...".
"""


class DeltaChannelError(Exception):
    """Base class for all errors raised by the package."""

    def __init__(self, message, channel=None):
        super().__init__(message)
        self.message = message
        self.channel = channel

    def tag(self, channel):
        """
        Attach a channel index to the error and return it.

        Args:
            channel (int): Index n >= 2 of the coupled channel.

        Returns:
            DeltaChannelError: The same error, now tagged.
        """
        if self.channel is None:
            self.channel = channel
        return self

    def __str__(self):
        if self.channel is not None:
            return f"channel {self.channel}: {self.message}"
        return self.message


class ThresholdSingularity(DeltaChannelError):
    """Energy lies within the threshold tolerance of a channel asymptote."""

    def __init__(self, energy, asymptote, channel=None):
        super().__init__(
            f"energy {energy:.12g} is at the threshold {asymptote:.12g}", channel)
        self.energy = energy
        self.asymptote = asymptote


class PoleProximity(DeltaChannelError):
    """Energy is at or near a bound state of an uncoupled channel."""


class IntegrationFailure(DeltaChannelError):
    """The ODE integrator could not complete a step."""


class NumericalBreakdown(DeltaChannelError):
    """A matching system is too badly conditioned to trust its solution."""


class IncidenceClosed(DeltaChannelError):
    """Channel 1 is closed on the incidence (left) side."""


class ParseError(DeltaChannelError):
    """A model file could not be read."""

    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line


class ValidationError(DeltaChannelError):
    """A model file parsed but describes an ill-formed model."""

    def __init__(self, violations):
        violations = list(violations)
        super().__init__("invalid model: " + "; ".join(violations))
        self.violations = violations
