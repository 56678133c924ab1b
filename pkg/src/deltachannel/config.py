"""
Reading model files into a RunConfig.

A model file is an INI document:

    [units]        hbar, mass                       (optional, default 1, 1)
    [box]          x_min, x_max                     (optional, default -20, 20)
    [channel1]     potential = <kind>, parameters
    [channel.n]    potential = <kind>, parameters, x_cross, K0     (n >= 2)
    [sweep]        e_min, e_max, steps, mode        (steps default 1, mode exact)
    [numerics]     rtol, atol, method, chunk_length, pole_tol, wronskian_tol,
                   condition_limit, prefer_analytic, check_wronskian

Potential kinds and their parameters follow the potential catalog in
deltachannel.model. A tabulated potential takes either inline samples
("samples = 0:0, 1:2") or samples_file, a CSV with columns x and v resolved
relative to the model file.

Every key is either consumed or rejected.
"""

import configparser
import dataclasses
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from deltachannel.effective import EXACT
from deltachannel.errors import ParseError, ValidationError
from deltachannel.log import get_logger
from deltachannel.model import (POTENTIAL_KINDS, CoupledChannel, CouplingSpec, EnergyGrid,
                                ScatteringModel, Tabulated, UnitSystem, validate_model)
from deltachannel.numerics import SOLVER_METHODS, IntegratorConfig
from deltachannel.tables import load_samples
from deltachannel.transition import MODES

logger = get_logger(__name__)

CHANNEL_SECTION = re.compile(r"^channel\.(\d+)$")
FIXED_SECTIONS = ("units", "box", "channel1", "sweep", "numerics")
_REQUIRED = object()


@dataclass(frozen=True)
class RunConfig:
    model: ScatteringModel
    grid: EnergyGrid
    mode: str = EXACT
    compare_oracle: bool = False
    lenient: bool = False
    output_path: Optional[str] = None
    quad: IntegratorConfig = field(default_factory=IntegratorConfig)
    jobs: int = 1


def _line_of(text, section, key=None):
    """
    1-based line number of a section header or of a key inside it.

    Returns:
        int | None: The line, or None when it cannot be found.
    """
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r"^\[(.+)\]$", stripped)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return number
            continue
        if current == section and key is not None and re.match(rf"^{re.escape(key)}\s*[=:]", stripped):
            return number
    return None


class _SectionReader:
    """Typed access to one section that remembers which keys were used."""

    def __init__(self, text, name, proxy):
        self.text = text
        self.name = name
        self.proxy = proxy
        self.used = set()

    def error(self, message, key=None):
        field_name = f"{self.name}.{key}" if key else self.name
        return ParseError(message, field=field_name, line=_line_of(self.text, self.name, key))

    def has(self, key):
        return key in self.proxy

    def raw(self, key, default=_REQUIRED):
        self.used.add(key)
        if key not in self.proxy:
            if default is _REQUIRED:
                raise self.error("missing required key", key)
            return default
        return self.proxy[key].strip()

    def number(self, key, default=_REQUIRED):
        value = self.raw(key, default)
        if value is default and default is not _REQUIRED:
            return default
        try:
            return float(value)
        except ValueError:
            raise self.error(f"'{value}' is not a number", key) from None

    def integer(self, key, default=_REQUIRED):
        value = self.raw(key, default)
        if value is default and default is not _REQUIRED:
            return default
        try:
            return int(value)
        except ValueError:
            raise self.error(f"'{value}' is not an integer", key) from None

    def flag(self, key, default=_REQUIRED):
        value = self.raw(key, default)
        if value is default and default is not _REQUIRED:
            return default
        lowered = value.lower()
        if lowered in ("1", "yes", "true", "on"):
            return True
        if lowered in ("0", "no", "false", "off"):
            return False
        raise self.error(f"'{value}' is not a boolean", key)

    def finish(self):
        """Reject any key that was never read."""
        for key in self.proxy:
            if key not in self.used:
                raise self.error("unknown key", key)


def _parse_samples(reader, base_dir):
    """Samples of a tabulated potential, inline or from a CSV file."""
    if reader.has("samples_file"):
        if reader.has("samples"):
            raise reader.error("give either samples or samples_file, not both", "samples")
        path = Path(reader.raw("samples_file"))
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            return load_samples(path)
        except (OSError, KeyError, ValueError) as err:
            raise reader.error(f"cannot read samples from {path}: {err}", "samples_file") from None
    samples = []
    for item in re.split(r"[,\s]+", reader.raw("samples")):
        if not item:
            continue
        parts = item.split(":")
        try:
            if len(parts) != 2:
                raise ValueError
            samples.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise reader.error(f"sample '{item}' is not of the form x:v", "samples") from None
    return tuple(samples)


def _parse_potential(reader, base_dir):
    """Build a PotentialSpec from the potential key and its parameters."""
    kind = reader.raw("potential")
    cls = POTENTIAL_KINDS.get(kind.lower())
    if cls is None:
        known = ", ".join(sorted(POTENTIAL_KINDS))
        raise reader.error(f"unknown potential kind '{kind}' (known: {known})", "potential")
    if cls is Tabulated:
        return Tabulated(_parse_samples(reader, base_dir))
    params = {}
    for param in dataclasses.fields(cls):
        if param.default is dataclasses.MISSING:
            params[param.name] = reader.number(param.name)
        else:
            params[param.name] = reader.number(param.name, param.default)
    return cls(**params)


def _parse_numerics(reader):
    """IntegratorConfig from the [numerics] section, defaults for missing keys."""
    defaults = IntegratorConfig()
    values = {}
    for param in dataclasses.fields(IntegratorConfig):
        default = getattr(defaults, param.name)
        if isinstance(default, bool):
            values[param.name] = reader.flag(param.name, default)
        elif isinstance(default, str):
            values[param.name] = reader.raw(param.name, default)
        else:
            values[param.name] = reader.number(param.name, default)
            if not values[param.name] > 0:
                raise reader.error(f"must be positive, got {values[param.name]:g}", param.name)
    if values["method"] not in SOLVER_METHODS:
        known = ", ".join(SOLVER_METHODS)
        raise reader.error(f"unknown method '{values['method']}' (known: {known})", "method")
    return IntegratorConfig(**values)


def sweep_violations(grid):
    """
    Problems with an energy grid.

    Returns:
        list: Violation messages, empty for a usable grid.
    """
    violations = []
    if grid.e_min > grid.e_max:
        violations.append("sweep: e_min must not exceed e_max")
    if grid.steps < 1:
        violations.append("sweep: steps must be at least 1")
    return violations


def parse_config(text, base_dir=None, validate=True):
    """
    Parse a model file.

    Args:
        text (str): Contents of the model file.
        base_dir (str | Path, optional): Directory for relative samples_file paths.
        validate (bool, optional): Run validate_model and check the sweep.

    Returns:
        RunConfig: Fully populated, with defaults applied.

    Raises:
        ParseError: On malformed input, naming the field and line.
        ValidationError: On an ill-formed model or sweep.
    """
    parser = configparser.ConfigParser(default_section="\x00defaults", interpolation=None, strict=True)
    # keep key case (K0)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as err:
        line = getattr(err, "lineno", None)
        if line is None and getattr(err, "errors", None):
            line = err.errors[0][0]
        raise ParseError(err.message.splitlines()[0], line=line) from None

    readers = {}
    channel_sections = []
    for name in parser.sections():
        match = CHANNEL_SECTION.match(name)
        if match:
            channel_sections.append((int(match.group(1)), name))
        elif name not in FIXED_SECTIONS:
            raise ParseError("unknown section", field=name, line=_line_of(text, name))
        readers[name] = _SectionReader(text, name, parser[name])

    def section(name):
        return readers.get(name) or _SectionReader(text, name, {})

    if "channel1" not in readers:
        raise ParseError("missing section", field="channel1")
    if "sweep" not in readers:
        raise ParseError("missing section", field="sweep")

    units_reader = section("units")
    units = UnitSystem(units_reader.number("hbar", 1.0), units_reader.number("mass", 1.0))
    box_reader = section("box")
    box = (box_reader.number("x_min", -20.0), box_reader.number("x_max", 20.0))
    channel1 = _parse_potential(readers["channel1"], base_dir)

    coupled = []
    for index, name in sorted(channel_sections):
        reader = readers[name]
        potential = _parse_potential(reader, base_dir)
        coupling = CouplingSpec(index, reader.number("x_cross"), reader.number("K0"))
        coupled.append(CoupledChannel(potential, coupling))

    sweep = readers["sweep"]
    grid = EnergyGrid(sweep.number("e_min"), sweep.number("e_max"), sweep.integer("steps", 1))
    mode = sweep.raw("mode", EXACT).lower()
    if mode not in MODES:
        raise sweep.error(f"unknown mode '{mode}'", "mode")
    quad = _parse_numerics(section("numerics"))

    for reader in readers.values():
        reader.finish()

    model = ScatteringModel(channel1, tuple(coupled), units, box)
    if validate:
        report = validate_model(model)
        violations = list(report.violations) + sweep_violations(grid)
        if violations:
            raise ValidationError(violations)
        for warning in report.warnings:
            logger.warning(warning)
    return RunConfig(model=model, grid=grid, mode=mode, quad=quad)


def load_config(path, validate=True):
    """
    Read and parse a model file from disk.

    Args:
        path (str | Path): The model file.
        validate (bool, optional): Passed to parse_config.

    Returns:
        RunConfig: The parsed configuration.

    Raises:
        OSError: If the file cannot be read.
    """
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent, validate=validate)
