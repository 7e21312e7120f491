"""INI experiment configuration shared by all subcommands.

Example::

    [objective]
    kind = qubo
    n_bits = 9
    seed = 0

    [search]
    epsilon = 0.1
    max_rounds = 1000

    [sweep]
    epsilons = 0.01, 0.1, 1.0

Missing keys take the dataclass defaults below. ``to_string`` writes every
field, so ``from_string(to_string(cfg)) == cfg``.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .objective import ObjectiveSpec
from .search import SearchConfig


@dataclass(frozen=True)
class LandscapeOptions:
    # 0 means exhaustive enumeration
    sample_size: int = 0
    sample_seed: int = 0
    f2b_iters: int = 200


@dataclass(frozen=True)
class TrapDemoOptions:
    epsilon: float = 0.001
    max_rounds: int = 100
    delta: float = 0.1


@dataclass(frozen=True)
class SweepOptions:
    epsilons: tuple[float, ...] = (0.01, 0.1, 1.0)


@dataclass(frozen=True)
class SeveringOptions:
    tol: float = 1e-14
    closure_depth: int = 20


@dataclass(frozen=True)
class OutputOptions:
    out_dir: str = "out"
    # any of "csv", "json"
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    objective: ObjectiveSpec = field(default_factory=ObjectiveSpec)
    search: SearchConfig = field(default_factory=SearchConfig)
    landscape: LandscapeOptions = field(default_factory=LandscapeOptions)
    trap_demo: TrapDemoOptions = field(default_factory=TrapDemoOptions)
    sweep: SweepOptions = field(default_factory=SweepOptions)
    severing: SeveringOptions = field(default_factory=SeveringOptions)
    output: OutputOptions = field(default_factory=OutputOptions)

    def __post_init__(self) -> None:
        if self.search.objective != self.objective:
            object.__setattr__(self, "search", dataclasses.replace(self.search, objective=self.objective))
        bad = set(self.output.formats) - {"csv", "json"}
        if bad:
            raise ValueError(f"unknown output formats: {sorted(bad)}")

    def search_config(self, **overrides) -> SearchConfig:
        return dataclasses.replace(self.search, objective=self.objective, **overrides)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return dataclasses.replace(self, objective=dataclasses.replace(self.objective, seed=seed))

    def with_out_dir(self, out_dir: str) -> "ExperimentConfig":
        return dataclasses.replace(self, output=dataclasses.replace(self.output, out_dir=out_dir))

    def to_dict(self) -> dict:
        out = {}
        for name in _SECTIONS:
            section = getattr(self, name)
            out[name] = {
                f.name: getattr(section, f.name) for f in dataclasses.fields(section) if f.name not in _SKIP
            }
        return out


_SECTIONS = ("objective", "search", "landscape", "trap_demo", "sweep", "severing", "output")
# the search section's objective is the top-level [objective] section
_SKIP = {"objective"}


def _format(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(raw: str, default):
    if isinstance(default, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        items = [x.strip() for x in raw.split(",") if x.strip()]
        proto = default[0] if default else 0.0
        return tuple(_parse(x, proto) for x in items)
    return raw.strip()


def _section_from(parser: configparser.ConfigParser, name: str, cls, **extra):
    defaults = cls(**extra) if extra else cls()
    if not parser.has_section(name):
        return defaults
    kwargs = dict(extra)
    known = {f.name for f in dataclasses.fields(cls)} - _SKIP
    for key, raw in parser.items(name):
        if key not in known:
            raise ValueError(f"unknown key {key!r} in section [{name}]")
        kwargs[key] = _parse(raw, getattr(defaults, key))
    return cls(**kwargs)


def from_string(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_string(text)
    unknown = set(parser.sections()) - set(_SECTIONS)
    if unknown:
        raise ValueError(f"unknown config sections: {sorted(unknown)}")
    objective = _section_from(parser, "objective", ObjectiveSpec)
    return ExperimentConfig(
        objective=objective,
        search=_section_from(parser, "search", SearchConfig, objective=objective),
        landscape=_section_from(parser, "landscape", LandscapeOptions),
        trap_demo=_section_from(parser, "trap_demo", TrapDemoOptions),
        sweep=_section_from(parser, "sweep", SweepOptions),
        severing=_section_from(parser, "severing", SeveringOptions),
        output=_section_from(parser, "output", OutputOptions),
    )


def to_string(config: ExperimentConfig) -> str:
    lines = []
    for name, section in config.to_dict().items():
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {_format(value)}" for key, value in section.items())
        lines.append("")
    return "\n".join(lines)


def load(path: str | Path) -> ExperimentConfig:
    return from_string(Path(path).read_text(encoding="utf-8"))


def save(config: ExperimentConfig, path: str | Path) -> None:
    Path(path).write_text(to_string(config), encoding="utf-8")
