"""
Scenario configuration: parsing, validation and serialization.

The format is line oriented::

    # comment
    [section]
    key = value
    list_key = 10, 20, 30

Scanning records where each key was written; pydantic then validates the
sections (unknown keys are errors) and every problem is reported with its
line number in a single ConfigError.
"""

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError

from src.meetsim.model import DisseminationMode, RateDistribution
from src.shared.errors import ConfigError
from src.shared.seeding import MAX_SEED

SECTION_RE = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$")
ENTRY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


@dataclass(frozen=True)
class ConfigIssue:
    line: int | None
    section: str | None
    key: str | None
    message: str

    def __str__(self) -> str:
        parts = [f"line {self.line}"] if self.line else []
        name = ".".join(part for part in (self.section, self.key) if part)
        if name:
            parts.append(name)
        return ": ".join([*parts, self.message])


def _split_list(value):
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return value


NonNegativeList = Annotated[
    list[Annotated[float, Field(ge=0, allow_inf_nan=False)]],
    BeforeValidator(_split_list),
    Field(min_length=1),
]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PopulationConfig(_Section):
    n_mn: int = Field(ge=1)
    r0: float = Field(gt=0, allow_inf_nan=False)
    h0: NonNegativeList
    n_edge: int | None = Field(default=None, ge=0)


class MeetingConfig(_Section):
    m_lambda: float = Field(gt=0, allow_inf_nan=False)
    rate_dist: RateDistribution = RateDistribution.DETERMINISTIC
    gamma_shape: float = Field(default=2.0, gt=0, allow_inf_nan=False)
    mode: DisseminationMode = DisseminationMode.EPIDEMIC


class DeadlinesConfig(_Section):
    ttl_s: NonNegativeList
    grid_step_s: float = Field(default=60.0, gt=0, allow_inf_nan=False)
    grid_max_s: float = Field(default=3600.0, ge=0, allow_inf_nan=False)


class SimConfig(_Section):
    horizon_s: float = Field(default=3600.0, gt=0, allow_inf_nan=False)
    replications: int = Field(default=1000, ge=1)
    seed: int | None = Field(default=None, ge=0, le=MAX_SEED)
    workers: int = Field(default=1, ge=1)
    trace: str | None = None


class CceSectionConfig(_Section):
    theta_high: float = Field(default=0.9, gt=0, le=1)
    theta_low: float = Field(default=0.7, gt=0, le=1)
    drain_headroom: float = Field(default=0.8, gt=0, le=1)
    guard_s: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    buffer_bits: float = Field(default=math.inf, gt=0)
    tick_s: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    dt_ttl_s: float | None = Field(default=None, ge=0, allow_inf_nan=False)
    profile: Literal["peak_hour", "flat"] = "peak_hour"


class ProfileConfig(_Section):
    capacity_bps: float = Field(default=1e8, gt=0, allow_inf_nan=False)
    base_load_bps: float = Field(default=5e7, ge=0, allow_inf_nan=False)
    peak_load_bps: float = Field(default=9.5e7, ge=0, allow_inf_nan=False)
    peak_start_s: float = Field(default=1800.0, ge=0, allow_inf_nan=False)
    peak_end_s: float = Field(default=2400.0, ge=0, allow_inf_nan=False)
    dt_item_bits: float = Field(default=8e6, ge=0, allow_inf_nan=False)
    dt_interval_s: float = Field(default=10.0, gt=0, allow_inf_nan=False)


class ScenarioConfig(_Section):
    """Full experiment description; one model per ``[section]``."""

    population: PopulationConfig
    meeting: MeetingConfig
    deadlines: DeadlinesConfig
    sim: SimConfig = SimConfig()
    cce: CceSectionConfig = CceSectionConfig()
    profile: ProfileConfig = ProfileConfig()

    @property
    def n_edge(self) -> int:
        """Edge servers: explicit, or as many as the largest holder count."""
        if self.population.n_edge is not None:
            return self.population.n_edge
        return int(math.ceil(max(self.population.h0)))

    @property
    def dt_ttl_s(self) -> float:
        if self.cce.dt_ttl_s is not None:
            return self.cce.dt_ttl_s
        return max(self.deadlines.ttl_s)


SECTIONS = tuple(ScenarioConfig.model_fields)


# ── Parsing ────────────────────────────────────────────────────────


def _scan(text: str) -> tuple[dict, dict, dict, list[ConfigIssue]]:
    """Split text into {section: {key: value}} and remember line numbers."""
    data: dict[str, dict[str, str]] = {}
    key_lines: dict[tuple[str, str], int] = {}
    section_lines: dict[str, int] = {}
    issues: list[ConfigIssue] = []
    section = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if match := SECTION_RE.match(line):
            section = match.group(1)
            if section not in SECTIONS:
                expected = ", ".join(SECTIONS)
                issues.append(
                    ConfigIssue(lineno, section, None, f"unknown section (one of {expected})")
                )
            elif section in section_lines:
                issues.append(ConfigIssue(lineno, section, None, "duplicate section"))
            section_lines.setdefault(section, lineno)
            data.setdefault(section, {})
            continue

        if match := ENTRY_RE.match(line):
            key, value = match.group(1), match.group(2).strip()
            if section is None:
                issues.append(ConfigIssue(lineno, None, key, "key outside of any [section]"))
            elif key in data[section]:
                first = key_lines[(section, key)]
                issues.append(
                    ConfigIssue(lineno, section, key, f"duplicate key (first set on line {first})")
                )
            else:
                data[section][key] = value
                key_lines[(section, key)] = lineno
            continue

        issues.append(ConfigIssue(lineno, section, None, f"cannot parse line: {raw.strip()!r}"))

    return data, key_lines, section_lines, issues


def _issues_from_validation(
    error: ValidationError, key_lines: dict, section_lines: dict
) -> list[ConfigIssue]:
    issues = []
    for err in error.errors():
        loc = [str(part) for part in err["loc"]]
        section = loc[0] if loc else None
        key = loc[1] if len(loc) > 1 else None
        line = key_lines.get((section, key)) if key else section_lines.get(section)
        message = err["msg"]
        if err["type"] == "extra_forbidden":
            message = "unknown key"
        elif err["type"] == "missing":
            message = "required key is missing"
        issues.append(ConfigIssue(line, section, key, message))
    return issues


def _check_invariants(config: ScenarioConfig, key_lines: dict) -> list[ConfigIssue]:
    issues = []
    cce = config.cce
    if cce.theta_low > cce.theta_high:
        issues.append(ConfigIssue(
            key_lines.get(("cce", "theta_low")), "cce", "theta_low",
            f"theta_low ({cce.theta_low}) must not exceed theta_high ({cce.theta_high})",
        ))
    pop = config.population
    for h0 in pop.h0:
        if pop.r0 + h0 > pop.n_mn + config.n_edge:
            issues.append(ConfigIssue(
                key_lines.get(("population", "r0")), "population", "r0",
                f"r0 + h0 = {pop.r0 + h0:g} exceeds n_mn + n_edge = {pop.n_mn + config.n_edge}",
            ))
    prof = config.profile
    peak_window_ok = prof.peak_start_s < prof.peak_end_s <= config.sim.horizon_s
    if config.cce.profile == "peak_hour" and not peak_window_ok:
        issues.append(ConfigIssue(
            key_lines.get(("profile", "peak_end_s")), "profile", "peak_end_s",
            "peak window must satisfy peak_start_s < peak_end_s <= sim.horizon_s",
        ))
    return issues


def parse_config(text: str) -> ScenarioConfig:
    """
    Parse and validate a configuration text.

    Raises:
        ConfigError: listing every problem with its line number
    """
    data, key_lines, section_lines, issues = _scan(text)
    if issues:
        raise ConfigError(issues)

    sections = {name: data.get(name, {}) for name in SECTIONS}
    try:
        config = ScenarioConfig.model_validate(sections)
    except ValidationError as e:
        raise ConfigError(_issues_from_validation(e, key_lines, section_lines)) from e

    issues = _check_invariants(config, key_lines)
    if issues:
        raise ConfigError(issues)
    return config


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def with_overrides(
    config: ScenarioConfig, seed: int | None = None, replications: int | None = None
) -> ScenarioConfig:
    """Apply command-line overrides, re-validated against the same field constraints."""
    sim = config.sim.model_dump()
    if seed is not None:
        sim["seed"] = seed
    if replications is not None:
        sim["replications"] = replications
    try:
        return config.model_copy(update={"sim": SimConfig.model_validate(sim)})
    except ValidationError as e:
        issues = [
            ConfigIssue(None, "sim", str(err["loc"][0]), f"override: {err['msg']}")
            for err in e.errors()
        ]
        raise ConfigError(issues) from e


# ── Serialization ──────────────────────────────────────────────────


def _format_value(value) -> str:
    if isinstance(value, list):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(config: ScenarioConfig) -> str:
    """Serialize to the text format; parse_config(format_config(c)) == c."""
    lines = []
    for name in SECTIONS:
        section = getattr(config, name)
        lines.append(f"[{name}]")
        for key, value in section.model_dump(mode="python").items():
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    return "\n".join(lines)
