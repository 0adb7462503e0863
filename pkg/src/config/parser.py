import math
import re
from typing import Dict, Tuple, Type

from pydantic import BaseModel, ValidationError

from exceptions import ConfigParseError
from schemas import DdpgConfig, EnvConfig, RewardConfig, RobotParams, RunConfig, SoilParams
from schemas.validators import format_layer_sizes

SECTION_SCHEMAS: Dict[str, Type[BaseModel]] = {
    "soil": SoilParams,
    "robot": RobotParams,
    "env": EnvConfig,
    "reward": RewardConfig,
    "ddpg": DdpgConfig,
}
RUN_SECTION = "run"
RAW_STRING_KEYS = {("ddpg", "hidden_sizes"), (RUN_SECTION, "output_dir")}
DEGREE_KEYS = {("soil", "friction_angle_deg"): "friction_angle"}

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]$")
_ENTRY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


def _convert_scalar(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        return raw


def _collect_sections(text: str) -> Tuple[Dict[str, Dict[str, Tuple[object, int]]], Dict[str, int]]:
    sections: Dict[str, Dict[str, Tuple[object, int]]] = {}
    header_lines: Dict[str, int] = {}
    current = None

    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#;":
            continue

        header = _SECTION_RE.match(stripped)
        if header:
            current = header.group(1)
            if current not in SECTION_SCHEMAS and current != RUN_SECTION:
                raise ConfigParseError(f"unknown section [{current}]", line=line_number)
            if current in header_lines:
                raise ConfigParseError(f"duplicate section [{current}]", line=line_number)
            header_lines[current] = line_number
            sections[current] = {}
            continue

        entry = _ENTRY_RE.match(stripped)
        if entry is None:
            raise ConfigParseError(f"expected 'key = value', got {stripped!r}", line=line_number)
        if current is None:
            raise ConfigParseError("key outside of any [section]", line=line_number)

        key, raw = entry.group(1), entry.group(2).strip()
        if not raw:
            raise ConfigParseError(f"missing value for {key!r}", line=line_number)
        if key in sections[current]:
            raise ConfigParseError(f"duplicate key {key!r}", line=line_number)

        value = raw if (current, key) in RAW_STRING_KEYS else _convert_scalar(raw)
        sections[current][key] = (value, line_number)

    return sections, header_lines


def _build_section(name: str, entries: Dict[str, Tuple[object, int]], header_line: int) -> BaseModel:
    values = {}
    lines = {}
    for key, (value, line_number) in entries.items():
        target = DEGREE_KEYS.get((name, key))
        if target is not None:
            if target in entries:
                raise ConfigParseError(f"both {key!r} and {target!r} given", line=line_number)
            if not isinstance(value, (int, float)):
                raise ConfigParseError(f"{key!r} must be a number", line=line_number)
            value = math.radians(value)
            key = target
        values[key] = value
        lines[key] = line_number

    try:
        return SECTION_SCHEMAS[name](**values)
    except ValidationError as error:
        first = error.errors()[0]
        field = first["loc"][0] if first["loc"] else None
        raise ConfigParseError(
            f"[{name}] {field or 'section'}: {first['msg']}",
            line=lines.get(field, header_line)
        )


def parse_config(text: str) -> RunConfig:
    """
    Parse the line-oriented run configuration.

    Sections are ``[soil]``, ``[robot]``, ``[env]``, ``[reward]``, ``[ddpg]`` and ``[run]``;
    entries are ``key = value``. Missing keys keep their table defaults.

    :param text: Configuration text.
    :return: The validated RunConfig.
    :raises ConfigParseError: on unknown sections or keys, malformed lines or invalid values.
    """
    sections, header_lines = _collect_sections(text)

    built = {
        name: _build_section(name, sections[name], header_lines[name])
        for name in SECTION_SCHEMAS
        if name in sections
    }

    run_entries = sections.get(RUN_SECTION, {})
    for key, (_, line_number) in run_entries.items():
        if key != "output_dir":
            raise ConfigParseError(f"[run] unknown key {key!r}", line=line_number)
    if "output_dir" in run_entries:
        built["output_dir"] = str(run_entries["output_dir"][0])

    return RunConfig(**built)


def _format_value(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not part of the config grammar")
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return format_layer_sizes(value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """Render a RunConfig in the config grammar; parse_config reads it back unchanged."""
    lines = []
    for name in SECTION_SCHEMAS:
        section = getattr(config, name)
        lines.append(f"[{name}]")
        for key, value in section.model_dump().items():
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        lines.append("")
    lines.append(f"[{RUN_SECTION}]")
    lines.append(f"output_dir = {config.output_dir}")
    return "\n".join(lines) + "\n"
