"""Flat key = value config files for scenarios and sweep specs.

One assignment per line, ``#`` starts a comment, values are SI-unit numbers.
Scenario keys match the Scenario field names; sweep-spec files additionally
accept ``preset``, ``swept_variable``, ``range_start``, ``range_stop``,
``points`` and ``schemes`` (comma-separated), plus any Scenario field or
direct gain (h_EX .. h_YD) as a fixed override.
"""

from __future__ import annotations

import dataclasses

from .channel import Scenario
from .benchmarks import SchemeId
from .sweeps import GAIN_KEYS, SweepSpec, preset_spec

_SCENARIO_FIELDS = tuple(f.name for f in dataclasses.fields(Scenario))
_SWEEP_KEYS = ("preset", "swept_variable", "range_start", "range_stop", "points", "schemes")


class ConfigError(ValueError):
    """Malformed or invalid config file; message carries the line number."""


def parse_kv_lines(path):
    """Yield (line_number, key, raw_value) from a flat config file."""
    entries = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = line.split("=", 1)
            entries.append((lineno, key.strip(), value.strip()))
    return entries


def _parse_float(path, lineno, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{path}:{lineno}: value for {key!r} is not a number: {raw!r}") from None


def parse_schemes(raw: str):
    names = {s.value.lower(): s for s in SchemeId}
    out = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if part.lower() not in names:
            raise ValueError(
                f"unknown scheme {part!r} (choose from {', '.join(s.value for s in SchemeId)})")
        out.append(names[part.lower()])
    if not out:
        raise ValueError("no schemes given")
    return tuple(out)


def scenario_from_file(path) -> Scenario:
    """Build a Scenario from a config file; unset keys keep their defaults."""
    values = {}
    for lineno, key, raw in parse_kv_lines(path):
        if key not in _SCENARIO_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _parse_float(path, lineno, key, raw)
    try:
        return Scenario(**values)
    except ValueError as err:
        raise ConfigError(f"{path}: {err}") from None


def sweep_spec_from_file(path) -> SweepSpec:
    """Build a SweepSpec from a config file.

    A ``preset`` key seeds the spec with that preset's definition; any other
    keys override it.  Without a preset (or with ``preset = custom``) the
    axis and range keys are required.
    """
    entries = parse_kv_lines(path)
    keys = {}
    overrides = {}
    for lineno, key, raw in entries:
        if key in _SWEEP_KEYS:
            keys[key] = (lineno, raw)
        elif key in _SCENARIO_FIELDS or key in GAIN_KEYS:
            overrides[key] = _parse_float(path, lineno, key, raw)
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")

    preset = keys.get("preset", (0, "custom"))[1]
    if preset != "custom":
        try:
            base = preset_spec(preset)
        except ValueError as err:
            raise ConfigError(f"{path}:{keys['preset'][0]}: {err}") from None
        spec_kw = dict(
            preset=base.preset, swept_variable=base.swept_variable,
            start=base.start, stop=base.stop, points=base.points,
            schemes=base.schemes, overrides={**base.overrides, **overrides},
        )
    else:
        required = ("swept_variable", "range_start", "range_stop")
        missing = [k for k in required if k not in keys]
        if missing:
            raise ConfigError(f"{path}: custom sweep needs keys {missing}")
        spec_kw = dict(preset="custom", swept_variable=keys["swept_variable"][1],
                       start=0.0, stop=0.0, points=21,
                       schemes=(SchemeId.Cooperate, SchemeId.NonCooperate, SchemeId.RelayBest),
                       overrides=overrides)

    if "swept_variable" in keys:
        spec_kw["swept_variable"] = keys["swept_variable"][1]
    if "range_start" in keys:
        lineno, raw = keys["range_start"]
        spec_kw["start"] = _parse_float(path, lineno, "range_start", raw)
    if "range_stop" in keys:
        lineno, raw = keys["range_stop"]
        spec_kw["stop"] = _parse_float(path, lineno, "range_stop", raw)
    if "points" in keys:
        lineno, raw = keys["points"]
        spec_kw["points"] = int(_parse_float(path, lineno, "points", raw))
    if "schemes" in keys:
        lineno, raw = keys["schemes"]
        try:
            spec_kw["schemes"] = parse_schemes(raw)
        except ValueError as err:
            raise ConfigError(f"{path}:{lineno}: {err}") from None

    try:
        return SweepSpec(**spec_kw)
    except ValueError as err:
        raise ConfigError(f"{path}: {err}") from None
