"""Flat ``key=value`` tracker config files.

Blank lines and ``#`` comments are ignored. Keys are TrackerConfig field
names; ``lambda`` is accepted for ``lam``. Unknown keys are errors.
"""

from dataclasses import asdict, fields

from octkcf.tracker import TrackerConfig

ALIASES = {"lambda": "lam"}
FILE_NAMES = {"lam": "lambda"}


class ConfigError(ValueError):
    pass


def _convert(name, kind, raw):
    if kind in (bool, "bool"):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"bad value for {name}: {raw!r}")
    try:
        if kind in (int, "int"):
            return int(raw)
        if kind in (float, "float"):
            return float(raw)
        return str(raw)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def parse_config(text, base=None, source="<config>"):
    types = {f.name: f.type for f in fields(TrackerConfig)}
    values = asdict(base or TrackerConfig())
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        name = ALIASES.get(key, key)
        if name not in types:
            raise ConfigError(f"{source}:{lineno}: unknown config key {key!r}")
        values[name] = _convert(key, types[name], raw)
    return build_config(values)


def build_config(values):
    try:
        return TrackerConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path, base=None):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), base=base, source=str(path))


def dump_config(cfg):
    lines = []
    for name, value in asdict(cfg).items():
        lines.append(f"{FILE_NAMES.get(name, name)}={value!r}" if isinstance(value, float)
                     else f"{FILE_NAMES.get(name, name)}={value}")
    return "\n".join(lines) + "\n"
