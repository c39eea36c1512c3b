"""Run configuration: a TOML file validated into a :class:`RunConfig`.

Validation failures raise :class:`ConfigError` carrying the dotted field name
and, when it can be found, the 1-based line in the source text.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError

CONFIG_DIR_ENV = "STATKAHLER_CONFIG_DIR"
DEFAULT_CONFIG_NAME = "statkahler.toml"

SUITES = ("fisher", "kahler", "pullback", "equivariance", "moment", "orbits", "induce", "subrep")
FAMILIES = ("gaussian_location", "gaussian_location_scale", "categorical", "poisson_truncated")
SPACE_KINDS = ("gauss_hermite", "grid", "finite")
ACTIONS = ("translation", "cyclic", "heisenberg_center")
ALGEBRAS = ("abelian", "heisenberg", "filiform4", "custom")
FORMATS = ("json", "csv")

DEFAULT_TOLERANCES = {
    "fisher.exp_symbols": 1e-8,
    "fisher.mix_curvature": 1e-4,
    "fisher.duality": 1e-5,
    "kahler.j_squared": 1e-12,
    "kahler.compatibility": 1e-12,
    "kahler.det_rel": 1e-9,
    "kahler.closedness": 1e-5,
    "kahler.cotangent": 1e-12,
    "pullback.g_rel": 1e-5,
    "pullback.omega_rel": 1e-5,
    "pullback.case_vv": 1e-6,
    "pullback.case_hh": 1e-6,
    "pullback.case_mixed": 1e-6,
    "equivariance.phi": 1e-10,
    "equivariance.isometry": 1e-8,
    "equivariance.kahler_g": 1e-8,
    "equivariance.kahler_omega": 1e-8,
    "moment.translation": 1e-6,
    "moment.line_integral": 1e-8,
    "moment.stabilizer_constant": 1e-8,
    "moment.shift": 1e-12,
    "orbits.dimension": 0.0,
    "orbits.polarization_dim": 0.0,
    "orbits.sigma_hom": 1e-12,
    "induce.unitarity": 1e-12,
    "induce.homomorphism": 1e-10,
    "subrep.residual": 1e-10,
    "subrep.orthogonality": 1e-12,
}


@dataclass
class RunConfig:
    seed: int = 0
    checks: list[str] = field(default_factory=list)
    points: int = 5
    family: dict[str, Any] = field(default_factory=lambda: {"name": "gaussian_location",
                                                            "space": {"kind": "gauss_hermite", "order": 60}})
    group: dict[str, Any] = field(default_factory=dict)
    lie: dict[str, Any] = field(default_factory=dict)
    induce: dict[str, Any] = field(default_factory=dict)
    subrep: dict[str, Any] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_path: str | None = None
    output_format: str = "json"
    source: str = ""

    def tolerance(self, name: str) -> float:
        return self.tolerances[name]


def find_line(text: str, dotted: str) -> int | None:
    """Line of ``key`` inside table ``a.b`` for a dotted name ``a.b.key``."""
    parts = dotted.split(".")
    table, key = ".".join(parts[:-1]), parts[-1]
    current = ""
    header = re.compile(r"^\s*\[\s*([^\]]+?)\s*\]\s*(#.*)?$")
    for no, line in enumerate(text.splitlines(), start=1):
        m = header.match(line)
        if m:
            current = m.group(1).replace('"', "").replace(" ", "")
            if current == dotted:
                return no
            continue
        m = re.match(r'^\s*"?([A-Za-z0-9_.\-]+)"?\s*=', line)
        if m and current == table and m.group(1) == key:
            return no
    return None


def _fail(text: str, dotted: str, msg: str):
    raise ConfigError(f"{dotted}: {msg}", field=dotted, line=find_line(text, dotted))


def _typed(text, raw: dict, dotted: str, kinds, default=None):
    key = dotted.split(".")[-1]
    if key not in raw:
        return default
    val = raw[key]
    if isinstance(val, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
        _fail(text, dotted, f"expected {kinds}, got a boolean")
    if not isinstance(val, kinds):
        _fail(text, dotted, f"expected {kinds}, got {type(val).__name__}")
    return val


def parse_config(text: str) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError(f"syntax error: {exc}", field=None, line=int(m.group(1)) if m else None) from None

    cfg = RunConfig(source=text)
    known = {"seed", "checks", "points", "family", "group", "lie", "induce", "subrep", "tolerances", "output"}
    for key in raw:
        if key not in known:
            _fail(text, key, "unknown top-level field")

    cfg.seed = _typed(text, raw, "seed", int, 0)
    cfg.points = _typed(text, raw, "points", int, 5)
    if cfg.points < 1:
        _fail(text, "points", "must be positive")
    checks = _typed(text, raw, "checks", list, [])
    for c in checks:
        if c not in SUITES:
            _fail(text, "checks", f"unknown suite {c!r}; choose from {', '.join(SUITES)}")
    cfg.checks = list(checks)

    fam = _typed(text, raw, "family", dict, None)
    if fam is not None:
        if fam.get("name") not in FAMILIES:
            _fail(text, "family.name", f"unknown family {fam.get('name')!r}")
        space = fam.get("space")
        if space is not None:
            if not isinstance(space, dict):
                _fail(text, "family.space", "must be a table")
            if space.get("kind") not in SPACE_KINDS:
                _fail(text, "family.space.kind", f"unknown space kind {space.get('kind')!r}")
        cfg.family = fam

    grp = _typed(text, raw, "group", dict, {})
    if grp and grp.get("action") not in ACTIONS:
        _fail(text, "group.action", f"unknown action {grp.get('action')!r}")
    cfg.group = grp

    lie = _typed(text, raw, "lie", dict, {})
    if lie and lie.get("algebra") not in ALGEBRAS:
        _fail(text, "lie.algebra", f"unknown algebra {lie.get('algebra')!r}")
    cfg.lie = lie
    cfg.induce = _typed(text, raw, "induce", dict, {})
    cfg.subrep = _typed(text, raw, "subrep", dict, {})

    for name, val in _typed(text, raw, "tolerances", dict, {}).items():
        if name not in DEFAULT_TOLERANCES:
            _fail(text, f"tolerances.{name}", "unknown tolerance name")
        if isinstance(val, bool) or not isinstance(val, (int, float)) or val < 0:
            _fail(text, f"tolerances.{name}", "tolerance must be a non-negative number")
        cfg.tolerances[name] = float(val)

    out = _typed(text, raw, "output", dict, {})
    cfg.output_path = _typed(text, out, "output.path", str, None)
    cfg.output_format = _typed(text, out, "output.format", str, "json")
    if cfg.output_format not in FORMATS:
        _fail(text, "output.format", f"format must be one of {FORMATS}")
    return cfg


def resolve_path(path: str | None) -> Path | None:
    """Explicit path, else the default file in ``$STATKAHLER_CONFIG_DIR``; relative paths also try that dir."""
    cfg_dir = os.environ.get(CONFIG_DIR_ENV)
    if path is None:
        if cfg_dir and (Path(cfg_dir) / DEFAULT_CONFIG_NAME).is_file():
            return Path(cfg_dir) / DEFAULT_CONFIG_NAME
        return None
    p = Path(path)
    if not p.is_file() and cfg_dir and not p.is_absolute() and (Path(cfg_dir) / p).is_file():
        return Path(cfg_dir) / p
    return p


def load_config(path: str | None) -> RunConfig:
    resolved = resolve_path(path)
    if resolved is None:
        return RunConfig()
    try:
        text = resolved.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {resolved}: {exc.strerror}") from None
    return parse_config(text)


def apply_tolerance_overrides(cfg: RunConfig, overrides: list[str]):
    for item in overrides:
        name, sep, val = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"--tol expects <name>=<value> with a known name, got {item!r}", field=name or None)
        try:
            tol = float(val)
        except ValueError:
            raise ConfigError(f"--tol {name}: {val!r} is not a number", field=name) from None
        if not tol >= 0:
            raise ConfigError(f"--tol {name}: tolerance must be non-negative", field=name)
        cfg.tolerances[name] = tol
