"""Run configuration: INI files with unit-suffixed keys and strict validation.

Example::

    [run]
    scenario = radius-scan
    evaluate = noise_budget
    output = noise.csv

    [sphere]
    radius_nm = 50
    high_index = true

    [environment]
    pressure_torr = 1e-10

    [drive]
    trap_freq_MHz = 1

    [sweep]
    mode = cartesian
    sphere.radius_nm = geomspace(2, 100, 25)

Every physical quantity carries its unit in the key name.  Unknown sections
or keys are rejected with their line number.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .physcore import AMU, CavitySetup, Environment, Sphere, bulk_loss_to_im_eps, convert

EVALUATORS = ("trap", "noise_budget", "thermal", "cooling", "squeeze", "epr")

# section -> key -> (default, converter to the internal value)
_SCHEMA = {
    "run": {
        "scenario": ("unnamed", str),
        "evaluate": ("noise_budget", str),
        "output": ("sweep.csv", str),
        "chunk_size": (64, int),
    },
    "sphere": {
        "radius_nm": (50.0, float),
        "density_kg_per_m3": (2000.0, float),
        "eps_real": (2.0, float),
        "eps_imag": (0.0, float),
        "loss_db_per_km": (None, float),
        "bb_factor": (0.1, float),
        "high_index": (False, "bool"),
    },
    "cavity": {
        "length_cm": (1.0, float),
        "waist_um": (25.0, float),
        "wavelength_nm": (1000.0, float),
        "finesse": (5e4, float),
        "round_trip_loss_ppm": (0.0, float),
    },
    "environment": {
        "pressure_torr": (1e-10, float),
        "temperature_K": (300.0, float),
        "molecular_mass_amu": (28.97, float),
        "gamma_sh": (1.4, float),
        "alpha_g": (0.25, float),
        "alpha_theta": (1.0, float),
    },
    "drive": {
        "trap_freq_MHz": (None, float),
        "intensity_W_per_um2": (None, float),
        "squeeze_R": (0.0, float),
        "aspect_ratio": (None, float),
    },
}

_RANGE = re.compile(r"^(linspace|geomspace)\(\s*([^,]+),\s*([^,]+),\s*(\d+)\s*\)$")


class ConfigError(ValueError):
    """Invalid configuration; the message carries the offending line when known."""


@dataclass
class RunConfig:
    values: dict
    axes: dict = field(default_factory=dict)
    mode: str = "cartesian"
    text: str = ""
    source: str = "<string>"

    def get(self, section, key):
        return self.values[section][key]

    @property
    def scenario(self):
        return self.values["run"]["scenario"]

    @property
    def evaluate(self):
        return self.values["run"]["evaluate"]

    def points(self):
        """Parameter overrides for every sweep point, in deterministic order."""
        if not self.axes:
            return [{}]
        names = list(self.axes)
        grids = [self.axes[n] for n in names]
        if self.mode == "zip":
            return [dict(zip(names, vals)) for vals in zip(*grids)]
        mesh = np.meshgrid(*grids, indexing="ij")
        flat = [m.ravel() for m in mesh]
        return [dict(zip(names, (float(f[i]) for f in flat))) for i in range(flat[0].size)]

    def resolved(self, overrides=None):
        vals = {s: dict(v) for s, v in self.values.items()}
        for name, v in (overrides or {}).items():
            sec, key = name.split(".", 1)
            vals[sec][key] = v
        return vals


def _line_of(text, section, key=None):
    current = None
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("["):
            current = line.strip("[] ").lower()
            if key is None and current == section:
                return i
        elif current == section and key is not None:
            name = re.split(r"[=:]", line, 1)[0].strip()
            if name == key:
                return i
    return None


def _err(text, source, section, key, msg):
    line = _line_of(text, section, key)
    where = f"{source}:{line}" if line else source
    what = f"[{section}] {key}" if key else f"[{section}]"
    raise ConfigError(f"{where}: {what}: {msg}")


def _convert(raw, conv):
    if conv == "bool":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    return conv(raw.strip())


def parse_axis(raw):
    """Axis values from ``a, b, c``, ``linspace(a, b, n)`` or ``geomspace(a, b, n)``."""
    raw = raw.strip()
    m = _RANGE.match(raw)
    if m:
        kind, a, b, n = m.groups()
        fn = np.linspace if kind == "linspace" else np.geomspace
        vals = fn(float(a), float(b), int(n))
    else:
        vals = np.array([float(t) for t in raw.split(",") if t.strip()])
    if vals.size == 0:
        raise ValueError("empty axis")
    if not np.all(np.isfinite(vals)):
        raise ValueError("axis values must be finite")
    return [float(v) for v in vals]


def loads(text, source="<string>"):
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",), inline_comment_prefixes=(";",))
    parser.optionxform = str  # keep unit-suffix case
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    values = {s: {k: d for k, (d, _) in keys.items()} for s, keys in _SCHEMA.items()}
    axes, mode = {}, "cartesian"
    for section in parser.sections():
        if section == "sweep":
            for key, raw in parser.items(section):
                if key == "mode":
                    mode = raw.strip()
                    if mode not in ("cartesian", "zip"):
                        _err(text, source, section, key, "mode must be 'cartesian' or 'zip'")
                    continue
                sec, _, name = key.partition(".")
                if sec not in _SCHEMA or name not in _SCHEMA[sec] or _SCHEMA[sec][name][1] is not float:
                    _err(text, source, section, key, "not a sweepable numeric key")
                try:
                    axes[key] = parse_axis(raw)
                except ValueError as exc:
                    _err(text, source, section, key, str(exc))
            continue
        if section not in _SCHEMA:
            _err(text, source, section, None, "unknown section")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                _err(text, source, section, key, "unknown key")
            try:
                values[section][key] = _convert(raw, _SCHEMA[section][key][1])
            except ValueError as exc:
                _err(text, source, section, key, str(exc))

    if values["run"]["evaluate"] not in EVALUATORS:
        _err(text, source, "run", "evaluate", f"must be one of {', '.join(EVALUATORS)}")
    if mode == "zip" and len({len(v) for v in axes.values()}) > 1:
        _err(text, source, "sweep", None, "zip mode needs axes of equal length")
    if values["run"]["chunk_size"] < 1:
        _err(text, source, "run", "chunk_size", "must be positive")
    cfg = RunConfig(values, axes, mode, text, source)
    try:
        for pt in cfg.points()[:1]:
            build_inputs(cfg.resolved(pt))
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return cfg


def load(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return loads(text, str(path))


@dataclass(frozen=True)
class Inputs:
    sphere: Sphere
    cavity: CavitySetup
    env: Environment
    omega_m: float | None
    intensity: float | None
    squeeze_r: float
    aspect: float | None
    round_trip_loss: float


def build_inputs(vals):
    """Convert a resolved value dictionary into SI domain objects."""
    s, c, e, d = vals["sphere"], vals["cavity"], vals["environment"], vals["drive"]
    wavelength = convert(c["wavelength_nm"], "nm", "m")
    eps_imag = s["eps_imag"]
    if s["loss_db_per_km"] is not None:
        eps_imag = bulk_loss_to_im_eps(s["loss_db_per_km"], s["eps_real"], wavelength)
    radius = convert(s["radius_nm"], "nm", "m")
    if s["high_index"]:
        sphere = Sphere.high_index(radius, density=s["density_kg_per_m3"], bb_factor=s["bb_factor"])
    else:
        sphere = Sphere(radius, s["density_kg_per_m3"], s["eps_real"], eps_imag, s["bb_factor"])
    loss = c["round_trip_loss_ppm"] * 1e-6
    length = c["length_cm"] * 1e-2
    cavity = CavitySetup(length, convert(c["waist_um"], "um", "m"), wavelength, finesse=c["finesse"])
    env = Environment(convert(e["pressure_torr"], "Torr", "Pa"), e["temperature_K"],
                      e["molecular_mass_amu"] * AMU, e["gamma_sh"], e["alpha_g"], e["alpha_theta"])
    omega_m = None if d["trap_freq_MHz"] is None else convert(d["trap_freq_MHz"], "MHz", "rad/s")
    intensity = None if d["intensity_W_per_um2"] is None else convert(d["intensity_W_per_um2"], "W/um2", "W/m2")
    if omega_m is not None and intensity is not None:
        raise ValueError("give either trap_freq_MHz or intensity_W_per_um2, not both")
    if omega_m is None and intensity is None:
        omega_m = 2.0 * math.pi * 1e6
    return Inputs(sphere, cavity, env, omega_m, intensity, d["squeeze_R"], d["aspect_ratio"], loss)


def with_overrides(cfg: RunConfig, point):
    return replace(cfg, values=cfg.resolved(point), axes={})
