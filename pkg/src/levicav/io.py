"""Deterministic CSV output with a commented provenance header."""

from __future__ import annotations

import csv
import hashlib
import io as _io
import math
import os
from pathlib import Path

from . import __version__

OUTPUT_ENV = "LEVICAV_OUTPUT_DIR"

# numerical tolerances recorded in every output header
TOLERANCES = {
    "thermal_xtol_K": 1e-6,
    "spectrum_quad_epsrel": 1e-6,
    "mie_series_audit": 1e-10,
    "cooling_detuning_xatol_rel": 1e-9,
}


def output_dir(default="levicav-output", override=None):
    """Directory for generated files: explicit override, then $LEVICAV_OUTPUT_DIR, then ``default``."""
    path = Path(override or os.environ.get(OUTPUT_ENV) or default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def sha256_text(text):
    return hashlib.sha256(text.encode()).hexdigest()


def fmt(value):
    """Stable text for a CSV cell; floats use the shortest round-trip repr."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    try:
        f = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(f):
        return "nan"
    return repr(f)


def render_table(columns, rows, meta=None):
    buf = _io.StringIO()
    if meta:
        for key in meta:
            buf.write(f"# {key}: {meta[key]}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_table(path, columns, rows, meta=None):
    """Write rows atomically; ``meta`` entries become ``# key: value`` header lines."""
    path = Path(path)
    text = render_table(columns, rows, meta)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
    return path


def provenance(config_text="", extra=None):
    meta = {"generator": f"levicav {__version__}", "config_sha256": sha256_text(config_text)}
    meta.update({f"tol.{k}": v for k, v in TOLERANCES.items()})
    if extra:
        meta.update(extra)
    return meta


def read_table(path):
    """Read a table written by :func:`write_table`; returns (meta, columns, rows of str)."""
    meta, body = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(": ")
            meta[key] = val
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    return meta, columns, list(reader)
