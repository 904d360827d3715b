"""Shared on-disk formats.

Snapshot dump: a text header of `key = value` lines terminated by a blank
line, then raw little-endian 64-bit float pairs (re, im) in row-major
order, component after component (psi1 then psi2 for spinors).  The header
carries the grid geometry, time, component count, and enough potential
metadata (preset, params, q, m) for downstream commands to rebuild the run
context.  Reads round-trip to bit-equal fields.

CSV: fixed documented header row; all floats printed with 17 significant
digits so regression diffs are meaningful.
"""

from __future__ import annotations

import numpy as np

from . import fields
from .grids import Grid
from .state import SpinorField, VectorField

FORMAT_KEY = "spinorlab_dump"
FORMAT_VERSION = "1"

_DTYPE = np.dtype("<c16")


def fmt(x) -> str:
    """Canonical float formatting: 17 significant digits."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _header_lines(grid: Grid, time: float, components: int, kind: str,
                  q: float, m: float, potential) -> list:
    lines = [
        f"{FORMAT_KEY} = {FORMAT_VERSION}",
        f"kind = {kind}",
        f"dim = {grid.dim}",
        "n = " + " ".join(str(v) for v in grid.n),
        "h = " + " ".join(fmt(v) for v in grid.h),
        "origin = " + " ".join(fmt(v) for v in grid.origin),
        f"time = {fmt(time)}",
        f"components = {components}",
        f"q = {fmt(q)}",
        f"mass = {fmt(m)}",
    ]
    preset_name = potential.preset_name if potential is not None else "Zero"
    lines.append(f"preset = {preset_name}")
    if potential is not None:
        for key in sorted(potential.params):
            val = potential.params[key]
            if isinstance(val, tuple):
                lines.append(f"param_{key} = " + " ".join(fmt(v) for v in val))
            else:
                lines.append(f"param_{key} = {fmt(val)}")
    return lines


def _write(path, lines, data: np.ndarray):
    blob = ("\n".join(lines) + "\n\n").encode("ascii")
    with open(path, "wb") as fh:
        fh.write(blob)
        fh.write(np.ascontiguousarray(data, dtype=_DTYPE).tobytes())


def write_spinor_dump(path, f: SpinorField, time: float,
                      q: float = -1.0, m: float = 1.0, potential=None):
    lines = _header_lines(f.grid, time, 2, "spinor", q, m, potential)
    _write(path, lines, f.data)


def write_vector_dump(path, v: VectorField, time: float,
                      q: float = -1.0, m: float = 1.0, potential=None):
    lines = _header_lines(v.grid, time, 3, "vector", q, m, potential)
    _write(path, lines, v.values.astype(complex))


class DumpError(ValueError):
    pass


def _parse_header(path, raw: bytes) -> dict:
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        raise DumpError(f"{path}: header is not ascii: {exc}") from None
    meta = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        if "=" not in line:
            raise DumpError(f"{path}: malformed header line {line!r}")
        key, _, val = line.partition("=")
        meta[key.strip()] = val.strip()
    return meta


def read_dump(path):
    """Read any dump; returns (grid, data (components, *shape), meta)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    sep = blob.find(b"\n\n")
    if sep < 0:
        raise DumpError(f"{path}: missing blank line after header")
    meta = _parse_header(path, blob[:sep])
    if meta.get(FORMAT_KEY) != FORMAT_VERSION:
        raise DumpError(f"{path}: missing or unsupported {FORMAT_KEY} header")
    for key in ("kind", "dim", "n", "h", "origin", "time", "components", "q",
                "mass", "preset"):
        if key not in meta:
            raise DumpError(f"{path}: header misses required field {key!r}")
    dim = int(meta["dim"])
    n = tuple(int(v) for v in meta["n"].split())
    h = tuple(float(v) for v in meta["h"].split())
    origin = tuple(float(v) for v in meta["origin"].split())
    if len(n) != dim or len(h) != dim or len(origin) != dim:
        raise DumpError(f"{path}: grid fields disagree with dim = {dim}")
    grid = Grid(n=n, h=h, origin=origin)
    components = int(meta["components"])
    payload = blob[sep + 2:]
    expected = components * int(np.prod(n)) * _DTYPE.itemsize
    if len(payload) != expected:
        raise DumpError(
            f"{path}: payload has {len(payload)} bytes, expected {expected}"
        )
    data = np.frombuffer(payload, dtype=_DTYPE).reshape((components,) + n)
    meta["time"] = float(meta["time"])
    meta["q"] = float(meta["q"])
    meta["mass"] = float(meta["mass"])
    return grid, data.astype(complex), meta


def read_spinor_dump(path):
    grid, data, meta = read_dump(path)
    if meta["kind"] != "spinor" or data.shape[0] != 2:
        raise DumpError(f"{path}: not a spinor dump")
    return SpinorField(grid, data), meta


def potential_from_meta(meta) -> "fields.EMPotential":
    """Rebuild the preset recorded in a dump header."""
    name = meta["preset"]
    if name == "ZeemanUniform":
        return fields.zeeman_uniform(float(meta["param_b0"]))
    params = {}
    for key in fields.PRESET_PARAMS.get(name, ()):
        raw = meta.get(f"param_{key}")
        if raw is None:
            raise DumpError(f"dump header misses preset parameter {key!r}")
        vals = [float(v) for v in raw.split()]
        params[key] = tuple(vals) if key in fields.VECTOR_PARAMS else vals[0]
    return fields.preset(name, **params)


def write_csv(path, header, rows):
    """Rows of floats, 17 significant digits, fixed header line."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
