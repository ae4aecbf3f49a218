"""JSON wire formats shared by the library, the CLI, and the fixtures.

Complex matrices are objects {"rows": n, "cols": m, "data": [[re, im], ...]}
with entries in row-major order; all numbers are IEEE doubles.  Channels hold
their Kraus list, spectra their energy list, and decompositions serialize the
masks only: partial shifts are rebuilt from sigma and the spectrum.
"""
from __future__ import annotations

import json

import numpy as np

from .channels import Channel
from .covariant import SectorDecomposition, SectorMask, Spectrum, partial_shift
from .errors import ParseError


def matrix_to_json(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {
        "rows": mat.shape[0],
        "cols": mat.shape[1],
        "data": [[float(x.real), float(x.imag)] for x in mat.reshape(-1)],
    }


def matrix_from_json(obj) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        data = obj["data"]
        if len(data) != rows * cols:
            raise ParseError(f"matrix data has {len(data)} entries, expected {rows * cols}")
        flat = np.array([complex(re, im) for re, im in data])
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix object: {exc}") from exc
    return flat.reshape(rows, cols)


def vector_from_json(obj) -> np.ndarray:
    mat = matrix_from_json(obj)
    if 1 not in mat.shape:
        raise ParseError(f"expected a vector, got shape {mat.shape}")
    return mat.reshape(-1)


def channel_to_json(channel: Channel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [matrix_to_json(k) for k in channel.kraus],
    }


def channel_from_json(obj) -> Channel:
    try:
        kraus = tuple(matrix_from_json(k) for k in obj["kraus"])
        dim_in, dim_out = int(obj["dim_in"]), int(obj["dim_out"])
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed channel object: {exc}") from exc
    chan = Channel(kraus)
    if chan.dim_in != dim_in or chan.dim_out != dim_out:
        raise ParseError(
            f"declared dims ({dim_in}, {dim_out}) do not match Kraus shape "
            f"({chan.dim_in}, {chan.dim_out})"
        )
    return chan


def spectrum_to_json(spectrum: Spectrum) -> dict:
    return {
        "energies": [float(x) for x in spectrum.energies],
        "match_tol": float(spectrum.match_tol),
    }


def spectrum_from_json(obj) -> Spectrum:
    try:
        energies = [float(x) for x in obj["energies"]]
        match_tol = float(obj.get("match_tol", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed spectrum object: {exc}") from exc
    return Spectrum(energies=np.array(energies), match_tol=match_tol)


def decomposition_to_json(decomp: SectorDecomposition) -> dict:
    return {
        "spectrum": spectrum_to_json(decomp.spectrum),
        "sectors": [
            {"sigma": float(shift.sigma), "mask": matrix_to_json(mask.mask)}
            for shift, mask in decomp.sectors
        ],
    }


def decomposition_from_json(obj) -> SectorDecomposition:
    try:
        spectrum = spectrum_from_json(obj["spectrum"])
        raw = [(float(s["sigma"]), matrix_from_json(s["mask"])) for s in obj["sectors"]]
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed decomposition object: {exc}") from exc
    sectors = []
    for sigma, mask in raw:
        shift = partial_shift(spectrum, sigma)
        sectors.append(
            (shift, SectorMask(sigma=sigma, mask=mask, domain=shift.domain))
        )
    return SectorDecomposition(spectrum=spectrum, sectors=tuple(sectors))


def load_json(path) -> object:
    """Parse a JSON file, turning syntax errors into ParseError with position."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at byte offset {exc.pos}: {exc.msg}") from exc


def _format(value):
    """Recursively format floats with 17 significant digits (round-trip safe)."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, complex):
        return _format([value.real, value.imag])
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_format(v)}" for k, v in value.items())
        return "{" + items + "}"
    if isinstance(value, (list, tuple)) or isinstance(value, np.ndarray):
        return "[" + ", ".join(_format(v) for v in value) + "]"
    if value is None:
        return "null"
    raise TypeError(f"cannot serialize {type(value)}")


def dumps(value) -> str:
    """Serialize to JSON with every float at 17 significant digits."""
    return _format(value)
