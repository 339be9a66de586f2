"""Sketch files and numeric text ingestion.

A sketch file is JSON lines, one section per line, ending with an ``end``
section so truncation is always detectable. Floats are written with
``repr`` precision and read back bit-for-bit.
"""

from __future__ import annotations

import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .bivariate import BivariateSketch
from .errors import SketchError
from .moments import RunningMoments
from .univariate import UnivariateSketch

FORMAT_NAME = "hermsketch"
FORMAT_VERSION = 1

Sketch = Union[UnivariateSketch, BivariateSketch]


class SketchFormatError(SketchError):
    """A sketch file could not be parsed."""


def _sections_for(est_type: str) -> list[str]:
    if est_type == "univariate":
        return ["header", "moments_x", "coefficients", "end"]
    return ["header", "moments_x", "moments_y", "coefficients", "marginal_x", "marginal_y", "end"]


def _moments_record(m: RunningMoments) -> dict:
    return {"lambda": m.lam, "count": m.count, "mean": m.mean, "m2": m.m2,
            "ew_mean": m.ew_mean, "ew_var": m.ew_var}


def _floats(arr: np.ndarray) -> list[float]:
    return [float(v) for v in np.ravel(arr)]


def serialize(sketch: Sketch) -> bytes:
    if isinstance(sketch, UnivariateSketch):
        est_type = "univariate"
    elif isinstance(sketch, BivariateSketch):
        est_type = "bivariate"
    else:
        raise TypeError(f"not a sketch: {type(sketch).__name__}")
    header = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "est_type": est_type,
        "order_n": sketch.order_n,
        "standardize": sketch.standardize,
        "lambda": sketch.lam,
        "obs_count": sketch.obs_count,
    }
    records = [("header", header)]
    if est_type == "univariate":
        records += [
            ("moments_x", _moments_record(sketch.moments)),
            ("coefficients", {"values": _floats(sketch.coeffs)}),
        ]
    else:
        records += [
            ("moments_x", _moments_record(sketch.moments_x)),
            ("moments_y", _moments_record(sketch.moments_y)),
            ("coefficients", {"values": _floats(sketch.coeff_matrix)}),
            ("marginal_x", {"values": _floats(sketch.marginal_x)}),
            ("marginal_y", {"values": _floats(sketch.marginal_y)}),
        ]
    records.append(("end", {}))
    lines = [json.dumps({"section": name, **body}, allow_nan=False) for name, body in records]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _reject_constant(name):
    raise SketchFormatError(f"non-finite value {name} in sketch file")


def _finite(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SketchFormatError(f"{what} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise SketchFormatError(f"{what} must be finite")
    return value


def _moments_from(rec: dict, section: str) -> RunningMoments:
    try:
        lam = rec["lambda"]
        m = RunningMoments(lam=None if lam is None else _finite(lam, f"{section}.lambda"))
        m.count = int(rec["count"])
        for key in ("mean", "m2", "ew_mean", "ew_var"):
            setattr(m, key, _finite(rec[key], f"{section}.{key}"))
    except KeyError as exc:
        raise SketchFormatError(f"section {section!r} lacks field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise SketchFormatError(f"section {section!r}: {exc}") from None
    return m


def _values(rec: dict, section: str, length: int) -> np.ndarray:
    vals = rec.get("values")
    if not isinstance(vals, list):
        raise SketchFormatError(f"section {section!r} lacks its values")
    if len(vals) != length:
        raise SketchFormatError(
            f"section {section!r} has {len(vals)} values, expected {length}")
    return np.array([_finite(v, section) for v in vals], dtype=float)


def deserialize(data: bytes) -> Sketch:
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    records: dict[str, dict] = {}
    order: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line, parse_constant=_reject_constant)
        except json.JSONDecodeError:
            expected = _expected_after(order, records)
            raise SketchFormatError(
                f"line {lineno} is malformed (truncated file?); "
                f"missing section {expected!r}") from None
        if not isinstance(rec, dict) or "section" not in rec:
            raise SketchFormatError(f"line {lineno} is not a sketch section")
        name = rec.pop("section")
        if name in records:
            raise SketchFormatError(f"duplicate section {name!r}")
        records[name] = rec
        order.append(name)
        if name == "header":
            _check_header(rec)

    if "header" not in records:
        raise SketchFormatError("missing section 'header'")
    header = records["header"]
    est_type = header["est_type"]
    for name in _sections_for(est_type):
        if name not in records:
            raise SketchFormatError(f"truncated sketch file: missing section {name!r}")

    try:
        n, standardize, lam = int(header["order_n"]), bool(header["standardize"]), header["lambda"]
        obs_count = int(header["obs_count"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SketchFormatError(f"bad header: {exc}") from None
    lam = None if lam is None else _finite(lam, "header.lambda")
    size = n + 1
    if est_type == "univariate":
        sketch = UnivariateSketch(n, standardize, lam)
        sketch.moments = _moments_from(records["moments_x"], "moments_x")
        sketch.coeffs = _values(records["coefficients"], "coefficients", size)
    else:
        sketch = BivariateSketch(n, standardize, lam)
        sketch.moments_x = _moments_from(records["moments_x"], "moments_x")
        sketch.moments_y = _moments_from(records["moments_y"], "moments_y")
        sketch.coeff_matrix = _values(records["coefficients"], "coefficients", size * size).reshape(size, size)
        sketch.marginal_x = _values(records["marginal_x"], "marginal_x", size)
        sketch.marginal_y = _values(records["marginal_y"], "marginal_y", size)
    sketch.obs_count = obs_count
    return sketch


def _check_header(rec: dict) -> None:
    if rec.get("format") != FORMAT_NAME:
        raise SketchFormatError("not a hermsketch file")
    version = rec.get("format_version")
    if version != FORMAT_VERSION:
        raise SketchFormatError(
            f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    if rec.get("est_type") not in ("univariate", "bivariate"):
        raise SketchFormatError(f"unknown est_type {rec.get('est_type')!r}")


def _expected_after(order: list[str], records: dict) -> str:
    if "header" not in records:
        return "header"
    for name in _sections_for(records["header"]["est_type"]):
        if name not in records:
            return name
    return "end"


def save(sketch: Sketch, path: str) -> None:
    """Write atomically so a failed write never leaves a half file."""
    payload = serialize(sketch)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hsk-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path: str) -> Sketch:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


# -- numeric text ingestion ---------------------------------------------------

_SPLIT = re.compile(r"[,\s]+")


@dataclass
class IngestResult:
    values: np.ndarray  # shape (n,) for one column, (n, 2) for two
    skipped: int
    bad_lines: list


class IngestError(SketchError):
    pass


def ingest_stream(source: Union[str, IO[str]], columns: int = 1, on_bad_line: str = "skip") -> IngestResult:
    """Read finite numeric observations from a text stream.

    ``source`` is an open text stream, a path, or ``"-"`` for stdin. Fields
    may be separated by commas or whitespace; blank lines and ``#`` comments
    are ignored. A line is bad when it has the wrong number of fields or any
    field is not a finite number.
    """
    if columns not in (1, 2):
        raise ValueError("columns must be 1 or 2")
    if on_bad_line not in ("skip", "fail"):
        raise ValueError("on_bad_line must be 'skip' or 'fail'")
    if isinstance(source, str):
        if source == "-":
            return _ingest(sys.stdin, columns, on_bad_line)
        with open(source, "r", encoding="utf-8") as fh:
            return _ingest(fh, columns, on_bad_line)
    return _ingest(source, columns, on_bad_line)


def _ingest(stream: IO[str], columns: int, on_bad_line: str) -> IngestResult:
    rows = []
    bad = []
    for lineno, line in enumerate(stream, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        try:
            if len(fields) != columns:
                raise ValueError(f"expected {columns} field(s), got {len(fields)}")
            row = [float(f) for f in fields]
            if not all(math.isfinite(v) for v in row):
                raise ValueError("non-finite value")
        except ValueError as exc:
            if on_bad_line == "fail":
                raise IngestError(f"line {lineno}: {exc}") from None
            bad.append(lineno)
            continue
        rows.append(row)
    values = np.array(rows, dtype=float).reshape(-1, columns)
    if columns == 1:
        values = values[:, 0]
    return IngestResult(values=values, skipped=len(bad), bad_lines=bad)


def ingest_text(text: str, columns: int = 1, on_bad_line: str = "skip") -> IngestResult:
    return ingest_stream(io.StringIO(text), columns, on_bad_line)
