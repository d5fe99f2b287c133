"""Spectrum ingestion and deterministic output files."""
from __future__ import annotations

import math
import re
from pathlib import Path

import numpy as np

from .errors import DataError
from .fitting import Spectrum

_SPLIT = re.compile(r"[,;\s]+")


def _is_number(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_spectrum_text(text: str, db=False, source="<text>") -> Spectrum:
    """Two- or three-column delimited text: frequency (GHz), transmission[, sigma].

    Commas, semicolons and whitespace all delimit; ``#`` starts a comment and
    a single non-numeric header line is skipped.  With ``db=True`` the second
    column is power in dB and sigma (if any) is in dB too.
    """
    rows = []
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = [t for t in _SPLIT.split(line) if t]
        first, seen_content = not seen_content, True
        if first and not any(_is_number(t) for t in toks):
            continue  # header
        if len(toks) not in (2, 3):
            raise DataError(f"{source}:{lineno}: expected 2 or 3 columns, got {len(toks)}")
        try:
            vals = [float(t) for t in toks]
        except ValueError:
            raise DataError(f"{source}:{lineno}: non-numeric cell in {raw.strip()!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"{source}:{lineno}: non-finite value")
        rows.append(vals)
    if len(rows) < 2:
        raise DataError(f"{source}: need at least 2 data rows, got {len(rows)}")
    ncols = {len(r) for r in rows}
    if len(ncols) != 1:
        raise DataError(f"{source}: rows have differing column counts")
    arr = np.array(sorted(rows, key=lambda r: r[0]))
    if np.any(np.diff(arr[:, 0]) == 0):
        dup = arr[1:, 0][np.diff(arr[:, 0]) == 0][0]
        raise DataError(f"{source}: duplicate frequency {dup:g}")
    freq, t = arr[:, 0], arr[:, 1]
    sigma = arr[:, 2] if arr.shape[1] == 3 else None
    if db:
        t = 10.0 ** (t / 10.0)
        if sigma is not None:
            sigma = t * math.log(10.0) / 10.0 * sigma
    return Spectrum(freq, t, sigma)


def ingest_spectrum(path, db=False) -> Spectrum:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DataError(f"cannot read data file {p}: {exc}") from None
    return parse_spectrum_text(text, db=db, source=str(p))


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return format(float(v), ".15g")


def write_table(path, header, columns):
    """Comma-delimited table; ``None`` or NaN cells are left empty."""
    n = len(columns[0])
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(_fmt(col[i]) if col is not None else "" for col in columns))
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def write_overlay(path, frequency, model, data=None):
    """Columns ``frequency, model, data, residual`` (last two empty without data)."""
    model = np.asarray(model, dtype=float)
    if data is None:
        cols = [frequency, model, [None] * len(model), [None] * len(model)]
    else:
        data = np.asarray(data, dtype=float)
        cols = [frequency, model, data, data - model]
    return write_table(path, ["frequency_ghz", "model", "data", "residual"], cols)


def write_report(path, title, entries):
    """Plain-text ``key: value`` report. ``entries`` is a list of pairs."""
    width = max((len(k) for k, _ in entries), default=0)
    lines = [title, "=" * len(title)]
    for key, value in entries:
        if isinstance(value, float):
            value = format(value, ".10g")
        lines.append(f"{key.ljust(width)} : {value}")
    text = "\n".join(lines) + "\n"
    Path(path).write_text(text)
    return text
