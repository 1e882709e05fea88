"""Deterministic CSV tables and SVG plots for experiment reports.

Determinism contract: same rows in, same bytes out.  Floats are rendered
with the %.12g format, complex columns are split into _re/_im pairs, text
is UTF-8 with "\n" line endings, and figures are written with a fixed hash
salt and no timestamp metadata.
"""

from __future__ import annotations

import csv
import io
import os

import numpy as np

FLOAT_FMT = "%.12g"


def _render(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT % float(value)
    return str(value)


def _explode(row):
    out = {}
    for key, value in row.items():
        if isinstance(value, (complex, np.complexfloating)):
            out[key + "_re"] = FLOAT_FMT % value.real
            out[key + "_im"] = FLOAT_FMT % value.imag
        else:
            out[key] = _render(value)
    return out


def rows_to_csv_text(rows, columns=None):
    """Render dict rows as CSV text; column order is the explicit list or
    first-seen order across rows (complex keys exploded into _re/_im)."""
    exploded = [_explode(r) for r in rows]
    if columns is None:
        columns = []
        for r in exploded:
            for k in r:
                if k not in columns:
                    columns.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, restval="",
                            extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in exploded:
        writer.writerow(r)
    return buf.getvalue()


def write_csv(path, rows, columns=None):
    text = rows_to_csv_text(rows, columns)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


# --------------------------------------------------------------------------
# Plots (matplotlib is imported lazily so the numerics never depend on it)


def _figure():
    import matplotlib
    matplotlib.use("Agg", force=False)
    matplotlib.rcParams["svg.hashsalt"] = "jholo"
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    import matplotlib.pyplot as plt
    plt.close(fig)
    return path


def save_loglog(path, x, series, xlabel, ylabel, title=""):
    """Log-log decay plot; series is {label: y-array}."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, y in series.items():
        y = np.asarray(y, dtype=float)
        pos = (np.asarray(x) > 0) & (y > 0)
        ax.loglog(np.asarray(x)[pos], y[pos], "o-", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def save_scatter(path, x, y, mask=None, xlabel="", ylabel="", title=""):
    """Scatter with an optional boolean mask split into pass/fail colors."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(5, 4))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if mask is None:
        ax.plot(x, y, ".", ms=4)
    else:
        mask = np.asarray(mask, dtype=bool)
        ax.plot(x[mask], y[mask], ".", ms=5, color="tab:blue", label="in/pass")
        ax.plot(x[~mask], y[~mask], "x", ms=5, color="tab:red", label="out/fail")
        ax.legend()
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)
