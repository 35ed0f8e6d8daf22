"""CSV dumps and PNG figures for experiment curves.

Each curve becomes ``<prefix>_<name>.csv`` and ``<prefix>_<name>.png`` in the
same directory.  Figures are drawn with the non-interactive Agg backend.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _columns(curve):
    cols = {curve.x_label: np.asarray(curve.x)}
    for key, val in curve.series.items():
        val = np.asarray(val)
        if np.iscomplexobj(val):
            cols[f"{key}_re"] = val.real
            cols[f"{key}_im"] = val.imag
        else:
            cols[key] = val
    return cols


def _slug(s: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in s)


def write_curve_csv(curve, directory, prefix: str) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{_slug(prefix)}_{_slug(curve.name)}.csv"
    cols = _columns(curve)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(cols))
        for row in zip(*cols.values()):
            w.writerow([repr(float(v)) for v in row])
    return path


def render_curve(curve, directory, prefix: str) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{_slug(prefix)}_{_slug(curve.name)}.png"
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    x = np.asarray(curve.x, dtype=float)
    for key, val in _columns(curve).items():
        if key == curve.x_label:
            continue
        y = np.asarray(val, dtype=float)
        if curve.logy:
            y = np.abs(y)
            y = np.where(y > 0, y, np.nan)
        ax.plot(x, y, marker="o" if x.size <= 32 else None, ms=3, label=key)
    if curve.logy:
        ax.set_yscale("log")
    ax.set_xlabel(curve.x_label)
    ax.set_title(curve.title or curve.name)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def dump_curves(curves, directory, prefix: str) -> list[Path]:
    """Write every curve as CSV plus PNG; returns the paths written."""
    out = []
    for c in curves:
        out.append(write_curve_csv(c, directory, prefix))
        out.append(render_curve(c, directory, prefix))
    return out
