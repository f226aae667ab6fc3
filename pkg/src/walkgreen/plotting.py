"""Figure rendering for the CLI table output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_table_figure(table: dict, path: str, reference: float | None = None) -> str:
    """Plot every value column of a table against its index column.

    ``table`` is the structure written by ``walkgreen table``: a ``domain``
    label, an index name ``index``, a list ``rows`` of dicts with the index
    plus ``<name>_value`` / ``<name>_error`` pairs.  An optional horizontal
    ``reference`` line marks a limit value (e.g. ``g(0,0)`` under a
    half-space diagonal).  Returns ``path``.
    """
    rows = table["rows"]
    index = table["index"]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if rows:
        ts = [r[index] for r in rows]
        series = [k[: -len("_value")] for k in rows[0] if k.endswith("_value")]
        for name in series:
            vals = [r[f"{name}_value"] for r in rows]
            errs = [r.get(f"{name}_error", 0.0) for r in rows]
            ax.errorbar(ts, vals, yerr=errs, marker="o", markersize=3, capsize=2, label=name)
    if reference is not None:
        ax.axhline(reference, color="gray", linestyle="--", linewidth=1, label="g(0,0)")
    ax.set_xlabel(index)
    ax.set_ylabel("Green's function")
    ax.set_title(table["domain"])
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
