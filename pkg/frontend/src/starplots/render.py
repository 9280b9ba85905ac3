"""Render one figure's curve CSV into its reference layout.

Conventions: analysis curves are solid lines, asymptotes dashed, Monte
Carlo points markers only.  Outage figures use a logarithmic y axis
bounded to [1e-5, 1]; rate/throughput figures are linear.  Output is
deterministic for identical CSV and recipe.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .data import MissingSeriesError, load_curves
from .recipes import FigureRecipe

_SIM_MARKERS = ("o", "s", "^", "v", "D", "<", ">", "p", "h", "x", "+", "*")


@dataclass(frozen=True)
class RenderResult:
    path: str
    legend_entries: tuple[str, ...]
    y_scale: str  # "log" | "linear"


def _line_style(provenance: str) -> dict:
    if provenance == "asymptotic":
        return {"linestyle": "--", "linewidth": 1.2}
    return {"linestyle": "-", "linewidth": 1.4}


def render(recipe: FigureRecipe, csv_path, out_path) -> RenderResult:
    """Draw the recipe's series from ``csv_path`` and write ``out_path``."""
    curves = load_curves(csv_path)
    missing = [s.key for s in recipe.series if s.key not in curves]
    if missing:
        raise MissingSeriesError(
            f"{csv_path}: recipe series not found: {', '.join(missing)}")

    fig, ax = plt.subplots(figsize=(6.4, 4.6), dpi=120)
    named = set()
    for style in recipe.series:
        series = curves[style.key]
        if series.provenance == "mc":
            ax.plot(series.rho_db, series.values, linestyle="none",
                    marker="o", markersize=4.5, color=style.color,
                    label=style.label)
        else:
            ax.plot(series.rho_db, series.values, color=style.color,
                    label=style.label, **_line_style(series.provenance))
        named.add(style.key)

    if recipe.sim_legend is not None:
        first = True
        idx = 0
        for key in sorted(curves):
            series = curves[key]
            if series.provenance != "mc" or key in named:
                continue
            ax.plot(series.rho_db, series.values, linestyle="none",
                    marker=_SIM_MARKERS[idx % len(_SIM_MARKERS)],
                    markersize=4.0, markerfacecolor="none", color="k",
                    label=recipe.sim_legend if first else None)
            first = False
            idx += 1

    if recipe.y_axis == "probability":
        ax.set_yscale("log")
        ax.set_ylim(1e-5, 1.0)
        y_scale = "log"
    else:
        y_scale = "linear"
    ax.set_xlabel(recipe.x_label)
    ax.set_ylabel(recipe.y_label)
    ax.grid(True, which="both", alpha=0.3, linestyle=":")
    legend = ax.legend(fontsize=7, loc="best")
    entries = tuple(t.get_text() for t in legend.get_texts())
    fig.savefig(out_path, bbox_inches="tight")
    plt.close(fig)
    return RenderResult(path=str(out_path), legend_entries=entries,
                        y_scale=y_scale)
