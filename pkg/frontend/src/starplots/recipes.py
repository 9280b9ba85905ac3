"""Figure recipes: which series a figure draws, how they are styled, and
which axis layout it uses.

Recipes live as flat text files under ``starplots/recipes`` (one per
figure) so the figure structure stays reviewable without reading code:

    figure = fig2
    y_axis = probability          # probability -> log y in [1e-5, 1]
    y_label = Outage probability
    series = noma_n_psic/analytic | label=User n pSIC (analysis)
    series = noma_n_psic/asymptotic | label=User n pSIC (asymptotic)
    sim_legend = Simulation       # marker-only MC series share one entry

MC series listed as ``series`` lines get their own legend entry; all
remaining ``provenance == mc`` series in the CSV are drawn as markers
under the shared ``sim_legend`` entry.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass

_VALID_AXES = ("probability", "rate")


@dataclass(frozen=True)
class SeriesStyle:
    key: str            # scheme/provenance as found in the CSV
    label: str
    color: str | None = None


@dataclass(frozen=True)
class FigureRecipe:
    figure: str
    y_axis: str
    y_label: str
    series: tuple[SeriesStyle, ...]
    sim_legend: str | None = None
    x_label: str = "Transmit SNR (dB)"

    def __post_init__(self):
        if self.y_axis not in _VALID_AXES:
            raise ValueError(f"unknown y_axis {self.y_axis!r}")
        if not self.series:
            raise ValueError("recipe lists no series")


def parse_recipe(text: str) -> FigureRecipe:
    fields: dict[str, str] = {}
    series: list[SeriesStyle] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = (p.strip() for p in line.partition("="))
        if not eq:
            raise ValueError(f"recipe line {lineno}: expected key = value")
        if key == "series":
            parts = [p.strip() for p in value.split("|")]
            opts = dict(p.split("=", 1) for p in parts[1:])
            series.append(SeriesStyle(key=parts[0],
                                      label=opts.get("label", parts[0]),
                                      color=opts.get("color")))
        else:
            fields[key] = value
    return FigureRecipe(
        figure=fields["figure"],
        y_axis=fields["y_axis"],
        y_label=fields.get("y_label", ""),
        series=tuple(series),
        sim_legend=fields.get("sim_legend"),
        x_label=fields.get("x_label", "Transmit SNR (dB)"),
    )


def load_recipe(figure: str) -> FigureRecipe:
    resource = importlib.resources.files("starplots") / "recipes" / f"{figure}.recipe"
    try:
        text = resource.read_text()
    except FileNotFoundError:
        raise KeyError(f"no recipe for {figure!r}")
    recipe = parse_recipe(text)
    if recipe.figure != figure:
        raise ValueError(f"recipe file for {figure!r} declares "
                         f"{recipe.figure!r}")
    return recipe


def known_figures() -> list[str]:
    root = importlib.resources.files("starplots") / "recipes"
    names = [p.name.removesuffix(".recipe") for p in root.iterdir()
             if p.name.endswith(".recipe")]
    return sorted(names, key=lambda s: int(s.removeprefix("fig")))
