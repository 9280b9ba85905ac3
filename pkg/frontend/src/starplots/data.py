"""Reader for the curve CSVs emitted by the starnoma CLI.

Schema (exact header): scheme,rho_db,value,ci_halfwidth,provenance
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

EXPECTED_HEADER = ["scheme", "rho_db", "value", "ci_halfwidth", "provenance"]


class SchemaError(ValueError):
    """The CSV does not carry the expected curve schema."""


class MissingSeriesError(KeyError):
    """A series named by the recipe is absent from the CSV."""


@dataclass
class Series:
    scheme: str
    provenance: str
    rho_db: list[float]
    values: list[float]
    half_widths: list[float]

    @property
    def key(self) -> str:
        return f"{self.scheme}/{self.provenance}"


def load_curves(path) -> dict[str, Series]:
    """Parse a curve CSV into {scheme/provenance: Series}, sorted by SNR."""
    table: dict[str, Series] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file")
        if header != EXPECTED_HEADER:
            raise SchemaError(f"{path}: unexpected header {header!r}")
        for row in reader:
            if not row:
                continue
            if len(row) != 5:
                raise SchemaError(f"{path}: malformed row {row!r}")
            scheme, rho_db, value, hw, provenance = row
            key = f"{scheme}/{provenance}"
            series = table.get(key)
            if series is None:
                series = table[key] = Series(scheme, provenance, [], [], [])
            series.rho_db.append(float(rho_db))
            series.values.append(float(value))
            series.half_widths.append(float(hw))
    for series in table.values():
        order = sorted(range(len(series.rho_db)),
                       key=lambda i: series.rho_db[i])
        series.rho_db = [series.rho_db[i] for i in order]
        series.values = [series.values[i] for i in order]
        series.half_widths = [series.half_widths[i] for i in order]
    return table
