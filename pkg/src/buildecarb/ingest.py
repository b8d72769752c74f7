"""Panel ingestion: CSV parsing, row validation and the region-year join.

Two input tables are read, each with a fixed header::

    region,year,population,households,gdp,service_gdp,hfc,floor_space
    region,year,sector,end_use,energy_mj,emissions_kgco2

Lines starting with ``#`` before the header carry ``key: value`` metadata.
``energy_unit`` and ``emissions_unit`` rescale the end-use columns to MJ and
kg; anything else (e.g. ``currency_basis``) is kept verbatim and never
interpreted. Rejected rows are reported, never repaired.
"""

from __future__ import annotations

import csv
import io
import os
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .core import (
    EndUseRecord,
    FactorVector,
    IntensityPoint,
    MacroRecord,
    Sector,
    aggregate_emissions,
    derive_factors,
    intensity_from_factors,
)
from .errors import (
    DecarbError,
    MissingHeader,
    NonNumericField,
    RegionNotCovered,
    UnknownColumn,
    WindowOutsideCoverage,
)

MACRO_COLUMNS = ("region", "year", "population", "households", "gdp", "service_gdp", "hfc", "floor_space")
ENDUSE_COLUMNS = ("region", "year", "sector", "end_use", "energy_mj", "emissions_kgco2")

ENERGY_UNITS = {
    "mj": 1.0, "gj": 1e3, "tj": 1e6, "pj": 1e9, "ej": 1e12,
    "kwh": 3.6, "mwh": 3.6e3, "gwh": 3.6e6, "twh": 3.6e9,
}
EMISSION_UNITS = {"kg": 1.0, "kgco2": 1.0, "t": 1e3, "tco2": 1e3, "kt": 1e6, "mt": 1e9, "mtco2": 1e9}

Source = Union[str, os.PathLike, IO[str]]


@dataclass(frozen=True)
class Diagnostic:
    """One reported problem. ``row`` is the physical line number, if any."""

    file: str
    row: Optional[int]
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"row": self.row, "file": self.file, "code": self.code, "message": self.message}

    def __str__(self) -> str:
        where = f"{self.file}:{self.row}" if self.row is not None else self.file
        return f"{where}: {self.code}: {self.message}"


class ParseResult(NamedTuple):
    records: list
    diagnostics: list[Diagnostic]
    metadata: dict[str, str]


def _open(source: Source):
    if hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>"), False
    path = Path(source)
    return open(path, newline="", encoding="utf-8"), str(path), True


def _read_table(source: Source, columns: Sequence[str]):
    """Yield (line_number, row dict) after checking the header."""
    fh, name, owned = _open(source)
    try:
        text = fh.read()
    finally:
        if owned:
            fh.close()
    lines = text.splitlines(keepends=True)
    metadata: dict[str, str] = {}
    start = 0
    while start < len(lines) and lines[start].lstrip().startswith("#"):
        key, sep, value = lines[start].lstrip()[1:].partition(":")
        if sep:
            metadata[key.strip()] = value.strip()
        start += 1
    reader = csv.reader(lines[start:])
    header = next(reader, None)
    if header is None:
        raise MissingHeader(f"{name}: no header row")
    header = [h.strip() for h in header]
    extra = [h for h in header if h not in columns]
    if extra:
        raise UnknownColumn(f"{name}: unexpected column(s) {', '.join(extra)}")
    if tuple(header) != tuple(columns):
        raise MissingHeader(f"{name}: header must be exactly {','.join(columns)}")
    rows = []
    for row in reader:
        line = start + reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        rows.append((line, row))
    return name, metadata, rows


def _year(value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise NonNumericField(f"year={value!r} is not an integer") from None


def _unit(metadata: dict, key: str, table: dict, name: str) -> float:
    unit = metadata.get(key)
    if unit is None:
        return 1.0
    try:
        return table[unit.lower()]
    except KeyError:
        raise DecarbError(f"{name}: unsupported {key} {unit!r}") from None


def parse_macro_csv(source: Source) -> ParseResult:
    """Parse the socio-economic table; bad rows become diagnostics."""
    name, metadata, rows = _read_table(source, MACRO_COLUMNS)
    records, diags = [], []
    for line, row in rows:
        try:
            if len(row) != len(MACRO_COLUMNS):
                raise NonNumericField(f"expected {len(MACRO_COLUMNS)} fields, got {len(row)}")
            values = dict(zip(MACRO_COLUMNS, (c.strip() for c in row)))
            records.append(
                MacroRecord(
                    region=values["region"],
                    year=_year(values["year"]),
                    **{k: values[k] for k in MACRO_COLUMNS[2:]},
                )
            )
        except DecarbError as exc:
            diags.append(Diagnostic(name, line, exc.code, str(exc)))
    return ParseResult(records, diags, metadata)


def parse_enduse_csv(source: Source) -> ParseResult:
    """Parse the end-use energy/emissions table, converting declared units."""
    name, metadata, rows = _read_table(source, ENDUSE_COLUMNS)
    energy_scale = _unit(metadata, "energy_unit", ENERGY_UNITS, name)
    emission_scale = _unit(metadata, "emissions_unit", EMISSION_UNITS, name)
    records, diags = [], []
    for line, row in rows:
        try:
            if len(row) != len(ENDUSE_COLUMNS):
                raise NonNumericField(f"expected {len(ENDUSE_COLUMNS)} fields, got {len(row)}")
            values = dict(zip(ENDUSE_COLUMNS, (c.strip() for c in row)))
            energy, emissions = values["energy_mj"], values["emissions_kgco2"]
            if energy_scale != 1.0 or emission_scale != 1.0:
                energy = _scaled(energy, energy_scale, "energy_mj")
                emissions = _scaled(emissions, emission_scale, "emissions_kgco2")
            records.append(
                EndUseRecord(
                    region=values["region"],
                    year=_year(values["year"]),
                    sector=values["sector"],
                    end_use=values["end_use"],
                    energy_mj=energy,
                    emissions_kg=emissions,
                )
            )
        except DecarbError as exc:
            diags.append(Diagnostic(name, line, exc.code, str(exc)))
    return ParseResult(records, diags, metadata)


def _scaled(value: str, scale: float, name: str) -> float:
    try:
        return float(value) * scale
    except ValueError:
        raise NonNumericField(f"{name}={value!r} is not a number") from None


def _fmt(x) -> str:
    # shortest repr that round-trips through float()
    return repr(float(x)) if isinstance(x, float) else str(x)


def _write(rows: Iterable[Sequence], columns: Sequence[str], metadata: Optional[dict], target) -> str:
    buf = io.StringIO()
    for k, v in (metadata or {}).items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if target is not None:
        if hasattr(target, "write"):
            target.write(text)
        else:
            Path(target).write_text(text, encoding="utf-8")
    return text


def serialize_macro_csv(records: Iterable[MacroRecord], target=None, metadata: Optional[dict] = None) -> str:
    rows = ([getattr(r, c) for c in MACRO_COLUMNS] for r in records)
    return _write(rows, MACRO_COLUMNS, metadata, target)


def serialize_enduse_csv(records: Iterable[EndUseRecord], target=None, metadata: Optional[dict] = None) -> str:
    rows = (
        [r.region, r.year, r.sector.value, r.end_use.value, r.energy_mj, r.emissions_kg]
        for r in records
    )
    return _write(rows, ENDUSE_COLUMNS, metadata, target)


def contiguous_segments(years: Iterable[int]) -> list[tuple[int, int]]:
    """Group sorted years into inclusive (first, last) runs without gaps."""
    segments: list[tuple[int, int]] = []
    for y in sorted(set(years)):
        if segments and y == segments[-1][1] + 1:
            segments[-1] = (segments[-1][0], y)
        else:
            segments.append((y, y))
    return segments


@dataclass
class PanelDataset:
    macro: dict[tuple[str, int], MacroRecord]
    enduse: dict[tuple[str, int, Sector], tuple[EndUseRecord, ...]]
    coverage: dict[tuple[str, Sector], list[tuple[int, int]]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.enduse)

    def regions(self, sector) -> list[str]:
        sector = Sector(sector)
        return sorted({r for (r, s) in self.coverage if s is sector})

    def segment_for(self, region: str, sector, year_from: int, year_to: int) -> tuple[int, int]:
        """The contiguous segment containing ``[year_from, year_to]``."""
        sector = Sector(sector)
        if (region, sector) not in self.coverage:
            raise RegionNotCovered(f"no complete {sector} data for region {region!r}")
        for a, b in self.coverage[(region, sector)]:
            if a <= year_from and year_to <= b:
                return (a, b)
        spans = ", ".join(f"{a}-{b}" for a, b in self.coverage[(region, sector)])
        raise WindowOutsideCoverage(
            f"{region} {sector}: {year_from}-{year_to} not inside one covered span ({spans})"
        )

    def state(self, region: str, sector, year: int) -> tuple[FactorVector, IntensityPoint]:
        sector = Sector(sector)
        fv = derive_factors(self.macro[(region, year)], self.enduse[(region, year, sector)])
        return fv, intensity_from_factors(fv)

    def series(self, region: str, sector, years: Iterable[int]) -> list[tuple[FactorVector, IntensityPoint]]:
        return [self.state(region, sector, y) for y in years]

    def emissions(self, region: str, sector, year: int) -> float:
        return aggregate_emissions(self.enduse[(region, year, Sector(sector))])

    def activity(self, region: str, sector, year: int) -> float:
        m = self.macro[(region, year)]
        return m.households if Sector(sector) is Sector.RESIDENTIAL else m.floor_space


def assemble_panel(
    macro_records: Iterable[MacroRecord], enduse_records: Iterable[EndUseRecord]
) -> tuple[PanelDataset, list[Diagnostic]]:
    """Join the two tables on (region, year) and keep only complete end-use sets.

    The result does not depend on input row order. Every excluded key is
    reported once; interior year gaps are reported as ``YearGap`` and the
    affected region-sector keeps one coverage segment per run of years.
    """
    report: list[Diagnostic] = []

    by_macro: dict[tuple[str, int], list[MacroRecord]] = defaultdict(list)
    for m in macro_records:
        by_macro[m.key].append(m)
    macro = {}
    for key in sorted(by_macro):
        group = by_macro[key]
        if len(group) > 1:
            report.append(Diagnostic("panel", None, "DuplicateMacro", f"{key[0]}/{key[1]}: {len(group)} macro records"))
        else:
            macro[key] = group[0]

    by_set: dict[tuple[str, int, Sector], list[EndUseRecord]] = defaultdict(list)
    for r in enduse_records:
        by_set[r.key].append(r)
    enduse = {}
    for key in sorted(by_set, key=lambda k: (k[0], k[1], k[2].value)):
        region, year, sector = key
        group = by_set[key]
        label = f"{region}/{year}/{sector}"
        uses = [r.end_use for r in group]
        dupes = sorted({u.value for u in uses if uses.count(u) > 1})
        missing = [j.value for j in sector.end_uses if j not in uses]
        if (region, year) not in macro:
            report.append(Diagnostic("panel", None, "OrphanEndUse", f"{label}: no usable macro record"))
        elif dupes:
            report.append(Diagnostic("panel", None, "DuplicateEndUse", f"{label}: repeated {', '.join(dupes)}"))
        elif missing:
            report.append(Diagnostic("panel", None, "MissingEndUse", f"{label}: lacks {', '.join(missing)}"))
        else:
            order = {j: i for i, j in enumerate(sector.end_uses)}
            enduse[key] = tuple(sorted(group, key=lambda r: order[r.end_use]))

    years_by = defaultdict(list)
    for region, year, sector in enduse:
        years_by[(region, sector)].append(year)
    coverage = {}
    for key in sorted(years_by, key=lambda k: (k[0], k[1].value)):
        segs = contiguous_segments(years_by[key])
        coverage[key] = segs
        if len(segs) > 1:
            spans = ", ".join(f"{a}-{b}" for a, b in segs)
            report.append(Diagnostic("panel", None, "YearGap", f"{key[0]}/{key[1]}: segments {spans}"))
    return PanelDataset(macro, enduse, coverage), report


def synthetic_panel(
    n_regions: int = 56,
    years: Sequence[int] = range(2000, 2021),
    seed: int = 0,
) -> tuple[list[MacroRecord], list[EndUseRecord]]:
    """Random but internally consistent panel with the shape of the real data.

    Regions differ in size by orders of magnitude and drift with
    region-specific trends, so total, per-household and per-capita rankings
    do not coincide.
    """
    rng = np.random.default_rng(seed)
    years = list(years)
    macro, enduse = [], []
    for i in range(n_regions):
        region = f"R{i + 1:02d}"
        pop = 10 ** rng.uniform(5.5, 9.0)
        hh_size = rng.uniform(2.0, 5.0)
        gdp_pc = 10 ** rng.uniform(3.0, 4.8)
        service = rng.uniform(0.45, 0.75)
        hfc_share = rng.uniform(0.45, 0.7)
        floor_pc = rng.uniform(2.0, 15.0)
        res_mj_hh = 10 ** rng.uniform(4.0, 5.0)
        com_mj_m2 = 10 ** rng.uniform(2.3, 3.0)
        res_mix = rng.dirichlet(np.ones(6) * 2)
        com_mix = rng.dirichlet(np.ones(4) * 2)
        res_ef = rng.uniform(0.03, 0.12, 6)
        com_ef = rng.uniform(0.04, 0.15, 4)
        trend = {
            "pop": rng.normal(0.01, 0.008),
            "hh": rng.normal(-0.008, 0.005),
            "gdp": rng.normal(0.025, 0.02),
            "svc": rng.normal(0.003, 0.003),
            "floor": rng.normal(0.015, 0.01),
            "eff": rng.normal(-0.015, 0.01),
            "ef": rng.normal(-0.012, 0.01),
        }
        for year in years:
            pop *= np.exp(trend["pop"] + rng.normal(0, 0.003))
            hh_size *= np.exp(trend["hh"] + rng.normal(0, 0.003))
            gdp_pc *= np.exp(trend["gdp"] + rng.normal(0, 0.015))
            service = min(0.9, service * np.exp(trend["svc"] + rng.normal(0, 0.005)))
            hfc_share = min(0.9, hfc_share * np.exp(rng.normal(0, 0.01)))
            floor_pc *= np.exp(trend["floor"] + rng.normal(0, 0.005))
            res_mj_hh *= np.exp(trend["eff"] + rng.normal(0, 0.02))
            com_mj_m2 *= np.exp(trend["eff"] + rng.normal(0, 0.02))
            res_mix = res_mix * np.exp(rng.normal(0, 0.03, 6))
            res_mix /= res_mix.sum()
            com_mix = com_mix * np.exp(rng.normal(0, 0.03, 4))
            com_mix /= com_mix.sum()
            res_ef = res_ef * np.exp(trend["ef"] + rng.normal(0, 0.02, 6))
            com_ef = com_ef * np.exp(trend["ef"] + rng.normal(0, 0.02, 4))

            gdp = pop * gdp_pc
            households = pop / hh_size
            macro.append(
                MacroRecord(
                    region=region,
                    year=year,
                    population=float(pop),
                    households=float(households),
                    gdp=float(gdp),
                    service_gdp=float(gdp * service),
                    hfc=float(gdp * hfc_share),
                    floor_space=float(pop * floor_pc),
                )
            )
            res_energy = res_mj_hh * households * res_mix
            for j, e, k in zip(Sector.RESIDENTIAL.end_uses, res_energy, res_ef):
                enduse.append(EndUseRecord(region, year, Sector.RESIDENTIAL, j, float(e), float(e * k)))
            com_energy = com_mj_m2 * pop * floor_pc * com_mix
            for j, e, k in zip(Sector.COMMERCIAL.end_uses, com_energy, com_ef):
                enduse.append(EndUseRecord(region, year, Sector.COMMERCIAL, j, float(e), float(e * k)))
    return macro, enduse
