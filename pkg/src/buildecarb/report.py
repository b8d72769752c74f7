"""Run configuration, result tables and their CSV/JSON encodings.

Every table is a list of plain rows with a fixed column order. Floats are
written with their shortest round-tripping representation, so reading an
exported file and writing it again reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .assess import CumulativeAssessment, annual_decline_rate, cumulative_assessment, rank_regions
from .core import Sector, as_sector
from .dsd import DEFAULT_DELTA, ChainResult, PeriodWindow, chain_decompose, stage_decompose
from .errors import DecarbError, InvalidWindow, RegionNotCovered, UnwritablePath, WindowOutsideCoverage
from .ingest import PanelDataset

SCHEMA_VERSION = 1

CONTRIBUTION_COLUMNS = (
    "region", "sector", "year_from", "year_to", "factor", "end_use",
    "contribution", "share_of_delta", "residual",
)
METRIC_COLUMNS = (
    "region", "sector", "year_from", "year_to", "dci", "dc_kg",
    "cumulative_dc_kg", "efficiency", "per_capita_dc_kg", "annual_decline_rate",
)
RANKING_COLUMNS = ("metric", "rank", "region", "value")

TABLES = {
    "contributions": CONTRIBUTION_COLUMNS,
    "metrics": METRIC_COLUMNS,
    "ranking": RANKING_COLUMNS,
}
_STR_COLUMNS = {"region", "sector", "factor", "end_use", "metric"}
_INT_COLUMNS = {"year_from", "year_to", "rank"}

RANK_METRICS = ("total", "intensity", "per_capita")


@dataclass
class Table:
    name: str
    rows: list[tuple] = field(default_factory=list)

    @property
    def columns(self) -> tuple[str, ...]:
        return TABLES[self.name]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


@dataclass
class RunConfig:
    sector: Sector = Sector.RESIDENTIAL
    regions: Optional[list[str]] = None
    year_from: Optional[int] = None
    year_to: Optional[int] = None
    mode: str = "annual"
    stages: list[PeriodWindow] = field(default_factory=list)
    delta: float = DEFAULT_DELTA
    fmt: str = "csv"
    out: Optional[str] = None

    def __post_init__(self):
        self.sector = as_sector(self.sector)
        if self.mode not in ("annual", "stage"):
            raise InvalidWindow(f"mode must be annual or stage, got {self.mode!r}")
        if self.fmt not in ("csv", "json"):
            raise InvalidWindow(f"format must be csv or json, got {self.fmt!r}")
        if (self.year_from is None) != (self.year_to is None):
            raise InvalidWindow("--from and --to must be given together")
        if self.year_from is not None:
            PeriodWindow(self.year_from, self.year_to)
        if self.mode == "stage":
            if not self.stages:
                raise InvalidWindow("stage mode needs stage boundaries")
            for a, b in zip(self.stages, self.stages[1:]):
                if b.year_from != a.year_to:
                    raise InvalidWindow(f"stages {a.label()} and {b.label()} are not adjacent")
            span = (self.stages[0].year_from, self.stages[-1].year_to)
            if self.year_from is None:
                self.year_from, self.year_to = span
            elif span != (self.year_from, self.year_to):
                raise InvalidWindow("stage boundaries must partition the window")


@dataclass
class RegionRun:
    region: str
    chain: ChainResult
    assessment: Optional[CumulativeAssessment] = None


def _spans(panel: PanelDataset, cfg: RunConfig, region: str) -> list[tuple[int, int]]:
    if cfg.year_from is not None:
        panel.segment_for(region, cfg.sector, cfg.year_from, cfg.year_to)
        return [(cfg.year_from, cfg.year_to)]
    if (region, cfg.sector) not in panel.coverage:
        raise RegionNotCovered(f"no complete {cfg.sector} data for region {region!r}")
    spans = [(a, b) for a, b in panel.coverage[(region, cfg.sector)] if b > a]
    if not spans:
        raise WindowOutsideCoverage(f"{region} {cfg.sector}: no span of two or more years")
    return spans


def selected_regions(panel: PanelDataset, cfg: RunConfig) -> list[str]:
    return sorted(set(cfg.regions)) if cfg.regions else panel.regions(cfg.sector)


def run_decompose(panel: PanelDataset, cfg: RunConfig) -> list[RegionRun]:
    """Decompose every selected region; one run per contiguous span."""
    runs = []
    for region in selected_regions(panel, cfg):
        for a, b in _spans(panel, cfg, region):
            series = panel.series(region, cfg.sector, range(a, b + 1))
            if cfg.mode == "stage":
                chain = stage_decompose(series, cfg.stages, delta=cfg.delta)
            else:
                chain = chain_decompose(series, delta=cfg.delta)
            runs.append(RegionRun(region, chain))
    return runs


def run_assess(panel: PanelDataset, cfg: RunConfig) -> list[RegionRun]:
    runs = run_decompose(panel, cfg)
    for run in runs:
        first = run.chain.periods[0].window.year_from
        last = run.chain.periods[-1].window.year_to
        years = range(first, last + 1)
        macro = {y: panel.macro[(run.region, y)] for y in years}
        emissions = {y: panel.emissions(run.region, cfg.sector, y) for y in years}
        run.assessment = cumulative_assessment(run.chain, macro, emissions)
    return runs


def contribution_table(runs: Sequence[RegionRun]) -> Table:
    table = Table("contributions")
    for run in runs:
        for cs in run.chain.periods:
            sector = cs.sector
            w = cs.window
            delta = cs.delta_total
            key = (run.region, sector.value, w.year_from, w.year_to)

            def share(v):
                return v / abs(delta) if delta != 0 else None

            for name in sector.factor_names:
                v = cs.per_factor[name]
                table.rows.append(key + (name, None, v, share(v), cs.residual))
            for name in (sector.structure_factor, "k"):
                for j in sector.end_uses:
                    v = cs.per_enduse_detail[name][j]
                    table.rows.append(key + (name, j.value, v, share(v), cs.residual))
            table.rows.append(key + ("delta_c", None, delta, share(delta), cs.residual))
    return table


def metrics_table(runs: Sequence[RegionRun]) -> Table:
    table = Table("metrics")
    for run in runs:
        a = run.assessment
        eff = a.cumulative_efficiency()
        for i, (cs, m) in enumerate(zip(run.chain.periods, a.periods)):
            w = m.window
            rate = annual_decline_rate(cs.intensity_from, cs.intensity_to, w.years)
            table.rows.append(
                (run.region, cs.sector.value, w.year_from, w.year_to, m.dci, m.dc,
                 a.cumulative_dc[i], eff[i], m.per_capita_dc, rate)
            )
    return table


def average_annual(runs: Sequence[RegionRun], metric: str) -> dict[str, float]:
    """Average annual DC, DCI or per-capita DC of each region over its windows."""
    attr = {"total": "dc", "intensity": "dci", "per_capita": "per_capita_dc"}[metric]
    sums: dict[str, list[float]] = {}
    years: dict[str, int] = {}
    for run in runs:
        for m in run.assessment.periods:
            sums.setdefault(run.region, []).append(getattr(m, attr))
            years[run.region] = years.get(run.region, 0) + m.window.years
    return {r: math.fsum(v) / years[r] for r, v in sums.items()}


def ranking_table(runs: Sequence[RegionRun], metrics: Iterable[str], top_n: int) -> Table:
    table = Table("ranking")
    for metric in metrics:
        ranked = rank_regions(average_annual(runs, metric), top_n)
        for i, (region, value) in enumerate(ranked, start=1):
            table.rows.append((metric, i, region, value))
    return table


# encoding

def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _parse_cell(column: str, text: str):
    if column in _STR_COLUMNS:
        return text if text != "" else None
    if text == "":
        return None
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def table_to_json(table: Table) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "table": table.name,
        "columns": list(table.columns),
        "rows": table.records(),
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def encode(table: Table, fmt: str) -> str:
    return table_to_json(table) if fmt == "json" else table_to_csv(table)


def table_from_csv(text: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader, ()))
    for name, columns in TABLES.items():
        if header == columns:
            break
    else:
        raise DecarbError(f"unrecognised table header {','.join(header)!r}")
    rows = [tuple(_parse_cell(c, v) for c, v in zip(columns, row)) for row in reader if row]
    return Table(name, rows)


def table_from_json(text: str) -> Table:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DecarbError(f"unsupported schema_version {doc.get('schema_version')!r}")
    name = doc.get("table")
    if name not in TABLES:
        raise DecarbError(f"unknown table {name!r}")
    columns = TABLES[name]
    rows = []
    for rec in doc["rows"]:
        if set(rec) != set(columns):
            raise DecarbError(f"row fields {sorted(rec)} do not match {name} columns")
        row = []
        for c in columns:
            v = rec[c]
            if c not in _STR_COLUMNS and c not in _INT_COLUMNS and v is not None:
                v = float(v)
            row.append(v)
        rows.append(tuple(row))
    return Table(name, rows)


def decode(text: str) -> Table:
    return table_from_json(text) if text.lstrip().startswith("{") else table_from_csv(text)


def write_output(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        import sys

        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UnwritablePath(f"cannot write {out}: {exc.strerror}") from None


def cmd_export(table: Table, fmt: str, out: Optional[str] = None) -> str:
    """Encode ``table`` as csv or json and write it to ``out`` (stdout if None)."""
    text = encode(table, fmt)
    write_output(text, out)
    return text
