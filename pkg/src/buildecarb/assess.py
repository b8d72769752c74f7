"""Decarbonization metrics built on top of factor contributions.

Decarbonization intensity (DCI) of a window is the intensity reduction
delivered by the factors that pushed intensity down; factors that pushed it
up never offset it. Scaling by the activity stock (households or floor
space) gives total decarbonization, and dividing by population gives the
per-capita scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .core import MacroRecord, Sector, as_sector
from .dsd import ChainResult, ContributionSet, PeriodWindow
from .errors import (
    ActivitySectorMismatch,
    NonPositiveInput,
    OverlappingStages,
    UncoveredYears,
    YearMismatch,
    ZeroEmissions,
    ZeroTotal,
)


@dataclass(frozen=True)
class DecarbMetrics:
    window: PeriodWindow
    dci: float
    dc: float
    per_capita_dc: float
    efficiency: float
    emissions: float = 0.0


@dataclass(frozen=True)
class PhaseShareReport:
    stages: list[PeriodWindow]
    shares: list[float]
    totals: list[float]

    def as_dict(self) -> dict[str, float]:
        return {s.label(): share for s, share in zip(self.stages, self.shares)}


def decarbonization_intensity(cs: ContributionSet) -> float:
    """Negated sum of the negative per-factor contributions (always >= 0)."""
    return -math.fsum(v for v in cs.per_factor.values() if v < 0)


def decarbonization_attribution(cs: ContributionSet) -> dict[str, float]:
    """Fraction of DCI delivered by each intensity-reducing factor."""
    dci = decarbonization_intensity(cs)
    if dci == 0:
        return {}
    return {k: -v / dci for k, v in cs.per_factor.items() if v < 0}


def total_decarbonization(
    dci: float, activity: float, sector, kind: Optional[str] = None
) -> float:
    """DC = DCI x activity, with households for residential, floor space for commercial.

    ``kind`` names the supplied activity (``"households"`` or
    ``"floor_space"``) and is checked against the sector when given.
    """
    sector = as_sector(sector)
    if kind is not None and kind != sector.activity_kind:
        raise ActivitySectorMismatch(f"{sector} decarbonization scales with {sector.activity_kind}, not {kind}")
    if not activity > 0:
        raise NonPositiveInput(f"activity must be > 0, got {activity!r}")
    return dci * activity


def per_capita_decarbonization(dc: float, population: float) -> float:
    if not population > 0:
        raise NonPositiveInput(f"population must be > 0, got {population!r}")
    return dc / population


def decarbonization_efficiency(cumulative_dc: float, cumulative_emissions: float) -> float:
    """Cumulative decarbonization as a fraction of cumulative emissions."""
    if not cumulative_emissions > 0:
        raise ZeroEmissions(f"cumulative emissions must be > 0, got {cumulative_emissions!r}")
    if cumulative_dc < 0:
        raise NonPositiveInput(f"cumulative decarbonization must be >= 0, got {cumulative_dc!r}")
    return cumulative_dc / cumulative_emissions


def annual_decline_rate(c0: float, cT: float, years: int) -> float:
    """Compound annual rate of change; negative for a decline."""
    if not (c0 > 0 and cT > 0):
        raise NonPositiveInput(f"intensities must be > 0, got {c0!r}, {cT!r}")
    if years < 1:
        raise NonPositiveInput(f"years must be >= 1, got {years!r}")
    return (cT / c0) ** (1.0 / years) - 1.0


def phase_shares(
    annual_dc: Iterable[tuple[int, float]], stages: Sequence[PeriodWindow]
) -> PhaseShareReport:
    """Share of total decarbonization falling in each stage.

    ``annual_dc`` is keyed by the end year of each annual window; a stage
    ``(a, b]`` collects the years ``a < y <= b``.
    """
    stages = list(stages)
    ordered = sorted(stages)
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.year_from < prev.year_to:
            raise OverlappingStages(f"{prev.label()} overlaps {nxt.label()}")
    totals = [[] for _ in stages]
    for year, dc in annual_dc:
        hits = [i for i, s in enumerate(stages) if s.covers(year)]
        if not hits:
            raise UncoveredYears(f"year {year} falls in no stage")
        totals[hits[0]].append(dc)
    sums = [math.fsum(t) for t in totals]
    grand = math.fsum(sums)
    if not grand > 0:
        raise ZeroTotal("total decarbonization is zero; shares undefined")
    return PhaseShareReport(stages, [s / grand for s in sums], sums)


def rank_regions(
    metric_values: Mapping[str, float], top_n: int, descending: bool = True
) -> list[tuple[str, float]]:
    """Top ``top_n`` regions; ties go to the lexicographically smaller region."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    sign = -1.0 if descending else 1.0
    ordered = sorted(metric_values.items(), key=lambda kv: (sign * kv[1], kv[0]))
    return ordered[:top_n]


@dataclass(frozen=True)
class CumulativeAssessment:
    sector: Sector
    periods: list[DecarbMetrics]
    cumulative_dc: list[float]
    cumulative_emissions: list[float]

    @property
    def total_dc(self) -> float:
        return self.cumulative_dc[-1] if self.cumulative_dc else 0.0

    @property
    def total_emissions(self) -> float:
        return self.cumulative_emissions[-1] if self.cumulative_emissions else 0.0

    @property
    def efficiency(self) -> float:
        return decarbonization_efficiency(self.total_dc, self.total_emissions)

    def cumulative_efficiency(self) -> list[float]:
        return [
            decarbonization_efficiency(dc, em)
            for dc, em in zip(self.cumulative_dc, self.cumulative_emissions)
        ]


def cumulative_assessment(
    chain: ChainResult | Sequence[ContributionSet],
    macro: Mapping[int, MacroRecord] | Iterable[MacroRecord],
    emissions: Mapping[int, float],
) -> CumulativeAssessment:
    """Per-window and running decarbonization totals.

    DC of a window uses the activity stock of its end year. The emissions
    attributed to a window are the annual emissions (kg CO2) of every year
    ``y`` with ``year_from < y <= year_to``, so chained annual windows and
    end-to-end stages cover the same emission years.
    """
    periods = chain.periods if isinstance(chain, ChainResult) else list(chain)
    if not isinstance(macro, Mapping):
        macro = {m.year: m for m in macro}
    out: list[DecarbMetrics] = []
    running_dc: list[float] = []
    running_em: list[float] = []
    dc_parts: list[float] = []
    em_parts: list[float] = []
    sector = periods[0].sector if periods else Sector.RESIDENTIAL
    for cs in periods:
        w = cs.window
        if w is None:
            raise YearMismatch("contribution set has no window")
        if w.year_to not in macro:
            raise YearMismatch(f"no macro record for {w.year_to}")
        years = range(w.year_from + 1, w.year_to + 1)
        missing = [y for y in years if y not in emissions]
        if missing:
            raise YearMismatch(f"no emissions for {missing}")
        m = macro[w.year_to]
        activity = m.households if cs.sector is Sector.RESIDENTIAL else m.floor_space
        dci = decarbonization_intensity(cs)
        dc = total_decarbonization(dci, activity, cs.sector)
        em = math.fsum(emissions[y] for y in years)
        out.append(
            DecarbMetrics(
                window=w,
                dci=dci,
                dc=dc,
                per_capita_dc=per_capita_decarbonization(dc, m.population),
                efficiency=decarbonization_efficiency(dc, em),
                emissions=em,
            )
        )
        dc_parts.append(dc)
        em_parts.append(em)
        running_dc.append(math.fsum(dc_parts))
        running_em.append(math.fsum(em_parts))
    return CumulativeAssessment(sector, out, running_dc, running_em)
