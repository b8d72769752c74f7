"""Additive decomposition of carbon-intensity change into factor effects.

The continuous identity ``dc = sum_x (dc/dx) dx`` is discretised with
logarithmic-mean Divisia weights. For a window 0 -> T every factor x of end
use j receives ``L(c_j^T, c_j^0) * ln(x^T / x^0)``, and because
``sum_x ln(x^T/x^0) = ln(c_j^T/c_j^0)`` the contributions add up to
``c^T - c^0`` with no residual term.

:func:`path_integral_oracle` integrates the same differential numerically
along a log-linear path and is kept for testing only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .core import EndUse, FactorVector, IntensityPoint, Sector, identity_residual, intensity_from_factors
from .errors import (
    DegenerateState,
    FewerThanTwoYears,
    GapInSeries,
    IdentityMismatch,
    InvalidWindow,
    MixedKeys,
    NonPositiveFactor,
    NonPositiveInput,
    SectorMismatch,
)

DEFAULT_DELTA = 1e-20
IDENTITY_TOL = 1e-9

State = Union[FactorVector, tuple[FactorVector, IntensityPoint]]


@dataclass(frozen=True, order=True)
class PeriodWindow:
    """Half-open year span ``(year_from, year_to]``.

    As a decomposition window it compares the two end years. When used to
    group annual results (stages), it covers the annual windows whose end
    year ``y`` satisfies ``year_from < y <= year_to``.
    """

    year_from: int
    year_to: int

    def __post_init__(self):
        if not self.year_to > self.year_from:
            raise InvalidWindow(f"year_to {self.year_to} must exceed year_from {self.year_from}")

    @property
    def years(self) -> int:
        return self.year_to - self.year_from

    def covers(self, year: int) -> bool:
        return self.year_from < year <= self.year_to

    def label(self) -> str:
        """Inclusive end-year label, e.g. ``2001-2005`` for (2000, 2005]."""
        if self.years == 1:
            return str(self.year_to)
        return f"{self.year_from + 1}-{self.year_to}"

    @classmethod
    def from_label(cls, text: str) -> "PeriodWindow":
        a, sep, b = text.strip().partition("-")
        if not sep:
            b = a
        try:
            first, last = int(a), int(b)
        except ValueError:
            raise InvalidWindow(f"bad stage label {text!r}") from None
        if last < first:
            raise InvalidWindow(f"stage {text!r} ends before it starts")
        return cls(first - 1, last)


def parse_stages(text: str) -> list[PeriodWindow]:
    """``"2001-2005,2006-2010"`` -> [(2000, 2005], (2005, 2010]]."""
    return [PeriodWindow.from_label(part) for part in text.split(",") if part.strip()]


@dataclass(frozen=True)
class ContributionSet:
    """Factor contributions to the intensity change over one window.

    ``per_factor`` is keyed by the sector's factor names (``pr``, ``gr``,
    ``hr``, ``er``, ``s``, ``k`` or ``pc``, ``gc``, ``sc``, ``ic``, ``e``,
    ``k``). ``per_enduse_detail`` splits the two end-use indexed factors by
    end use and ``per_enduse_total`` gives the whole change of each end use's
    intensity, summed over every factor.
    """

    sector: Sector
    window: Optional[PeriodWindow]
    intensity_from: float
    intensity_to: float
    per_factor: Mapping[str, float]
    per_enduse_detail: Mapping[str, Mapping[EndUse, float]]
    per_enduse_total: Mapping[EndUse, float] = field(default_factory=dict)
    residual: float = 0.0
    region: str = ""

    @property
    def delta_total(self) -> float:
        return self.intensity_to - self.intensity_from

    def share_of_delta(self) -> dict[str, Optional[float]]:
        """Signed contribution as a fraction of ``|delta c|``; None when delta c is 0."""
        d = abs(self.delta_total)
        return {k: (v / d if d else None) for k, v in self.per_factor.items()}


def log_mean(a: float, b: float) -> float:
    """Logarithmic mean ``(a - b) / (ln a - ln b)``, with ``L(a, a) = a``."""
    if not (a > 0 and b > 0):
        raise NonPositiveInput(f"log_mean needs positive arguments, got {a!r}, {b!r}")
    if a == b:
        return float(a)
    # L = (a+b)/2 * u/atanh(u), u = (a-b)/(a+b); avoids cancellation for a ~ b
    u = (a - b) / (a + b)
    if abs(u) < 0.5:
        return 0.5 * (a + b) * (u / math.atanh(u))
    return (a - b) / (math.log(a) - math.log(b))


def substitute_zeros(fv: FactorVector, delta: float = DEFAULT_DELTA) -> FactorVector:
    """Replace zero or undefined end-use indexed factors with ``delta``."""
    if not delta > 0:
        raise NonPositiveInput(f"delta must be > 0, got {delta!r}")
    structure = {j: (v if v != 0 else delta) for j, v in fv.structure.items()}
    k = {j: (v if v else delta) for j, v in fv.emission_factor.items()}
    return replace(fv, structure=structure, emission_factor=k)


def _unpack(state: State) -> tuple[FactorVector, Optional[IntensityPoint]]:
    if isinstance(state, FactorVector):
        return state, None
    fv, point = state
    return fv, point


def _prepare(state0: State, stateT: State, delta: float):
    fv0, p0 = _unpack(state0)
    fvT, pT = _unpack(stateT)
    if fv0.sector is not fvT.sector:
        raise SectorMismatch(f"cannot compare {fv0.sector} with {fvT.sector}")
    if fv0.region and fvT.region and fv0.region != fvT.region:
        raise MixedKeys(f"states belong to {fv0.region!r} and {fvT.region!r}")
    for fv, point in ((fv0, p0), (fvT, pT)):
        if point is not None and point.intensity > 0:
            r = identity_residual(fv, point.intensity)
            if r > IDENTITY_TOL:
                raise IdentityMismatch(
                    f"{fv.region}/{fv.year}: factors reproduce intensity only to {r:.3g}"
                )
    return substitute_zeros(fv0, delta), substitute_zeros(fvT, delta)


def _default_window(fv0: FactorVector, fvT: FactorVector) -> Optional[PeriodWindow]:
    if fvT.year > fv0.year:
        return PeriodWindow(fv0.year, fvT.year)
    return None


def decompose_period(
    state0: State,
    stateT: State,
    window: Optional[PeriodWindow] = None,
    *,
    delta: float = DEFAULT_DELTA,
) -> ContributionSet:
    """Split ``c^T - c^0`` into additive factor contributions.

    States are factor vectors, optionally paired with an observed
    :class:`IntensityPoint`; a pairing that disagrees with the factor chain
    by more than 1e-9 relative raises :class:`IdentityMismatch`. Zero and
    undefined end-use factors are replaced by ``delta`` in both periods
    before taking logarithms.
    """
    f0, fT = _prepare(state0, stateT, delta)
    sector = f0.sector
    c0 = intensity_from_factors(f0)
    cT = intensity_from_factors(fT)
    if not (c0.intensity > 0 and cT.intensity > 0):
        raise DegenerateState(f"intensity {c0.intensity!r} -> {cT.intensity!r} after substitution")

    weights = {}
    for j in sector.end_uses:
        a, b = cT.per_enduse[j], c0.per_enduse[j]
        if not (a > 0 and b > 0):
            raise DegenerateState(f"end use {j} intensity underflows; raise delta")
        weights[j] = log_mean(a, b)
    weight_sum = math.fsum(weights.values())

    per_factor = {}
    dlog_common = {}
    for name in sector.common_factors:
        d = math.log(fT.common[name]) - math.log(f0.common[name])
        dlog_common[name] = d
        per_factor[name] = weight_sum * d

    detail: dict[str, dict[EndUse, float]] = {sector.structure_factor: {}, "k": {}}
    totals = {}
    for j in sector.end_uses:
        ds = math.log(fT.structure[j]) - math.log(f0.structure[j])
        dk = math.log(fT.emission_factor[j]) - math.log(f0.emission_factor[j])
        detail[sector.structure_factor][j] = weights[j] * ds
        detail["k"][j] = weights[j] * dk
        totals[j] = math.fsum(
            [weights[j] * d for d in dlog_common.values()] + [weights[j] * ds, weights[j] * dk]
        )
    for name, parts in detail.items():
        per_factor[name] = math.fsum(parts.values())

    per_factor = {name: per_factor[name] for name in sector.factor_names}
    residual = math.fsum(per_factor.values()) - (cT.intensity - c0.intensity)
    return ContributionSet(
        sector=sector,
        window=window if window is not None else _default_window(f0, fT),
        intensity_from=c0.intensity,
        intensity_to=cT.intensity,
        per_factor=per_factor,
        per_enduse_detail=detail,
        per_enduse_total=totals,
        residual=residual,
        region=f0.region or fT.region,
    )


@dataclass(frozen=True)
class ChainResult:
    periods: list[ContributionSet]
    cumulative: dict[str, float]
    cumulative_detail: dict[str, dict[EndUse, float]]

    @property
    def delta_total(self) -> float:
        return self.periods[-1].intensity_to - self.periods[0].intensity_from

    @property
    def cumulative_delta(self) -> float:
        return math.fsum(p.delta_total for p in self.periods)


def _accumulate(periods: Sequence[ContributionSet]) -> ChainResult:
    sector = periods[0].sector
    cumulative = {
        name: math.fsum(p.per_factor[name] for p in periods) for name in sector.factor_names
    }
    detail = {
        name: {j: math.fsum(p.per_enduse_detail[name][j] for p in periods) for j in sector.end_uses}
        for name in (sector.structure_factor, "k")
    }
    return ChainResult(list(periods), cumulative, detail)


def chain_decompose(series: Sequence[State], *, delta: float = DEFAULT_DELTA) -> ChainResult:
    """Decompose each consecutive pair of years and sum the contributions."""
    if len(series) < 2:
        raise FewerThanTwoYears(f"need at least two years, got {len(series)}")
    years = [_unpack(s)[0].year for s in series]
    for a, b in zip(years, years[1:]):
        if b != a + 1:
            raise GapInSeries(f"years {a} -> {b} are not consecutive")
    periods = [
        decompose_period(s0, s1, PeriodWindow(y0, y1), delta=delta)
        for s0, s1, y0, y1 in zip(series, series[1:], years, years[1:])
    ]
    return _accumulate(periods)


def stage_decompose(
    series: Sequence[State], stages: Sequence[PeriodWindow], *, delta: float = DEFAULT_DELTA
) -> ChainResult:
    """Decompose each stage end to end, e.g. 2000 -> 2005 in one step."""
    by_year = {_unpack(s)[0].year: s for s in series}
    periods = []
    for stage in stages:
        try:
            s0, s1 = by_year[stage.year_from], by_year[stage.year_to]
        except KeyError as exc:
            raise GapInSeries(f"stage {stage.label()} needs year {exc.args[0]}") from None
        periods.append(decompose_period(s0, s1, stage, delta=delta))
    if not periods:
        raise FewerThanTwoYears("no stages given")
    return _accumulate(periods)


def path_integral_oracle(
    state0: State, stateT: State, steps: int, *, delta: float = DEFAULT_DELTA
) -> ContributionSet:
    """Integrate the total differential of intensity numerically.

    Each factor follows ``x(t) = x0 * (xT/x0)**t`` on t in [0, 1]. For every
    factor the term ``(dc_j/dx)(dx/dt)`` is evaluated at the midpoints of
    ``steps`` equal subintervals and averaged. The result converges to
    :func:`decompose_period` at rate O(steps**-2). Test oracle only.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    f0, fT = _prepare(state0, stateT, delta)
    sector = f0.sector
    names = list(sector.common_factors)
    t = (np.arange(steps) + 0.5) / steps

    per_factor = {name: 0.0 for name in sector.factor_names}
    detail: dict[str, dict[EndUse, float]] = {sector.structure_factor: {}, "k": {}}
    totals = {}
    for j in sector.end_uses:
        x0 = np.array([f0.common[n] for n in names] + [f0.structure[j], f0.emission_factor[j]])
        xT = np.array([fT.common[n] for n in names] + [fT.structure[j], fT.emission_factor[j]])
        if np.any(x0 <= 0) or np.any(xT <= 0):
            raise NonPositiveFactor(f"end use {j} has a non-positive factor")
        rate = np.log(xT) - np.log(x0)
        path = x0[:, None] * np.exp(rate[:, None] * t[None, :])
        terms = np.empty(len(x0))
        for i in range(len(x0)):
            partial = np.prod(np.delete(path, i, axis=0), axis=0)
            terms[i] = np.mean(partial * path[i] * rate[i])
        for name, value in zip(names, terms[:4]):
            per_factor[name] += float(value)
        detail[sector.structure_factor][j] = float(terms[4])
        detail["k"][j] = float(terms[5])
        totals[j] = float(terms.sum())
    per_factor[sector.structure_factor] = math.fsum(detail[sector.structure_factor].values())
    per_factor["k"] = math.fsum(detail["k"].values())

    c0 = intensity_from_factors(f0).intensity
    cT = intensity_from_factors(fT).intensity
    return ContributionSet(
        sector=sector,
        window=_default_window(f0, fT),
        intensity_from=c0,
        intensity_to=cT,
        per_factor=per_factor,
        per_enduse_detail=detail,
        per_enduse_total=totals,
        residual=math.fsum(per_factor.values()) - (cT - c0),
        region=f0.region or fT.region,
    )
