"""Domain types and the multiplicative carbon-intensity identity.

Residential intensity is carbon per household and commercial intensity is
carbon per square metre of floor space. Both are written as a chain of
ratios that telescopes back to the raw quotient::

    C_j / H = (P/H) (GDP/P) (HFC/GDP) (E/HFC) (E_j/E) (C_j/E_j)
    C_j / F = (P/F) (GDP/P) (Gs/GDP)  (F/Gs)  (E_j/F) (C_j/E_j)

Energy is carried in MJ and emissions in kg CO2 throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DuplicateEndUse,
    EmissionsWithoutEnergy,
    InvalidEndUseForSector,
    MissingEndUse,
    MixedKeys,
    NegativeValue,
    NonNumericField,
    NonPositiveDenominator,
    NonPositiveInput,
    NonPositiveValue,
    ServiceGdpExceedsGdp,
    UndefinedFactor,
    UnknownEndUse,
    UnknownSector,
)


class EndUse(str, enum.Enum):
    SPACE_HEATING = "space_heating"
    SPACE_COOLING = "space_cooling"
    WATER_HEATING = "water_heating"
    LIGHTING = "lighting"
    COOKING = "cooking"
    APPLIANCES_OTHERS = "appliances_others"

    def __str__(self) -> str:
        return self.value


class Sector(str, enum.Enum):
    RESIDENTIAL = "residential"
    COMMERCIAL = "commercial"

    def __str__(self) -> str:
        return self.value

    @property
    def end_uses(self) -> tuple[EndUse, ...]:
        return _END_USES[self]

    @property
    def common_factors(self) -> tuple[str, ...]:
        """Names of the end-use independent factors, in chain order."""
        return _COMMON[self]

    @property
    def structure_factor(self) -> str:
        """Name of the end-use indexed activity factor (share or per-area energy)."""
        return "s" if self is Sector.RESIDENTIAL else "e"

    @property
    def factor_names(self) -> tuple[str, ...]:
        return self.common_factors + (self.structure_factor, "k")

    @property
    def activity_kind(self) -> str:
        return "households" if self is Sector.RESIDENTIAL else "floor_space"


_END_USES = {
    Sector.RESIDENTIAL: (
        EndUse.SPACE_HEATING,
        EndUse.SPACE_COOLING,
        EndUse.WATER_HEATING,
        EndUse.LIGHTING,
        EndUse.COOKING,
        EndUse.APPLIANCES_OTHERS,
    ),
    Sector.COMMERCIAL: (
        EndUse.SPACE_HEATING,
        EndUse.SPACE_COOLING,
        EndUse.LIGHTING,
        EndUse.APPLIANCES_OTHERS,
    ),
}

_COMMON = {
    Sector.RESIDENTIAL: ("pr", "gr", "hr", "er"),
    Sector.COMMERCIAL: ("pc", "gc", "sc", "ic"),
}


def as_sector(value) -> Sector:
    try:
        return Sector(value)
    except ValueError:
        raise UnknownSector(f"unknown sector {value!r}") from None


def as_end_use(value) -> EndUse:
    try:
        return EndUse(value)
    except ValueError:
        raise UnknownEndUse(f"unknown end use {value!r}") from None


def _number(name: str, value) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise NonNumericField(f"{name}={value!r} is not a number") from None
    if not math.isfinite(x):
        raise NonNumericField(f"{name}={value!r} is not finite")
    return x


@dataclass(frozen=True)
class MacroRecord:
    """Socio-economic aggregates of one region in one year."""

    region: str
    year: int
    population: float
    households: float
    gdp: float
    service_gdp: float
    hfc: float
    floor_space: float

    def __post_init__(self):
        for name in ("population", "households", "gdp", "service_gdp", "hfc", "floor_space"):
            x = _number(name, getattr(self, name))
            if x <= 0:
                raise NonPositiveValue(f"{name} must be > 0, got {x!r}")
            object.__setattr__(self, name, x)
        if self.service_gdp > self.gdp:
            raise ServiceGdpExceedsGdp(
                f"service_gdp {self.service_gdp!r} exceeds gdp {self.gdp!r}"
            )

    @property
    def key(self) -> tuple[str, int]:
        return (self.region, self.year)


@dataclass(frozen=True)
class EndUseRecord:
    region: str
    year: int
    sector: Sector
    end_use: EndUse
    energy_mj: float
    emissions_kg: float

    def __post_init__(self):
        sector = as_sector(self.sector)
        end_use = as_end_use(self.end_use)
        if end_use not in sector.end_uses:
            raise InvalidEndUseForSector(f"{end_use} is not a {sector} end use")
        object.__setattr__(self, "sector", sector)
        object.__setattr__(self, "end_use", end_use)
        for name in ("energy_mj", "emissions_kg"):
            x = _number(name, getattr(self, name))
            if x < 0:
                raise NegativeValue(f"{name} must be >= 0, got {x!r}")
            object.__setattr__(self, name, x)
        if self.energy_mj == 0 and self.emissions_kg != 0:
            raise EmissionsWithoutEnergy(
                f"{self.emissions_kg!r} kg emitted with zero energy"
            )

    @property
    def key(self) -> tuple[str, int, Sector]:
        return (self.region, self.year, self.sector)


@dataclass(frozen=True)
class FactorVector:
    """Ratio factors of one region-year-sector.

    ``common`` holds the four end-use independent factors keyed by name,
    ``structure`` the end-use share s_j (residential) or energy per floor
    area e_j (commercial), and ``emission_factor`` k_j = C_j / E_j, which is
    ``None`` for an end use with no energy.
    """

    sector: Sector
    common: Mapping[str, float]
    structure: Mapping[EndUse, float]
    emission_factor: Mapping[EndUse, Optional[float]]
    region: str = ""
    year: int = 0

    @classmethod
    def build(
        cls,
        sector,
        common: Mapping[str, float],
        structure: Mapping = (),
        emission_factor: Mapping = (),
        region: str = "",
        year: int = 0,
    ) -> "FactorVector":
        """Assemble a vector from partial maps.

        End uses missing from ``structure`` get 0 and from ``emission_factor``
        get ``None``. Keys may be strings or :class:`EndUse` members.
        """
        sector = as_sector(sector)
        missing = set(sector.common_factors) - set(common)
        if missing:
            raise ValueError(f"missing common factors {sorted(missing)}")
        structure = {as_end_use(j): float(v) for j, v in dict(structure).items()}
        emission_factor = {
            as_end_use(j): (None if v is None else float(v))
            for j, v in dict(emission_factor).items()
        }
        for j in list(structure) + list(emission_factor):
            if j not in sector.end_uses:
                raise InvalidEndUseForSector(f"{j} is not a {sector} end use")
        return cls(
            sector=sector,
            common={name: float(common[name]) for name in sector.common_factors},
            structure={j: structure.get(j, 0.0) for j in sector.end_uses},
            emission_factor={j: emission_factor.get(j) for j in sector.end_uses},
            region=region,
            year=year,
        )

    @property
    def prefix(self) -> float:
        """Product of the common factors (E/H residential, 1 commercial)."""
        out = 1.0
        for name in self.sector.common_factors:
            out *= self.common[name]
        return out

    def __getitem__(self, name: str) -> float:
        return self.common[name]


@dataclass(frozen=True)
class IntensityPoint:
    sector: Sector
    intensity: float
    per_enduse: Mapping[EndUse, float] = field(default_factory=dict)
    region: str = ""
    year: int = 0


def _check_same_keys(macro: MacroRecord, enduses: Sequence[EndUseRecord]) -> Sector:
    if not enduses:
        raise MissingEndUse("no end-use records given")
    sectors = {r.sector for r in enduses}
    if len(sectors) > 1:
        raise MixedKeys(f"records span several sectors: {sorted(map(str, sectors))}")
    for r in enduses:
        if (r.region, r.year) != (macro.region, macro.year):
            raise MixedKeys(
                f"end-use record {r.region}/{r.year} does not match macro "
                f"{macro.region}/{macro.year}"
            )
    return sectors.pop()


def derive_factors(macro: MacroRecord, enduses: Sequence[EndUseRecord]) -> FactorVector:
    """Build the ratio factors of one region-year-sector from raw data."""
    sector = _check_same_keys(macro, enduses)
    by_use: dict[EndUse, EndUseRecord] = {}
    for r in enduses:
        if r.end_use in by_use:
            raise DuplicateEndUse(f"{r.end_use} given twice for {r.key}")
        by_use[r.end_use] = r
    missing = [j for j in sector.end_uses if j not in by_use]
    if missing:
        raise MissingEndUse(f"{macro.region}/{macro.year} {sector} lacks {', '.join(map(str, missing))}")

    def ratio(num: float, den: float, label: str) -> float:
        if not den > 0:
            raise NonPositiveDenominator(f"{label} has non-positive denominator {den!r}")
        return num / den

    P, H, F = macro.population, macro.households, macro.floor_space
    gdp, gs, hfc = macro.gdp, macro.service_gdp, macro.hfc
    energy = {j: by_use[j].energy_mj for j in sector.end_uses}
    k = {
        j: (by_use[j].emissions_kg / energy[j] if energy[j] > 0 else None)
        for j in sector.end_uses
    }
    if sector is Sector.RESIDENTIAL:
        E = math.fsum(energy.values())
        common = {
            "pr": ratio(P, H, "P/H"),
            "gr": ratio(gdp, P, "GDP/P"),
            "hr": ratio(hfc, gdp, "HFC/GDP"),
            "er": ratio(E, hfc, "E/HFC"),
        }
        structure = {j: ratio(energy[j], E, "E_j/E") for j in sector.end_uses}
    else:
        common = {
            "pc": ratio(P, F, "P/F"),
            "gc": ratio(gdp, P, "GDP/P"),
            "sc": ratio(gs, gdp, "Gs/GDP"),
            "ic": ratio(F, gs, "F/Gs"),
        }
        structure = {j: ratio(energy[j], F, "E_j/F") for j in sector.end_uses}
    return FactorVector(sector, common, structure, k, region=macro.region, year=macro.year)


def intensity_from_factors(fv: FactorVector) -> IntensityPoint:
    """Evaluate the factor chain per end use and sum to the sector intensity."""
    prefix = fv.prefix
    per = {}
    for j in fv.sector.end_uses:
        activity = fv.structure[j]
        k = fv.emission_factor[j]
        if k is None:
            if activity != 0:
                raise UndefinedFactor(
                    f"k[{j}] undefined but {fv.sector.structure_factor}[{j}]={activity!r}"
                )
            per[j] = 0.0
        else:
            per[j] = prefix * activity * k
    return IntensityPoint(
        fv.sector, math.fsum(per.values()), per, region=fv.region, year=fv.year
    )


def aggregate_emissions(enduses: Iterable[EndUseRecord]) -> float:
    """Sum end-use emissions (kg CO2) of a single region-year-sector."""
    enduses = list(enduses)
    keys = {r.key for r in enduses}
    if len(keys) > 1:
        raise MixedKeys(f"records span {len(keys)} region/year/sector keys")
    return math.fsum(r.emissions_kg for r in enduses)


def raw_intensity(macro: MacroRecord, enduses: Iterable[EndUseRecord]) -> float:
    """Total emissions over households or floor space, straight from raw data."""
    enduses = list(enduses)
    total = aggregate_emissions(enduses)
    sector = enduses[0].sector if enduses else Sector.RESIDENTIAL
    activity = macro.households if sector is Sector.RESIDENTIAL else macro.floor_space
    return total / activity


def identity_residual(fv: FactorVector, observed_c: float) -> float:
    """Relative gap between the factor-chain intensity and an observed one."""
    if not observed_c > 0:
        raise NonPositiveInput(f"observed intensity must be > 0, got {observed_c!r}")
    return abs(intensity_from_factors(fv).intensity - observed_c) / observed_c
