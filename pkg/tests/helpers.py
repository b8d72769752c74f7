"""Shared builders for tests."""

import math

import numpy as np

from buildecarb import EndUseRecord, FactorVector, MacroRecord, Sector


def worked_pair():
    """Single active end use; pr 2 -> 3 and gr 10 -> 20, so c goes 2 -> 6."""
    common0 = dict(pr=2, gr=10, hr=0.5, er=0.1)
    commonT = dict(pr=3, gr=20, hr=0.5, er=0.1)
    s = {"space_heating": 1.0}
    k = {"space_heating": 2.0}
    fv0 = FactorVector.build("residential", common0, s, k, region="X", year=2000)
    fvT = FactorVector.build("residential", commonT, s, k, region="X", year=2001)
    return fv0, fvT


def random_factor_vector(rng, sector, year=0):
    sector = Sector(sector)
    common = {name: float(10 ** rng.uniform(-2, 3)) for name in sector.common_factors}
    n = len(sector.end_uses)
    if sector is Sector.RESIDENTIAL:
        act = rng.dirichlet(np.ones(n))
    else:
        act = 10 ** rng.uniform(1, 3, n)
    k = rng.uniform(0.01, 0.2, n)
    return FactorVector.build(
        sector, common,
        dict(zip(sector.end_uses, act.tolist())),
        dict(zip(sector.end_uses, k.tolist())),
        region="R", year=year,
    )


def random_pair(rng, sector, lo=0.25, hi=4.0):
    """Two states whose every factor ratio lies in ``[lo, hi]`` (log-uniform)."""
    fv0 = random_factor_vector(rng, sector, year=0)

    def ratio():
        return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))

    fvT = FactorVector.build(
        fv0.sector,
        {n: v * ratio() for n, v in fv0.common.items()},
        {j: v * ratio() for j, v in fv0.structure.items()},
        {j: v * ratio() for j, v in fv0.emission_factor.items()},
        region="R", year=1,
    )
    return fv0, fvT


def raw_records(rng, sector, region="R", year=2000, zero=()):
    """Random macro record plus a complete end-use set; ``zero`` end uses get no energy."""
    sector = Sector(sector)
    pop = float(10 ** rng.uniform(5, 9))
    gdp = pop * float(10 ** rng.uniform(3, 5))
    macro = MacroRecord(
        region, year,
        population=pop,
        households=pop / rng.uniform(1.5, 5),
        gdp=gdp,
        service_gdp=gdp * rng.uniform(0.3, 0.9),
        hfc=gdp * rng.uniform(0.3, 0.8),
        floor_space=pop * rng.uniform(1, 20),
    )
    recs = []
    for j in sector.end_uses:
        if j.value in zero:
            recs.append(EndUseRecord(region, year, sector, j, 0.0, 0.0))
        else:
            e = float(10 ** rng.uniform(6, 12))
            recs.append(EndUseRecord(region, year, sector, j, e, e * rng.uniform(0.01, 0.2)))
    return macro, recs
