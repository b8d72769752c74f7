"""
Factor identity of building carbon intensity
============================================

Build the ratio factors of one region-year from raw data and check that
their product telescopes back to emissions per household and per m2.
"""

# %%
from buildecarb import EndUseRecord, MacroRecord, Sector, derive_factors, intensity_from_factors, raw_intensity

macro = MacroRecord("DEMO", 2020, population=5e6, households=2e6, gdp=2.5e11,
                    service_gdp=1.6e11, hfc=1.3e11, floor_space=6e7)

res_energy = {"space_heating": 4.0e10, "space_cooling": 3.0e9, "water_heating": 1.2e10,
              "lighting": 4.0e9, "cooking": 8.0e9, "appliances_others": 1.5e10}
res = [EndUseRecord("DEMO", 2020, "residential", j, e, e * 0.06) for j, e in res_energy.items()]
com = [EndUseRecord("DEMO", 2020, "commercial", j, e, e * 0.09)
       for j, e in zip(Sector.COMMERCIAL.end_uses, [2.0e10, 6.0e9, 7.0e9, 1.2e10])]

# %%
# Residential: six end uses, intensity per household.
fv = derive_factors(macro, res)
print("common factors:", {k: round(v, 4) for k, v in fv.common.items()})
print("end-use shares:", {str(j): round(s, 3) for j, s in fv.structure.items()})
point = intensity_from_factors(fv)
print(f"c_res = {point.intensity:.2f} kgCO2/household (raw {raw_intensity(macro, res):.2f})")

# %%
# Commercial: the four common factors multiply to exactly one, so the
# intensity per m2 is carried entirely by energy per m2 and emission factors.
fv = derive_factors(macro, com)
print("pc*gc*sc*ic =", fv.prefix)
print(f"c_com = {intensity_from_factors(fv).intensity:.3f} kgCO2/m2 (raw {raw_intensity(macro, com):.3f})")
