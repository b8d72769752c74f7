"""
Decarbonization intensity, totals and efficiency
================================================

Turn chained contributions into decarbonization metrics for one region,
split cumulative decarbonization into stages, and rank regions at three
scales.
"""

# %%
from buildecarb import assemble_panel, phase_shares, parse_stages, synthetic_panel
from buildecarb.report import RunConfig, average_annual, run_assess

panel, _ = assemble_panel(*synthetic_panel(n_regions=12, seed=3))
runs = run_assess(panel, RunConfig(sector="commercial"))
run = runs[0]
a = run.assessment
for m in a.periods[:5]:
    print(f"{m.window.label()}  DCI={m.dci:6.3f} kgCO2/m2  DC={m.dc / 1e9:8.3f} MtCO2  per capita={m.per_capita_dc:6.2f} kg")
print(f"{run.region}: cumulative DC {a.total_dc / 1e9:.2f} MtCO2, efficiency {a.efficiency:.2%}")

# %%
stages = parse_stages("2001-2005,2006-2010,2011-2015,2016-2020")
report = phase_shares([(m.window.year_to, m.dc) for m in a.periods], stages)
print({k: f"{v:.2%}" for k, v in report.as_dict().items()})

# %%
# Regions that lead on total decarbonization need not lead per m2 or per person.
for metric in ("total", "intensity", "per_capita"):
    values = average_annual(runs, metric)
    top = sorted(values, key=lambda r: (-values[r], r))[:5]
    print(f"{metric:>10}: {top}")
