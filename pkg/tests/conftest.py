import pytest

from buildecarb import serialize_enduse_csv, serialize_macro_csv, synthetic_panel


@pytest.fixture(scope="session")
def synthetic_records():
    return synthetic_panel(n_regions=56, years=range(2000, 2021), seed=0)


@pytest.fixture(scope="session")
def panel_files(tmp_path_factory, synthetic_records):
    macro, enduse = synthetic_records
    d = tmp_path_factory.mktemp("panel")
    serialize_macro_csv(macro, d / "macro.csv", metadata={"currency_basis": "constant 2015 USD"})
    serialize_enduse_csv(enduse, d / "enduse.csv")
    return d / "macro.csv", d / "enduse.csv"


@pytest.fixture
def worked_files(tmp_path):
    """Raw tables reproducing the two-factor worked example.

    2000: P=2, H=1, GDP=20, HFC=10, E=1 (heating only), C=2 -> c = 2
    2001: P=3, H=1, GDP=60, HFC=30, E=3, C=6 -> c = 6, pr 2->3, gr 10->20
    """
    macro = tmp_path / "macro.csv"
    macro.write_text(
        "region,year,population,households,gdp,service_gdp,hfc,floor_space\n"
        "X,2000,2,1,20,10,10,5\n"
        "X,2001,3,1,60,30,30,5\n"
    )
    rows = ["region,year,sector,end_use,energy_mj,emissions_kgco2"]
    for year, e, c in ((2000, 1, 2), (2001, 3, 6)):
        rows.append(f"X,{year},residential,space_heating,{e},{c}")
        for j in ("space_cooling", "water_heating", "lighting", "cooking", "appliances_others"):
            rows.append(f"X,{year},residential,{j},0,0")
    enduse = tmp_path / "enduse.csv"
    enduse.write_text("\n".join(rows) + "\n")
    return macro, enduse
