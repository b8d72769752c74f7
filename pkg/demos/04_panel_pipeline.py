"""
From CSV panel to exported tables
=================================

Write a synthetic 56-region panel to CSV, validate it and run the command
line front end on it.
"""

# %%
import tempfile
from pathlib import Path

from buildecarb import serialize_enduse_csv, serialize_macro_csv, synthetic_panel
from buildecarb.cli import main

workdir = Path(tempfile.mkdtemp())
macro, enduse = synthetic_panel()
serialize_macro_csv(macro, workdir / "macro.csv", metadata={"currency_basis": "constant 2015 USD"})
serialize_enduse_csv(enduse, workdir / "enduse.csv")
inputs = ["--macro", str(workdir / "macro.csv"), "--enduse", str(workdir / "enduse.csv")]

# %%
main(["validate", str(workdir / "macro.csv"), str(workdir / "enduse.csv")])

# %%
main(["decompose", *inputs, "--sector", "residential", "--region", "R10",
      "--mode", "stage", "--stages", "2001-2005,2006-2010,2011-2015,2016-2020",
      "--out", str(workdir / "contrib.csv")])
print((workdir / "contrib.csv").read_text().splitlines()[:8])

# %%
main(["assess", *inputs, "--sector", "commercial", "--format", "json", "--out", str(workdir / "metrics.json")])
main(["export", "--input", str(workdir / "metrics.json"), "--format", "csv", "--out", str(workdir / "metrics.csv")])
print((workdir / "metrics.csv").read_text().splitlines()[:3])

# %%
main(["rank", *inputs, "--metric", "all", "--top", "5"])
