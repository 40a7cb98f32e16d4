"""
Screening a CSV file from the command line
==========================================

The ``factorscreen`` command wraps the library for file-based work::

    factorscreen simulate --example 4 --n 100 --p 1000 --m 20 --seed 1 --out sim.csv
    factorscreen screen --csv sim.csv --response y --method tppis --out ranking.csv
    factorscreen bench --example 1 --n 100 --p 1000 --phi 0.9 --replicates 100 \\
        --seed 7 --methods sis,fpsis,fpsis-bic,ppis,tppis --format markdown

This script runs the same steps through ``factorscreen.cli.main``.
"""

import tempfile
from pathlib import Path

from factorscreen.cli import main
from factorscreen.io import load_csv

tmp = Path(tempfile.mkdtemp())
sim = tmp / "sim.csv"
main(["simulate", "--example", "4", "--n", "100", "--p", "1000", "--m", "20", "--seed", "1",
      "--out", str(sim)])
data = load_csv(sim, "y")
print("loaded", data.n, "samples and", data.p, "predictors")

main(["screen", "--csv", str(sim), "--response", "y", "--method", "tppis",
      "--out", str(tmp / "ranking.csv")])
print((tmp / "ranking.csv").read_text().splitlines()[:6])

###############################################################################
# The bundled fixture mimics a small sensor dataset with a named response.

fixture = Path(__file__).resolve().parents[1] / "tests" / "data" / "sensors.csv"
main(["screen", "--csv", str(fixture), "--response", "target", "--method", "ppis"])
