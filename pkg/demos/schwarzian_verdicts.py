"""From Schwarzian data to a verdict: cone, cusp, or never disk-valued."""

from fractions import Fraction

from hypsing.normalform import analyze_schwarzian, escape_witness, obstructed_value
from hypsing.schwarzian import SingularityData
from hypsing.series import TruncSeries

cases = {
    "theta = 1/2": SingularityData(Fraction(1, 2), 0.3, TruncSeries([0.2])),
    "theta = 0": SingularityData(Fraction(0), 1.0),
    "theta = 2, d = 0": SingularityData(Fraction(2)),
    "theta = 2, d = 2": SingularityData(Fraction(2), 2),
}

# %% run the pipeline
for name, data in cases.items():
    rep = analyze_schwarzian(data)
    print(f"{name:18s} {type(rep.ratio).__name__:20s} {rep.verdict}")

# %% in the obstructed case every isometric normalization leaves the disk somewhere
rep = analyze_schwarzian(cases["theta = 2, d = 2"])
m, phi = rep.ratio.m, rep.ratio.phi
for a, c, d in [(1, 1, 2), (1, -1, 0.5), (2, 2j, 1 - 1j)]:
    x = escape_witness(m, phi, a, c, d)
    print(f"a={a!s:4} c={c!s:4} d={d!s:7}  x = {x:.3e}  |F(x)| = {abs(obstructed_value(m, phi, a, c, d, x)):.4f}")
