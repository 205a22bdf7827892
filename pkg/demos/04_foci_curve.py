"""
Foci of the table and of the incenter ellipse
=============================================

With a = 1 and b = t, the table's foci sit at sqrt(1 - t^2).  The incenter
ellipse has its own foci, strictly closer to the centre: the two ellipses
are not confocal.  Pass a directory to also write foci.csv there.
"""
import sys

import numpy as np

from ellbilliard.locus import foci_curve

grid = np.round(np.arange(1, 20) * 0.05, 12)
samples = foci_curve(grid, 360)

print("    t   d_gamma   d_locus")
for s in samples:
    print(f"{s.t:5.2f}  {s.d_gamma:.6f}  {s.d_locus:.6f}")

if len(sys.argv) > 1:
    from pathlib import Path

    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    lines = ["t,d_gamma,d_locus"] + [f"{s.t!r},{s.d_gamma!r},{s.d_locus!r}" for s in samples]
    (out / "foci.csv").write_text("\n".join(lines) + "\n")
    print("wrote", out / "foci.csv")
