"""
The incenters of the orbits
===========================

Fit a conic to the incenters of the triangular orbits.  Nothing about
symmetry is imposed on the fit, yet it comes out as a centred, axis-aligned
ellipse.  It crosses the focal axis at the incenters of the two isosceles
orbits, transversally.
"""
import math

import numpy as np

from ellbilliard import Ellipse, caustic_for_3_periodic
from ellbilliard.billiard import orbit_from_vertex
from ellbilliard.locus import (
    axis_intersections,
    incenter,
    inradius_asymmetry,
    locus_of_incenters,
    transversality_check,
)

for b in (0.3, 0.5, 0.8):
    points, fit = locus_of_incenters(Ellipse(1.0, b), 360)
    p, q = fit.semi_axes
    print(f"b/a = {b}: {fit.kind}, semi-axes ({p:.6f}, {q:.6f}), residual {fit.residual_max:.1e}")

table = Ellipse(1.0, 0.5)
sol = caustic_for_3_periodic(table)
_, fit = locus_of_incenters(table, 360, sol)

print("\nfocal-axis crossings of the fitted ellipse:")
print(axis_intersections(fit))
print("incenters of the orbits launched at 0 and pi:")
print(np.array([incenter(orbit_from_vertex(table, sol, th)) for th in (0.0, math.pi)]))

print("\nd(incenter_y)/d(theta0) at 0:", transversality_check(table, sol=sol))
print("r(0.1) - r(-0.1):", inradius_asymmetry(table, 0.1, sol))
