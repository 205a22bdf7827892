"""
Triangular orbits in an elliptic billiard
=========================================

Find the confocal caustic that closes a three-bounce orbit, then sweep the
whole family of triangles and watch the perimeter stay put.
"""
import numpy as np

from ellbilliard import Ellipse, caustic_for_3_periodic, orbit_family, orbit_from_vertex

table = Ellipse(1.0, 0.5)

# The caustic is the confocal ellipse (a^2 - lam, b^2 - lam) for which
# three tangent chords close up.  The solver brackets the closure defect.
sol = caustic_for_3_periodic(table)
print("lambda* =", sol.lambda_star)
print("caustic semi-axes:", sol.caustic.a, sol.caustic.b)
print("closure checked at 32 launch angles, worst defect:", sol.porism_defect)

# One orbit, launched from the end of the major axis.  It is isosceles.
o = orbit_from_vertex(table, sol, 0.0)
print("\nvertices from theta0 = 0:")
print(np.round(o.vertices, 6))
print("residuals: reflection %.1e  tangency %.1e  closure %.1e"
      % (o.reflection_residuals().max(), o.tangency_residuals().max(), o.closure_residual))

# Any starting point works (that is the porism), and the perimeter is the
# same for every member of the family.
family = orbit_family(table, 360, sol)
perimeters = np.array([t.perimeter for t in family])
print("\nperimeter over 360 orbits: %.15f +- %.1e" % (perimeters.mean(), np.ptp(perimeters)))
