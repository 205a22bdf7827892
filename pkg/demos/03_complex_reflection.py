"""
Reflection in the direction chart
=================================

Directions are coordinatized by z = (v1 + i v2) / (v1 - i v2).  A real
direction at angle theta lands at exp(2 i theta), the isotropic directions
(1, i) and (1, -i) land at 0 and infinity, and reflecting in a line with
coordinate eps is z -> eps^2 / z.
"""
import cmath
import math

from ellbilliard import Ellipse, caustic_for_3_periodic
from ellbilliard.cproj import (
    common_isotropic_tangents,
    direction_coord,
    isotropic_limit_behavior,
    lemma5_limit,
    reflect_coord,
    reflect_euclidean_consistency,
)

print("z(1, i)  =", direction_coord((1, 1j)))
print("z(1, -i) =", direction_coord((1, -1j)))
print("z(45 deg) =", direction_coord((1, 1)))

# reflecting the 45 degree line in the x-axis gives the -45 degree line
print("\nreflect 45 deg in the x-axis:", reflect_coord(1, 1j), "=", cmath.exp(-1j * math.pi / 2))
print("worst gap against matrix reflection, 1000 random lines:", reflect_euclidean_consistency())

# as the mirror tends to an isotropic line, every image tends to it too
images, slope = isotropic_limit_behavior(0.3 + 0.4j, [10.0**-k for k in range(1, 7)])
print("\n|image| as eps -> 0:", ["%.1e" % abs(t) for t in images], "slope", slope)

# a table and its caustic share four isotropic tangents, meeting at the foci
table = Ellipse(1.0, 0.5)
caustic = caustic_for_3_periodic(table).caustic
tangents = common_isotropic_tangents(table, caustic)
print("\nisotropic tangents matched to %.1e, foci recovered to %.1e"
      % (tangents.match_error, tangents.foci_error))

# caustic tangents close to an isotropic one reflect to a non-isotropic limit
exp = lemma5_limit(table, caustic)
print("reflected coordinates:", [complex(round(z.real, 6), round(z.imag, 6)) for z in exp.reflected_coords])
print("extrapolated limit:", exp.extrapolated_limit)
print("angle exponent (expect 1/2):", exp.tangent_angle_exponent)
print("limit line tangent to the caustic, dual residual:", exp.limit_tangency_residual)
