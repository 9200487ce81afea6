"""Classify homotopy classes of tangent fields on the octant.

A class is fixed by edge signs e, kink numbers k, and the trapped area Omega
(stored in pi/2 units).  The eight wrapping numbers follow from them, the
classification (conformal / anticonformal / nonconformal) from the wrapping
signs, and the infimum Dirichlet energy from the coverage count plus the
nonabelian correction Delta.
"""

import math

from octfield import (
    OctantTopology,
    classify,
    delta_invariant,
    infimum_energy,
    invariants_from_wrapping,
    prism_bounds,
    wrapping_from_invariants,
)

# the running example: unit kinks on every edge, trapped area 3 pi / 2
t = OctantTopology(e=(1, 1, 1), k=(1, 1, 1), omega_units=3)
w = wrapping_from_invariants(t)
print("wrapping numbers:", w.as_dict())

c = classify(w, t)
print(f"kind: {c.kind}, sigma+ = {c.sigma_plus}, sigma- = {c.sigma_minus}")
print("Delta:", delta_invariant(w, c))
print(f"infimum energy: {infimum_energy(w, c)} pi")

# the map (e, k, Omega) <-> wrapping numbers is exactly invertible
assert invariants_from_wrapping(w) == t

# one extra sheet of trapped area (4 pi) raises every wrapping number by one
t_up = OctantTopology(t.e, t.k, t.omega_units + 8)
w_up = wrapping_from_invariants(t_up)
print("after +4pi of trapped area:", w_up.as_dict())

# bounds for reflection-symmetric fields on a unit cube
lo, hi = prism_bounds(w, c, 1.0, 1.0, 1.0)
print(f"cube energy bounds: [{lo / math.pi:.1f} pi, {hi / math.pi:.1f} pi]")
