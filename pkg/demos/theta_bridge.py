"""From Weierstrass sigma to theta quotients and the loop-space chi_y genus.

With mu = eta nu / omega the genus series becomes a quotient of Jacobi theta
functions after rescaling x.  At zero nome the loop-space factor collapses to
the ordinary chi_y series.
"""

from ellgenus import LatticeParams
from ellgenus.genus import (
    GenusSpec,
    LoopGenusParams,
    chi_y_R,
    chiy_bridge_cross_ratio,
    loop_chiy_factor,
    theta_bridge_cross_ratio,
)

L = LatticeParams.from_tau(0.2 + 1.3j)
spec = GenusSpec.bridge(0.3 + 0.25j, L)
print(f"lattice: tau = {L.tau}, g2 = {L.g2:.6f}, g3 = {L.g3:.6f}")

pairs = [(0.1 + 0.2j, -0.3 + 0.05j), (0.25j, 0.4), (-0.2 - 0.1j, 0.15 + 0.3j)]
for x1, x2 in pairs:
    print(f"x1={x1}, x2={x2}: theta cross ratio {theta_bridge_cross_ratio(x1, x2, spec):.1e}, "
          f"loop chi_y cross ratio {chiy_bridge_cross_ratio(x1, x2, spec):.1e}")

x, y = 0.7 - 0.2j, 1.5
print("\nzero nome:", loop_chiy_factor(x, LoopGenusParams(y, 0, 10)), "==", chi_y_R(x, y))
