"""
Commuting frames that descend to the mapping torus
==================================================

Build the k commuting fields on I x T^k for a few monodromies and check them
numerically on a fine grid.
"""

import numpy as np

from torusrank.frame import bracket_coefficients, build_frame, perturb_frame, verify_frame

###############################################################################
# Orientation preserving monodromy: one GL+ path from I to A.

F = build_frame([[0, 1], [-1, -1]])
for t in (0.0, 0.25, 0.5, 0.75, 1.0):
    print(f"t={t:.2f}  phi=\n{np.round(F.phi(t), 4)}")
print(verify_frame(F).to_json())

###############################################################################
# Orientation reversing monodromy: the first field swings through d/dt.

G = build_frame([[0, 1], [1, 0]])
for t in (0.0, 0.125, 0.25, 0.375, 0.5):
    print(f"t={t:.3f}  row 1 = {G.phi(t)[0]}  tau_1 = {G.tau(t)[0]:.4f}")
print("pass:", verify_frame(G).passed)

###############################################################################
# Bumping the second field while the first one has a d/dt part breaks
# commutation, and the verifier notices.

bad = perturb_frame(G, row=1, amplitude=1e-2)
print("bracket at t=0.2:", bracket_coefficients(bad, 0, 1, 0.2))
print("pass:", verify_frame(bad).passed)
